//! Registered experiments. Each one checks a handful of assertions, writes
//! its frames and witnesses under the output directory, and names the
//! witness file next to every failed assertion.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use frameforge_core::dense::{self, LazyDenseFrame, PathWord, PatternValuation};
use frameforge_core::formula::{enumerate_closed, parse, print, simplify_closed, Formula};
use frameforge_core::horn::{self, rule_from_pretransitivity};
use frameforge_core::io::{FrameFile, KripkeFile, NbhdFile, TopologyFile};
use frameforge_core::kripke::{self, KripkeFrame, KripkeModel};
use frameforge_core::neighborhood::{self, NeighborhoodFrame};
use frameforge_core::random;
use frameforge_core::search::{self, FrameKind, Outcome, SearchSpec};
use frameforge_core::semantics::{self, Countermodel, Validity};
use frameforge_core::wproduct;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

pub const REGISTRY: &[(&str, &str)] = &[
    ("fusion-subset", "K for each box holds in every n-product"),
    ("k-times-k-separation", "[]1 false -> []2 []1 false: refuted by a Kripke frame, valid in n-products"),
    ("delta-in-nproducts", "closed B -> []2 B instances hold in n-products"),
    ("wproduct-delta", "closed B -> []i B instances hold in total weak products"),
    ("wproduct-com-refutation", "commutativity fails in the weak product of two 2-chains"),
    ("dense-diamond-p", "<>p & <>~p at the all-stops word of the dense naturals"),
    ("horn-closure", "pretransitivity closures are minimal and validate their axioms"),
    ("seriality-collapse", "closed formulas collapse to true or false under seriality"),
    ("derived-topology", "derived-set frames of finite topologies"),
];

#[derive(Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct DemoReport {
    pub name: String,
    pub claim: String,
    pub assertions: Vec<Assertion>,
    pub artifacts: Vec<String>,
    pub runtime_ms: u128,
}

impl DemoReport {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    pub fn to_text(&self) -> String {
        let mut lines = vec![format!("demo {}: {}", self.name, self.claim)];
        for a in &self.assertions {
            let mut line = format!("{} {}: {}", if a.pass { "PASS" } else { "FAIL" }, a.name, a.detail);
            if let Some(w) = &a.witness {
                line.push_str(&format!(" (witness {w})"));
            }
            lines.push(line);
        }
        for a in &self.artifacts {
            lines.push(format!("artifact {a}"));
        }
        lines.push(format!(
            "{} in {} ms",
            if self.passed() { "PASS" } else { "FAIL" },
            self.runtime_ms
        ));
        lines.join("\n")
    }
}

struct Ctx {
    dir: PathBuf,
    assertions: Vec<Assertion>,
    artifacts: Vec<String>,
}

impl Ctx {
    fn write(&mut self, name: &str, file: &FrameFile) -> Result<String> {
        let path = self.dir.join(name);
        super::write_json(&path, file)?;
        let shown = path.display().to_string();
        self.artifacts.push(shown.clone());
        Ok(shown)
    }

    fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion {
            name: name.into(),
            pass,
            detail: detail.into(),
            witness: None,
        });
    }

    fn check_with(&mut self, name: &str, pass: bool, detail: impl Into<String>, witness: Option<String>) {
        self.assertions.push(Assertion {
            name: name.into(),
            pass,
            detail: detail.into(),
            witness,
        });
    }
}

pub fn run(name: &str, out_dir: &Path) -> Result<DemoReport> {
    let Some(&(_, claim)) = REGISTRY.iter().find(|(n, _)| *n == name) else {
        let known: Vec<&str> = REGISTRY.iter().map(|(n, _)| *n).collect();
        bail!("unknown demo '{name}'; known: {}", known.join(", "));
    };
    let dir = out_dir.join(name);
    fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut ctx = Ctx {
        dir,
        assertions: Vec::new(),
        artifacts: Vec::new(),
    };
    let start = Instant::now();
    match name {
        "fusion-subset" => fusion_subset(&mut ctx)?,
        "k-times-k-separation" => separation(&mut ctx)?,
        "delta-in-nproducts" => delta_nproducts(&mut ctx)?,
        "wproduct-delta" => wproduct_delta(&mut ctx)?,
        "wproduct-com-refutation" => com_refutation(&mut ctx)?,
        "dense-diamond-p" => dense_diamond(&mut ctx)?,
        "horn-closure" => horn_closure(&mut ctx)?,
        "seriality-collapse" => seriality(&mut ctx)?,
        "derived-topology" => derived_topology(&mut ctx)?,
        _ => unreachable!("registry and dispatch agree"),
    }
    Ok(DemoReport {
        name: name.into(),
        claim: claim.into(),
        assertions: ctx.assertions,
        artifacts: ctx.artifacts,
        runtime_ms: start.elapsed().as_millis(),
    })
}

fn p2(text: &str) -> Formula {
    parse(text, 2).expect("demo formulas parse")
}

fn nbhd_witness(frame: &NeighborhoodFrame, cm: &Countermodel) -> FrameFile {
    FrameFile::Nbhd(NbhdFile {
        valuation: Some(cm.valuation.clone()),
        ..NbhdFile::from_frame(frame)
    })
}

fn kripke_witness(frame: &KripkeFrame, cm: &Countermodel) -> FrameFile {
    FrameFile::Kripke(KripkeFile {
        valuation: Some(cm.valuation.clone()),
        ..KripkeFile::from_frame(frame)
    })
}

fn random_nproducts(seed: u64, count: usize, right_max: usize) -> Result<Vec<NeighborhoodFrame>> {
    let left = search::nframe_classes("a", 3, search::MAX_BASE_SETS)?;
    let right = search::nframe_classes("b", right_max, search::MAX_BASE_SETS)?;
    let mut rng = random::rng(seed);
    (0..count)
        .map(|_| {
            let (l, r) = (left.choose(&mut rng).expect("classes"), right.choose(&mut rng).expect("classes"));
            Ok(neighborhood::n_product(l, r)?)
        })
        .collect()
}

/// Checks every formula on every n-product; records the first failure.
fn all_valid_on_nproducts(ctx: &mut Ctx, label: &str, products: &[NeighborhoodFrame], formulas: &[Formula]) -> Result<()> {
    let cap = frameforge_core::valuation_cap();
    for (i, prod) in products.iter().enumerate() {
        for f in formulas {
            if let Validity::Refuted(cm) = semantics::frame_valid(prod, f, cap)? {
                let slug: String = label.chars().filter(|c| c.is_ascii_alphanumeric()).collect();
                let w = ctx.write(&format!("{slug}-witness.json"), &nbhd_witness(prod, &cm))?;
                ctx.check_with(label, false, format!("{} fails on n-product {i}", print(f)), Some(w));
                return Ok(());
            }
        }
    }
    ctx.check(
        label,
        true,
        format!("{} formulas valid on {} n-products", formulas.len(), products.len()),
    );
    Ok(())
}

fn fusion_subset(ctx: &mut Ctx) -> Result<()> {
    // Two variables over nine points would mean 2^18 valuations per formula.
    let products = random_nproducts(1, 20, 2)?;
    ctx.write("nproduct-0.json", &FrameFile::Nbhd(NbhdFile::from_frame(&products[0])))?;
    for i in 1..=2 {
        let k = [
            p2(&format!("[]{i} (p -> q) -> []{i} p -> []{i} q")),
            p2(&format!("[]{i} true")),
        ];
        all_valid_on_nproducts(ctx, &format!("K for []{i}"), &products, &k)?;
    }
    Ok(())
}

fn separation(ctx: &mut Ctx) -> Result<()> {
    let formula = "[]1 false -> []2 []1 false";
    let mut kripke_spec = SearchSpec::new(FrameKind::Kripke, 3, formula);
    kripke_spec.modalities = 2;
    let nprod_spec = SearchSpec::new(FrameKind::NProduct, 3, formula);
    let report = search::separate(formula, &kripke_spec, &nprod_spec)?;
    let a = &report.class_a;
    let witness = match a.witness() {
        Some(w) => Some(ctx.write("kripke-witness.json", &w.frame)?),
        None => None,
    };
    ctx.check_with(
        "refuted on a bimodal Kripke frame",
        a.refuted() && a.exhaustive,
        match a.witness() {
            Some(w) => format!("frame #{} of the exhaustive stream, at {}", w.index, w.world),
            None => "no refutation".into(),
        },
        witness,
    );
    let b = &report.class_b;
    let failed = match b.witness() {
        Some(w) => Some(ctx.write("nproduct-witness.json", &w.frame)?),
        None => None,
    };
    ctx.check_with(
        "valid on n-products of <=3-point n-frames",
        b.outcome == Outcome::Exhausted,
        format!("{} n-products checked", b.frames_checked),
        failed,
    );
    ctx.check("separates", report.separates, "refuted in exactly one class");
    Ok(())
}

fn delta_nproducts(ctx: &mut Ctx) -> Result<()> {
    let suite = wproduct::delta_suite(2)?;
    let products = random_nproducts(3, 20, 3)?;
    all_valid_on_nproducts(ctx, "delta depth 2", &products, &suite)
}

fn wproduct_delta(ctx: &mut Ctx) -> Result<()> {
    let left = search::rooted_acyclic_classes("a", 3)?;
    let right = search::rooted_acyclic_classes("b", 3)?;
    let mut count = 0;
    for l in &left {
        for r in &right {
            let depth = l.longest_path_from(0).unwrap_or(0) + r.longest_path_from(0).unwrap_or(0);
            let wp = wproduct::entangle(l, r, depth)?;
            if count == 0 {
                ctx.write("first-weak-product.json", &FrameFile::Kripke(KripkeFile::from_frame(&wp.frame)))?;
            }
            count += 1;
            let report = wproduct::verify_delta(&wp, 2)?;
            if let Some(fail) = report.failures.first() {
                let w = ctx.write("delta-witness.json", &kripke_witness(&wp.frame, &fail.witness))?;
                ctx.check_with("delta depth 2", false, format!("{} fails", fail.formula), Some(w));
                return Ok(());
            }
        }
    }
    ctx.check(
        "delta depth 2",
        true,
        format!("{} formulas valid on {count} total weak products", wproduct::delta_suite(2)?.len()),
    );
    Ok(())
}

fn chain(prefix: &str, n: usize) -> KripkeFrame {
    let mut f = KripkeFrame::new((0..n).map(|i| format!("{prefix}{i}")), 1).expect("nonempty");
    for i in 1..n {
        f.add_edge(1, i - 1, i);
    }
    f.set_root(Some(0));
    f
}

fn com_refutation(ctx: &mut Ctx) -> Result<()> {
    let com = p2("[]1 []2 p -> []2 []1 p");
    let (a, b) = (chain("a", 2), chain("b", 2));
    let wp = wproduct::entangle(&a, &b, 2)?;
    ctx.check("weak product is total", wp.total, format!("{} words", wp.frame.size()));
    match kripke::frame_valid(&wp.frame, &com)? {
        Validity::Valid => ctx.check("com refuted", false, "com is valid on the weak product"),
        Validity::Refuted(cm) => {
            let path = ctx.write("com-witness.json", &kripke_witness(&wp.frame, &cm))?;
            let p = cm.valuation.get("p").cloned().unwrap_or_default();
            ctx.check_with(
                "com refuted",
                cm.world == wproduct::EMPTY_WORD && p == ["1:a1|2:b1"],
                format!("p = {{{}}} at {}", p.join(", "), cm.world),
                Some(path.clone()),
            );
            let replayed = FrameFile::parse(&fs::read_to_string(&path)?)?.into_kripke()?.to_model()?;
            let falsified = !replayed.eval(&cm.world, &com)?;
            ctx.check_with("witness replays", falsified, "re-read from file", Some(path));
        }
    }
    let prod = kripke::product(&a, &b)?;
    ctx.check(
        "com holds in the full product",
        kripke::frame_valid(&prod, &com)?.is_valid(),
        format!("{} worlds", prod.size()),
    );
    Ok(())
}

fn dense_diamond(ctx: &mut Ctx) -> Result<()> {
    let g = dense::naturals();
    let both = parse("<>1 p & <>1 ~p", 1)?;
    let collapse = parse("<>1 p -> []1 p", 1)?;
    for k in [4, 6, 8] {
        let frame = LazyDenseFrame::new(&g, &[], k, 12)?;
        let mut val = PatternValuation::new();
        val.parse_assignment("p=(0 0)* 1", &g)?;
        let alpha = PathWord::empty();
        let v = dense::eval_dense(&frame, &val, &alpha, &both)?;
        let c = dense::eval_dense(&frame, &val, &alpha, &collapse)?;
        ctx.check(
            &format!("k_max={k}"),
            v.holds && !c.holds,
            format!("<>p & <>~p {}@bound, <>p -> []p {}@bound (L=12)", v.holds, c.holds),
        );
    }
    Ok(())
}

fn horn_closure(ctx: &mut Ctx) -> Result<()> {
    let trans = [rule_from_pretransitivity(1, 2)];
    let c3 = chain("w", 3);
    let closed = horn::closure(&c3, &trans)?;
    ctx.check(
        "3-chain, transitivity",
        horn::added_pairs(&c3, &closed) == [(1, 0, 2)],
        "adds w0 -> w2",
    );
    let three = [rule_from_pretransitivity(1, 3)];
    let c4 = chain("w", 4);
    let closed = horn::closure(&c4, &three)?;
    ctx.check(
        "4-chain, R^3 in R",
        horn::added_pairs(&c4, &closed) == [(1, 0, 3)],
        "adds w0 -> w3",
    );
    let mut rng = random::rng(7);
    let mut minimal = 0;
    for i in 0..20 {
        let n = rng.gen_range(1..=5);
        let frame = random::kripke_frame(&mut rng, n, 1, 0.3);
        let exp = *[0usize, 2, 3].choose(&mut rng).expect("nonempty");
        let rules = [rule_from_pretransitivity(1, exp)];
        let closed = horn::closure(&frame, &rules)?;
        let p = Formula::var("p");
        let axiom = Formula::implies(Formula::boxed(1, p.clone()), Formula::boxes(1, exp, p));
        let sound = horn::check_rules(&closed, &rules)?.is_empty() && kripke::frame_valid(&closed, &axiom)?.is_valid();
        let small = horn::added_pairs(&frame, &closed).len() <= horn::MINIMALITY_CAP;
        let min_ok = !small || horn::minimality_check(&frame, &rules, &closed)?;
        minimal += usize::from(small);
        if !(sound && min_ok) {
            let w = ctx.write("closure-input.json", &FrameFile::Kripke(KripkeFile::from_frame(&frame)))?;
            ctx.check_with("random frames", false, format!("frame {i}, exponent {exp}"), Some(w));
            return Ok(());
        }
    }
    ctx.check(
        "random frames",
        true,
        format!("20 closures satisfy their rules and axioms, {minimal} checked minimal"),
    );
    Ok(())
}

fn seriality(ctx: &mut Ctx) -> Result<()> {
    let serial: BTreeSet<usize> = [1].into();
    let formulas = enumerate_closed(3, &serial)?;
    let mut rng = random::rng(9);
    let frames: Vec<KripkeFrame> = (0..20)
        .map(|_| {
            let n = rng.gen_range(1..=5);
            random::serial_frame(&mut rng, n, 0.3)
        })
        .collect();
    let mut collapsed = 0;
    for f in &formulas {
        let s = simplify_closed(f, &serial)?;
        if !(s.is_top() || s.is_bottom()) {
            ctx.check("collapse", false, format!("{} simplifies to {}", print(f), print(&s)));
            return Ok(());
        }
        collapsed += 1;
        for (i, frame) in frames.iter().enumerate() {
            let model = KripkeModel::new(frame.clone(), Default::default());
            let ext = model.extension(f)?;
            if (0..frame.size()).any(|w| ext.contains(w) != s.is_top()) {
                let path = ctx.write("serial-frame.json", &FrameFile::Kripke(KripkeFile::from_frame(frame)))?;
                ctx.check_with("agreement", false, format!("{} on frame {i}", print(f)), Some(path));
                return Ok(());
            }
        }
    }
    ctx.check("collapse", true, format!("{collapsed} closed formulas of depth <= 3"));
    ctx.check("agreement", true, "verdicts match evaluation on 20 serial frames");
    Ok(())
}

fn derived_topology(ctx: &mut Ctx) -> Result<()> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let points = s(&["a", "b"]);
    let spaces = [
        ("sierpinski", vec![s(&[]), s(&["a"]), s(&["a", "b"])]),
        ("indiscrete", vec![s(&[]), s(&["a", "b"])]),
    ];
    let wk4 = parse("p & []1 p -> []1 []1 p", 1)?;
    let refl = parse("[]1 p -> p", 1)?;
    for (name, opens) in spaces {
        let file = TopologyFile {
            points: points.clone(),
            opens,
        };
        let frame = neighborhood::derived_frame(&file.to_topology()?)?;
        ctx.write(&format!("{name}-derived.json"), &FrameFile::Nbhd(NbhdFile::from_frame(&frame)))?;
        let base_a = frame.named_base(1, 0);
        let expected: Vec<Vec<String>> = match name {
            "sierpinski" => vec![s(&[]), s(&["b"])],
            _ => vec![s(&["b"])],
        };
        ctx.check(&format!("{name}: base at a"), base_a == expected, format!("{base_a:?}"));
        let cap = frameforge_core::valuation_cap();
        ctx.check(
            &format!("{name}: p & []p -> [][]p"),
            semantics::frame_valid(&frame, &wk4, cap)?.is_valid(),
            "valid",
        );
        let refuted = !semantics::frame_valid(&frame, &refl, cap)?.is_valid();
        ctx.check(&format!("{name}: []p -> p fails"), refuted, "derived sets exclude the point");
    }
    Ok(())
}
