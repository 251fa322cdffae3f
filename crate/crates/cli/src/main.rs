//! `frameforge`: command-line access to the frame constructions, checks and
//! searches in `frameforge-core`, plus a set of reproducible demos.

mod demo;
mod output;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use frameforge_core::dense::{self, LazyDenseFrame, PatternValuation};
use frameforge_core::formula;
use frameforge_core::horn::{self, HornRule, RuleFile};
use frameforge_core::io::{FrameFile, KripkeFile, NbhdFile};
use frameforge_core::kripke::{self, KripkeFrame};
use frameforge_core::neighborhood::{self, NeighborhoodFrame};
use frameforge_core::search::{self, FrameKind, Mode, SearchSpec};
use frameforge_core::semantics::{self, Validity};
use frameforge_core::wproduct;
use serde::Serialize;
use serde_json::json;

use output::Out;

#[derive(Parser)]
#[command(name = "frameforge", version, about = "Modal-logic frame workbench")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel checks (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its canonical form and statistics.
    Parse {
        formula: String,
        /// Number of modalities the formula may use.
        #[arg(long, default_value_t = 2)]
        modalities: usize,
    },
    /// Evaluate a formula in a model file.
    Eval {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        formula: String,
        /// Report only this world or point.
        #[arg(long)]
        at: Option<String>,
    },
    /// Check frame validity; exits with 1 when a countermodel is found.
    Valid {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        formula: String,
        /// Write the countermodel here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Product of two unimodal Kripke frames.
    Product(PairArgs),
    /// Product of two unimodal neighborhood frames (Kripke files are converted).
    Nproduct(PairArgs),
    /// Weak product of two rooted unimodal frames, up to a word length.
    Wproduct {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        depth: usize,
        /// Close relation SIDE (1 or 2) under `[]p -> []^n p`, written `SIDE:N` (repeatable).
        #[arg(long)]
        pretrans: Vec<String>,
    },
    /// Close a Kripke frame under Horn rules.
    Closure {
        #[arg(long)]
        frame: PathBuf,
        /// Rule file.
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Pretransitivity rule `MODALITY:N` (repeatable).
        #[arg(long)]
        pretrans: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounded unravelling from the root.
    Unravel {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        depth: usize,
        #[command(flatten)]
        sink: MapSink,
    },
    /// Thickening by a set of the given size.
    Thicken {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        size: usize,
        #[command(flatten)]
        sink: MapSink,
    },
    /// Check that a map between two frames is a p-morphism; exits with 1 if not.
    Pmorph {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// JSON object from source names to target names.
        #[arg(long)]
        map: PathBuf,
    },
    /// Bounded evaluation on the dense frame over a unimodal base.
    DenseEval {
        /// Unimodal Kripke base frame; omit for the naturals.
        #[arg(long)]
        frame: Option<PathBuf>,
        /// `VAR=PATTERN` (repeatable).
        #[arg(long)]
        pattern: Vec<String>,
        /// Word to evaluate at; empty for the all-stops word.
        #[arg(long, default_value = "")]
        at: String,
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
        #[arg(long, default_value_t = 12)]
        len: usize,
        /// Pretransitivity closure `1:N` (repeatable).
        #[arg(long)]
        pretrans: Vec<String>,
    },
    /// Search small frames for a countermodel.
    Search {
        #[arg(long)]
        kind: FrameKind,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        #[arg(long)]
        formula: String,
        /// `refute` or `confirm`; only changes the exit code.
        #[arg(long, default_value = "refute")]
        mode: Mode,
        #[arg(long, default_value_t = 2)]
        modalities: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Frames drawn when exhaustive enumeration is too large.
        #[arg(long, default_value_t = 2000)]
        samples: u64,
        /// Write the witness here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named demo experiment.
    Demo {
        /// Demo name; omit with --list.
        name: Option<String>,
        /// List the registered demos.
        #[arg(long)]
        list: bool,
        /// Directory for artifacts.
        #[arg(long, default_value = "frameforge-demo")]
        out_dir: PathBuf,
    },
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    left: PathBuf,
    #[arg(long)]
    right: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MapSink {
    /// Write the resulting frame here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the projection map here.
    #[arg(long)]
    map_out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let out = Out { json: cli.json };
    match run(cli.command, &out) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_frame(path: &Path) -> Result<FrameFile> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    FrameFile::parse(&text).with_context(|| path.display().to_string())
}

fn read_kripke(path: &Path) -> Result<KripkeFile> {
    read_frame(path)?.into_kripke().with_context(|| path.display().to_string())
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))
}

fn modality_count(file: &FrameFile) -> usize {
    match file {
        FrameFile::Kripke(k) => k.relations.len(),
        FrameFile::Nbhd(n) => n.bases.len(),
        FrameFile::Topology(_) => 1,
    }
}

fn nbhd_of(file: FrameFile) -> Result<NeighborhoodFrame> {
    Ok(match file {
        FrameFile::Kripke(k) => neighborhood::from_kripke(&k.to_frame()?),
        FrameFile::Nbhd(n) => n.to_frame()?,
        FrameFile::Topology(t) => neighborhood::derived_frame(&t.to_topology()?)?,
    })
}

fn pretrans_rules(specs: &[String], expect_modality: Option<usize>) -> Result<Vec<HornRule>> {
    specs
        .iter()
        .map(|s| {
            let (m, n) = horn::parse_pretrans(s)?;
            if let Some(want) = expect_modality {
                if m != want {
                    bail!("'{s}': expected modality {want}");
                }
            }
            Ok(horn::rule_from_pretransitivity(m, n))
        })
        .collect()
}

fn run(command: Command, out: &Out) -> Result<u8> {
    match command {
        Command::Parse { formula, modalities } => {
            let f = formula::parse(&formula, modalities)?;
            let s = formula::stats(&f);
            let printed = formula::print(&f);
            out.emit(
                &json!({
                    "formula": printed,
                    "depth": s.modal_depth,
                    "variables": s.variables,
                    "modalities": s.modalities_used,
                    "closed": s.is_closed,
                }),
                || {
                    format!(
                        "{printed}\ndepth {}, variables {{{}}}, modalities {{{}}}, closed {}",
                        s.modal_depth,
                        s.variables.iter().cloned().collect::<Vec<_>>().join(", "),
                        s.modalities_used.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(", "),
                        s.is_closed
                    )
                },
            );
            Ok(0)
        }
        Command::Eval { frame, formula, at } => eval(&frame, &formula, at.as_deref(), out),
        Command::Valid { frame, formula, out: dest } => valid(&frame, &formula, dest.as_deref(), out),
        Command::Product(p) => {
            let l = read_kripke(&p.left)?.to_frame()?;
            let r = read_kripke(&p.right)?.to_frame()?;
            let prod = kripke::product(&l, &r)?;
            out.frame(&FrameFile::Kripke(KripkeFile::from_frame(&prod)), p.out.as_deref())?;
            Ok(0)
        }
        Command::Nproduct(p) => {
            let l = nbhd_of(read_frame(&p.left)?)?;
            let r = nbhd_of(read_frame(&p.right)?)?;
            let prod = neighborhood::n_product(&l, &r)?;
            out.frame(&FrameFile::Nbhd(NbhdFile::from_frame(&prod)), p.out.as_deref())?;
            Ok(0)
        }
        Command::Wproduct {
            pair,
            depth,
            pretrans,
        } => {
            let l = read_kripke(&pair.left)?.to_frame()?;
            let r = read_kripke(&pair.right)?.to_frame()?;
            let wp = wproduct::entangle(&l, &r, depth)?;
            let (mut rules_l, mut rules_r) = (Vec::new(), Vec::new());
            for spec in &pretrans {
                match horn::parse_pretrans(spec)? {
                    (1, n) => rules_l.push(horn::rule_from_pretransitivity(1, n)),
                    (2, n) => rules_r.push(horn::rule_from_pretransitivity(1, n)),
                    _ => bail!("'{spec}': side must be 1 or 2"),
                }
            }
            let frame = if rules_l.is_empty() && rules_r.is_empty() {
                wp.frame.clone()
            } else {
                wproduct::closure_wp(&wp, &rules_l, &rules_r)?
            };
            let mut file = KripkeFile::from_frame(&frame);
            file.meta = Some(json!({
                "depth": wp.depth,
                "total": wp.total,
                "left": pair.left.display().to_string(),
                "right": pair.right.display().to_string(),
            }));
            if !out.json {
                println!("depth {}, total {}", wp.depth, wp.total);
            }
            out.frame(&FrameFile::Kripke(file), pair.out.as_deref())?;
            Ok(0)
        }
        Command::Closure {
            frame,
            rules,
            pretrans,
            out: dest,
        } => {
            let base = read_kripke(&frame)?.to_frame()?;
            let mut all = pretrans_rules(&pretrans, None)?;
            if let Some(path) = rules {
                let text = fs::read_to_string(&path).with_context(|| format!("cannot read {}", path.display()))?;
                let file: RuleFile = serde_json::from_str(&text)
                    .map_err(frameforge_core::io::IoError::from)
                    .with_context(|| path.display().to_string())?;
                all.extend(file.rules);
            }
            let closed = horn::closure(&base, &all)?;
            let added: Vec<(usize, String, String)> = horn::added_pairs(&base, &closed)
                .into_iter()
                .map(|(m, a, b)| (m, base.world_name(a).to_string(), base.world_name(b).to_string()))
                .collect();
            if let Some(path) = &dest {
                write_json(path, &FrameFile::Kripke(KripkeFile::from_frame(&closed)))?;
            }
            out.emit(&json!({ "added": added }), || {
                let mut lines = vec![format!("added {} pairs", added.len())];
                lines.extend(added.iter().map(|(m, a, b)| format!("R{m} {a} -> {b}")));
                lines.join("\n")
            });
            Ok(0)
        }
        Command::Unravel { frame, depth, sink } => {
            let base = read_kripke(&frame)?.to_frame()?;
            let (tree, proj) = kripke::unravel(&base, depth)?;
            construction_with_map(&base, &tree, &proj, &sink, out)
        }
        Command::Thicken { frame, size, sink } => {
            let base = read_kripke(&frame)?.to_frame()?;
            let (thick, proj) = kripke::thicken(&base, size)?;
            construction_with_map(&base, &thick, &proj, &sink, out)
        }
        Command::Pmorph { source, target, map } => pmorph(&source, &target, &map, out),
        Command::DenseEval {
            frame,
            pattern,
            at,
            formula,
            kmax,
            len,
            pretrans,
        } => {
            let base = match frame {
                Some(path) => read_kripke(&path)?.to_frame()?,
                None => dense::naturals(),
            };
            let exps = pretrans
                .iter()
                .map(|s| match horn::parse_pretrans(s)? {
                    (1, n) => Ok(n),
                    _ => bail!("'{s}': dense frames have one modality"),
                })
                .collect::<Result<Vec<_>>>()?;
            let lazy = LazyDenseFrame::new(&base, &exps, kmax, len)?;
            let mut val = PatternValuation::new();
            for p in &pattern {
                val.parse_assignment(p, &base)?;
            }
            let alpha = lazy.parse_word(&at)?;
            let f = formula::parse(&formula, 1)?;
            let v = dense::eval_dense(&lazy, &val, &alpha, &f)?;
            let word = alpha.to_text(&base);
            out.emit(
                &json!({ "formula": formula::print(&f), "at": word, "holds": v.holds, "k_max": v.k_max, "len": v.len }),
                || format!("{}@bound (k_max={}, L={}) at '{word}'", v.holds, v.k_max, v.len),
            );
            Ok(0)
        }
        Command::Search {
            kind,
            max_worlds,
            formula,
            mode,
            modalities,
            seed,
            samples,
            out: dest,
        } => {
            let spec = SearchSpec {
                kind,
                max_worlds,
                modalities,
                formula,
                mode,
                seed,
                samples,
                ..SearchSpec::new(kind, max_worlds, "")
            };
            let result = search::run(&spec)?;
            if let (Some(path), Some(w)) = (&dest, result.witness()) {
                write_json(path, &w.frame)?;
            }
            out.emit(&result, || output::search_text(&result));
            Ok(if result.as_expected(mode) { 0 } else { 1 })
        }
        Command::Demo { name, list, out_dir } => {
            if list || name.is_none() {
                for (n, claim) in demo::REGISTRY {
                    println!("{n:<26} {claim}");
                }
                return Ok(0);
            }
            let report = demo::run(name.as_deref().unwrap_or_default(), &out_dir)?;
            out.emit(&report, || report.to_text());
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

fn eval(path: &Path, text: &str, at: Option<&str>, out: &Out) -> Result<u8> {
    let file = read_frame(path)?;
    let f = formula::parse(text, modality_count(&file))?;
    let (names, truth): (Vec<String>, Vec<bool>) = match file {
        FrameFile::Kripke(k) => {
            let model = k.to_model()?;
            let ext = model.extension(&f)?;
            (k.worlds.clone(), (0..k.worlds.len()).map(|w| ext.contains(w)).collect())
        }
        FrameFile::Nbhd(n) => {
            let model = n.to_model()?;
            let ext = model.extension(&f)?;
            (n.points.clone(), (0..n.points.len()).map(|w| ext.contains(w)).collect())
        }
        FrameFile::Topology(_) => bail!("eval needs a kripke or nbhd model file"),
    };
    let mut rows: Vec<(String, bool)> = names.into_iter().zip(truth).collect();
    if let Some(w) = at {
        rows.retain(|(n, _)| n == w);
        if rows.is_empty() {
            bail!("unknown world '{w}'");
        }
    }
    let map: BTreeMap<&str, bool> = rows.iter().map(|(n, t)| (n.as_str(), *t)).collect();
    out.emit(&json!({ "formula": formula::print(&f), "truth": map }), || {
        rows.iter().map(|(n, t)| format!("{n}: {t}")).collect::<Vec<_>>().join("\n")
    });
    Ok(0)
}

fn valid(path: &Path, text: &str, dest: Option<&Path>, out: &Out) -> Result<u8> {
    let file = read_frame(path)?;
    let f = formula::parse(text, modality_count(&file))?;
    let cap = frameforge_core::valuation_cap();
    let (verdict, witness) = match file {
        FrameFile::Kripke(k) => {
            let frame: KripkeFrame = k.to_frame()?;
            let v = semantics::frame_valid(&frame, &f, cap)?;
            let w = v.countermodel().map(|cm| {
                FrameFile::Kripke(KripkeFile {
                    valuation: Some(cm.valuation.clone()),
                    ..KripkeFile::from_frame(&frame)
                })
            });
            (v, w)
        }
        other => {
            let frame = nbhd_of(other)?;
            let v = semantics::frame_valid(&frame, &f, cap)?;
            let w = v.countermodel().map(|cm| {
                FrameFile::Nbhd(NbhdFile {
                    valuation: Some(cm.valuation.clone()),
                    ..NbhdFile::from_frame(&frame)
                })
            });
            (v, w)
        }
    };
    if let (Some(path), Some(w)) = (dest, &witness) {
        write_json(path, w)?;
    }
    match &verdict {
        Validity::Valid => {
            out.emit(&json!({ "formula": formula::print(&f), "valid": true }), || "valid".to_string());
            Ok(0)
        }
        Validity::Refuted(cm) => {
            out.emit(
                &json!({ "formula": formula::print(&f), "valid": false, "world": cm.world, "valuation": cm.valuation }),
                || format!("refuted at {} with {}", cm.world, output::valuation_text(&cm.valuation)),
            );
            Ok(1)
        }
    }
}

fn construction_with_map(
    base: &KripkeFrame,
    built: &KripkeFrame,
    proj: &[usize],
    sink: &MapSink,
    out: &Out,
) -> Result<u8> {
    if let Some(path) = &sink.map_out {
        let map: BTreeMap<&str, &str> = built
            .worlds()
            .iter()
            .zip(proj)
            .map(|(w, &t)| (w.as_str(), base.world_name(t)))
            .collect();
        write_json(path, &map)?;
    }
    out.frame(&FrameFile::Kripke(KripkeFile::from_frame(built)), sink.out.as_deref())?;
    Ok(0)
}

fn pmorph(source: &Path, target: &Path, map_path: &Path, out: &Out) -> Result<u8> {
    let text = fs::read_to_string(map_path).with_context(|| format!("cannot read {}", map_path.display()))?;
    let map: BTreeMap<String, String> = serde_json::from_str(&text)
        .map_err(frameforge_core::io::IoError::from)
        .with_context(|| map_path.display().to_string())?;
    let (s, t) = (read_frame(source)?, read_frame(target)?);
    let witness = match (s, t) {
        (FrameFile::Kripke(a), FrameFile::Kripke(b)) => {
            kripke::check_pmorphism_named(&a.to_frame()?, &b.to_frame()?, &map)?
        }
        (a, b) => neighborhood::check_n_pmorphism_named(&nbhd_of(a)?, &nbhd_of(b)?, &map)?,
    };
    let ok = witness.is_pmorphism();
    out.emit(&witness, || {
        let mut lines = vec![if ok { "PASS p-morphism".to_string() } else { "FAIL".to_string() }];
        lines.extend(witness.violations.iter().map(output::violation_text));
        lines.join("\n")
    });
    Ok(if ok { 0 } else { 1 })
}
