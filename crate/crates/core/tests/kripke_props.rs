use std::collections::BTreeMap;

use frameforge_core::formula::{enumerate_closed, parse, Formula};
use frameforge_core::kripke::{self, check_pmorphism, pullback_truth_test, KripkeFrame, KripkeModel};
use frameforge_core::random::{self, Rng8};
use frameforge_core::semantics::Valuation;
use rand::Rng;

fn set_extension(frame: &KripkeFrame, val: &Valuation, f: &Formula) -> Vec<bool> {
    let n = frame.size();
    match f {
        Formula::Bottom => vec![false; n],
        Formula::Var(v) => (0..n).map(|w| val.get(v).is_some_and(|s| s.contains(w))).collect(),
        Formula::Implies(a, b) => {
            let (a, b) = (set_extension(frame, val, a), set_extension(frame, val, b));
            a.iter().zip(&b).map(|(x, y)| !x || *y).collect()
        }
        Formula::Box(i, a) => {
            let a = set_extension(frame, val, a);
            (0..n).map(|w| (0..n).all(|v| !frame.has_edge(*i, w, v) || a[v])).collect()
        }
    }
}

fn frame_from(worlds: &[&str], rels: &[&[(&str, &str)]]) -> KripkeFrame {
    let worlds: Vec<String> = worlds.iter().map(|s| s.to_string()).collect();
    let rels: Vec<Vec<(String, String)>> = rels
        .iter()
        .map(|r| r.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect())
        .collect();
    KripkeFrame::from_names(&worlds, &rels, Some(&worlds[0])).unwrap()
}

#[test]
fn eval_matches_set_semantics() {
    let mut rng = random::rng(21);
    let vars = ["p", "q", "r"];
    for _ in 0..300 {
        let n = rng.gen_range(1..=6);
        let frame = random::kripke_frame(&mut rng, n, 2, 0.35);
        let f = random::formula(&mut rng, 4, &vars, 2);
        let val = random::valuation(&mut rng, n, &vars);
        let model = KripkeModel::new(frame.clone(), val.clone());
        let oracle = set_extension(&frame, &val, &f);
        for (w, &expected) in oracle.iter().enumerate() {
            assert_eq!(model.eval_at(w, &f).unwrap(), expected);
        }
        let ext = model.extension(&f).unwrap();
        assert_eq!((0..n).map(|w| ext.contains(w)).collect::<Vec<_>>(), oracle);
    }
}

#[test]
fn closed_formulas_ignore_valuations() {
    let mut rng = random::rng(22);
    let closed = enumerate_closed(2, &[1, 2].into()).unwrap();
    for _ in 0..30 {
        let n = rng.gen_range(1..=5);
        let frame = random::kripke_frame(&mut rng, n, 2, 0.3);
        let a = KripkeModel::new(frame.clone(), random::valuation(&mut rng, n, &["p"]));
        let b = KripkeModel::new(frame.clone(), random::valuation(&mut rng, n, &["p"]));
        for f in &closed {
            assert_eq!(a.extension(f).unwrap(), b.extension(f).unwrap());
        }
    }
}

#[test]
fn products_validate_commutativity_and_church_rosser() {
    let mut rng = random::rng(23);
    let axioms: Vec<Formula> = ["[]1 []2 p -> []2 []1 p", "[]2 []1 p -> []1 []2 p", "<>1 []2 p -> []2 <>1 p"]
        .iter()
        .map(|t| parse(t, 2).unwrap())
        .collect();
    for _ in 0..10 {
        let (n1, n2) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a = random::kripke_frame(&mut rng, n1, 1, 0.4);
        let b = random::kripke_frame(&mut rng, n2, 1, 0.4);
        let prod = kripke::product(&a, &b).unwrap();
        for ax in &axioms {
            assert!(kripke::frame_valid(&prod, ax).unwrap().is_valid());
        }
    }
}

#[test]
fn chain_product_edges() {
    let ab = frame_from(&["a", "b"], &[&[("a", "b")]]);
    let cd = frame_from(&["c", "d"], &[&[("c", "d")]]);
    let prod = kripke::product(&ab, &cd).unwrap();
    let edges = |i| {
        let mut e = prod.named_edges(i);
        e.sort();
        e
    };
    let pair = |a: &str, b: &str| (a.to_string(), b.to_string());
    assert_eq!(edges(1), vec![pair("a,c", "b,c"), pair("a,d", "b,d")]);
    assert_eq!(edges(2), vec![pair("a,c", "a,d"), pair("b,c", "b,d")]);
}

#[test]
fn three_world_frame_refutes_separating_formula() {
    let frame = frame_from(&["u", "v", "w"], &[&[("v", "w")], &[("u", "v")]]);
    let f = parse("[]1 false -> []2 []1 false", 2).unwrap();
    let verdict = kripke::frame_valid(&frame, &f).unwrap();
    assert_eq!(verdict.countermodel().unwrap().world, "u");
}

fn rooted_random(rng: &mut Rng8) -> KripkeFrame {
    let n = rng.gen_range(1..=4);
    let f = random::kripke_frame(rng, n, 1, 0.4);
    kripke::rooted_subframe(&f, 0)
}

fn verified_maps(rng: &mut Rng8) -> Vec<(KripkeFrame, KripkeFrame, Vec<usize>)> {
    let mut out = Vec::new();
    for s in 1..=3 {
        let base = rooted_random(rng);
        let (thick, proj) = kripke::thicken(&base, s).unwrap();
        out.push((thick, base, proj));
    }
    let n = rng.gen_range(1..=4);
    let dag = random::rooted_acyclic(rng, "w", n, 0.5);
    let depth = dag.longest_path_from(0).unwrap();
    let (tree, proj) = kripke::unravel(&dag, depth).unwrap();
    out.push((tree, dag, proj));
    out
}

#[test]
fn verified_maps_transfer_truth() {
    let mut rng = random::rng(24);
    let closed = enumerate_closed(2, &[1].into()).unwrap();
    for _ in 0..10 {
        for (src, tgt, map) in verified_maps(&mut rng) {
            assert!(check_pmorphism(&src, &tgt, &map).unwrap().is_pmorphism());
            let src_model = KripkeModel::new(src.clone(), Valuation::new());
            let tgt_model = KripkeModel::new(tgt.clone(), Valuation::new());
            for b in &closed {
                for (w, &t) in map.iter().enumerate() {
                    assert_eq!(src_model.eval_at(w, b).unwrap(), tgt_model.eval_at(t, b).unwrap());
                }
            }
            for _ in 0..5 {
                let f = random::formula(&mut rng, 4, &["p", "q"], 1);
                let model = KripkeModel::new(tgt.clone(), random::valuation(&mut rng, tgt.size(), &["p", "q"]));
                assert!(pullback_truth_test(&src, &model, &map, &f).unwrap());
            }
        }
    }
}

#[test]
fn unravelling_cyclic_frames_breaks_leaves() {
    let mut refl = KripkeFrame::new(["a"], 1).unwrap();
    refl.add_edge(1, 0, 0);
    refl.set_root(Some(0));
    let (tree, proj) = kripke::unravel(&refl, 3).unwrap();
    assert_eq!(tree.worlds(), ["a", "a/1/a", "a/1/a/1/a", "a/1/a/1/a/1/a"]);
    let w = check_pmorphism(&tree, &refl, &proj).unwrap();
    assert_eq!(w.violations.len(), 1);
}

#[test]
fn thickening_a_chain() {
    let ab = frame_from(&["a", "b"], &[&[("a", "b")]]);
    let (thick, proj) = kripke::thicken(&ab, 2).unwrap();
    let root = thick.root().unwrap();
    assert_eq!(thick.world_name(root), "a,0");
    let succ: Vec<&str> = thick.successors(1, root).iter().map(|&v| thick.world_name(v)).collect();
    assert_eq!(succ, ["b,0", "b,1"]);
    let map: BTreeMap<String, String> = thick
        .worlds()
        .iter()
        .zip(&proj)
        .map(|(w, &t)| (w.clone(), ab.world_name(t).to_string()))
        .collect();
    assert!(kripke::check_pmorphism_named(&thick, &ab, &map).unwrap().is_pmorphism());
}
