use std::collections::{BTreeSet, HashSet};

use frameforge_core::formula::{enumerate_closed, parse, print, simplify_closed, Formula};
use frameforge_core::kripke::{KripkeFrame, KripkeModel};
use frameforge_core::random;
use frameforge_core::search::unimodal_classes;
use frameforge_core::semantics::Valuation;
use proptest::prelude::*;
use rand::Rng;

fn formula_strategy(max_depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Bottom),
        "[a-e][0-9]?".prop_map(Formula::Var),
    ];
    leaf.prop_recursive(max_depth, 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (1usize..=3, inner).prop_map(|(i, a)| Formula::boxed(i, a)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn print_then_parse_is_identity(f in formula_strategy(8)) {
        let text = print(&f);
        prop_assert_eq!(parse(&text, 3).unwrap(), f, "{}", text);
    }
}

// ⟦A⟧ bottom-up over an adjacency matrix, with diamonds computed directly.
fn extension(frame: &KripkeFrame, val: &Valuation, f: &Formula) -> Vec<bool> {
    let n = frame.size();
    match f {
        Formula::Bottom => vec![false; n],
        Formula::Var(v) => (0..n).map(|w| val.get(v).is_some_and(|s| s.contains(w))).collect(),
        Formula::Implies(a, b) => {
            let (a, b) = (extension(frame, val, a), extension(frame, val, b));
            a.iter().zip(&b).map(|(x, y)| !x || *y).collect()
        }
        Formula::Box(i, a) => {
            let a = extension(frame, val, a);
            (0..n)
                .map(|w| (0..n).all(|v| !frame.has_edge(*i, w, v) || a[v]))
                .collect()
        }
    }
}

#[test]
fn diamond_sugar_is_some_successor() {
    let mut rng = random::rng(11);
    let f = parse("<>1 p", 1).unwrap();
    for _ in 0..100 {
        let n = rng.gen_range(1..=5);
        let frame = random::kripke_frame(&mut rng, n, 1, 0.3);
        let val = random::valuation(&mut rng, n, &["p"]);
        let model = KripkeModel::new(frame.clone(), val.clone());
        for w in 0..n {
            let direct = frame.successors(1, w).iter().any(|&v| val["p"].contains(v));
            assert_eq!(model.eval_at(w, &f).unwrap(), direct);
        }
        let boxed = parse("~[]1~p", 1).unwrap();
        assert_eq!(extension(&frame, &val, &boxed), extension(&frame, &val, &f));
    }
}

#[test]
fn simplification_preserves_truth() {
    let mut rng = random::rng(12);
    let none = BTreeSet::new();
    let serial: BTreeSet<usize> = [1].into();
    let formulas = enumerate_closed(3, &[1].into()).unwrap();
    for _ in 0..20 {
        let n = rng.gen_range(1..=5);
        let plain = random::kripke_frame(&mut rng, n, 1, 0.3);
        let ser = random::serial_frame(&mut rng, n, 0.3);
        for f in &formulas {
            let empty = Valuation::new();
            let s = simplify_closed(f, &none).unwrap();
            assert_eq!(extension(&plain, &empty, f), extension(&plain, &empty, &s));
            let s = simplify_closed(f, &serial).unwrap();
            assert!(s.is_top() || s.is_bottom());
            assert_eq!(extension(&ser, &empty, f), extension(&ser, &empty, &s));
        }
    }
}

#[test]
fn closed_enumeration_counts() {
    let unimodal: BTreeSet<usize> = [1].into();
    assert_eq!(enumerate_closed(0, &unimodal).unwrap(), vec![Formula::Bottom, Formula::top()]);
    assert_eq!(enumerate_closed(1, &unimodal).unwrap().len(), 4);

    let depth2 = enumerate_closed(2, &unimodal).unwrap();
    assert_eq!(depth2.len(), 20);
    // Semantic classes: truth tables over every world of every unimodal
    // frame with at most three worlds, one frame per isomorphism class.
    let frames = unimodal_classes("w", 3).unwrap();
    let empty = Valuation::new();
    let tables: HashSet<Vec<bool>> = depth2
        .iter()
        .map(|f| frames.iter().flat_map(|fr| extension(fr, &empty, f)).collect())
        .collect();
    assert_eq!(tables.len(), 10);
    assert!(enumerate_closed(4, &unimodal).is_err());
}
