use frameforge_core::formula::{enumerate_closed, parse};
use frameforge_core::kripke::{self, KripkeModel};
use frameforge_core::neighborhood::{check_n_pmorphism, frame_valid_n, from_kripke, n_product, NeighborhoodModel};
use frameforge_core::random;
use frameforge_core::search::{nframe_classes, MAX_BASE_SETS};
use frameforge_core::semantics::Valuation;
use rand::seq::SliceRandom;
use rand::Rng;

#[test]
fn conversion_agrees_with_kripke_eval() {
    let mut rng = random::rng(31);
    let vars = ["p", "q"];
    for _ in 0..300 {
        let n = rng.gen_range(1..=5);
        let frame = random::kripke_frame(&mut rng, n, 2, 0.3);
        let f = random::formula(&mut rng, 4, &vars, 2);
        let val = random::valuation(&mut rng, n, &vars);
        let k = KripkeModel::new(frame.clone(), val.clone()).extension(&f).unwrap();
        let m = NeighborhoodModel::new(from_kripke(&frame), val).extension(&f).unwrap();
        assert_eq!(k, m);
    }
}

#[test]
fn n_products_validate_k_for_both_modalities() {
    let mut rng = random::rng(32);
    let left = nframe_classes("a", 3, MAX_BASE_SETS).unwrap();
    let right = nframe_classes("b", 3, MAX_BASE_SETS).unwrap();
    let axioms: Vec<_> = [
        "[]1 (p -> q) -> []1 p -> []1 q",
        "[]2 (p -> q) -> []2 p -> []2 q",
        "[]1 true",
        "[]2 true",
    ]
    .iter()
    .map(|t| parse(t, 2).unwrap())
    .collect();
    for _ in 0..15 {
        let prod = n_product(left.choose(&mut rng).unwrap(), right.choose(&mut rng).unwrap()).unwrap();
        if prod.size() * 2 > frameforge_core::valuation_cap() {
            continue;
        }
        for ax in &axioms {
            assert!(frame_valid_n(&prod, ax).unwrap().is_valid());
        }
    }
}

#[test]
fn closed_box2_free_formulas_ignore_second_coordinate() {
    let mut rng = random::rng(33);
    let left = nframe_classes("a", 3, MAX_BASE_SETS).unwrap();
    let right = nframe_classes("b", 3, MAX_BASE_SETS).unwrap();
    let formulas = enumerate_closed(2, &[1].into()).unwrap();
    for _ in 0..30 {
        let (x1, x2) = (left.choose(&mut rng).unwrap(), right.choose(&mut rng).unwrap());
        let prod = n_product(x1, x2).unwrap();
        let model = NeighborhoodModel::new(prod, Valuation::new());
        for f in &formulas {
            let ext = model.extension(f).unwrap();
            // Pairs are laid out row-major: (x, y) at x * |X2| + y.
            for x in 0..x1.size() {
                let row: Vec<bool> = (0..x2.size()).map(|y| ext.contains(x * x2.size() + y)).collect();
                assert!(row.iter().all(|&b| b == row[0]));
            }
        }
    }
}

#[test]
fn verified_n_maps_pull_truth_back() {
    let mut rng = random::rng(34);
    let vars = ["p", "q"];
    for _ in 0..20 {
        let n = rng.gen_range(1..=3);
        let base = kripke::rooted_subframe(&random::kripke_frame(&mut rng, n, 1, 0.4), 0);
        let (thick, proj) = kripke::thicken(&base, rng.gen_range(1..=3)).unwrap();
        let (src, tgt) = (from_kripke(&thick), from_kripke(&base));
        assert!(check_n_pmorphism(&src, &tgt, &proj).unwrap().is_pmorphism());
        for _ in 0..5 {
            let f = random::formula(&mut rng, 4, &vars, 1);
            let val = random::valuation(&mut rng, tgt.size(), &vars);
            let pulled = kripke::pullback_valuation(&val, &proj, src.size());
            let t = NeighborhoodModel::new(tgt.clone(), val);
            let s = NeighborhoodModel::new(src.clone(), pulled);
            for (x, &y) in proj.iter().enumerate() {
                assert_eq!(s.eval_n(x, &f).unwrap(), t.eval_n(y, &f).unwrap());
            }
        }
    }
}
