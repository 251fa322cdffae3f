//! Seeded generators for frames, formulas and valuations.

use rand::Rng;

use crate::formula::Formula;
use crate::kripke::KripkeFrame;
use crate::semantics::{PointSet, Valuation};

pub use rand_chacha::ChaCha8Rng as Rng8;

pub fn rng(seed: u64) -> Rng8 {
    rand::SeedableRng::seed_from_u64(seed)
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Each pair is an edge with probability `density`; rooted at world 0.
pub fn kripke_frame<R: Rng>(rng: &mut R, worlds: usize, modalities: usize, density: f64) -> KripkeFrame {
    let mut f = KripkeFrame::new(names("w", worlds), modalities).expect("nonempty");
    for i in 1..=modalities {
        for a in 0..worlds {
            for b in 0..worlds {
                if rng.gen_bool(density) {
                    f.add_edge(i, a, b);
                }
            }
        }
    }
    f.set_root(Some(0));
    f
}

/// Unimodal frame where every world has at least one successor.
pub fn serial_frame<R: Rng>(rng: &mut R, worlds: usize, density: f64) -> KripkeFrame {
    let mut f = kripke_frame(rng, worlds, 1, density);
    for a in 0..worlds {
        if f.successors(1, a).is_empty() {
            let b = rng.gen_range(0..worlds);
            f.add_edge(1, a, b);
        }
    }
    f
}

/// Unimodal acyclic frame generated by world 0: edges go from lower to
/// higher indices and every other world has a predecessor.
pub fn rooted_acyclic<R: Rng>(rng: &mut R, prefix: &str, worlds: usize, density: f64) -> KripkeFrame {
    let mut f = KripkeFrame::new(names(prefix, worlds), 1).expect("nonempty");
    for b in 1..worlds {
        let a = rng.gen_range(0..b);
        f.add_edge(1, a, b);
        for a in 0..b {
            if rng.gen_bool(density) {
                f.add_edge(1, a, b);
            }
        }
    }
    f.set_root(Some(0));
    f
}

/// Random formula of modal depth at most `depth`.
pub fn formula<R: Rng>(rng: &mut R, depth: usize, vars: &[&str], modalities: usize) -> Formula {
    let atom = |rng: &mut R| {
        if vars.is_empty() || rng.gen_bool(0.2) {
            Formula::Bottom
        } else {
            Formula::var(vars[rng.gen_range(0..vars.len())])
        }
    };
    fn go<R: Rng>(rng: &mut R, depth: usize, size: usize, atom: &dyn Fn(&mut R) -> Formula, m: usize) -> Formula {
        if size == 0 {
            return atom(rng);
        }
        match rng.gen_range(0..4) {
            0 => atom(rng),
            1 if depth > 0 => Formula::boxed(rng.gen_range(1..=m), go(rng, depth - 1, size - 1, atom, m)),
            _ => Formula::implies(go(rng, depth, size / 2, atom, m), go(rng, depth, size / 2, atom, m)),
        }
    }
    go(rng, depth, 8, &atom, modalities.max(1))
}

pub fn valuation<R: Rng>(rng: &mut R, points: usize, vars: &[&str]) -> Valuation {
    vars.iter()
        .map(|v| {
            let mut set = PointSet::with_capacity(points);
            for w in 0..points {
                if rng.gen_bool(0.5) {
                    set.insert(w);
                }
            }
            (v.to_string(), set)
        })
        .collect()
}
