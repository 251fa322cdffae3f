//! Set-based truth computation shared by Kripke and neighborhood frames,
//! and exhaustive validity checking over valuations.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::Formula;

/// Upper bound on `points * variables` for exhaustive valuation search.
pub const DEFAULT_VALUATION_CAP: usize = 24;

/// Subset of a frame's points, indexed by position.
pub type PointSet = FixedBitSet;

/// Valuation over point indices. Variables missing from the map are false
/// everywhere.
pub type Valuation = BTreeMap<String, PointSet>;

/// A frame that can interpret boxes as an operator on point sets.
pub trait FrameSemantics: Sync {
    fn size(&self) -> usize;
    fn modality_count(&self) -> usize;
    fn point_name(&self, idx: usize) -> &str;
    /// Points at which `[]modality` holds when its argument is true exactly on `set`.
    fn box_image(&self, modality: usize, set: &PointSet) -> PointSet;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidityError {
    #[error("exhaustive check needs {points} points x {vars} variables = {product} > cap {cap}")]
    CapExceeded {
        points: usize,
        vars: usize,
        product: usize,
        cap: usize,
    },
    #[error("formula uses modality {used} but the frame has {available}")]
    ModalityOutOfRange { used: usize, available: usize },
}

/// Extension of `f`: the set of points where it is true.
pub fn extension<S: FrameSemantics + ?Sized>(frame: &S, f: &Formula, val: &Valuation) -> PointSet {
    let n = frame.size();
    match f {
        Formula::Bottom => PointSet::with_capacity(n),
        Formula::Var(v) => match val.get(v) {
            Some(set) => {
                let mut s = set.clone();
                s.grow(n);
                s
            }
            None => PointSet::with_capacity(n),
        },
        Formula::Implies(a, b) => {
            let mut out = extension(frame, a, val);
            out.toggle_range(..);
            out.union_with(&extension(frame, b, val));
            out
        }
        Formula::Box(i, a) => frame.box_image(*i, &extension(frame, a, val)),
    }
}

pub fn check_modalities<S: FrameSemantics + ?Sized>(frame: &S, f: &Formula) -> Result<(), ValidityError> {
    let used = f.max_modality();
    if used > frame.modality_count() {
        return Err(ValidityError::ModalityOutOfRange {
            used,
            available: frame.modality_count(),
        });
    }
    Ok(())
}

/// A falsifying valuation together with the point where the formula fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Countermodel {
    pub valuation: BTreeMap<String, Vec<String>>,
    pub world: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Refuted(Countermodel),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }

    pub fn countermodel(&self) -> Option<&Countermodel> {
        match self {
            Validity::Valid => None,
            Validity::Refuted(c) => Some(c),
        }
    }
}

/// Decodes valuation number `mask`: bit `j * n + w` says variable `j`
/// (in sorted order) holds at point `w`.
pub fn valuation_from_mask(vars: &[String], n: usize, mask: u64) -> Valuation {
    vars.iter()
        .enumerate()
        .map(|(j, v)| {
            let mut set = PointSet::with_capacity(n);
            for w in 0..n {
                if mask >> (j * n + w) & 1 == 1 {
                    set.insert(w);
                }
            }
            (v.clone(), set)
        })
        .collect()
}

pub fn named_valuation<S: FrameSemantics + ?Sized>(frame: &S, val: &Valuation) -> BTreeMap<String, Vec<String>> {
    val.iter()
        .map(|(v, set)| {
            (
                v.clone(),
                set.ones().map(|i| frame.point_name(i).to_string()).collect(),
            )
        })
        .collect()
}

/// Exhaustive validity over every valuation of the variables of `f`.
///
/// The reported countermodel is the least one: smallest valuation number
/// (see [`valuation_from_mask`]), then smallest point index.
pub fn frame_valid<S: FrameSemantics + ?Sized>(
    frame: &S,
    f: &Formula,
    cap: usize,
) -> Result<Validity, ValidityError> {
    check_modalities(frame, f)?;
    let vars: Vec<String> = f.variables().into_iter().collect();
    let n = frame.size();
    let product = n * vars.len();
    if product > cap || product >= 63 {
        return Err(ValidityError::CapExceeded {
            points: n,
            vars: vars.len(),
            product,
            cap,
        });
    }
    let total: u64 = 1 << product;
    let first_failure = |mask: u64| {
        let val = valuation_from_mask(&vars, n, mask);
        let ext = extension(frame, f, &val);
        (0..n).find(|&w| !ext.contains(w)).map(|w| (val, w))
    };
    let found = if total <= 64 {
        (0..total).find_map(first_failure)
    } else {
        (0..total).into_par_iter().find_map_first(first_failure)
    };
    Ok(match found {
        None => Validity::Valid,
        Some((val, w)) => Validity::Refuted(Countermodel {
            valuation: named_valuation(frame, &val),
            world: frame.point_name(w).to_string(),
        }),
    })
}
