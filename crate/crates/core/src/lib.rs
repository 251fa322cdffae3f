//! Finite and boundedly approximated modal frames: Kripke and neighborhood
//! semantics, products, weak products, dense frames over paths with stops,
//! Horn closures and p-morphism checks.

pub mod dense;
pub mod formula;
pub mod horn;
pub mod io;
pub mod kripke;
pub mod neighborhood;
pub mod random;
pub mod search;
pub mod semantics;
pub mod wproduct;

pub use formula::{parse, print, Formula};
pub use semantics::{Countermodel, Validity};

/// Default cap on generated frame sizes.
pub const DEFAULT_MAX_NODES: usize = 200_000;

/// Global node cap, overridable through `FRAMEFORGE_MAX_NODES`.
pub fn max_nodes() -> usize {
    std::env::var("FRAMEFORGE_MAX_NODES")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_NODES)
}

/// Cap on `points * variables` for exhaustive validity checks.
pub fn valuation_cap() -> usize {
    semantics::DEFAULT_VALUATION_CAP
}
