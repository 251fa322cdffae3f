//! Countermodel search over small frames.
//!
//! Candidates form an indexed stream (by size, then by edge code) and are
//! checked in parallel; the reported witness is always the one with the
//! least index, so results do not depend on the number of threads.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{parse, Formula, FormulaError};
use crate::io::{FrameFile, IoError, KripkeFile, NbhdFile};
use crate::kripke::{self, KripkeError, KripkeFrame, KripkeModel};
use crate::neighborhood::{from_kripke, n_product, NbhdError, NeighborhoodFrame, NeighborhoodModel};
use crate::semantics::{self, Countermodel, Validity, ValidityError};
use crate::wproduct::{self, WProductError};

/// Largest factor size enumerated for the product kinds.
pub const MAX_FACTOR_WORLDS: usize = 4;
/// Largest world count for the single-frame kinds' exhaustive mode.
pub const MAX_EXHAUSTIVE_WORLDS: usize = 5;
/// Antichain size used when enumerating n-frame bases.
pub const MAX_BASE_SETS: usize = 2;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("{0}")]
    Cap(String),
    #[error(transparent)]
    Kripke(#[from] KripkeError),
    #[error(transparent)]
    Nbhd(#[from] NbhdError),
    #[error(transparent)]
    WProduct(#[from] WProductError),
    #[error(transparent)]
    Io(#[from] IoError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameKind {
    Kripke,
    Nbhd,
    KripkeProduct,
    NProduct,
    WeakProduct,
}

impl FrameKind {
    pub fn is_product(self) -> bool {
        matches!(self, FrameKind::KripkeProduct | FrameKind::NProduct | FrameKind::WeakProduct)
    }
}

impl FromStr for FrameKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "kripke" => FrameKind::Kripke,
            "nbhd" => FrameKind::Nbhd,
            "kripke-product" | "product" => FrameKind::KripkeProduct,
            "n-product" | "nproduct" => FrameKind::NProduct,
            "weak-product" | "wproduct" => FrameKind::WeakProduct,
            other => return Err(format!("unknown frame kind '{other}'")),
        })
    }
}

impl fmt::Display for FrameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrameKind::Kripke => "kripke",
            FrameKind::Nbhd => "nbhd",
            FrameKind::KripkeProduct => "kripke-product",
            FrameKind::NProduct => "n-product",
            FrameKind::WeakProduct => "weak-product",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Look for a refutation; finding one is the expected outcome.
    Refute,
    /// Look for a refutation; finding none is the expected outcome.
    Confirm,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "refute" | "find-refutation" => Ok(Mode::Refute),
            "confirm" | "confirm-validity" => Ok(Mode::Confirm),
            other => Err(format!("unknown mode '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub kind: FrameKind,
    /// Frame size cap; for product kinds, the cap on each factor.
    pub max_worlds: usize,
    /// Relation count for the single-frame kinds; products are bimodal.
    pub modalities: usize,
    pub formula: String,
    pub mode: Mode,
    pub seed: u64,
    /// Candidates drawn when the exhaustive space exceeds `exhaustive_limit`.
    pub samples: u64,
    pub exhaustive_limit: u64,
}

impl SearchSpec {
    pub fn new(kind: FrameKind, max_worlds: usize, formula: &str) -> Self {
        SearchSpec {
            kind,
            max_worlds,
            modalities: 2,
            formula: formula.to_string(),
            mode: Mode::Refute,
            seed: 0,
            samples: 2000,
            exhaustive_limit: 1 << 24,
        }
    }

    pub fn modality_count(&self) -> usize {
        if self.kind.is_product() {
            2
        } else {
            self.modalities
        }
    }

    pub fn parsed_formula(&self) -> Result<Formula, SearchError> {
        Ok(parse(&self.formula, self.modality_count())?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Position of the refuting frame in the candidate stream.
    pub index: u64,
    pub frame: FrameFile,
    pub world: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Outcome {
    Refuted { witness: Witness },
    /// Every candidate within the caps was checked; none refutes.
    Exhausted,
    /// Sampled, or some candidates exceeded the valuation cap; none refutes.
    ValidatedUpToCap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub kind: FrameKind,
    pub formula: String,
    #[serde(flatten)]
    pub outcome: Outcome,
    /// Frames checked up to and including the witness.
    pub frames_checked: u64,
    /// Frames skipped because the valuation space exceeded the cap.
    pub skipped: u64,
    pub exhaustive: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SearchResult {
    pub fn refuted(&self) -> bool {
        matches!(self.outcome, Outcome::Refuted { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.outcome {
            Outcome::Refuted { witness } => Some(witness),
            _ => None,
        }
    }

    /// The outcome the mode asked for.
    pub fn as_expected(&self, mode: Mode) -> bool {
        self.refuted() == (mode == Mode::Refute)
    }
}

// ---------------------------------------------------------------------------
// Enumeration helpers

fn permutations(n: usize, fix_first: bool) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    if fix_first {
        out.retain(|p| p.first() == Some(&0));
    }
    out
}

// Bit `i*n*n + a*n + b` is the edge `a R_{i+1} b`.
fn permute_code(code: u64, n: usize, m: usize, perm: &[usize]) -> u64 {
    let mut out = 0;
    for i in 0..m {
        for a in 0..n {
            for b in 0..n {
                if code >> (i * n * n + a * n + b) & 1 == 1 {
                    out |= 1 << (i * n * n + perm[a] * n + perm[b]);
                }
            }
        }
    }
    out
}

fn is_canonical(code: u64, n: usize, m: usize, perms: &[Vec<usize>]) -> bool {
    perms.iter().all(|p| permute_code(code, n, m, p) >= code)
}

fn frame_from_code(prefix: &str, code: u64, n: usize, m: usize) -> KripkeFrame {
    let mut f = KripkeFrame::new((0..n).map(|i| format!("{prefix}{i}")), m).expect("nonempty");
    for i in 0..m {
        for a in 0..n {
            for b in 0..n {
                if code >> (i * n * n + a * n + b) & 1 == 1 {
                    f.add_edge(i + 1, a, b);
                }
            }
        }
    }
    f.set_root(Some(0));
    f
}

/// Unimodal frames with at most `max` worlds, one per isomorphism class.
pub fn unimodal_classes(prefix: &str, max: usize) -> Result<Vec<KripkeFrame>, SearchError> {
    if max > MAX_FACTOR_WORLDS {
        return Err(SearchError::Cap(format!(
            "factor enumeration is limited to {MAX_FACTOR_WORLDS} worlds"
        )));
    }
    let mut out = Vec::new();
    for n in 1..=max {
        let perms = permutations(n, false);
        let codes: Vec<u64> = (0..1u64 << (n * n))
            .into_par_iter()
            .filter(|&c| is_canonical(c, n, 1, &perms))
            .collect();
        out.extend(codes.into_iter().map(|c| frame_from_code(prefix, c, n, 1)));
    }
    Ok(out)
}

/// Acyclic unimodal frames generated by world 0, with at most `max`
/// worlds, one per root-preserving isomorphism class.
pub fn rooted_acyclic_classes(prefix: &str, max: usize) -> Result<Vec<KripkeFrame>, SearchError> {
    if max > MAX_FACTOR_WORLDS {
        return Err(SearchError::Cap(format!(
            "factor enumeration is limited to {MAX_FACTOR_WORLDS} worlds"
        )));
    }
    let mut out = Vec::new();
    for n in 1..=max {
        let perms = permutations(n, true);
        let upper: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let mut seen = HashSet::new();
        for bits in 0..1u64 << upper.len() {
            let mut code = 0u64;
            for (j, &(a, b)) in upper.iter().enumerate() {
                if bits >> j & 1 == 1 {
                    code |= 1 << (a * n + b);
                }
            }
            let rooted = (1..n).all(|b| (0..b).any(|a| code >> (a * n + b) & 1 == 1));
            if !rooted {
                continue;
            }
            let key = perms.iter().map(|p| permute_code(code, n, 1, p)).min().unwrap_or(code);
            if seen.insert(key) {
                out.push(frame_from_code(prefix, code, n, 1));
            }
        }
    }
    Ok(out)
}

/// Filter bases over `n` points: antichains of at most `max_sets` subsets,
/// closed under pairwise intersection, one per generated filter. Sets are
/// bitmasks over the points.
pub fn filter_base_families(n: usize, max_sets: usize) -> Vec<Vec<u64>> {
    let subsets: Vec<u64> = (0..1u64 << n).collect();
    let incomparable = |a: u64, b: u64| a & b != a && a & b != b;
    let mut antichains: Vec<Vec<u64>> = subsets.iter().map(|&s| vec![s]).collect();
    let mut frontier = antichains.clone();
    for _ in 1..max_sets {
        let mut next = Vec::new();
        for chain in &frontier {
            let last = *chain.last().expect("nonempty");
            for &s in subsets.iter().filter(|&&s| s > last) {
                if chain.iter().all(|&c| incomparable(c, s)) {
                    let mut grown = chain.clone();
                    grown.push(s);
                    next.push(grown);
                }
            }
        }
        antichains.extend(next.iter().cloned());
        frontier = next;
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mut family in antichains {
        loop {
            let mut added = false;
            for i in 0..family.len() {
                for j in i + 1..family.len() {
                    let meet = family[i] & family[j];
                    if !family.contains(&meet) {
                        family.push(meet);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        family.sort_unstable();
        if seen.insert(filter_mask(&family, n)) {
            out.push(family);
        }
    }
    out
}

// Bit `s` is set iff subset `s` lies in the filter generated by `family`.
fn filter_mask(family: &[u64], n: usize) -> u128 {
    (0..1u64 << n)
        .filter(|&s| family.iter().any(|&b| b & s == b))
        .fold(0, |m, s| m | 1 << s)
}

fn permute_set(set: u64, perm: &[usize]) -> u64 {
    perm.iter()
        .enumerate()
        .filter(|&(a, _)| set >> a & 1 == 1)
        .fold(0, |m, (_, &b)| m | 1 << b)
}

/// Unimodal n-frames with at most `max` points whose bases come from
/// [`filter_base_families`], one per isomorphism class.
pub fn nframe_classes(prefix: &str, max: usize, max_sets: usize) -> Result<Vec<NeighborhoodFrame>, SearchError> {
    if max > MAX_FACTOR_WORLDS {
        return Err(SearchError::Cap(format!(
            "factor enumeration is limited to {MAX_FACTOR_WORLDS} worlds"
        )));
    }
    let mut out = Vec::new();
    for n in 1..=max {
        let families = filter_base_families(n, max_sets);
        let perms = permutations(n, false);
        let k = families.len();
        let mut seen = HashSet::new();
        for code in 0..k.pow(n as u32) {
            let choice: Vec<usize> = (0..n).map(|x| code / k.pow(x as u32) % k).collect();
            let key = perms
                .iter()
                .map(|p| {
                    let mut key = vec![0u128; n];
                    for (x, &c) in choice.iter().enumerate() {
                        let moved: Vec<u64> = families[c].iter().map(|&b| permute_set(b, p)).collect();
                        key[p[x]] = filter_mask(&moved, n);
                    }
                    key
                })
                .min()
                .expect("at least one permutation");
            if !seen.insert(key) {
                continue;
            }
            let bases = choice
                .iter()
                .map(|&c| {
                    families[c]
                        .iter()
                        .map(|&b| {
                            let mut set = crate::semantics::PointSet::with_capacity(n);
                            (0..n).filter(|&x| b >> x & 1 == 1).for_each(|x| set.insert(x));
                            set
                        })
                        .collect()
                })
                .collect();
            let points = (0..n).map(|i| format!("{prefix}{i}")).collect();
            out.push(NeighborhoodFrame::from_sets(points, vec![bases])?);
        }
    }
    Ok(out)
}

fn longest_path(f: &KripkeFrame) -> usize {
    f.longest_path_from(f.root().unwrap_or(0)).unwrap_or(0)
}

// ---------------------------------------------------------------------------
// Candidate stream

enum Space {
    // Exhaustive over edge codes, sizes 1..=max.
    Codes {
        sizes: Vec<(usize, u64, Vec<Vec<usize>>)>, // (n, first index, perms)
        modalities: usize,
        total: u64,
        nbhd: bool,
    },
    Sampled {
        max_worlds: usize,
        modalities: usize,
        samples: u64,
        seed: u64,
        nbhd: bool,
    },
    Pairs {
        kind: FrameKind,
        left: Vec<KripkeFrame>,
        right: Vec<KripkeFrame>,
    },
    NPairs {
        left: Vec<NeighborhoodFrame>,
        right: Vec<NeighborhoodFrame>,
    },
}

enum Candidate {
    Kripke(KripkeFrame),
    Nbhd(NeighborhoodFrame),
}

impl Candidate {
    fn size(&self) -> usize {
        match self {
            Candidate::Kripke(f) => f.size(),
            Candidate::Nbhd(f) => f.size(),
        }
    }
}

impl Space {
    fn build(spec: &SearchSpec) -> Result<Space, SearchError> {
        let m = spec.modality_count();
        if spec.max_worlds == 0 {
            return Err(SearchError::Cap("max_worlds must be positive".into()));
        }
        match spec.kind {
            FrameKind::Kripke | FrameKind::Nbhd => {
                let nbhd = spec.kind == FrameKind::Nbhd;
                let mut total: u64 = 0;
                let mut fits = spec.max_worlds <= MAX_EXHAUSTIVE_WORLDS;
                for n in 1..=spec.max_worlds {
                    let bits = m * n * n;
                    if bits >= 63 {
                        fits = false;
                        break;
                    }
                    total = total.saturating_add(1 << bits);
                }
                if !fits || total > spec.exhaustive_limit {
                    return Ok(Space::Sampled {
                        max_worlds: spec.max_worlds,
                        modalities: m,
                        samples: spec.samples,
                        seed: spec.seed,
                        nbhd,
                    });
                }
                let mut sizes = Vec::new();
                let mut offset = 0;
                for n in 1..=spec.max_worlds {
                    sizes.push((n, offset, permutations(n, false)));
                    offset += 1 << (m * n * n);
                }
                Ok(Space::Codes {
                    sizes,
                    modalities: m,
                    total,
                    nbhd,
                })
            }
            FrameKind::KripkeProduct => Ok(Space::Pairs {
                kind: spec.kind,
                left: unimodal_classes("a", spec.max_worlds)?,
                right: unimodal_classes("b", spec.max_worlds)?,
            }),
            FrameKind::NProduct => Ok(Space::NPairs {
                left: nframe_classes("a", spec.max_worlds, MAX_BASE_SETS)?,
                right: nframe_classes("b", spec.max_worlds, MAX_BASE_SETS)?,
            }),
            FrameKind::WeakProduct => Ok(Space::Pairs {
                kind: spec.kind,
                left: rooted_acyclic_classes("a", spec.max_worlds)?,
                right: rooted_acyclic_classes("b", spec.max_worlds)?,
            }),
        }
    }

    fn len(&self) -> u64 {
        match self {
            Space::Codes { total, .. } => *total,
            Space::Sampled { samples, .. } => *samples,
            Space::Pairs { left, right, .. } => (left.len() * right.len()) as u64,
            Space::NPairs { left, right } => (left.len() * right.len()) as u64,
        }
    }

    fn exhaustive(&self) -> bool {
        !matches!(self, Space::Sampled { .. })
    }

    /// `Ok(None)` for candidates filtered out as non-canonical.
    fn candidate(&self, idx: u64) -> Result<Option<Candidate>, SearchError> {
        let wrap = |f: KripkeFrame, nbhd: bool| {
            if nbhd {
                Candidate::Nbhd(from_kripke(&f))
            } else {
                Candidate::Kripke(f)
            }
        };
        match self {
            Space::Codes {
                sizes,
                modalities,
                nbhd,
                ..
            } => {
                let (n, first, perms) = sizes.iter().rev().find(|s| s.1 <= idx).expect("index in range");
                let code = idx - first;
                if !is_canonical(code, *n, *modalities, perms) {
                    return Ok(None);
                }
                Ok(Some(wrap(frame_from_code("w", code, *n, *modalities), *nbhd)))
            }
            Space::Sampled {
                max_worlds,
                modalities,
                seed,
                nbhd,
                ..
            } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(idx);
                let n = rng.gen_range(1..=*max_worlds);
                let density = rng.gen_range(0.1..0.6);
                let f = crate::random::kripke_frame(&mut rng, n, *modalities, density);
                Ok(Some(wrap(f, *nbhd)))
            }
            Space::Pairs { kind, left, right } => {
                let (i, j) = ((idx / right.len() as u64) as usize, (idx % right.len() as u64) as usize);
                let (l, r) = (&left[i], &right[j]);
                Ok(Some(match kind {
                    FrameKind::KripkeProduct => Candidate::Kripke(kripke::product(l, r)?),
                    _ => {
                        let depth = longest_path(l) + longest_path(r);
                        let wp = wproduct::entangle(l, r, depth)?;
                        debug_assert!(wp.total);
                        Candidate::Kripke(wp.frame)
                    }
                }))
            }
            Space::NPairs { left, right } => {
                let (i, j) = ((idx / right.len() as u64) as usize, (idx % right.len() as u64) as usize);
                Ok(Some(Candidate::Nbhd(n_product(&left[i], &right[j])?)))
            }
        }
    }
}

fn fits_cap(points: usize, vars: usize) -> bool {
    let product = points * vars;
    product <= crate::valuation_cap() && product < 63
}

enum Check {
    Filtered,
    Skipped,
    Valid,
    Refuted(Witness),
}

fn check(space: &Space, idx: u64, f: &Formula, vars: usize) -> Result<Check, SearchError> {
    let Some(cand) = space.candidate(idx)? else {
        return Ok(Check::Filtered);
    };
    if !fits_cap(cand.size(), vars) {
        return Ok(Check::Skipped);
    }
    let cap = crate::valuation_cap();
    let verdict = match &cand {
        Candidate::Kripke(fr) => semantics::frame_valid(fr, f, cap),
        Candidate::Nbhd(fr) => semantics::frame_valid(fr, f, cap),
    };
    let verdict = match verdict {
        Ok(v) => v,
        Err(ValidityError::CapExceeded { .. }) => return Ok(Check::Skipped),
        Err(e) => return Err(KripkeError::from(e).into()),
    };
    Ok(match verdict {
        Validity::Valid => Check::Valid,
        Validity::Refuted(Countermodel { valuation, world }) => {
            let frame = match cand {
                Candidate::Kripke(fr) => FrameFile::Kripke(KripkeFile {
                    valuation: Some(valuation),
                    ..KripkeFile::from_frame(&fr)
                }),
                Candidate::Nbhd(fr) => FrameFile::Nbhd(NbhdFile {
                    valuation: Some(valuation),
                    ..NbhdFile::from_frame(&fr)
                }),
            };
            Check::Refuted(Witness { index: idx, frame, world })
        }
    })
}

/// Runs the refutation search described by `spec`.
pub fn run(spec: &SearchSpec) -> Result<SearchResult, SearchError> {
    let start = Instant::now();
    let f = spec.parsed_formula()?;
    let vars = f.variables().len();
    let space = Space::build(spec)?;
    let total = space.len();

    let found = (0..total)
        .into_par_iter()
        .map(|idx| check(&space, idx, &f, vars))
        .find_map_first(|r| match r {
            Ok(Check::Refuted(w)) => Some(Ok(w)),
            Err(e) => Some(Err(e)),
            _ => None,
        })
        .transpose()?;

    let scanned = found.as_ref().map_or(total, |w| w.index + 1);
    let (checked, skipped) = (0..scanned)
        .into_par_iter()
        .map(|idx| match space.candidate(idx) {
            Ok(Some(c)) if fits_cap(c.size(), vars) => (1u64, 0u64),
            Ok(Some(_)) => (0, 1),
            _ => (0, 0),
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    let exhaustive = space.exhaustive();
    let outcome = match found {
        Some(witness) => Outcome::Refuted { witness },
        None if exhaustive && skipped == 0 => Outcome::Exhausted,
        None => Outcome::ValidatedUpToCap,
    };
    Ok(SearchResult {
        kind: spec.kind,
        formula: spec.formula.clone(),
        outcome,
        frames_checked: checked,
        skipped,
        exhaustive,
        elapsed: start.elapsed(),
    })
}

/// Re-evaluates a serialized witness: true iff `f` fails at its world.
pub fn replay(f: &Formula, witness: &Witness) -> Result<bool, SearchError> {
    Ok(match witness.frame.clone() {
        FrameFile::Kripke(k) => {
            let model: KripkeModel = k.to_model()?;
            !model.eval(&witness.world, f)?
        }
        FrameFile::Nbhd(n) => {
            let model: NeighborhoodModel = n.to_model()?;
            !model.eval_named(&witness.world, f)?
        }
        FrameFile::Topology(_) => {
            return Err(IoError::WrongType {
                expected: "kripke or nbhd",
                found: "topology",
            }
            .into())
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationReport {
    pub formula: String,
    pub class_a: SearchResult,
    pub class_b: SearchResult,
    /// Refuted in exactly one of the two classes.
    pub separates: bool,
}

pub fn separate(formula: &str, class_a: &SearchSpec, class_b: &SearchSpec) -> Result<SeparationReport, SearchError> {
    let with = |s: &SearchSpec| SearchSpec {
        formula: formula.to_string(),
        ..s.clone()
    };
    let a = run(&with(class_a))?;
    let b = run(&with(class_b))?;
    Ok(SeparationReport {
        formula: formula.to_string(),
        separates: a.refuted() != b.refuted(),
        class_a: a,
        class_b: b,
    })
}

/// Counts the frames the search would enumerate, for reporting.
pub fn frame_count(spec: &SearchSpec) -> Result<u64, SearchError> {
    let space = Space::build(spec)?;
    Ok((0..space.len())
        .into_par_iter()
        .filter(|&i| matches!(space.candidate(i), Ok(Some(_))))
        .count() as u64)
}
