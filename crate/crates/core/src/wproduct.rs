//! Entangled words over two rooted frames and the weak product frame they
//! carry, generated up to a length bound.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{enumerate_closed, print, Formula, FormulaError};
use crate::horn::{self, Atom, BodyTerm, HornError, HornRule};
use crate::kripke::{self, rooted_subframe, KripkeError, KripkeFrame};
use crate::semantics::Countermodel;

/// Name of the empty word.
pub const EMPTY_WORD: &str = "ε";
/// Separator between letters in word names.
pub const LETTER_SEP: char = '|';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WProductError {
    #[error("{side} factor needs a root")]
    NoRoot { side: &'static str },
    #[error("{side} factor is not generated by its root (world '{world}' unreachable)")]
    NotRooted { side: &'static str, world: String },
    #[error("{side} factor must be unimodal, got {count} relations")]
    NotUnimodal { side: &'static str, count: usize },
    #[error("world name '{0}' contains the reserved letter separator")]
    ReservedSeparator(String),
    #[error("weak product exceeds {cap} words")]
    TooLarge { cap: usize },
    #[error("weak product is not total at depth {0}; exact checks need the whole frame")]
    NotTotal(usize),
    #[error(transparent)]
    Kripke(#[from] KripkeError),
    #[error(transparent)]
    Horn(#[from] HornError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// A letter `(side, world)`, `side` being 1 or 2.
pub type Letter = (u8, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakProductFrame {
    /// Bimodal frame over words; world `k` is `words[k]`, the root is `ε`.
    pub frame: KripkeFrame,
    pub words: Vec<Vec<Letter>>,
    pub depth: usize,
    /// No word of length `depth` has an entangled extension, so `frame` is
    /// the whole weak product.
    pub total: bool,
    pub left: KripkeFrame,
    pub right: KripkeFrame,
}

fn check_factor(f: &KripkeFrame, side: &'static str) -> Result<usize, WProductError> {
    if f.modality_count() != 1 {
        return Err(WProductError::NotUnimodal {
            side,
            count: f.modality_count(),
        });
    }
    let root = f.root().ok_or(WProductError::NoRoot { side })?;
    let sub = rooted_subframe(f, root);
    if sub.size() != f.size() {
        let world = f
            .worlds()
            .iter()
            .find(|w| sub.index_of(w).is_none())
            .cloned()
            .unwrap_or_default();
        return Err(WProductError::NotRooted { side, world });
    }
    if let Some(w) = f.worlds().iter().find(|w| w.contains(LETTER_SEP)) {
        return Err(WProductError::ReservedSeparator(w.clone()));
    }
    Ok(root)
}

/// Last world of the side-`side` projection of `word`, or the root.
pub fn projection_end(word: &[Letter], side: u8, root: usize) -> usize {
    word.iter().rev().find(|l| l.0 == side).map_or(root, |l| l.1)
}

/// Side-`side` letters of `word`.
pub fn projection(word: &[Letter], side: u8) -> Vec<usize> {
    word.iter().filter(|l| l.0 == side).map(|l| l.1).collect()
}

pub fn word_name(left: &KripkeFrame, right: &KripkeFrame, word: &[Letter]) -> String {
    if word.is_empty() {
        return EMPTY_WORD.to_string();
    }
    word.iter()
        .map(|&(side, w)| {
            let f = if side == 1 { left } else { right };
            format!("{side}:{}", f.world_name(w))
        })
        .collect::<Vec<_>>()
        .join(&LETTER_SEP.to_string())
}

fn extensions(left: &KripkeFrame, right: &KripkeFrame, roots: (usize, usize), word: &[Letter]) -> Vec<Letter> {
    let mut out = Vec::new();
    for &v in left.successors(1, projection_end(word, 1, roots.0)) {
        out.push((1, v));
    }
    for &v in right.successors(1, projection_end(word, 2, roots.1)) {
        out.push((2, v));
    }
    out
}

/// All entangled words of length at most `depth`, in length-lex order
/// (side-1 letters before side-2 letters, then by world index).
pub fn entangle(left: &KripkeFrame, right: &KripkeFrame, depth: usize) -> Result<WeakProductFrame, WProductError> {
    let roots = (check_factor(left, "left")?, check_factor(right, "right")?);
    let cap = crate::max_nodes();
    let mut words: Vec<Vec<Letter>> = vec![Vec::new()];
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut level = 0..1;
    for _ in 0..depth {
        let start = words.len();
        for parent in level.clone() {
            for letter in extensions(left, right, roots, &words[parent]) {
                if words.len() >= cap {
                    return Err(WProductError::TooLarge { cap });
                }
                let mut w = words[parent].clone();
                w.push(letter);
                edges.push((letter.0 as usize, parent, words.len()));
                words.push(w);
            }
        }
        level = start..words.len();
        if level.is_empty() {
            break;
        }
    }
    let total = level
        .clone()
        .all(|k| words[k].len() < depth || extensions(left, right, roots, &words[k]).is_empty());
    let names: Vec<String> = words.iter().map(|w| word_name(left, right, w)).collect();
    let mut frame = KripkeFrame::new(names, 2)?;
    for (i, a, b) in edges {
        frame.add_edge(i, a, b);
    }
    frame.set_root(Some(0));
    Ok(WeakProductFrame {
        frame,
        words,
        depth,
        total,
        left: left.clone(),
        right: right.clone(),
    })
}

impl WeakProductFrame {
    /// The frame over words reachable from `word` by `R_side` steps, with
    /// only that relation kept.
    pub fn cone(&self, word: usize, side: usize) -> KripkeFrame {
        let mut unimodal = KripkeFrame::new(self.frame.worlds().iter().cloned(), 1).expect("words are distinct");
        for (a, b) in self.frame.edges(side) {
            unimodal.add_edge(1, a, b);
        }
        rooted_subframe(&unimodal, word)
    }
}

fn remap_atom(a: &Atom, to: usize) -> Atom {
    Atom(format!("R{to}"), a.1.clone(), a.2.clone())
}

/// Moves a unimodal rule over `R1` to relation `to`.
pub fn remap_rule(rule: &HornRule, to: usize) -> HornRule {
    HornRule {
        vars: rule.vars.clone(),
        body: rule
            .body
            .iter()
            .map(|t| match t {
                BodyTerm::Atom(a) => BodyTerm::Atom(remap_atom(a, to)),
                BodyTerm::Or { or } => BodyTerm::Or {
                    or: or.iter().map(|g| g.iter().map(|a| remap_atom(a, to)).collect()).collect(),
                },
            })
            .collect(),
        head: remap_atom(&rule.head, to),
    }
}

/// Closes the first relation under `rules_1` and the second under `rules_2`;
/// both rule sets are written over `R1`.
pub fn closure_wp(
    wp: &WeakProductFrame,
    rules_1: &[HornRule],
    rules_2: &[HornRule],
) -> Result<KripkeFrame, WProductError> {
    if !wp.total {
        return Err(WProductError::NotTotal(wp.depth));
    }
    let mut rules: Vec<HornRule> = rules_1.to_vec();
    rules.extend(rules_2.iter().map(|r| remap_rule(r, 2)));
    Ok(horn::closure(&wp.frame, &rules)?)
}

/// Instances `B -> []2 B` for closed `[]2`-free `B`, then `B -> []1 B` for
/// closed `[]1`-free `B`, of modal depth at most `depth` in `B`.
pub fn delta_suite(depth: usize) -> Result<Vec<Formula>, WProductError> {
    let mut out = Vec::new();
    for (inner, outer) in [(1, 2), (2, 1)] {
        for b in enumerate_closed(depth, &BTreeSet::from([inner]))? {
            out.push(Formula::implies(b.clone(), Formula::boxed(outer, b)));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaFailure {
    pub formula: String,
    pub witness: Countermodel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaReport {
    pub checked: usize,
    pub failures: Vec<DeltaFailure>,
}

impl DeltaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks every [`delta_suite`] instance on an arbitrary bimodal frame.
pub fn verify_delta_on(frame: &KripkeFrame, depth: usize) -> Result<DeltaReport, WProductError> {
    let suite = delta_suite(depth)?;
    let mut failures = Vec::new();
    for f in &suite {
        if let Some(witness) = kripke::frame_valid(frame, f)?.countermodel() {
            failures.push(DeltaFailure {
                formula: print(f),
                witness: witness.clone(),
            });
        }
    }
    Ok(DeltaReport {
        checked: suite.len(),
        failures,
    })
}

pub fn verify_delta(wp: &WeakProductFrame, depth: usize) -> Result<DeltaReport, WProductError> {
    if !wp.total {
        return Err(WProductError::NotTotal(wp.depth));
    }
    verify_delta_on(&wp.frame, depth)
}
