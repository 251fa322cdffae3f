//! Dense n-frames over pseudo-infinite paths with stops, evaluated with
//! bounded quantification.
//!
//! A [`PathWord`] lists the letters after the root; `0` is a stop and the
//! word stands for itself followed by infinitely many stops. Neighborhoods
//! `U_k(α)` are enumerated only up to a word-length bound `L`, and `k` never
//! exceeds `k_max`; every verdict carries both bounds.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;
use regex::Regex;
use serde::Serialize;
use thiserror::Error;

use crate::formula::Formula;
use crate::horn::{self, rule_from_pretransitivity, HornError, HornRule};
use crate::kripke::{KripkeError, KripkeFrame};
use crate::wproduct::{self, projection_end, Letter, WProductError};

/// Token for a stop.
pub const STOP: &str = "0";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DenseError {
    #[error("base frame needs a root")]
    NoRoot,
    #[error("base frame must be unimodal, got {0} relations")]
    NotUnimodal(usize),
    #[error("world name '{0}' is not usable as a path token")]
    BadWorldName(String),
    #[error("unknown token '{0}'")]
    UnknownToken(String),
    #[error("'{word}' is not a path: '{letter}' does not follow '{after}'")]
    NotAPath { word: String, letter: String, after: String },
    #[error("word of length {len} exceeds the length bound {bound}")]
    TooLong { len: usize, bound: usize },
    #[error("neighborhood index {k} exceeds k_max = {k_max}")]
    IndexOutOfBound { k: usize, k_max: usize },
    #[error("formula of depth {depth} at a word of length {len} needs {need}, bounds are k_max = {k_max}, L = {bound}")]
    Headroom {
        depth: usize,
        len: usize,
        k_max: usize,
        bound: usize,
        need: &'static str,
    },
    #[error("formula uses modality {0}, dense frames have one")]
    ModalityOutOfRange(usize),
    #[error("only pretransitivity rules over R1 are supported")]
    UnsupportedRule,
    #[error("bad pattern for '{var}': {message}")]
    Pattern { var: String, message: String },
    #[error("path tree exceeds {cap} nodes")]
    TooLarge { cap: usize },
    #[error(transparent)]
    Kripke(#[from] KripkeError),
    #[error(transparent)]
    Horn(#[from] HornError),
    #[error(transparent)]
    WProduct(#[from] WProductError),
}

/// Canonical finite representative of a pseudo-infinite path: letters after
/// the root, `None` for a stop, no trailing stops.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PathWord {
    letters: Vec<Option<usize>>,
}

impl PathWord {
    pub fn empty() -> Self {
        PathWord::default()
    }

    /// Trims trailing stops; does not check that the word is a path.
    pub fn from_letters(mut letters: Vec<Option<usize>>) -> Self {
        while letters.last() == Some(&None) {
            letters.pop();
        }
        PathWord { letters }
    }

    /// Parses whitespace-separated tokens (`0` or a world name) and checks
    /// that the non-stop letters form a path from the root. `ε` and the
    /// empty string denote the all-stops word.
    pub fn parse(text: &str, frame: &KripkeFrame) -> Result<Self, DenseError> {
        let root = frame.root().ok_or(DenseError::NoRoot)?;
        let mut letters = Vec::new();
        let mut last = root;
        for tok in text.split_whitespace().filter(|t| *t != "ε") {
            if tok == STOP {
                letters.push(None);
                continue;
            }
            let w = frame
                .index_of(tok)
                .ok_or_else(|| DenseError::UnknownToken(tok.to_string()))?;
            if !frame.has_edge(1, last, w) {
                return Err(DenseError::NotAPath {
                    word: text.to_string(),
                    letter: tok.to_string(),
                    after: frame.world_name(last).to_string(),
                });
            }
            letters.push(Some(w));
            last = w;
        }
        Ok(PathWord::from_letters(letters))
    }

    pub fn letters(&self) -> &[Option<usize>] {
        &self.letters
    }

    /// Canonical length: the last position carrying a world.
    pub fn st(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letter `i` (0-based) of the infinite sequence.
    pub fn at(&self, i: usize) -> Option<usize> {
        self.letters.get(i).copied().flatten()
    }

    /// Tokens joined by spaces; the empty word gives `""`.
    pub fn to_text(&self, frame: &KripkeFrame) -> String {
        self.letters
            .iter()
            .map(|l| l.map_or(STOP, |w| frame.world_name(w)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn display<'a>(&'a self, frame: &'a KripkeFrame) -> impl fmt::Display + 'a {
        struct D<'a>(&'a PathWord, &'a KripkeFrame);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0.is_empty() {
                    f.write_str("ε")
                } else {
                    f.write_str(&self.0.to_text(self.1))
                }
            }
        }
        D(self, frame)
    }
}

/// Forgets the stops: the worlds of the path after the root.
pub fn f0(alpha: &PathWord) -> Vec<usize> {
    alpha.letters.iter().flatten().copied().collect()
}

/// The naturals with successor, as the unravelling of one reflexive world
/// named `1`.
pub fn naturals() -> KripkeFrame {
    let mut f = KripkeFrame::new(["1"], 1).expect("one world");
    f.add_edge(1, 0, 0);
    f.set_root(Some(0));
    f
}

fn check_base(frame: &KripkeFrame) -> Result<usize, DenseError> {
    if frame.modality_count() != 1 {
        return Err(DenseError::NotUnimodal(frame.modality_count()));
    }
    let root = frame.root().ok_or(DenseError::NoRoot)?;
    if let Some(w) = frame
        .worlds()
        .iter()
        .find(|w| *w == STOP || *w == "ε" || w.is_empty() || w.contains(|c: char| c.is_whitespace() || "()*".contains(c)))
    {
        return Err(DenseError::BadWorldName(w.clone()));
    }
    Ok(root)
}

// Paths of the base frame from the root, as a tree.
#[derive(Debug, Clone)]
struct PathTree {
    parent: Vec<usize>,
    depth: Vec<usize>,
    children: Vec<Vec<(usize, usize)>>, // (world, node), sorted by world
}

impl PathTree {
    fn build(frame: &KripkeFrame, root: usize, max_depth: usize) -> Result<Self, DenseError> {
        let cap = crate::max_nodes();
        let mut tree = PathTree {
            parent: vec![usize::MAX],
            depth: vec![0],
            children: vec![Vec::new()],
        };
        let mut ends = vec![root];
        let mut next = 0;
        while next < ends.len() {
            let node = next;
            next += 1;
            if tree.depth[node] == max_depth {
                continue;
            }
            for &v in frame.successors(1, ends[node]) {
                if ends.len() >= cap {
                    return Err(DenseError::TooLarge { cap });
                }
                let child = ends.len();
                ends.push(v);
                tree.parent.push(node);
                tree.depth.push(tree.depth[node] + 1);
                tree.children.push(Vec::new());
                tree.children[node].push((v, child));
            }
        }
        Ok(tree)
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    fn child(&self, node: usize, world: usize) -> Option<usize> {
        self.children[node].iter().find(|c| c.0 == world).map(|c| c.1)
    }

    fn node_of(&self, path: &[usize]) -> Option<usize> {
        path.iter().try_fold(0, |node, &w| self.child(node, w))
    }
}

/// Lazily explored `N_ω(F)` or `N_ω^Γ(F)` for pretransitivity rules `Γ`.
#[derive(Debug, Clone)]
pub struct LazyDenseFrame {
    base: KripkeFrame,
    pretrans: Vec<usize>,
    k_max: usize,
    len: usize,
    tree: PathTree,
    // Γ-closed successor sets on the path tree; `None` means one-step extension.
    closed: Option<Vec<FixedBitSet>>,
}

impl LazyDenseFrame {
    /// `pretrans` lists exponents `n` of rules `R^n ⊆ R`; empty means `Γ = ∅`.
    pub fn new(base: &KripkeFrame, pretrans: &[usize], k_max: usize, len: usize) -> Result<Self, DenseError> {
        let root = check_base(base)?;
        let tree = PathTree::build(base, root, len + 1)?;
        let mut pretrans = pretrans.to_vec();
        pretrans.sort_unstable();
        pretrans.dedup();
        let closed = if pretrans.is_empty() {
            None
        } else {
            let mut frame = KripkeFrame::new((0..tree.len()).map(|i| i.to_string()), 1)?;
            for (node, kids) in tree.children.iter().enumerate() {
                for &(_, c) in kids {
                    frame.add_edge(1, node, c);
                }
            }
            let rules: Vec<HornRule> = pretrans.iter().map(|&n| rule_from_pretransitivity(1, n)).collect();
            let closed = horn::closure(&frame, &rules)?;
            Some(
                (0..tree.len())
                    .map(|a| {
                        let mut s = FixedBitSet::with_capacity(tree.len());
                        for &b in closed.successors(1, a) {
                            s.insert(b);
                        }
                        s
                    })
                    .collect(),
            )
        };
        Ok(LazyDenseFrame {
            base: base.clone(),
            pretrans,
            k_max,
            len,
            tree,
            closed,
        })
    }

    /// Accepts only rules produced by [`rule_from_pretransitivity`] on `R1`.
    pub fn with_rules(base: &KripkeFrame, rules: &[HornRule], k_max: usize, len: usize) -> Result<Self, DenseError> {
        let limit = len + 2;
        let exps = rules
            .iter()
            .map(|r| {
                (0..=limit)
                    .find(|&n| rule_from_pretransitivity(1, n) == *r)
                    .ok_or(DenseError::UnsupportedRule)
            })
            .collect::<Result<Vec<_>, _>>()?;
        LazyDenseFrame::new(base, &exps, k_max, len)
    }

    pub fn base(&self) -> &KripkeFrame {
        &self.base
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn pretrans(&self) -> &[usize] {
        &self.pretrans
    }

    pub fn parse_word(&self, text: &str) -> Result<PathWord, DenseError> {
        PathWord::parse(text, &self.base)
    }

    fn node_of(&self, alpha: &PathWord) -> Result<usize, DenseError> {
        self.tree.node_of(&f0(alpha)).ok_or(DenseError::TooLong {
            len: alpha.st(),
            bound: self.len,
        })
    }

    fn is_successor(&self, from: usize, to: usize) -> bool {
        match &self.closed {
            Some(sets) => sets[from].contains(to),
            None => self.tree.parent[to] == from,
        }
    }

    /// `U_k(α)` restricted to words of length at most `L`.
    pub fn members_uk(&self, alpha: &PathWord, k: usize) -> Result<Vec<PathWord>, DenseError> {
        if k > self.k_max {
            return Err(DenseError::IndexOutOfBound { k, k_max: self.k_max });
        }
        if alpha.st() > self.len {
            return Err(DenseError::TooLong {
                len: alpha.st(),
                bound: self.len,
            });
        }
        self.members_within(alpha, k, self.len)
    }


    fn members_within(&self, alpha: &PathWord, k: usize, limit: usize) -> Result<Vec<PathWord>, DenseError> {
        let source = self.node_of(alpha)?;
        let m = k.max(alpha.st());
        let Some(max_depth) = (0..self.tree.len())
            .filter(|&t| self.is_successor(source, t))
            .map(|t| self.tree.depth[t])
            .max()
        else {
            return Ok(Vec::new());
        };
        let mut out = Vec::new();
        if alpha.st() <= limit && self.is_successor(source, source) {
            out.push(alpha.clone());
        }
        if m < limit {
            let mut buf = alpha.letters.clone();
            buf.resize(m, None);
            self.extend(&mut buf, source, source, limit, max_depth, &mut out);
        }
        out.sort_by(|a, b| (a.st(), &a.letters).cmp(&(b.st(), &b.letters)));
        Ok(out)
    }

    // Appends letters after the shared prefix; records words ending in a
    // world whose path is a successor of `source`.
    fn extend(
        &self,
        buf: &mut Vec<Option<usize>>,
        source: usize,
        node: usize,
        limit: usize,
        max_depth: usize,
        out: &mut Vec<PathWord>,
    ) {
        if buf.len() >= limit || self.tree.depth[node] >= max_depth {
            return;
        }
        buf.push(None);
        self.extend(buf, source, node, limit, max_depth, out);
        buf.pop();
        for &(w, child) in &self.tree.children[node] {
            buf.push(Some(w));
            if self.is_successor(source, child) {
                out.push(PathWord { letters: buf.clone() });
            }
            self.extend(buf, source, child, limit, max_depth, out);
            buf.pop();
        }
    }

    /// Every canonical word of length at most `max_len`.
    pub fn all_words(&self, max_len: usize) -> Result<Vec<PathWord>, DenseError> {
        let cap = crate::max_nodes();
        let mut out = vec![PathWord::empty()];
        let mut stack: Vec<(Vec<Option<usize>>, usize)> = vec![(Vec::new(), 0)];
        while let Some((buf, node)) = stack.pop() {
            if buf.len() >= max_len {
                continue;
            }
            let mut zero = buf.clone();
            zero.push(None);
            stack.push((zero, node));
            for &(w, child) in &self.tree.children[node] {
                let mut next = buf.clone();
                next.push(Some(w));
                if out.len() >= cap {
                    return Err(DenseError::TooLarge { cap });
                }
                out.push(PathWord { letters: next.clone() });
                stack.push((next, child));
            }
        }
        out.sort_by(|a, b| (a.st(), &a.letters).cmp(&(b.st(), &b.letters)));
        Ok(out)
    }
}

/// Per-variable token-level regular patterns over world names and `0`:
/// whitespace-separated tokens, groups `( )` and postfix `*`, matched
/// against whole canonical words.
#[derive(Debug, Clone, Default)]
pub struct PatternValuation {
    patterns: BTreeMap<String, (String, Regex)>,
}

fn token_char(letter: Option<usize>) -> char {
    let code = letter.map_or(0xE000, |w| 0xE001 + w as u32);
    char::from_u32(code).unwrap_or(char::REPLACEMENT_CHARACTER)
}

fn word_chars(word: &PathWord) -> String {
    word.letters.iter().map(|&l| token_char(l)).collect()
}

impl PatternValuation {
    pub fn new() -> Self {
        PatternValuation::default()
    }

    /// Parses `var=pattern`.
    pub fn parse_assignment(&mut self, text: &str, frame: &KripkeFrame) -> Result<(), DenseError> {
        let (var, pat) = text.split_once('=').ok_or_else(|| DenseError::Pattern {
            var: text.to_string(),
            message: "expected VAR=PATTERN".into(),
        })?;
        self.add(var.trim(), pat, frame)
    }

    pub fn add(&mut self, var: &str, pattern: &str, frame: &KripkeFrame) -> Result<(), DenseError> {
        let err = |message: String| DenseError::Pattern {
            var: var.to_string(),
            message,
        };
        if frame.size() > 6000 {
            return Err(err("too many worlds for pattern matching".into()));
        }
        let mut re = String::from("^(?:");
        let mut name = String::new();
        let flush = |name: &mut String, re: &mut String| -> Result<(), DenseError> {
            if name.is_empty() {
                return Ok(());
            }
            let letter = if name == STOP {
                None
            } else {
                Some(frame.index_of(name).ok_or_else(|| err(format!("unknown token '{name}'")))?)
            };
            re.push_str(&regex::escape(&token_char(letter).to_string()));
            name.clear();
            Ok(())
        };
        for c in pattern.chars() {
            match c {
                '(' | ')' | '*' => {
                    flush(&mut name, &mut re)?;
                    re.push_str(match c {
                        '(' => "(?:",
                        ')' => ")",
                        _ => "*",
                    });
                }
                c if c.is_whitespace() => flush(&mut name, &mut re)?,
                c => name.push(c),
            }
        }
        flush(&mut name, &mut re)?;
        re.push_str(")$");
        let compiled = Regex::new(&re).map_err(|e| err(e.to_string()))?;
        self.patterns.insert(var.to_string(), (pattern.trim().to_string(), compiled));
        Ok(())
    }

    /// Variables without a pattern are false everywhere.
    pub fn matches(&self, var: &str, word: &PathWord) -> bool {
        self.patterns
            .get(var)
            .is_some_and(|(_, re)| re.is_match(&word_chars(word)))
    }

    pub fn sources(&self) -> impl Iterator<Item = (&str, &str)> {
        self.patterns.iter().map(|(v, (p, _))| (v.as_str(), p.as_str()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DenseVerdict {
    pub holds: bool,
    pub k_max: usize,
    pub len: usize,
}

/// Checks the headroom a depth-`depth` formula needs at a word of length
/// `st`: `L >= st + depth`, `k_max >= depth + 2` and `k_max + depth <= L`.
pub fn check_headroom(frame: &LazyDenseFrame, st: usize, depth: usize) -> Result<(), DenseError> {
    let fail = |need| DenseError::Headroom {
        depth,
        len: st,
        k_max: frame.k_max,
        bound: frame.len,
        need,
    };
    if frame.len < st + depth {
        return Err(fail("L >= |α| + depth"));
    }
    if frame.k_max < depth + 2 {
        return Err(fail("k_max >= depth + 2"));
    }
    if frame.k_max + depth > frame.len {
        return Err(fail("k_max + depth <= L"));
    }
    Ok(())
}

/// Bounded truth of `f` at `alpha`.
///
/// `[]A` holds at `α` iff for some `k <= k_max` every `β` in `U_k(α)` of
/// length at most `L - depth(A)` satisfies `A`. The truncated neighborhoods
/// still shrink as `k` grows, so only `k = k_max` needs checking.
pub fn eval_dense(
    frame: &LazyDenseFrame,
    val: &PatternValuation,
    alpha: &PathWord,
    f: &Formula,
) -> Result<DenseVerdict, DenseError> {
    if f.max_modality() > 1 {
        return Err(DenseError::ModalityOutOfRange(f.max_modality()));
    }
    check_headroom(frame, alpha.st(), f.modal_depth())?;
    frame.node_of(alpha)?;
    let mut memo = HashMap::new();
    let holds = holds(frame, val, alpha, f, &mut memo)?;
    Ok(DenseVerdict {
        holds,
        k_max: frame.k_max,
        len: frame.len,
    })
}

fn holds(
    frame: &LazyDenseFrame,
    val: &PatternValuation,
    alpha: &PathWord,
    f: &Formula,
    memo: &mut HashMap<(usize, PathWord), bool>,
) -> Result<bool, DenseError> {
    Ok(match f {
        Formula::Bottom => false,
        Formula::Var(v) => val.matches(v, alpha),
        Formula::Implies(a, b) => !holds(frame, val, alpha, a, memo)? || holds(frame, val, alpha, b, memo)?,
        Formula::Box(_, a) => {
            let key = (f as *const Formula as usize, alpha.clone());
            if let Some(&v) = memo.get(&key) {
                return Ok(v);
            }
            let limit = frame.len - a.modal_depth();
            let mut all = true;
            for beta in frame.members_within(alpha, frame.k_max, limit)? {
                if !holds(frame, val, &beta, a, memo)? {
                    all = false;
                    break;
                }
            }
            memo.insert(key, all);
            all
        }
    })
}

/// Interleaves `x1 y1 x2 y2 ...` and drops the stops.
pub fn interleave_g(alpha: &PathWord, beta: &PathWord) -> Vec<Letter> {
    let n = alpha.st().max(beta.st());
    let mut out = Vec::new();
    for i in 0..n {
        if let Some(x) = alpha.at(i) {
            out.push((1, x));
        }
        if let Some(y) = beta.at(i) {
            out.push((2, y));
        }
    }
    out
}

/// Map from pairs of path words to entangled words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GMap {
    Interleave,
    /// Negative control: all of `f0(α)` followed by all of `f0(β)`.
    Concatenate,
}

impl GMap {
    pub fn apply(self, alpha: &PathWord, beta: &PathWord) -> Vec<Letter> {
        match self {
            GMap::Interleave => interleave_g(alpha, beta),
            GMap::Concatenate => f0(alpha)
                .into_iter()
                .map(|x| (1, x))
                .chain(f0(beta).into_iter().map(|y| (2, y)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GViolation {
    /// The image of `U_k` misses part of `R_side^<(g(α, β))`.
    Forward { side: u8, alpha: String, beta: String, k: usize, missing: String },
    /// No `U_k` with `k <= k_max` maps into `R_side^<(g(α, β))`.
    Back { side: u8, alpha: String, beta: String },
    NotSurjective { word: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GReport {
    pub pairs_checked: usize,
    pub words_checked: usize,
    pub violations: Vec<GViolation>,
}

impl GReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn r_less(f1: &KripkeFrame, f2: &KripkeFrame, z: &[Letter], side: u8) -> Vec<Vec<Letter>> {
    let (frame, root) = if side == 1 {
        (f1, f1.root().unwrap_or(0))
    } else {
        (f2, f2.root().unwrap_or(0))
    };
    frame
        .successors(1, projection_end(z, side, root))
        .iter()
        .map(|&v| {
            let mut w = z.to_vec();
            w.push((side, v));
            w
        })
        .collect()
}

/// Bounded p-morphism check for `map` from `N_ω(F1) x N_ω(F2)` onto the
/// weak product. Pairs `(α, β)` range over words with `st <= k_max - 1`;
/// for every `k <= k_max` the image of `U_k(α) x {β}` must cover
/// `R_1^<(g(α, β))` and for some `k` it must lie inside it, and mirrored
/// for the second side. Surjectivity is checked on every entangled word of
/// length at most `surj_depth`.
pub fn check_g_pmorphism_bounded(
    f1: &KripkeFrame,
    f2: &KripkeFrame,
    k_max: usize,
    len: usize,
    surj_depth: usize,
    map: GMap,
) -> Result<GReport, DenseError> {
    let d1 = LazyDenseFrame::new(f1, &[], k_max, len)?;
    let d2 = LazyDenseFrame::new(f2, &[], k_max, len)?;
    let sample = k_max.saturating_sub(1);
    let words1 = d1.all_words(sample)?;
    let words2 = d2.all_words(sample)?;
    let name = |z: &[Letter]| wproduct::word_name(f1, f2, z);
    let mut violations = Vec::new();
    let mut pairs = 0;
    for alpha in &words1 {
        for beta in &words2 {
            pairs += 1;
            let z = map.apply(alpha, beta);
            for side in [1u8, 2] {
                let target = r_less(f1, f2, &z, side);
                let mut back_ok = false;
                for k in 0..=k_max {
                    let image: Vec<Vec<Letter>> = if side == 1 {
                        d1.members_uk(alpha, k)?.iter().map(|a| map.apply(a, beta)).collect()
                    } else {
                        d2.members_uk(beta, k)?.iter().map(|b| map.apply(alpha, b)).collect()
                    };
                    if let Some(missing) = target.iter().find(|t| !image.contains(t)) {
                        violations.push(GViolation::Forward {
                            side,
                            alpha: alpha.to_text(f1),
                            beta: beta.to_text(f2),
                            k,
                            missing: name(missing),
                        });
                    }
                    back_ok |= image.iter().all(|w| target.contains(w));
                }
                if !back_ok {
                    violations.push(GViolation::Back {
                        side,
                        alpha: alpha.to_text(f1),
                        beta: beta.to_text(f2),
                    });
                }
            }
        }
    }
    let wp = wproduct::entangle(f1, f2, surj_depth)?;
    for z in &wp.words {
        let xs = z.iter().map(|&(s, w)| (s == 1).then_some(w)).collect();
        let ys = z.iter().map(|&(s, w)| (s == 2).then_some(w)).collect();
        if map.apply(&PathWord::from_letters(xs), &PathWord::from_letters(ys)) != *z {
            violations.push(GViolation::NotSurjective { word: name(z) });
        }
    }
    Ok(GReport {
        pairs_checked: pairs,
        words_checked: wp.words.len(),
        violations,
    })
}
