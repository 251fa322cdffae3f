//! Finite multimodal Kripke frames and models.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::Formula;
use crate::semantics::{self, FrameSemantics, PointSet, Validity, ValidityError, Valuation};

/// Separator between the coordinates of a product world name.
pub const PAIR_SEP: char = ',';
/// Separator between worlds and relation indices in unravelled path names.
pub const PATH_SEP: char = '/';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("frame has no worlds")]
    Empty,
    #[error("duplicate world '{0}'")]
    DuplicateWorld(String),
    #[error("unknown world '{0}'")]
    UnknownWorld(String),
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("modality {used} out of range, frame has {available}")]
    ModalityOutOfRange { used: usize, available: usize },
    #[error("world name '{name}' contains reserved separator '{sep}'")]
    ReservedSeparator { name: String, sep: char },
    #[error("operation needs a root")]
    NoRoot,
    #[error("operation needs a unimodal frame, got {0} relations")]
    NotUnimodal(usize),
    #[error("map is not total: no image for '{0}'")]
    MapNotTotal(String),
    #[error("map is not a verified p-morphism ({0} violations)")]
    UnverifiedMorphism(usize),
    #[error("frame would have {size} worlds, above the cap of {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error(transparent)]
    Validity(#[from] ValidityError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeFrame {
    worlds: Vec<String>,
    index: HashMap<String, usize>,
    // succ[i][w]: sorted successors of w under relation i + 1
    succ: Vec<Vec<Vec<usize>>>,
    root: Option<usize>,
}

impl KripkeFrame {
    /// A frame with the given worlds and `modalities` empty relations.
    pub fn new<S: Into<String>>(
        worlds: impl IntoIterator<Item = S>,
        modalities: usize,
    ) -> Result<Self, KripkeError> {
        let worlds: Vec<String> = worlds.into_iter().map(Into::into).collect();
        if worlds.is_empty() {
            return Err(KripkeError::Empty);
        }
        let mut index = HashMap::with_capacity(worlds.len());
        for (i, w) in worlds.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(KripkeError::DuplicateWorld(w.clone()));
            }
        }
        let n = worlds.len();
        Ok(KripkeFrame {
            worlds,
            index,
            succ: vec![vec![Vec::new(); n]; modalities],
            root: None,
        })
    }

    /// Builds a frame from world names; `relations[k]` is relation `k + 1`.
    pub fn from_names(
        worlds: &[String],
        relations: &[Vec<(String, String)>],
        root: Option<&str>,
    ) -> Result<Self, KripkeError> {
        let mut frame = KripkeFrame::new(worlds.iter().cloned(), relations.len())?;
        for (k, rel) in relations.iter().enumerate() {
            for (a, b) in rel {
                let (a, b) = (frame.require(a)?, frame.require(b)?);
                frame.add_edge(k + 1, a, b);
            }
        }
        if let Some(r) = root {
            frame.root = Some(frame.require(r)?);
        }
        Ok(frame)
    }

    pub fn require(&self, name: &str) -> Result<usize, KripkeError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| KripkeError::UnknownWorld(name.to_string()))
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Adds `a R_modality b`; duplicate edges are ignored.
    pub fn add_edge(&mut self, modality: usize, a: usize, b: usize) {
        let list = &mut self.succ[modality - 1][a];
        if let Err(pos) = list.binary_search(&b) {
            list.insert(pos, b);
        }
    }

    pub fn remove_edge(&mut self, modality: usize, a: usize, b: usize) {
        let list = &mut self.succ[modality - 1][a];
        if let Ok(pos) = list.binary_search(&b) {
            list.remove(pos);
        }
    }

    pub fn set_root(&mut self, root: Option<usize>) {
        self.root = root;
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn size(&self) -> usize {
        self.worlds.len()
    }

    pub fn modality_count(&self) -> usize {
        self.succ.len()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_name(&self, w: usize) -> &str {
        &self.worlds[w]
    }

    pub fn successors(&self, modality: usize, w: usize) -> &[usize] {
        &self.succ[modality - 1][w]
    }

    pub fn has_edge(&self, modality: usize, a: usize, b: usize) -> bool {
        self.succ[modality - 1][a].binary_search(&b).is_ok()
    }

    pub fn edges(&self, modality: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ[modality - 1]
            .iter()
            .enumerate()
            .flat_map(|(a, bs)| bs.iter().map(move |&b| (a, b)))
    }

    pub fn edge_count(&self) -> usize {
        (1..=self.modality_count()).map(|i| self.edges(i).count()).sum()
    }

    /// Relation `modality` as named pairs.
    pub fn named_edges(&self, modality: usize) -> Vec<(String, String)> {
        self.edges(modality)
            .map(|(a, b)| (self.worlds[a].clone(), self.worlds[b].clone()))
            .collect()
    }

    /// Every world has a successor under `modality`.
    pub fn is_serial(&self, modality: usize) -> bool {
        self.succ[modality - 1].iter().all(|s| !s.is_empty())
    }

    /// No path (under any relation) returns to a world it visited.
    pub fn is_acyclic(&self) -> bool {
        let n = self.size();
        let mut indegree = vec![0usize; n];
        for i in 1..=self.modality_count() {
            for (_, b) in self.edges(i) {
                indegree[b] += 1;
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&w| indegree[w] == 0).collect();
        let mut seen = 0;
        while let Some(w) = queue.pop_front() {
            seen += 1;
            for i in 1..=self.modality_count() {
                for &v in self.successors(i, w) {
                    indegree[v] -= 1;
                    if indegree[v] == 0 {
                        queue.push_back(v);
                    }
                }
            }
        }
        seen == n
    }

    /// Number of steps in the longest path from `from`, or `None` when a
    /// cycle is reachable.
    pub fn longest_path_from(&self, from: usize) -> Option<usize> {
        let sub = rooted_subframe(self, from);
        if !sub.is_acyclic() {
            return None;
        }
        let mut memo = vec![None; sub.size()];
        fn go(f: &KripkeFrame, w: usize, memo: &mut Vec<Option<usize>>) -> usize {
            if let Some(d) = memo[w] {
                return d;
            }
            let mut best = 0;
            for i in 1..=f.modality_count() {
                for &v in f.successors(i, w) {
                    best = best.max(1 + go(f, v, memo));
                }
            }
            memo[w] = Some(best);
            best
        }
        Some(go(&sub, sub.root.unwrap_or(0), &mut memo))
    }

    fn check_names(&self, sep: char) -> Result<(), KripkeError> {
        match self.worlds.iter().find(|w| w.contains(sep)) {
            Some(name) => Err(KripkeError::ReservedSeparator {
                name: name.clone(),
                sep,
            }),
            None => Ok(()),
        }
    }
}

impl FrameSemantics for KripkeFrame {
    fn size(&self) -> usize {
        self.worlds.len()
    }

    fn modality_count(&self) -> usize {
        self.succ.len()
    }

    fn point_name(&self, idx: usize) -> &str {
        &self.worlds[idx]
    }

    fn box_image(&self, modality: usize, set: &PointSet) -> PointSet {
        let mut out = PointSet::with_capacity(self.size());
        for (w, succ) in self.succ[modality - 1].iter().enumerate() {
            if succ.iter().all(|&v| set.contains(v)) {
                out.insert(w);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    pub frame: KripkeFrame,
    pub valuation: Valuation,
    /// Reject formulas mentioning variables the valuation does not define.
    pub strict_variables: bool,
}

impl KripkeModel {
    pub fn new(frame: KripkeFrame, valuation: Valuation) -> Self {
        KripkeModel {
            frame,
            valuation,
            strict_variables: false,
        }
    }

    pub fn from_names(
        frame: KripkeFrame,
        valuation: &BTreeMap<String, Vec<String>>,
    ) -> Result<Self, KripkeError> {
        let mut val = Valuation::new();
        for (var, worlds) in valuation {
            let mut set = PointSet::with_capacity(frame.size());
            for w in worlds {
                set.insert(frame.require(w)?);
            }
            val.insert(var.clone(), set);
        }
        Ok(KripkeModel::new(frame, val))
    }

    pub fn named_valuation(&self) -> BTreeMap<String, Vec<String>> {
        semantics::named_valuation(&self.frame, &self.valuation)
    }

    fn precheck(&self, f: &Formula) -> Result<(), KripkeError> {
        let used = f.max_modality();
        if used > self.frame.modality_count() {
            return Err(KripkeError::ModalityOutOfRange {
                used,
                available: self.frame.modality_count(),
            });
        }
        if self.strict_variables {
            if let Some(v) = f.variables().into_iter().find(|v| !self.valuation.contains_key(v)) {
                return Err(KripkeError::UnknownVariable(v));
            }
        }
        Ok(())
    }

    /// Truth of `f` at the world named `world`.
    pub fn eval(&self, world: &str, f: &Formula) -> Result<bool, KripkeError> {
        let w = self.frame.require(world)?;
        self.eval_at(w, f)
    }

    pub fn eval_at(&self, w: usize, f: &Formula) -> Result<bool, KripkeError> {
        if w >= self.frame.size() {
            return Err(KripkeError::UnknownWorld(format!("#{w}")));
        }
        self.precheck(f)?;
        Ok(self.holds(w, f))
    }

    fn holds(&self, w: usize, f: &Formula) -> bool {
        match f {
            Formula::Bottom => false,
            Formula::Var(v) => self.valuation.get(v).is_some_and(|s| s.contains(w)),
            Formula::Implies(a, b) => !self.holds(w, a) || self.holds(w, b),
            Formula::Box(i, a) => self.frame.successors(*i, w).iter().all(|&v| self.holds(v, a)),
        }
    }

    /// Set of worlds where `f` holds.
    pub fn extension(&self, f: &Formula) -> Result<PointSet, KripkeError> {
        self.precheck(f)?;
        Ok(semantics::extension(&self.frame, f, &self.valuation))
    }
}

pub fn frame_valid(frame: &KripkeFrame, f: &Formula) -> Result<Validity, KripkeError> {
    frame_valid_with_cap(frame, f, crate::valuation_cap())
}

pub fn frame_valid_with_cap(frame: &KripkeFrame, f: &Formula, cap: usize) -> Result<Validity, KripkeError> {
    Ok(semantics::frame_valid(frame, f, cap)?)
}

// ---------------------------------------------------------------------------
// Constructions

fn require_unimodal(f: &KripkeFrame) -> Result<(), KripkeError> {
    if f.modality_count() != 1 {
        return Err(KripkeError::NotUnimodal(f.modality_count()));
    }
    Ok(())
}

pub fn pair_name(a: &str, b: &str) -> String {
    format!("{a}{PAIR_SEP}{b}")
}

/// Product of two unimodal frames: relation 1 moves the first coordinate,
/// relation 2 the second. World `(x, y)` is named `"x,y"` and sits at index
/// `x * |W2| + y`.
pub fn product(f1: &KripkeFrame, f2: &KripkeFrame) -> Result<KripkeFrame, KripkeError> {
    require_unimodal(f1)?;
    require_unimodal(f2)?;
    f1.check_names(PAIR_SEP)?;
    f2.check_names(PAIR_SEP)?;
    let (n1, n2) = (f1.size(), f2.size());
    let cap = crate::max_nodes();
    if n1 * n2 > cap {
        return Err(KripkeError::TooLarge { size: n1 * n2, cap });
    }
    let names = f1
        .worlds
        .iter()
        .flat_map(|x| f2.worlds.iter().map(move |y| pair_name(x, y)));
    let mut out = KripkeFrame::new(names, 2)?;
    for (x, z) in f1.edges(1) {
        for y in 0..n2 {
            out.add_edge(1, x * n2 + y, z * n2 + y);
        }
    }
    for (y, t) in f2.edges(1) {
        for x in 0..n1 {
            out.add_edge(2, x * n2 + y, x * n2 + t);
        }
    }
    if let (Some(r1), Some(r2)) = (f1.root, f2.root) {
        out.root = Some(r1 * n2 + r2);
    }
    Ok(out)
}

/// Worlds reachable from `w` via the reflexive-transitive closure of the
/// union of all relations, in original order, rooted at `w`.
pub fn rooted_subframe(frame: &KripkeFrame, w: usize) -> KripkeFrame {
    let (sub, _) = rooted_subframe_with_map(frame, w);
    sub
}

/// Like [`rooted_subframe`], also returning the inclusion map into `frame`.
pub fn rooted_subframe_with_map(frame: &KripkeFrame, w: usize) -> (KripkeFrame, Vec<usize>) {
    let n = frame.size();
    let mut reached = vec![false; n];
    let mut queue = VecDeque::from([w]);
    reached[w] = true;
    while let Some(u) = queue.pop_front() {
        for i in 1..=frame.modality_count() {
            for &v in frame.successors(i, u) {
                if !reached[v] {
                    reached[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    let keep: Vec<usize> = (0..n).filter(|&u| reached[u]).collect();
    let mut new_index = vec![usize::MAX; n];
    for (k, &u) in keep.iter().enumerate() {
        new_index[u] = k;
    }
    let mut sub = KripkeFrame::new(keep.iter().map(|&u| frame.worlds[u].clone()), frame.modality_count())
        .expect("rooted subframe contains its root");
    for i in 1..=frame.modality_count() {
        for &u in &keep {
            for &v in frame.successors(i, u) {
                sub.add_edge(i, new_index[u], new_index[v]);
            }
        }
    }
    sub.root = Some(new_index[w]);
    (sub, keep)
}

/// Paths `w0 R_j1 w1 ... R_jm wm` from the root with `m <= depth`, named
/// `w0/j1/w1/.../jm/wm`. Returns the tree and the projection to last worlds.
///
/// The projection is a p-morphism onto the rooted subframe only when no
/// path from the root is longer than `depth`; on deeper or cyclic frames the
/// leaves lose their successors.
pub fn unravel(frame: &KripkeFrame, depth: usize) -> Result<(KripkeFrame, Vec<usize>), KripkeError> {
    let root = frame.root.ok_or(KripkeError::NoRoot)?;
    frame.check_names(PATH_SEP)?;
    let cap = crate::max_nodes();
    let mut names = vec![frame.worlds[root].clone()];
    let mut proj = vec![root];
    let mut lengths = vec![0usize];
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut frontier = 0;
    while frontier < names.len() {
        let (alpha, end, len) = (frontier, proj[frontier], lengths[frontier]);
        frontier += 1;
        if len == depth {
            continue;
        }
        for j in 1..=frame.modality_count() {
            for &v in frame.successors(j, end) {
                if names.len() >= cap {
                    return Err(KripkeError::TooLarge { size: names.len() + 1, cap });
                }
                let name = format!("{}{PATH_SEP}{j}{PATH_SEP}{}", names[alpha], frame.worlds[v]);
                edges.push((j, alpha, names.len()));
                names.push(name);
                proj.push(v);
                lengths.push(len + 1);
            }
        }
    }
    let mut tree = KripkeFrame::new(names, frame.modality_count())?;
    for (j, a, b) in edges {
        tree.add_edge(j, a, b);
    }
    tree.root = Some(0);
    Ok((tree, proj))
}

/// Thickening by a set of `s_size` elements: `(w, x) R (v, y)` iff `w R v`,
/// restricted to the component generated by `(root, 0)`. Returns the frame
/// and its first projection.
pub fn thicken(frame: &KripkeFrame, s_size: usize) -> Result<(KripkeFrame, Vec<usize>), KripkeError> {
    let root = frame.root.ok_or(KripkeError::NoRoot)?;
    frame.check_names(PAIR_SEP)?;
    let s_size = s_size.max(1);
    let n = frame.size();
    let cap = crate::max_nodes();
    if n * s_size > cap {
        return Err(KripkeError::TooLarge { size: n * s_size, cap });
    }
    let names = frame
        .worlds
        .iter()
        .flat_map(|w| (0..s_size).map(move |x| pair_name(w, &x.to_string())));
    let mut full = KripkeFrame::new(names, frame.modality_count())?;
    for i in 1..=frame.modality_count() {
        for (w, v) in frame.edges(i) {
            for x in 0..s_size {
                for y in 0..s_size {
                    full.add_edge(i, w * s_size + x, v * s_size + y);
                }
            }
        }
    }
    let (sub, incl) = rooted_subframe_with_map(&full, root * s_size);
    let proj = incl.into_iter().map(|u| u / s_size).collect();
    Ok((sub, proj))
}

// ---------------------------------------------------------------------------
// p-morphisms

/// One failed p-morphism condition. Kripke checks produce `NotSurjective`,
/// `Monotonicity` and `Lifting`; neighborhood checks produce
/// `NotSurjective`, `Forward` and `Back`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NotSurjective { target: String },
    Monotonicity { modality: usize, from: String, to: String },
    Lifting { modality: usize, world: String, target_successor: String },
    Forward { modality: usize, point: String, base_set: Vec<String> },
    Back { modality: usize, point: String, target_set: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismWitness {
    /// Source world name to target world name.
    pub map: BTreeMap<String, String>,
    pub violations: Vec<Violation>,
}

impl MorphismWitness {
    pub fn is_pmorphism(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Resolves a name-based map into indices, failing if some source world has
/// no image or an image outside the target.
pub fn resolve_map(
    source_names: &[String],
    target_index: impl Fn(&str) -> Option<usize>,
    map: &BTreeMap<String, String>,
) -> Result<Vec<usize>, KripkeError> {
    source_names
        .iter()
        .map(|s| {
            let t = map.get(s).ok_or_else(|| KripkeError::MapNotTotal(s.clone()))?;
            target_index(t).ok_or_else(|| KripkeError::UnknownWorld(t.clone()))
        })
        .collect()
}

pub fn check_pmorphism_named(
    source: &KripkeFrame,
    target: &KripkeFrame,
    map: &BTreeMap<String, String>,
) -> Result<MorphismWitness, KripkeError> {
    let idx = resolve_map(&source.worlds, |t| target.index_of(t), map)?;
    check_pmorphism(source, target, &idx)
}

/// Checks surjectivity, monotonicity and lifting for `map` (indexed by
/// source world) and lists every failure.
pub fn check_pmorphism(
    source: &KripkeFrame,
    target: &KripkeFrame,
    map: &[usize],
) -> Result<MorphismWitness, KripkeError> {
    if map.len() != source.size() {
        let missing = source.worlds.get(map.len()).cloned().unwrap_or_default();
        return Err(KripkeError::MapNotTotal(missing));
    }
    if let Some(&bad) = map.iter().find(|&&t| t >= target.size()) {
        return Err(KripkeError::UnknownWorld(format!("#{bad}")));
    }
    let available = target.modality_count();
    if source.modality_count() != available {
        return Err(KripkeError::ModalityOutOfRange {
            used: source.modality_count(),
            available,
        });
    }
    let mut violations = Vec::new();
    let mut hit = vec![false; target.size()];
    for &t in map {
        hit[t] = true;
    }
    for (t, _) in hit.iter().enumerate().filter(|(_, h)| !**h) {
        violations.push(Violation::NotSurjective {
            target: target.worlds[t].clone(),
        });
    }
    for i in 1..=source.modality_count() {
        for (w, v) in source.edges(i) {
            if !target.has_edge(i, map[w], map[v]) {
                violations.push(Violation::Monotonicity {
                    modality: i,
                    from: source.worlds[w].clone(),
                    to: source.worlds[v].clone(),
                });
            }
        }
        for w in 0..source.size() {
            for &t in target.successors(i, map[w]) {
                if !source.successors(i, w).iter().any(|&v| map[v] == t) {
                    violations.push(Violation::Lifting {
                        modality: i,
                        world: source.worlds[w].clone(),
                        target_successor: target.worlds[t].clone(),
                    });
                }
            }
        }
    }
    let named = source
        .worlds
        .iter()
        .zip(map)
        .map(|(s, &t)| (s.clone(), target.worlds[t].clone()))
        .collect();
    Ok(MorphismWitness {
        map: named,
        violations,
    })
}

/// Pulls `model`'s valuation back along `map` and checks that `f` has the
/// same truth value at every source world as at its image.
pub fn pullback_truth_test(
    source: &KripkeFrame,
    model: &KripkeModel,
    map: &[usize],
    f: &Formula,
) -> Result<bool, KripkeError> {
    let witness = check_pmorphism(source, &model.frame, map)?;
    if !witness.is_pmorphism() {
        return Err(KripkeError::UnverifiedMorphism(witness.violations.len()));
    }
    let pulled = pullback_valuation(&model.valuation, map, source.size());
    let src_model = KripkeModel::new(source.clone(), pulled);
    for (w, &t) in map.iter().enumerate() {
        if src_model.eval_at(w, f)? != model.eval_at(t, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn pullback_valuation(val: &Valuation, map: &[usize], source_size: usize) -> Valuation {
    val.iter()
        .map(|(v, set)| {
            let mut pulled = PointSet::with_capacity(source_size);
            for (w, &t) in map.iter().enumerate() {
                if set.contains(t) {
                    pulled.insert(w);
                }
            }
            (v.clone(), pulled)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Isomorphism

/// Finds a bijection `f -> g` preserving and reflecting every relation and
/// mapping root to root when both are set.
pub fn find_isomorphism(f: &KripkeFrame, g: &KripkeFrame) -> Option<Vec<usize>> {
    if f.size() != g.size() || f.modality_count() != g.modality_count() {
        return None;
    }
    let n = f.size();
    let m = f.modality_count();
    let degree_sig = |fr: &KripkeFrame, w: usize| -> Vec<(usize, usize)> {
        (1..=m)
            .map(|i| {
                let indeg = fr.edges(i).filter(|&(_, b)| b == w).count();
                (fr.successors(i, w).len(), indeg)
            })
            .collect()
    };
    let sig_f: Vec<_> = (0..n).map(|w| degree_sig(f, w)).collect();
    let sig_g: Vec<_> = (0..n).map(|w| degree_sig(g, w)).collect();

    // BFS order over the undirected union graph keeps each new world adjacent
    // to an already-mapped one when possible.
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let starts: Vec<usize> = f.root.into_iter().chain(0..n).collect();
    for s in starts {
        if placed[s] {
            continue;
        }
        placed[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for v in 0..n {
                if !placed[v] && (1..=m).any(|i| f.has_edge(i, u, v) || f.has_edge(i, v, u)) {
                    placed[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if let (Some(rf), Some(rg)) = (f.root, g.root) {
        if sig_f[rf] != sig_g[rg] {
            return None;
        }
        map[rf] = rg;
        used[rg] = true;
    }

    fn consistent(f: &KripkeFrame, g: &KripkeFrame, map: &[usize], u: usize, t: usize) -> bool {
        (1..=f.modality_count()).all(|i| {
            (0..f.size()).filter(|&v| map[v] != usize::MAX).all(|v| {
                f.has_edge(i, u, v) == g.has_edge(i, t, map[v])
                    && f.has_edge(i, v, u) == g.has_edge(i, map[v], t)
            }) && f.has_edge(i, u, u) == g.has_edge(i, t, t)
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        k: usize,
        order: &[usize],
        f: &KripkeFrame,
        g: &KripkeFrame,
        sig_f: &[Vec<(usize, usize)>],
        sig_g: &[Vec<(usize, usize)>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let Some(&u) = order.get(k) else {
            return true;
        };
        if map[u] != usize::MAX {
            return consistent(f, g, map, u, map[u]) && search(k + 1, order, f, g, sig_f, sig_g, map, used);
        }
        for t in 0..g.size() {
            if used[t] || sig_f[u] != sig_g[t] || !consistent(f, g, map, u, t) {
                continue;
            }
            map[u] = t;
            used[t] = true;
            if search(k + 1, order, f, g, sig_f, sig_g, map, used) {
                return true;
            }
            map[u] = usize::MAX;
            used[t] = false;
        }
        false
    }

    if search(0, &order, f, g, &sig_f, &sig_g, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn frame(worlds: &[&str], rels: &[&[(&str, &str)]], root: Option<&str>) -> KripkeFrame {
        let worlds: Vec<String> = worlds.iter().map(|s| s.to_string()).collect();
        let rels: Vec<Vec<(String, String)>> = rels
            .iter()
            .map(|r| r.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect())
            .collect();
        KripkeFrame::from_names(&worlds, &rels, root).unwrap()
    }

    fn model(f: KripkeFrame, val: &[(&str, &[&str])]) -> KripkeModel {
        let val = val
            .iter()
            .map(|(v, ws)| (v.to_string(), ws.iter().map(|s| s.to_string()).collect()))
            .collect();
        KripkeModel::from_names(f, &val).unwrap()
    }

    #[test]
    fn eval_examples() {
        let m = model(frame(&["w"], &[&[]], None), &[]);
        assert!(m.eval("w", &parse("[]1 false", 1).unwrap()).unwrap());

        let m = model(frame(&["w"], &[&[("w", "w")]], None), &[("p", &[])]);
        assert!(!m.eval("w", &parse("<>1 p", 1).unwrap()).unwrap());

        let m = model(frame(&["u", "v"], &[&[("u", "v")]], None), &[("p", &["v"])]);
        let bp = parse("[]1 p", 1).unwrap();
        assert!(m.eval("u", &bp).unwrap());
        assert!(m.eval("v", &bp).unwrap());
    }

    #[test]
    fn eval_errors() {
        let mut m = model(frame(&["w"], &[&[]], None), &[]);
        assert_eq!(
            m.eval("x", &Formula::Bottom),
            Err(KripkeError::UnknownWorld("x".into()))
        );
        assert!(matches!(
            m.eval("w", &parse("[]2 false", 2).unwrap()),
            Err(KripkeError::ModalityOutOfRange { used: 2, available: 1 })
        ));
        assert!(!m.eval("w", &Formula::var("q")).unwrap());
        m.strict_variables = true;
        assert_eq!(
            m.eval("w", &Formula::var("q")),
            Err(KripkeError::UnknownVariable("q".into()))
        );
    }

    #[test]
    fn validity_examples() {
        let chain = frame(&["u", "v"], &[&[("u", "v")]], None);
        assert!(frame_valid(&chain, &Formula::top()).unwrap().is_valid());
        let v = frame_valid(&chain, &parse("<>1 true", 1).unwrap()).unwrap();
        assert_eq!(v.countermodel().unwrap().world, "v");

        let f = frame(&["u", "v", "w"], &[&[("v", "w")], &[("u", "v")]], None);
        let v = frame_valid(&f, &parse("[]1 false -> []2 []1 false", 2).unwrap()).unwrap();
        assert_eq!(v.countermodel().unwrap().world, "u");
    }

    #[test]
    fn validity_cap() {
        let f = KripkeFrame::new((0..13).map(|i| format!("w{i}")), 1).unwrap();
        assert!(matches!(
            frame_valid(&f, &parse("p -> q", 1).unwrap()),
            Err(KripkeError::Validity(ValidityError::CapExceeded { product: 26, .. }))
        ));
    }

    #[test]
    fn product_examples() {
        let single = frame(&["s"], &[&[]], None);
        let p = product(&single, &single).unwrap();
        assert_eq!(p.size(), 1);
        assert_eq!(p.edge_count(), 0);

        let ab = frame(&["a", "b"], &[&[("a", "b")]], None);
        let cd = frame(&["c", "d"], &[&[("c", "d")]], None);
        let p = product(&ab, &cd).unwrap();
        assert_eq!(p.worlds(), &["a,c", "a,d", "b,c", "b,d"]);
        let pairs = |i| {
            p.named_edges(i)
                .into_iter()
                .map(|(a, b)| format!("{a}>{b}"))
                .collect::<Vec<_>>()
        };
        assert_eq!(pairs(1), vec!["a,c>b,c", "a,d>b,d"]);
        assert_eq!(pairs(2), vec!["a,c>a,d", "b,c>b,d"]);

        let bad = frame(&["x,y"], &[&[]], None);
        assert!(matches!(product(&bad, &single), Err(KripkeError::ReservedSeparator { .. })));
    }

    #[test]
    fn rooted_subframe_examples() {
        let f = frame(&["u", "v"], &[&[]], None);
        assert_eq!(rooted_subframe(&f, 0).worlds(), &["u"]);
        let chain = frame(&["a", "b", "c"], &[&[("a", "b"), ("b", "c")]], None);
        let sub = rooted_subframe(&chain, 1);
        assert_eq!(sub.worlds(), &["b", "c"]);
        assert_eq!(sub.root(), Some(0));
        let diamond = frame(
            &["a", "b", "c", "d"],
            &[&[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]],
            None,
        );
        assert_eq!(rooted_subframe(&diamond, 0).size(), 4);
    }

    #[test]
    fn unravel_examples() {
        let refl = frame(&["a"], &[&[("a", "a")]], Some("a"));
        let (t, proj) = unravel(&refl, 0).unwrap();
        assert_eq!(t.size(), 1);
        assert_eq!(proj, vec![0]);
        let (t, _) = unravel(&refl, 3).unwrap();
        assert_eq!(t.worlds(), &["a", "a/1/a", "a/1/a/1/a", "a/1/a/1/a/1/a"]);
        assert_eq!(t.edge_count(), 3);
        assert!(unravel(&frame(&["a"], &[&[]], None), 2).is_err());
    }

    #[test]
    fn thicken_examples() {
        let chain = frame(&["a", "b"], &[&[("a", "b")]], Some("a"));
        let (t, proj) = thicken(&chain, 2).unwrap();
        assert_eq!(t.worlds(), &["a,0", "b,0", "b,1"]);
        assert_eq!(t.successors(1, 0), &[1, 2]);
        assert_eq!(proj, vec![0, 1, 1]);
        let (t1, _) = thicken(&chain, 1).unwrap();
        assert!(find_isomorphism(&t1, &chain).is_some());
    }

    #[test]
    fn pmorphism_examples() {
        let chain = frame(&["a", "b", "c"], &[&[("a", "b"), ("b", "c")]], None);
        let id = check_pmorphism(&chain, &chain, &[0, 1, 2]).unwrap();
        assert!(id.is_pmorphism());

        let point = frame(&["x"], &[&[]], None);
        let w = check_pmorphism(&chain, &point, &[0, 0, 0]).unwrap();
        assert_eq!(
            w.violations,
            vec![
                Violation::Monotonicity { modality: 1, from: "a".into(), to: "b".into() },
                Violation::Monotonicity { modality: 1, from: "b".into(), to: "c".into() },
            ]
        );

        let two = frame(&["a", "b"], &[&[("a", "b")]], None);
        let refl = frame(&["x"], &[&[("x", "x")]], None);
        let w = check_pmorphism(&two, &refl, &[0, 0]).unwrap();
        // b has no successor but x does: lifting fails at b.
        assert_eq!(
            w.violations,
            vec![Violation::Lifting { modality: 1, world: "b".into(), target_successor: "x".into() }]
        );

        let mut map = BTreeMap::new();
        map.insert("a".to_string(), "x".to_string());
        assert_eq!(
            check_pmorphism_named(&two, &refl, &map),
            Err(KripkeError::MapNotTotal("b".into()))
        );
    }

    #[test]
    fn pullback_requires_verified_map() {
        let chain = frame(&["a", "b"], &[&[("a", "b")]], None);
        let point = model(frame(&["x"], &[&[]], None), &[]);
        assert!(matches!(
            pullback_truth_test(&chain, &point, &[0, 0], &Formula::top()),
            Err(KripkeError::UnverifiedMorphism(1))
        ));
    }

    #[test]
    fn isomorphism_detects_shape() {
        let a = frame(&["a", "b", "c"], &[&[("a", "b"), ("b", "c")]], None);
        let b = frame(&["x", "y", "z"], &[&[("y", "x"), ("z", "y")]], None);
        let c = frame(&["x", "y", "z"], &[&[("x", "y"), ("x", "z")]], None);
        assert_eq!(find_isomorphism(&a, &b), Some(vec![2, 1, 0]));
        assert_eq!(find_isomorphism(&a, &c), None);
    }
}
