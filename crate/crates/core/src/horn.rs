//! Universal strict Horn rules over relation symbols `R1..Rn` and the
//! least-fixpoint closure of a frame under them.

use std::collections::{BTreeMap, BTreeSet};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::Formula;
use crate::kripke::KripkeFrame;

/// Largest number of added pairs [`minimality_check`] will enumerate subsets of.
pub const MINIMALITY_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HornError {
    #[error("bad relation symbol '{0}', expected R1, R2, ...")]
    BadRelation(String),
    #[error("variable '{0}' is not declared by the rule")]
    UnknownVariable(String),
    #[error("rule uses R{used} but the frame has {available} relations")]
    RelationOutOfRange { used: usize, available: usize },
    #[error("{added} added pairs exceed the subset-enumeration cap of {cap}")]
    CapExceeded { added: usize, cap: usize },
    #[error("bad pretransitivity spec '{0}', expected MODALITY:N")]
    BadPretrans(String),
}

/// `["R1", "x", "y"]` in rule files.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom(pub String, pub String, pub String);

impl Atom {
    pub fn new(rel: usize, left: &str, right: &str) -> Self {
        Atom(format!("R{rel}"), left.to_string(), right.to_string())
    }

    pub fn relation(&self) -> Result<usize, HornError> {
        self.0
            .strip_prefix('R')
            .and_then(|k| k.parse::<usize>().ok())
            .filter(|&k| k >= 1)
            .ok_or_else(|| HornError::BadRelation(self.0.clone()))
    }
}

/// A body conjunct: an atom, or a disjunction of conjunctions of atoms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BodyTerm {
    Atom(Atom),
    Or { or: Vec<Vec<Atom>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HornRule {
    pub vars: Vec<String>,
    pub body: Vec<BodyTerm>,
    pub head: Atom,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleFile {
    pub rules: Vec<HornRule>,
}

// Rule in disjunction-free form over variable indices; relations 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Conjunctive {
    nvars: usize,
    body: Vec<(usize, usize, usize)>,
    head: (usize, usize, usize),
}

impl HornRule {
    fn var_index(&self, v: &str) -> Result<usize, HornError> {
        self.vars
            .iter()
            .position(|x| x == v)
            .ok_or_else(|| HornError::UnknownVariable(v.to_string()))
    }

    fn resolve(&self, a: &Atom) -> Result<(usize, usize, usize), HornError> {
        Ok((a.relation()? - 1, self.var_index(&a.1)?, self.var_index(&a.2)?))
    }

    /// Highest relation index mentioned.
    pub fn max_relation(&self) -> Result<usize, HornError> {
        let mut best = self.head.relation()?;
        for term in &self.body {
            match term {
                BodyTerm::Atom(a) => best = best.max(a.relation()?),
                BodyTerm::Or { or } => {
                    for a in or.iter().flatten() {
                        best = best.max(a.relation()?);
                    }
                }
            }
        }
        Ok(best)
    }

    /// Expands disjunctive body terms into a list of conjunctive rules.
    fn normalize(&self) -> Result<Vec<Conjunctive>, HornError> {
        let head = self.resolve(&self.head)?;
        let mut bodies: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new()];
        for term in &self.body {
            match term {
                BodyTerm::Atom(a) => {
                    let r = self.resolve(a)?;
                    for b in &mut bodies {
                        b.push(r);
                    }
                }
                BodyTerm::Or { or } => {
                    let groups: Vec<Vec<_>> = or
                        .iter()
                        .map(|g| g.iter().map(|a| self.resolve(a)).collect::<Result<_, _>>())
                        .collect::<Result<_, _>>()?;
                    bodies = bodies
                        .iter()
                        .flat_map(|b| {
                            groups.iter().map(move |g| {
                                let mut nb = b.clone();
                                nb.extend(g.iter().copied());
                                nb
                            })
                        })
                        .collect();
                }
            }
        }
        Ok(bodies
            .into_iter()
            .map(|body| Conjunctive {
                nvars: self.vars.len(),
                body,
                head,
            })
            .collect())
    }
}

/// `R_m^n ⊆ R_m`; `n = 0` gives reflexivity, `n = 1` the trivial rule.
pub fn rule_from_pretransitivity(modality: usize, n: usize) -> HornRule {
    if n == 0 {
        return HornRule {
            vars: vec!["x".into()],
            body: vec![],
            head: Atom::new(modality, "x", "x"),
        };
    }
    let mut chain = vec!["x".to_string()];
    chain.extend((1..n).map(|i| format!("z{i}")));
    chain.push("y".into());
    let body = chain
        .windows(2)
        .map(|w| BodyTerm::Atom(Atom::new(modality, &w[0], &w[1])))
        .collect();
    HornRule {
        vars: chain,
        body,
        head: Atom::new(modality, "x", "y"),
    }
}

/// Parses `MODALITY:N`.
pub fn parse_pretrans(spec: &str) -> Result<(usize, usize), HornError> {
    let bad = || HornError::BadPretrans(spec.to_string());
    let (m, n) = spec.split_once(':').ok_or_else(bad)?;
    let m: usize = m.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if m == 0 {
        return Err(bad());
    }
    Ok((m, n))
}

/// Axioms `[]p -> []^n p` per modality together with closed axioms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HtcAxiomSet {
    pub exponents: BTreeMap<usize, BTreeSet<usize>>,
    pub closed_axioms: Vec<Formula>,
}

impl HtcAxiomSet {
    /// Frame conditions of the pretransitivity part.
    pub fn rules(&self) -> Vec<HornRule> {
        self.exponents
            .iter()
            .flat_map(|(&m, ns)| ns.iter().map(move |&n| rule_from_pretransitivity(m, n)))
            .collect()
    }

    /// The axiom formulas themselves.
    pub fn formulas(&self) -> Vec<Formula> {
        let p = Formula::var("p");
        let mut out: Vec<Formula> = self
            .exponents
            .iter()
            .flat_map(|(&m, ns)| {
                let p = p.clone();
                ns.iter()
                    .map(move |&n| Formula::implies(Formula::boxed(m, p.clone()), Formula::boxes(m, n, p.clone())))
            })
            .collect();
        out.extend(self.closed_axioms.iter().cloned());
        out
    }
}

fn prepare(frame: &KripkeFrame, rules: &[HornRule]) -> Result<Vec<Conjunctive>, HornError> {
    let mut out = Vec::new();
    for rule in rules {
        let used = rule.max_relation()?;
        if used > frame.modality_count() {
            return Err(HornError::RelationOutOfRange {
                used,
                available: frame.modality_count(),
            });
        }
        out.extend(rule.normalize()?);
    }
    Ok(out)
}

struct Relations {
    n: usize,
    succ: Vec<Vec<FixedBitSet>>,
    pred: Vec<Vec<FixedBitSet>>,
}

impl Relations {
    fn from_frame(frame: &KripkeFrame) -> Self {
        let n = frame.size();
        let m = frame.modality_count();
        let mut rel = Relations {
            n,
            succ: vec![vec![FixedBitSet::with_capacity(n); n]; m],
            pred: vec![vec![FixedBitSet::with_capacity(n); n]; m],
        };
        for i in 0..m {
            for (a, b) in frame.edges(i + 1) {
                rel.insert(i, a, b);
            }
        }
        rel
    }

    fn contains(&self, r: usize, a: usize, b: usize) -> bool {
        self.succ[r][a].contains(b)
    }

    fn insert(&mut self, r: usize, a: usize, b: usize) -> bool {
        if self.succ[r][a].put(b) {
            return false;
        }
        self.pred[r][b].insert(a);
        true
    }
}

/// Enumerates every extension of `binding` satisfying `atoms` in `rel`.
fn join(
    rel: &Relations,
    atoms: &[(usize, usize, usize)],
    binding: &mut Vec<Option<usize>>,
    emit: &mut dyn FnMut(&[Option<usize>]),
) {
    let Some((&(r, s, t), rest)) = atoms.split_first() else {
        emit(binding);
        return;
    };
    match (binding[s], binding[t]) {
        (Some(a), Some(b)) => {
            if rel.contains(r, a, b) {
                join(rel, rest, binding, emit);
            }
        }
        (Some(a), None) => {
            for b in rel.succ[r][a].ones().collect::<Vec<_>>() {
                binding[t] = Some(b);
                join(rel, rest, binding, emit);
            }
            binding[t] = None;
        }
        (None, Some(b)) => {
            for a in rel.pred[r][b].ones().collect::<Vec<_>>() {
                binding[s] = Some(a);
                join(rel, rest, binding, emit);
            }
            binding[s] = None;
        }
        (None, None) => {
            for a in 0..rel.n {
                for b in rel.succ[r][a].ones().collect::<Vec<_>>() {
                    if s == t && a != b {
                        continue;
                    }
                    binding[s] = Some(a);
                    binding[t] = Some(b);
                    join(rel, rest, binding, emit);
                }
            }
            binding[s] = None;
            binding[t] = None;
        }
    }
}

/// Head pairs for a complete body match; unbound head variables range over
/// every world.
fn heads(rule: &Conjunctive, binding: &[Option<usize>], n: usize, out: &mut Vec<(usize, usize, usize)>) {
    let (r, u, v) = rule.head;
    let choices = |x: Option<usize>| -> Vec<usize> { x.map_or_else(|| (0..n).collect(), |w| vec![w]) };
    if u == v {
        for a in choices(binding[u]) {
            out.push((r, a, a));
        }
        return;
    }
    for a in choices(binding[u]) {
        for b in choices(binding[v]) {
            out.push((r, a, b));
        }
    }
}

/// Least extension of `frame`'s relations satisfying `rules`, computed by
/// semi-naive saturation: a rule is re-matched only with at least one body
/// atom bound to a pair added in the previous round.
pub fn closure(frame: &KripkeFrame, rules: &[HornRule]) -> Result<KripkeFrame, HornError> {
    let rules = prepare(frame, rules)?;
    let mut rel = Relations::from_frame(frame);
    let n = frame.size();

    let mut delta: Vec<(usize, usize, usize)> = Vec::new();
    for r in 0..frame.modality_count() {
        delta.extend(frame.edges(r + 1).map(|(a, b)| (r, a, b)));
    }
    let mut derived = Vec::new();
    for rule in rules.iter().filter(|r| r.body.is_empty()) {
        heads(rule, &vec![None; rule.nvars], n, &mut derived);
    }
    for (r, a, b) in derived.drain(..) {
        if rel.insert(r, a, b) {
            delta.push((r, a, b));
        }
    }

    while !delta.is_empty() {
        let mut next = Vec::new();
        for rule in &rules {
            for (pos, &(r, s, t)) in rule.body.iter().enumerate() {
                let rest: Vec<_> = rule
                    .body
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != pos)
                    .map(|(_, a)| *a)
                    .collect();
                for &(dr, a, b) in &delta {
                    if dr != r || (s == t && a != b) {
                        continue;
                    }
                    let mut binding = vec![None; rule.nvars];
                    binding[s] = Some(a);
                    binding[t] = Some(b);
                    join(&rel, &rest, &mut binding, &mut |bnd| heads(rule, bnd, n, &mut derived));
                }
                for (hr, ha, hb) in derived.drain(..) {
                    if rel.insert(hr, ha, hb) {
                        next.push((hr, ha, hb));
                    }
                }
            }
        }
        delta = next;
    }

    let mut out = frame.clone();
    for r in 0..frame.modality_count() {
        for a in 0..n {
            for b in rel.succ[r][a].ones() {
                out.add_edge(r + 1, a, b);
            }
        }
    }
    Ok(out)
}

/// Pairs of `after` missing from `before`, as `(modality, from, to)`.
pub fn added_pairs(before: &KripkeFrame, after: &KripkeFrame) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=after.modality_count() {
        for (a, b) in after.edges(i) {
            if i > before.modality_count() || !before.has_edge(i, a, b) {
                out.push((i, a, b));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleViolation {
    /// Index of the rule in the input list.
    pub rule: usize,
    pub assignment: BTreeMap<String, String>,
}

fn atom_holds(frame: &KripkeFrame, rule: &HornRule, a: &Atom, asg: &[usize]) -> Result<bool, HornError> {
    let (r, s, t) = rule.resolve(a)?;
    Ok(frame.has_edge(r + 1, asg[s], asg[t]))
}

/// Every assignment of worlds to a rule's variables that satisfies its body
/// but not its head.
pub fn check_rules(frame: &KripkeFrame, rules: &[HornRule]) -> Result<Vec<RuleViolation>, HornError> {
    prepare(frame, rules)?;
    let n = frame.size();
    let mut out = Vec::new();
    for (k, rule) in rules.iter().enumerate() {
        let nv = rule.vars.len();
        let mut asg = vec![0usize; nv];
        loop {
            let mut body = true;
            for term in &rule.body {
                let ok = match term {
                    BodyTerm::Atom(a) => atom_holds(frame, rule, a, &asg)?,
                    BodyTerm::Or { or } => {
                        let mut any = false;
                        for group in or {
                            let mut all = true;
                            for a in group {
                                all &= atom_holds(frame, rule, a, &asg)?;
                            }
                            any |= all;
                        }
                        any
                    }
                };
                if !ok {
                    body = false;
                    break;
                }
            }
            if body && !atom_holds(frame, rule, &rule.head, &asg)? {
                out.push(RuleViolation {
                    rule: k,
                    assignment: rule
                        .vars
                        .iter()
                        .zip(&asg)
                        .map(|(v, &w)| (v.clone(), frame.world_name(w).to_string()))
                        .collect(),
                });
            }
            // odometer over n^nv assignments
            let mut i = 0;
            while i < nv {
                asg[i] += 1;
                if asg[i] < n {
                    break;
                }
                asg[i] = 0;
                i += 1;
            }
            if i == nv {
                break;
            }
        }
    }
    Ok(out)
}

/// `closed` contains `frame`, satisfies `rules`, and no removal of a nonempty
/// subset of the added pairs still satisfies them.
pub fn minimality_check(frame: &KripkeFrame, rules: &[HornRule], closed: &KripkeFrame) -> Result<bool, HornError> {
    if closed.size() != frame.size() || closed.modality_count() != frame.modality_count() {
        return Ok(false);
    }
    if !added_pairs(closed, frame).is_empty() || !check_rules(closed, rules)?.is_empty() {
        return Ok(false);
    }
    let added = added_pairs(frame, closed);
    if added.len() > MINIMALITY_CAP {
        return Err(HornError::CapExceeded {
            added: added.len(),
            cap: MINIMALITY_CAP,
        });
    }
    for mask in 1u32..(1 << added.len()) {
        let mut candidate = closed.clone();
        for (j, &(i, a, b)) in added.iter().enumerate() {
            if mask >> j & 1 == 1 {
                candidate.remove_edge(i, a, b);
            }
        }
        if check_rules(&candidate, rules)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> KripkeFrame {
        let mut f = KripkeFrame::new((1..=n).map(|i| i.to_string()), 1).unwrap();
        for i in 0..n - 1 {
            f.add_edge(1, i, i + 1);
        }
        f
    }

    fn named_added(before: &KripkeFrame, after: &KripkeFrame) -> Vec<(String, String)> {
        added_pairs(before, after)
            .into_iter()
            .map(|(_, a, b)| (after.world_name(a).to_string(), after.world_name(b).to_string()))
            .collect()
    }

    #[test]
    fn pretransitivity_templates() {
        let t = rule_from_pretransitivity(1, 2);
        assert_eq!(t.vars, vec!["x", "z1", "y"]);
        assert_eq!(t.body.len(), 2);
        let r = rule_from_pretransitivity(2, 0);
        assert!(r.body.is_empty());
        assert_eq!(r.head, Atom::new(2, "x", "x"));
        assert_eq!(rule_from_pretransitivity(1, 3).body.len(), 3);
        assert_eq!(parse_pretrans("1:2"), Ok((1, 2)));
        assert!(parse_pretrans("0:2").is_err());
    }

    #[test]
    fn closure_examples() {
        let c3 = chain(3);
        let out = closure(&c3, &[rule_from_pretransitivity(1, 2)]).unwrap();
        assert_eq!(named_added(&c3, &out), vec![("1".into(), "3".into())]);

        let c4 = chain(4);
        let out = closure(&c4, &[rule_from_pretransitivity(1, 3)]).unwrap();
        assert_eq!(named_added(&c4, &out), vec![("1".into(), "4".into())]);

        assert_eq!(closure(&c4, &[]).unwrap(), c4);

        let refl = closure(&chain(2), &[rule_from_pretransitivity(1, 0)]).unwrap();
        assert!(refl.has_edge(1, 0, 0) && refl.has_edge(1, 1, 1));
    }

    #[test]
    fn check_rules_examples() {
        let c3 = chain(3);
        let trans = [rule_from_pretransitivity(1, 2)];
        let v = check_rules(&c3, &trans).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].assignment["x"], "1");
        assert_eq!(v[0].assignment["z1"], "2");
        assert_eq!(v[0].assignment["y"], "3");
        let closed = closure(&c3, &trans).unwrap();
        assert!(check_rules(&closed, &trans).unwrap().is_empty());
    }

    #[test]
    fn minimality_examples() {
        let trans = [rule_from_pretransitivity(1, 2)];
        let c3 = chain(3);
        let closed = closure(&c3, &trans).unwrap();
        assert!(minimality_check(&c3, &trans, &closed).unwrap());
        let mut spurious = closed.clone();
        spurious.add_edge(1, 2, 0);
        spurious.add_edge(1, 2, 1);
        spurious.add_edge(1, 2, 2);
        spurious.add_edge(1, 0, 0);
        spurious.add_edge(1, 1, 1);
        spurious.add_edge(1, 1, 0);
        // Now the total relation: transitive, but not the least extension.
        assert!(check_rules(&spurious, &trans).unwrap().is_empty());
        assert!(!minimality_check(&c3, &trans, &spurious).unwrap());
    }

    #[test]
    fn disjunctive_bodies_normalize() {
        let rule: HornRule = serde_json::from_str(
            r#"{"vars":["x","y"],"body":[{"or":[[["R1","x","y"]],[["R2","x","y"]]]}],"head":["R1","y","x"]}"#,
        )
        .unwrap();
        assert_eq!(rule.normalize().unwrap().len(), 2);
        let mut f = KripkeFrame::new(["a", "b"], 2).unwrap();
        f.add_edge(2, 0, 1);
        let out = closure(&f, &[rule.clone()]).unwrap();
        assert!(out.has_edge(1, 1, 0));
        assert!(check_rules(&out, &[rule]).unwrap().is_empty());
    }

    #[test]
    fn errors() {
        let bad = HornRule {
            vars: vec!["x".into()],
            body: vec![],
            head: Atom::new(2, "x", "x"),
        };
        assert!(matches!(
            closure(&chain(2), &[bad]),
            Err(HornError::RelationOutOfRange { used: 2, available: 1 })
        ));
        let bad = HornRule {
            vars: vec!["x".into()],
            body: vec![],
            head: Atom::new(1, "x", "q"),
        };
        assert_eq!(closure(&chain(2), &[bad]), Err(HornError::UnknownVariable("q".into())));
    }
}
