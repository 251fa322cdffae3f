//! Finite normal neighborhood frames, stored as filter bases.
//!
//! Every finite normal frame has a least neighborhood at each point (the
//! intersection of its finitely many base sets), so it validates exactly
//! the formulas of the Kripke frame with those least neighborhoods as
//! successor sets. Genuinely non-Kripke behaviour needs the dense frames of
//! [`crate::dense`].

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::formula::Formula;
use crate::kripke::{pair_name, resolve_map, KripkeError, KripkeFrame, MorphismWitness, Violation, PAIR_SEP};
use crate::semantics::{self, FrameSemantics, PointSet, Validity, ValidityError, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NbhdViolation {
    /// Two base sets whose intersection contains no base set.
    BaseLaw {
        modality: usize,
        point: String,
        first: Vec<String>,
        second: Vec<String>,
    },
    UnknownPoint { modality: usize, point: String, name: String },
    EmptyFamily { modality: usize, point: String },
    MissingPoint { modality: usize, point: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NbhdError {
    #[error("frame has no points")]
    Empty,
    #[error("duplicate point '{0}'")]
    DuplicatePoint(String),
    #[error("unknown point '{0}'")]
    UnknownPoint(String),
    #[error("invalid frame: {} violation(s), first: {:?}", .0.len(), .0.first())]
    Invalid(Vec<NbhdViolation>),
    #[error("operation needs a unimodal frame, got {0} modalities")]
    NotUnimodal(usize),
    #[error("not a topology: {0}")]
    NotTopology(String),
    #[error(transparent)]
    Kripke(#[from] KripkeError),
    #[error(transparent)]
    Validity(#[from] ValidityError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodFrame {
    points: Vec<String>,
    index: HashMap<String, usize>,
    // bases[i][x]: base family of modality i + 1 at x
    bases: Vec<Vec<Vec<PointSet>>>,
}

fn index_points(points: &[String]) -> Result<HashMap<String, usize>, NbhdError> {
    if points.is_empty() {
        return Err(NbhdError::Empty);
    }
    let mut index = HashMap::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if index.insert(p.clone(), i).is_some() {
            return Err(NbhdError::DuplicatePoint(p.clone()));
        }
    }
    Ok(index)
}

fn names_of(points: &[String], set: &PointSet) -> Vec<String> {
    set.ones().map(|i| points[i].clone()).collect()
}

impl NeighborhoodFrame {
    /// Builds a frame from per-modality maps `point -> base sets`, failing
    /// with every violation found.
    pub fn from_names(
        points: &[String],
        bases: &[BTreeMap<String, Vec<Vec<String>>>],
    ) -> Result<Self, NbhdError> {
        let index = index_points(points)?;
        let n = points.len();
        let mut violations = Vec::new();
        let mut out = vec![vec![Vec::new(); n]; bases.len()];
        for (k, by_point) in bases.iter().enumerate() {
            let modality = k + 1;
            for name in by_point.keys() {
                if !index.contains_key(name) {
                    violations.push(NbhdViolation::UnknownPoint {
                        modality,
                        point: name.clone(),
                        name: name.clone(),
                    });
                }
            }
            for (x, point) in points.iter().enumerate() {
                let Some(family) = by_point.get(point) else {
                    violations.push(NbhdViolation::MissingPoint {
                        modality,
                        point: point.clone(),
                    });
                    continue;
                };
                if family.is_empty() {
                    violations.push(NbhdViolation::EmptyFamily {
                        modality,
                        point: point.clone(),
                    });
                }
                for set in family {
                    let mut bits = PointSet::with_capacity(n);
                    for member in set {
                        match index.get(member) {
                            Some(&i) => bits.insert(i),
                            None => violations.push(NbhdViolation::UnknownPoint {
                                modality,
                                point: point.clone(),
                                name: member.clone(),
                            }),
                        }
                    }
                    out[k][x].push(bits);
                }
            }
        }
        let frame = NeighborhoodFrame {
            points: points.to_vec(),
            index,
            bases: out,
        };
        violations.extend(frame.validate());
        if violations.is_empty() {
            Ok(frame)
        } else {
            Err(NbhdError::Invalid(violations))
        }
    }

    /// Builds a frame from index-level bases and checks the base law.
    pub fn from_sets(points: Vec<String>, bases: Vec<Vec<Vec<PointSet>>>) -> Result<Self, NbhdError> {
        let index = index_points(&points)?;
        let mut violations = Vec::new();
        for (k, per_point) in bases.iter().enumerate() {
            for x in 0..points.len() {
                if per_point.get(x).map_or(true, |f| f.is_empty()) {
                    violations.push(NbhdViolation::EmptyFamily {
                        modality: k + 1,
                        point: points[x].clone(),
                    });
                }
            }
        }
        let mut bases = bases;
        for per_point in &mut bases {
            per_point.resize(points.len(), Vec::new());
            for family in per_point.iter_mut() {
                for set in family.iter_mut() {
                    set.grow(points.len());
                }
            }
        }
        let frame = NeighborhoodFrame { points, index, bases };
        violations.extend(frame.validate());
        if violations.is_empty() {
            Ok(frame)
        } else {
            Err(NbhdError::Invalid(violations))
        }
    }

    /// Every pair of base sets at one point whose intersection contains no
    /// base set.
    pub fn validate(&self) -> Vec<NbhdViolation> {
        let mut out = Vec::new();
        for (k, per_point) in self.bases.iter().enumerate() {
            for (x, family) in per_point.iter().enumerate() {
                for (a, b1) in family.iter().enumerate() {
                    for b2 in &family[a + 1..] {
                        let mut meet = b1.clone();
                        meet.intersect_with(b2);
                        if !family.iter().any(|b3| b3.is_subset(&meet)) {
                            out.push(NbhdViolation::BaseLaw {
                                modality: k + 1,
                                point: self.points[x].clone(),
                                first: names_of(&self.points, b1),
                                second: names_of(&self.points, b2),
                            });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn modality_count(&self) -> usize {
        self.bases.len()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize, NbhdError> {
        self.index_of(name).ok_or_else(|| NbhdError::UnknownPoint(name.to_string()))
    }

    pub fn base(&self, modality: usize, x: usize) -> &[PointSet] {
        &self.bases[modality - 1][x]
    }

    pub fn named_base(&self, modality: usize, x: usize) -> Vec<Vec<String>> {
        self.base(modality, x).iter().map(|s| names_of(&self.points, s)).collect()
    }

    /// `set` belongs to the filter generated by the base at `(modality, x)`.
    pub fn membership(&self, modality: usize, x: usize, set: &PointSet) -> bool {
        self.base(modality, x).iter().any(|b| b.is_subset(set))
    }

    pub fn set_from_names(&self, names: &[&str]) -> Result<PointSet, NbhdError> {
        let mut set = PointSet::with_capacity(self.size());
        for n in names {
            set.insert(self.require(n)?);
        }
        Ok(set)
    }
}

impl FrameSemantics for NeighborhoodFrame {
    fn size(&self) -> usize {
        self.points.len()
    }

    fn modality_count(&self) -> usize {
        self.bases.len()
    }

    fn point_name(&self, idx: usize) -> &str {
        &self.points[idx]
    }

    fn box_image(&self, modality: usize, set: &PointSet) -> PointSet {
        let mut out = PointSet::with_capacity(self.size());
        for (x, family) in self.bases[modality - 1].iter().enumerate() {
            if family.iter().any(|b| b.is_subset(set)) {
                out.insert(x);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodModel {
    pub frame: NeighborhoodFrame,
    pub valuation: Valuation,
}

impl NeighborhoodModel {
    pub fn new(frame: NeighborhoodFrame, valuation: Valuation) -> Self {
        NeighborhoodModel { frame, valuation }
    }

    pub fn from_names(
        frame: NeighborhoodFrame,
        valuation: &BTreeMap<String, Vec<String>>,
    ) -> Result<Self, NbhdError> {
        let mut val = Valuation::new();
        for (var, points) in valuation {
            let names: Vec<&str> = points.iter().map(String::as_str).collect();
            val.insert(var.clone(), frame.set_from_names(&names)?);
        }
        Ok(NeighborhoodModel::new(frame, val))
    }

    pub fn extension(&self, f: &Formula) -> Result<PointSet, NbhdError> {
        semantics::check_modalities(&self.frame, f)?;
        Ok(semantics::extension(&self.frame, f, &self.valuation))
    }

    /// Truth at point index `x`.
    pub fn eval_n(&self, x: usize, f: &Formula) -> Result<bool, NbhdError> {
        if x >= self.frame.size() {
            return Err(NbhdError::UnknownPoint(format!("#{x}")));
        }
        Ok(self.extension(f)?.contains(x))
    }

    pub fn eval_named(&self, point: &str, f: &Formula) -> Result<bool, NbhdError> {
        self.eval_n(self.frame.require(point)?, f)
    }
}

pub fn frame_valid_n(frame: &NeighborhoodFrame, f: &Formula) -> Result<Validity, NbhdError> {
    Ok(semantics::frame_valid(frame, f, crate::valuation_cap())?)
}

/// The n-frame whose filter at `(i, w)` is generated by `R_i(w)`.
pub fn from_kripke(frame: &KripkeFrame) -> NeighborhoodFrame {
    let n = frame.size();
    let bases = (1..=frame.modality_count())
        .map(|i| {
            (0..n)
                .map(|w| {
                    let mut set = PointSet::with_capacity(n);
                    for &v in frame.successors(i, w) {
                        set.insert(v);
                    }
                    vec![set]
                })
                .collect()
        })
        .collect();
    NeighborhoodFrame {
        points: frame.worlds().to_vec(),
        index: frame.worlds().iter().cloned().enumerate().map(|(i, w)| (w, i)).collect(),
        bases,
    }
}

/// Product of unimodal n-frames. Point `(x1, x2)` is named `"x1,x2"` at
/// index `x1 * |X2| + x2`; modality 1 has base `{B x {x2}}`, modality 2 has
/// base `{{x1} x B}`.
pub fn n_product(x1: &NeighborhoodFrame, x2: &NeighborhoodFrame) -> Result<NeighborhoodFrame, NbhdError> {
    for x in [x1, x2] {
        if x.modality_count() != 1 {
            return Err(NbhdError::NotUnimodal(x.modality_count()));
        }
        if let Some(name) = x.points.iter().find(|p| p.contains(PAIR_SEP)) {
            return Err(KripkeError::ReservedSeparator {
                name: name.clone(),
                sep: PAIR_SEP,
            }
            .into());
        }
    }
    let (n1, n2) = (x1.size(), x2.size());
    let cap = crate::max_nodes();
    if n1 * n2 > cap {
        return Err(KripkeError::TooLarge { size: n1 * n2, cap }.into());
    }
    let n = n1 * n2;
    let points: Vec<String> = x1
        .points
        .iter()
        .flat_map(|a| x2.points.iter().map(move |b| pair_name(a, b)))
        .collect();
    let mut horizontal = Vec::with_capacity(n);
    let mut vertical = Vec::with_capacity(n);
    for a in 0..n1 {
        for b in 0..n2 {
            horizontal.push(
                x1.base(1, a)
                    .iter()
                    .map(|set| {
                        let mut s = PointSet::with_capacity(n);
                        for u in set.ones() {
                            s.insert(u * n2 + b);
                        }
                        s
                    })
                    .collect(),
            );
            vertical.push(
                x2.base(1, b)
                    .iter()
                    .map(|set| {
                        let mut s = PointSet::with_capacity(n);
                        for v in set.ones() {
                            s.insert(a * n2 + v);
                        }
                        s
                    })
                    .collect(),
            );
        }
    }
    Ok(NeighborhoodFrame {
        index: points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect(),
        points,
        bases: vec![horizontal, vertical],
    })
}

pub fn check_n_pmorphism_named(
    source: &NeighborhoodFrame,
    target: &NeighborhoodFrame,
    map: &BTreeMap<String, String>,
) -> Result<MorphismWitness, NbhdError> {
    let idx = resolve_map(&source.points, |t| target.index_of(t), map)?;
    check_n_pmorphism(source, target, &idx)
}

/// Surjectivity, forward (`f(B)` is in the target filter for each base set
/// `B`) and back (each target base set contains some `f(B)`).
pub fn check_n_pmorphism(
    source: &NeighborhoodFrame,
    target: &NeighborhoodFrame,
    map: &[usize],
) -> Result<MorphismWitness, NbhdError> {
    for frame in [source, target] {
        let violations = frame.validate();
        if !violations.is_empty() {
            return Err(NbhdError::Invalid(violations));
        }
    }
    if map.len() != source.size() {
        let missing = source.points.get(map.len()).cloned().unwrap_or_default();
        return Err(KripkeError::MapNotTotal(missing).into());
    }
    if let Some(&bad) = map.iter().find(|&&t| t >= target.size()) {
        return Err(NbhdError::UnknownPoint(format!("#{bad}")));
    }
    if source.modality_count() != target.modality_count() {
        return Err(KripkeError::ModalityOutOfRange {
            used: source.modality_count(),
            available: target.modality_count(),
        }
        .into());
    }
    let image = |set: &PointSet| {
        let mut out = PointSet::with_capacity(target.size());
        for u in set.ones() {
            out.insert(map[u]);
        }
        out
    };
    let mut violations = Vec::new();
    let mut hit = PointSet::with_capacity(target.size());
    for &t in map {
        hit.insert(t);
    }
    for t in 0..target.size() {
        if !hit.contains(t) {
            violations.push(Violation::NotSurjective {
                target: target.points[t].clone(),
            });
        }
    }
    for i in 1..=source.modality_count() {
        for x in 0..source.size() {
            let images: Vec<PointSet> = source.base(i, x).iter().map(image).collect();
            for (b, img) in source.base(i, x).iter().zip(&images) {
                if !target.membership(i, map[x], img) {
                    violations.push(Violation::Forward {
                        modality: i,
                        point: source.points[x].clone(),
                        base_set: names_of(&source.points, b),
                    });
                }
            }
            for v in target.base(i, map[x]) {
                if !images.iter().any(|img| img.is_subset(v)) {
                    violations.push(Violation::Back {
                        modality: i,
                        point: source.points[x].clone(),
                        target_set: names_of(&target.points, v),
                    });
                }
            }
        }
    }
    let named = source
        .points
        .iter()
        .zip(map)
        .map(|(s, &t)| (s.clone(), target.points[t].clone()))
        .collect();
    Ok(MorphismWitness {
        map: named,
        violations,
    })
}

/// A finite topology given by its open sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    pub points: Vec<String>,
    pub opens: Vec<PointSet>,
}

impl Topology {
    pub fn from_names(points: &[String], opens: &[Vec<String>]) -> Result<Self, NbhdError> {
        let index = index_points(points)?;
        let n = points.len();
        let mut sets = Vec::with_capacity(opens.len());
        for open in opens {
            let mut s = PointSet::with_capacity(n);
            for p in open {
                s.insert(*index.get(p).ok_or_else(|| NbhdError::UnknownPoint(p.clone()))?);
            }
            if !sets.contains(&s) {
                sets.push(s);
            }
        }
        let top = Topology {
            points: points.to_vec(),
            opens: sets,
        };
        top.check()?;
        Ok(top)
    }

    /// Contains the empty and full sets and is closed under binary unions
    /// and intersections.
    pub fn check(&self) -> Result<(), NbhdError> {
        let n = self.points.len();
        let empty = PointSet::with_capacity(n);
        let mut full = PointSet::with_capacity(n);
        full.insert_range(..);
        if !self.opens.contains(&empty) {
            return Err(NbhdError::NotTopology("missing the empty set".into()));
        }
        if !self.opens.contains(&full) {
            return Err(NbhdError::NotTopology("missing the whole space".into()));
        }
        for a in &self.opens {
            for b in &self.opens {
                let mut u = a.clone();
                u.union_with(b);
                let mut m = a.clone();
                m.intersect_with(b);
                if !self.opens.contains(&u) {
                    return Err(NbhdError::NotTopology(format!(
                        "union of {:?} and {:?} is not open",
                        names_of(&self.points, a),
                        names_of(&self.points, b)
                    )));
                }
                if !self.opens.contains(&m) {
                    return Err(NbhdError::NotTopology(format!(
                        "intersection of {:?} and {:?} is not open",
                        names_of(&self.points, a),
                        names_of(&self.points, b)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Derived-set frame: the base at `x` is `{U \ {x} : x in U open}`.
pub fn derived_frame(top: &Topology) -> Result<NeighborhoodFrame, NbhdError> {
    top.check()?;
    let n = top.points.len();
    let per_point = (0..n)
        .map(|x| {
            let mut family: Vec<PointSet> = Vec::new();
            for open in top.opens.iter().filter(|u| u.contains(x)) {
                let mut punctured = open.clone();
                punctured.set(x, false);
                if !family.contains(&punctured) {
                    family.push(punctured);
                }
            }
            family
        })
        .collect();
    NeighborhoodFrame::from_sets(top.points.clone(), vec![per_point])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn strings(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn nframe(points: &[&str], bases: &[&[(&str, &[&[&str]])]]) -> Result<NeighborhoodFrame, NbhdError> {
        let bases: Vec<BTreeMap<String, Vec<Vec<String>>>> = bases
            .iter()
            .map(|m| {
                m.iter()
                    .map(|(p, fam)| (p.to_string(), fam.iter().map(|s| strings(s)).collect()))
                    .collect()
            })
            .collect();
        NeighborhoodFrame::from_names(&strings(points), &bases)
    }

    #[test]
    fn validate_examples() {
        let bad = nframe(&["a", "b"], &[&[("a", &[&["a"], &["b"]]), ("b", &[&["a", "b"]])]]);
        match bad {
            Err(NbhdError::Invalid(v)) => assert_eq!(
                v,
                vec![NbhdViolation::BaseLaw {
                    modality: 1,
                    point: "a".into(),
                    first: strings(&["a"]),
                    second: strings(&["b"]),
                }]
            ),
            other => panic!("{other:?}"),
        }
        assert!(nframe(&["a", "b"], &[&[("a", &[&["a", "b"]]), ("b", &[&["a", "b"]])]]).is_ok());
        assert!(nframe(&["a"], &[&[("a", &[&[]])]]).is_ok());
        let unknown = nframe(&["a"], &[&[("a", &[&["z"]])]]);
        assert!(matches!(unknown, Err(NbhdError::Invalid(v)) if matches!(&v[0], NbhdViolation::UnknownPoint { name, .. } if name == "z")));
    }

    #[test]
    fn membership_examples() {
        let f = nframe(&["a", "b", "c"], &[&[("a", &[&["a", "b"]]), ("b", &[&[]]), ("c", &[&[]])]]).unwrap();
        assert!(f.membership(1, 0, &f.set_from_names(&["a", "b", "c"]).unwrap()));
        assert!(!f.membership(1, 0, &f.set_from_names(&["a"]).unwrap()));
        assert!(f.membership(1, 1, &f.set_from_names(&[]).unwrap()));
    }

    #[test]
    fn eval_examples() {
        let f = nframe(&["x"], &[&[("x", &[&[]])]]).unwrap();
        let m = NeighborhoodModel::new(f, Valuation::new());
        assert!(m.eval_n(0, &parse("[]1 false", 1).unwrap()).unwrap());

        let f = nframe(&["x", "y"], &[&[("x", &[&["y"]]), ("y", &[&["x", "y"]])]]).unwrap();
        let mut val = BTreeMap::new();
        val.insert("p".to_string(), strings(&["y"]));
        let m = NeighborhoodModel::from_names(f, &val).unwrap();
        let bp = parse("[]1 p", 1).unwrap();
        assert!(m.eval_named("x", &bp).unwrap());
        assert!(!m.eval_named("y", &bp).unwrap());
    }

    #[test]
    fn from_kripke_examples() {
        let w = strings(&["a", "b"]);
        let k = KripkeFrame::from_names(&w, &[vec![("a".into(), "b".into()), ("b".into(), "b".into())]], None).unwrap();
        let n = from_kripke(&k);
        assert_eq!(n.named_base(1, 0), vec![strings(&["b"])]);
        assert_eq!(n.named_base(1, 1), vec![strings(&["b"])]);
        let point = KripkeFrame::new(["s"], 1).unwrap();
        assert_eq!(from_kripke(&point).named_base(1, 0), vec![Vec::<String>::new()]);
    }

    #[test]
    fn product_of_irreflexive_points() {
        let point = from_kripke(&KripkeFrame::new(["s"], 1).unwrap());
        let p = n_product(&point, &point).unwrap();
        assert_eq!(p.points(), &["s,s"]);
        assert_eq!(p.named_base(1, 0), vec![Vec::<String>::new()]);
        assert_eq!(p.named_base(2, 0), vec![Vec::<String>::new()]);
        assert!(p.validate().is_empty());
    }

    #[test]
    fn back_condition_failure() {
        let src = nframe(&["a", "b"], &[&[("a", &[&["a", "b"]]), ("b", &[&["a", "b"]])]]).unwrap();
        let tgt = nframe(&["u", "v"], &[&[("u", &[&["u"]]), ("v", &[&["u", "v"]])]]).unwrap();
        let w = check_n_pmorphism(&src, &tgt, &[0, 1]).unwrap();
        assert_eq!(
            w.violations,
            vec![Violation::Back {
                modality: 1,
                point: "a".into(),
                target_set: strings(&["u"]),
            }]
        );
        let id = check_n_pmorphism(&src, &src, &[0, 1]).unwrap();
        assert!(id.is_pmorphism());
    }

    #[test]
    fn derived_frames() {
        let pts = strings(&["a", "b"]);
        let discrete = Topology::from_names(&pts, &[vec![], strings(&["a"]), strings(&["b"]), pts.clone()]).unwrap();
        let d = derived_frame(&discrete).unwrap();
        assert_eq!(d.named_base(1, 0), vec![vec![], strings(&["b"])]);
        let m = NeighborhoodModel::new(d, Valuation::new());
        let ext = m.extension(&parse("[]1 false", 1).unwrap()).unwrap();
        assert_eq!(ext.count_ones(..), 2);

        let indiscrete = Topology::from_names(&pts, &[vec![], pts.clone()]).unwrap();
        assert_eq!(derived_frame(&indiscrete).unwrap().named_base(1, 0), vec![strings(&["b"])]);

        let sierpinski = Topology::from_names(&pts, &[vec![], strings(&["a"]), pts.clone()]).unwrap();
        let d = derived_frame(&sierpinski).unwrap();
        assert_eq!(d.named_base(1, 0), vec![vec![], strings(&["b"])]);
        assert_eq!(d.named_base(1, 1), vec![strings(&["a"])]);

        assert!(matches!(
            Topology::from_names(&pts, &[strings(&["a"]), pts.clone()]),
            Err(NbhdError::NotTopology(_))
        ));
    }
}
