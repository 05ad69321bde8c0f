//! Generalized discrete Morse structure: gradient intervals, pairings,
//! descending complexes and the Wrap complex.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::filtration::{check_monotone, ElementwiseFiltration};
use crate::geometry::{delaunay_complex, delaunay_radius_values, Delaunay, PointCloud};
use crate::value::Value;

/// An interval `[lower, upper]` of the face poset; indices refer to the complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lower: usize,
    pub upper: usize,
    /// Members in complex order.
    pub members: Vec<usize>,
}

impl Interval {
    pub fn is_critical(&self) -> bool {
        self.lower == self.upper
    }
}

/// The partition of a complex into the level-set intervals of a
/// generalized discrete Morse function.
#[derive(Clone, Debug)]
pub struct GradientPartition {
    complex: Arc<SimplicialComplex>,
    values: Vec<Value>,
    intervals: Vec<Interval>,
    membership: Vec<usize>,
}

/// A set of disjoint facet pairs; unpaired simplices are critical.
#[derive(Clone, Debug)]
pub struct DiscretePairing {
    complex: Arc<SimplicialComplex>,
    pairs: Vec<(usize, usize)>,
    partner: Vec<Option<usize>>,
}

/// A face-closed set of simplices of an ambient complex.
#[derive(Clone, Debug)]
pub struct Subcomplex {
    complex: Arc<SimplicialComplex>,
    member: Vec<bool>,
    indices: Vec<usize>,
}

struct DisjointSets(Vec<usize>);

impl DisjointSets {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Groups simplices by exact value, splits the groups into facet-connected
/// components and checks that each component is an interval `[∩, ∪]`.
pub fn gradient_partition(complex: Arc<SimplicialComplex>, values: Vec<Value>) -> Result<GradientPartition> {
    assert_eq!(values.len(), complex.len(), "one value per simplex");
    check_monotone(&complex, &values)?;
    let n = complex.len();
    let mut ds = DisjointSets((0..n).collect());
    for i in 0..n {
        for &f in complex.facets(i) {
            if values[f] == values[i] {
                ds.union(f, i);
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..n {
        groups.entry(ds.find(i)).or_default().push(i);
    }
    // each root is the smallest index of its component
    let mut roots: Vec<usize> = groups.keys().copied().collect();
    roots.sort_by(|&a, &b| values[a].cmp(&values[b]).then(a.cmp(&b)));
    let mut intervals = Vec::with_capacity(roots.len());
    let mut membership = vec![usize::MAX; n];
    for root in roots {
        let members = groups.remove(&root).unwrap();
        let interval = as_interval(&complex, members)?;
        for &m in &interval.members {
            membership[m] = intervals.len();
        }
        intervals.push(interval);
    }
    Ok(GradientPartition {
        complex,
        values,
        intervals,
        membership,
    })
}

fn as_interval(complex: &SimplicialComplex, members: Vec<usize>) -> Result<Interval> {
    let witness = || Error::NotGeneralizedMorse {
        witness: members.iter().map(|&m| complex.simplex(m).clone()).collect(),
    };
    let mut lower: Vec<u32> = complex.simplex(members[0]).vertices().to_vec();
    let mut upper: Vec<u32> = lower.clone();
    for &m in &members[1..] {
        let v = complex.simplex(m).vertices();
        lower.retain(|x| v.contains(x));
        upper.extend_from_slice(v);
    }
    upper.sort_unstable();
    upper.dedup();
    if lower.is_empty() || upper.len() - lower.len() >= usize::BITS as usize - 1 {
        return Err(witness());
    }
    // distinct members all between lower and upper: count decides equality
    if members.len() != 1usize << (upper.len() - lower.len()) {
        return Err(witness());
    }
    let lower = Simplex::new(lower).expect("non-empty");
    let upper = Simplex::new(upper).expect("non-empty");
    let lower = complex.index_of(&lower).ok_or_else(witness)?;
    let upper = complex.index_of(&upper).ok_or_else(witness)?;
    Ok(Interval { lower, upper, members })
}

impl GradientPartition {
    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn complex_arc(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    /// Values by complex index.
    pub fn values(&self) -> &[Value] {
        &self.values
    }

    /// Intervals sorted by value, then by their lower simplex.
    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn interval_of(&self, i: usize) -> usize {
        self.membership[i]
    }

    pub fn interval_value(&self, id: usize) -> &Value {
        &self.values[self.intervals[id].lower]
    }

    pub fn is_critical(&self, i: usize) -> bool {
        self.intervals[self.membership[i]].is_critical()
    }

    /// Critical simplices (complex indices) in f-lexicographic order.
    pub fn critical(&self) -> Vec<usize> {
        self.intervals
            .iter()
            .filter(|iv| iv.is_critical())
            .map(|iv| iv.lower)
            .collect()
    }

    /// Critical simplices with `g <= r`; `g` defaults to the function itself
    /// and must be constant on every interval.
    pub fn critical_at_most(&self, r: &Value, g: Option<&[Value]>) -> Result<Vec<usize>> {
        let g = g.unwrap_or(&self.values);
        for iv in &self.intervals {
            if iv.members.iter().any(|&m| g[m] != g[iv.lower]) {
                return Err(Error::InvalidGradient(format!(
                    "function is not constant on [{}, {}]",
                    self.complex.simplex(iv.lower),
                    self.complex.simplex(iv.upper)
                )));
            }
        }
        Ok(self.critical().into_iter().filter(|&c| &g[c] <= r).collect())
    }

    /// Union of the intervals below the given critical simplices.
    pub fn descending_complex(&self, critical: &[usize]) -> Result<Subcomplex> {
        for &c in critical {
            if !self.is_critical(c) {
                return Err(Error::NotCritical(self.complex.simplex(c).clone()));
            }
        }
        let seeds = critical.iter().map(|&c| self.membership[c]);
        let member = down_set(
            &self.complex,
            seeds,
            |i| self.membership[i],
            |id| &self.intervals[id].members,
        );
        let mut indices: Vec<usize> = (0..member.len()).filter(|&i| member[i]).collect();
        indices.sort_by(|&a, &b| self.values[a].cmp(&self.values[b]).then(a.cmp(&b)));
        Ok(Subcomplex {
            complex: self.complex.clone(),
            member,
            indices,
        })
    }

    /// The minimal vertex refinement: each regular interval `[rho, phi]` is
    /// split into pairs toggling `v = min(phi \ rho)`.
    pub fn minimal_vertex_refinement(&self) -> DiscretePairing {
        let mut pairs = Vec::new();
        for iv in self.intervals.iter().filter(|iv| !iv.is_critical()) {
            let rho = self.complex.simplex(iv.lower);
            let v = *self
                .complex
                .simplex(iv.upper)
                .vertices()
                .iter()
                .find(|&&x| !rho.contains(x))
                .expect("regular interval");
            for &m in &iv.members {
                let psi = self.complex.simplex(m);
                if !psi.contains(v) {
                    let up = self
                        .complex
                        .index_of(&psi.with(v))
                        .expect("interval lies in the complex");
                    pairs.push((m, up));
                }
            }
        }
        DiscretePairing::new(self.complex.clone(), pairs).expect("refinement pairs are disjoint facet pairs")
    }
}

/// Marks every simplex in an interval reachable downwards from `seeds`.
fn down_set<'a>(
    complex: &SimplicialComplex,
    seeds: impl IntoIterator<Item = usize>,
    interval_of: impl Fn(usize) -> usize,
    members: impl Fn(usize) -> &'a [usize],
) -> Vec<bool> {
    let mut member = vec![false; complex.len()];
    let mut seen: HashSet<usize> = HashSet::new();
    let mut stack: Vec<usize> = Vec::new();
    for s in seeds {
        if seen.insert(s) {
            stack.push(s);
        }
    }
    while let Some(id) = stack.pop() {
        for &m in members(id) {
            member[m] = true;
            for &f in complex.facets(m) {
                let j = interval_of(f);
                if seen.insert(j) {
                    stack.push(j);
                }
            }
        }
    }
    member
}

impl DiscretePairing {
    /// Validates that the pairs are disjoint facet pairs.
    pub fn new(complex: Arc<SimplicialComplex>, mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut partner = vec![None; complex.len()];
        for &(s, t) in &pairs {
            if !complex.facets(t).contains(&s) {
                return Err(Error::InvalidGradient(format!(
                    "{} is not a facet of {}",
                    complex.simplex(s),
                    complex.simplex(t)
                )));
            }
            for (a, b) in [(s, t), (t, s)] {
                if partner[a].is_some() {
                    return Err(Error::InvalidGradient(format!(
                        "{} is paired twice",
                        complex.simplex(a)
                    )));
                }
                partner[a] = Some(b);
            }
        }
        pairs.sort_unstable();
        Ok(DiscretePairing {
            complex,
            pairs,
            partner,
        })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    /// `(facet, cofacet)` pairs of complex indices, sorted.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn simplex_pairs(&self) -> Vec<(Simplex, Simplex)> {
        let mut v: Vec<(Simplex, Simplex)> = self
            .pairs
            .iter()
            .map(|&(s, t)| (self.complex.simplex(s).clone(), self.complex.simplex(t).clone()))
            .collect();
        v.sort();
        v
    }

    pub fn partner(&self, i: usize) -> Option<usize> {
        self.partner[i]
    }

    pub fn is_critical(&self, i: usize) -> bool {
        self.partner[i].is_none()
    }

    pub fn critical(&self) -> Vec<usize> {
        (0..self.complex.len()).filter(|&i| self.is_critical(i)).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    /// Descending complex of the given critical simplices, treating every
    /// pair as an interval.
    pub fn descending_complex(&self, critical: &[usize]) -> Result<Subcomplex> {
        for &c in critical {
            if !self.is_critical(c) {
                return Err(Error::NotCritical(self.complex.simplex(c).clone()));
            }
        }
        // an interval is named by its lowest member
        let lowest = |i: usize| match self.partner[i] {
            Some(p) => i.min(p),
            None => i,
        };
        let groups: Vec<Vec<usize>> = (0..self.complex.len())
            .map(|i| match self.partner[i] {
                Some(p) if i < p => vec![i, p],
                Some(_) => Vec::new(),
                None => vec![i],
            })
            .collect();
        let member = down_set(&self.complex, critical.iter().copied(), lowest, |id| &groups[id]);
        Ok(Subcomplex::from_member(self.complex.clone(), member))
    }
}

/// Pairs `(sigma, tau)` where `sigma` is the last facet of `tau` and `tau`
/// the first cofacet of `sigma` in the filtration order.
pub fn apparent_pairs(filtration: &ElementwiseFiltration) -> DiscretePairing {
    let pairs = apparent_pair_positions(filtration)
        .into_iter()
        .map(|(s, t)| (filtration.complex_index(s), filtration.complex_index(t)))
        .collect();
    DiscretePairing::new(filtration.complex_arc().clone(), pairs).expect("apparent pairs form a gradient")
}

/// Apparent pairs as filtration positions.
pub fn apparent_pair_positions(filtration: &ElementwiseFiltration) -> Vec<(usize, usize)> {
    (0..filtration.len())
        .filter_map(|t| {
            let s = filtration.facet_positions(t).map(|(_, p)| p).max()?;
            let first = filtration.cofacet_positions(s).min()?;
            (first == t).then_some((s, t))
        })
        .collect()
}

/// Apparent pairs of equal value.
pub fn zero_persistence_apparent_pairs(filtration: &ElementwiseFiltration) -> DiscretePairing {
    let pairs = apparent_pair_positions(filtration)
        .into_iter()
        .filter(|&(s, t)| filtration.value(s) == filtration.value(t))
        .map(|(s, t)| (filtration.complex_index(s), filtration.complex_index(t)))
        .collect();
    DiscretePairing::new(filtration.complex_arc().clone(), pairs).expect("apparent pairs form a gradient")
}

impl Subcomplex {
    fn from_member(complex: Arc<SimplicialComplex>, member: Vec<bool>) -> Self {
        let indices = (0..member.len()).filter(|&i| member[i]).collect();
        Subcomplex {
            complex,
            member,
            indices,
        }
    }

    /// The first `len` simplices of a filtration.
    pub fn prefix(filtration: &ElementwiseFiltration, len: usize) -> Self {
        let mut member = vec![false; filtration.len()];
        let indices: Vec<usize> = (0..len).map(|p| filtration.complex_index(p)).collect();
        for &i in &indices {
            member[i] = true;
        }
        Subcomplex {
            complex: filtration.complex_arc().clone(),
            member,
            indices,
        }
    }

    pub fn ambient(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn contains(&self, i: usize) -> bool {
        self.member[i]
    }

    pub fn contains_simplex(&self, s: &Simplex) -> bool {
        self.complex.index_of(s).is_some_and(|i| self.member[i])
    }

    /// Member indices in the ambient complex, in a deterministic order.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> + '_ {
        self.indices.iter().map(|&i| self.complex.simplex(i))
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn is_subset_of(&self, other: &Subcomplex) -> bool {
        self.indices.iter().all(|&i| other.member[i])
    }

    pub fn is_face_closed(&self) -> bool {
        self.complex.is_face_closed(&self.member)
    }

    pub fn to_complex(&self) -> SimplicialComplex {
        SimplicialComplex::from_closed(self.simplices().cloned().collect())
    }
}

/// The Delaunay complex of a cloud with its radius function, f-lexicographic
/// filtration and gradient partition.
#[derive(Clone, Debug)]
pub struct DelaunayMorse {
    pub delaunay: Delaunay,
    pub filtration: ElementwiseFiltration,
    pub partition: GradientPartition,
}

impl DelaunayMorse {
    pub fn new(cloud: &PointCloud) -> Result<Self> {
        let delaunay = delaunay_complex(cloud)?;
        let values = delaunay_radius_values(&delaunay.complex, cloud)?;
        let complex = Arc::new(delaunay.complex.clone());
        let filtration = ElementwiseFiltration::f_lexicographic(complex.clone(), values.clone())?;
        let partition = gradient_partition(complex, values)?;
        Ok(DelaunayMorse {
            delaunay,
            filtration,
            partition,
        })
    }

    /// `Wrap_r` for a squared radius `r_sq`.
    pub fn wrap(&self, r_sq: &Value) -> Subcomplex {
        let c = self
            .partition
            .critical_at_most(r_sq, None)
            .expect("f is constant on its own intervals");
        self.partition.descending_complex(&c).expect("critical by construction")
    }

    /// `Del_r` for a squared radius `r_sq`.
    pub fn sublevel(&self, r_sq: &Value) -> Subcomplex {
        Subcomplex::prefix(&self.filtration, self.filtration.sublevel_len(r_sq))
    }
}

/// The Wrap complex of `cloud` at radius `r`.
pub fn wrap_complex(cloud: &PointCloud, r: f64) -> Result<SimplicialComplex> {
    if r < 0.0 {
        return Ok(SimplicialComplex::default());
    }
    let r = Value::from_f64(r).ok_or_else(|| Error::Coordinate(r.to_string()))?;
    let dm = DelaunayMorse::new(cloud)?;
    Ok(dm.wrap(&(&r * &r)).to_complex())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex(tops: &[&[u32]]) -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::build(tops.iter().map(|t| t.to_vec())).unwrap())
    }

    fn values(k: &SimplicialComplex, f: impl Fn(&Simplex) -> i64) -> Vec<Value> {
        k.simplices().iter().map(|s| Value::from_int(f(s))).collect()
    }

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn injective_function_is_all_critical() {
        let k = complex(&[&[0, 1, 2]]);
        let v: Vec<Value> = (0..k.len() as i64).map(Value::from_int).collect();
        let p = gradient_partition(k, v).unwrap();
        assert!(p.intervals().iter().all(Interval::is_critical));
        assert!(p.minimal_vertex_refinement().is_empty());
    }

    #[test]
    fn single_pair_interval() {
        let k = complex(&[&[0, 1]]);
        let v = values(&k, |x| if x == &s(&[0]) { 0 } else { 1 });
        let p = gradient_partition(k.clone(), v).unwrap();
        let regular: Vec<&Interval> = p.intervals().iter().filter(|i| !i.is_critical()).collect();
        assert_eq!(regular.len(), 1);
        assert_eq!(k.simplex(regular[0].lower), &s(&[1]));
        assert_eq!(k.simplex(regular[0].upper), &s(&[0, 1]));
        assert_eq!(p.critical(), vec![k.index_of(&s(&[0])).unwrap()]);
        assert_eq!(
            p.minimal_vertex_refinement().simplex_pairs(),
            vec![(s(&[1]), s(&[0, 1]))]
        );
        let d = p.descending_complex(&p.critical()).unwrap();
        assert_eq!(d.simplices().cloned().collect::<Vec<_>>(), vec![s(&[0])]);
    }

    #[test]
    fn codimension_two_interval() {
        let k = complex(&[&[0, 1, 2]]);
        let big = [s(&[2]), s(&[0, 2]), s(&[1, 2]), s(&[0, 1, 2])];
        let v = values(&k, |x| if big.contains(x) { 5 } else { x.dim() as i64 });
        let p = gradient_partition(k.clone(), v).unwrap();
        let iv = &p.intervals()[p.interval_of(k.index_of(&s(&[2])).unwrap())];
        assert_eq!(k.simplex(iv.lower), &s(&[2]));
        assert_eq!(k.simplex(iv.upper), &s(&[0, 1, 2]));
        assert_eq!(iv.members.len(), 4);
        let refined = p.minimal_vertex_refinement();
        assert_eq!(
            refined.simplex_pairs(),
            vec![(s(&[2]), s(&[0, 2])), (s(&[1, 2]), s(&[0, 1, 2]))]
        );
        assert_eq!(refined.critical(), p.critical());
        let f = ElementwiseFiltration::f_lexicographic(k.clone(), p.values().to_vec()).unwrap();
        assert_eq!(
            zero_persistence_apparent_pairs(&f).simplex_pairs(),
            refined.simplex_pairs()
        );
    }

    #[test]
    fn non_interval_level_set_is_rejected() {
        // {0,1} and {1,2} share a value through {1} but {0,1,2} is missing
        let k = complex(&[&[0, 1], &[1, 2]]);
        let v = values(&k, |x| if x == &s(&[0]) || x == &s(&[2]) { 0 } else { 1 });
        match gradient_partition(k, v) {
            Err(Error::NotGeneralizedMorse { witness }) => assert_eq!(witness.len(), 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn apparent_pairs_of_constant_triangle() {
        let k = complex(&[&[0, 1, 2]]);
        let f = ElementwiseFiltration::f_lexicographic(k.clone(), vec![Value::zero(); 7]).unwrap();
        // brute force over the definition
        let mut expected = Vec::new();
        for t in 0..f.len() {
            for (_, sp) in f.facet_positions(t) {
                let max_facet = f.facet_positions(t).map(|x| x.1).max().unwrap();
                let min_cof = f.cofacet_positions(sp).min().unwrap();
                if sp == max_facet && min_cof == t {
                    expected.push((f.simplex(sp).clone(), f.simplex(t).clone()));
                }
            }
        }
        expected.sort();
        let got = apparent_pairs(&f).simplex_pairs();
        assert_eq!(got, expected);
        assert_eq!(
            got,
            vec![
                (s(&[1]), s(&[0, 1])),
                (s(&[2]), s(&[0, 2])),
                (s(&[1, 2]), s(&[0, 1, 2]))
            ]
        );
        assert!(zero_persistence_apparent_pairs(&f).len() == 3);
    }

    #[test]
    fn apparent_pairs_ignore_values() {
        let k = complex(&[&[0, 1]]);
        let f = ElementwiseFiltration::f_lexicographic(k, (0..3).map(Value::from_int).collect()).unwrap();
        assert_eq!(apparent_pairs(&f).len(), 1);
        assert!(zero_persistence_apparent_pairs(&f).is_empty());
    }

    #[test]
    fn descending_complex_edge_cases() {
        let k = complex(&[&[0, 1, 2]]);
        let v: Vec<Value> = (0..k.len() as i64).map(Value::from_int).collect();
        let p = gradient_partition(k.clone(), v).unwrap();
        assert!(p.descending_complex(&[]).unwrap().is_empty());
        assert_eq!(p.descending_complex(&p.critical()).unwrap().len(), 7);
        let k2 = complex(&[&[0, 1]]);
        let v2 = values(&k2, |x| if x == &s(&[0]) { 0 } else { 1 });
        let p2 = gradient_partition(k2.clone(), v2).unwrap();
        let edge = k2.index_of(&s(&[0, 1])).unwrap();
        assert!(matches!(p2.descending_complex(&[edge]), Err(Error::NotCritical(_))));
    }

    #[test]
    fn non_monotone_is_rejected() {
        let k = complex(&[&[0, 1]]);
        let v = values(&k, |x| if x.dim() == 0 { 2 } else { 1 });
        assert!(matches!(gradient_partition(k, v), Err(Error::NotMonotone { .. })));
    }

    fn cloud(pts: &[&[f64]]) -> PointCloud {
        PointCloud::from_f64(&pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn wrap_of_triangle() {
        let c = cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[0.45, 0.8]]);
        assert!(wrap_complex(&c, -1.0).unwrap().is_empty());
        let dm = DelaunayMorse::new(&c).unwrap();
        // acute triangle: all simplices critical
        assert_eq!(dm.partition.critical().len(), 7);
        let all = wrap_complex(&c, 10.0).unwrap();
        assert_eq!(all.len(), 7);
    }

    #[test]
    fn wrap_of_quad_below_first_triangle() {
        let c = cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[1.02, 1.0], &[0.0, 1.01]]);
        let dm = DelaunayMorse::new(&c).unwrap();
        let k = dm.partition.complex();
        let t1 = dm.filtration.values_by_complex_index()[k.index_of(&s(&[0, 1, 3])).unwrap()].clone();
        let t2 = dm.filtration.values_by_complex_index()[k.index_of(&s(&[1, 2, 3])).unwrap()].clone();
        let first = t1.min(t2);
        // just below the first triangle value
        let eps = Value::from_ratio(1.into(), 1_000_000_000.into());
        let w = dm.wrap(&(&first - &eps));
        for e in [[0u32, 1], [1, 2], [2, 3], [0, 3]] {
            assert!(w.contains_simplex(&s(&e)), "{e:?}");
        }
        assert!(!w.contains_simplex(&s(&[0, 1, 3])));
        assert!(!w.contains_simplex(&s(&[1, 2, 3])));
        assert!(w.is_face_closed());
        assert!(w.is_subset_of(&dm.sublevel(&(&first - &eps))));
    }
}
