//! Simplices and finite simplicial complexes.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Vertex = u32;

/// A simplex, stored as its strictly increasing vertex list.
///
/// The sorted order is also the orientation: boundary signs are `(-1)^k`
/// for the facet that omits the `k`-th vertex.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vertex>", into = "Vec<Vertex>")]
pub struct Simplex(SmallVec<[Vertex; 4]>);

impl Simplex {
    pub fn new(vertices: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut v: SmallVec<[Vertex; 4]> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if v.is_empty() {
            return Err(Error::EmptySimplex);
        }
        Ok(Simplex(v))
    }

    pub fn vertex(v: Vertex) -> Self {
        Simplex(smallvec::smallvec![v])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    #[inline]
    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().all(|v| other.contains(*v))
    }

    /// The facet omitting the `k`-th vertex. `None` for a vertex.
    pub fn facet(&self, k: usize) -> Option<Simplex> {
        if self.0.len() < 2 {
            return None;
        }
        let mut v = self.0.clone();
        v.remove(k);
        Some(Simplex(v))
    }

    /// Facets in vertex-removal order, so facet `k` has boundary sign `(-1)^k`.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = if self.0.len() < 2 { 0 } else { self.0.len() };
        (0..n).map(move |k| self.facet(k).unwrap())
    }

    pub fn without(&self, v: Vertex) -> Option<Simplex> {
        let k = self.0.binary_search(&v).ok()?;
        self.facet(k)
    }

    pub fn with(&self, v: Vertex) -> Simplex {
        match self.0.binary_search(&v) {
            Ok(_) => self.clone(),
            Err(pos) => {
                let mut w = self.0.clone();
                w.insert(pos, v);
                Simplex(w)
            }
        }
    }

    /// All non-empty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        assert!(n < 32, "simplex too large to enumerate faces");
        (1u32..(1 << n))
            .map(|mask| Simplex((0..n).filter(|k| mask & (1 << k) != 0).map(|k| self.0[k]).collect()))
            .collect()
    }
}

impl Ord for Simplex {
    /// Dimension first, then lexicographic on sorted vertices.
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl TryFrom<Vec<Vertex>> for Simplex {
    type Error = Error;
    fn try_from(v: Vec<Vertex>) -> Result<Self> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<Vertex> {
    fn from(s: Simplex) -> Self {
        s.0.into_vec()
    }
}

/// A finite simplicial complex with cached facet/cofacet incidences.
///
/// Simplices are indexed in canonical order (dimension, then lexicographic),
/// so every facet has a smaller index than its cofacets.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
    facets: Vec<SmallVec<[usize; 4]>>,
    cofacets: Vec<Vec<usize>>,
}

impl Default for SimplicialComplex {
    fn default() -> Self {
        Self::from_closed(Vec::new())
    }
}

impl SimplicialComplex {
    /// Downward closure of the given simplices. Duplicates are merged.
    pub fn build<I, S>(simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = Vertex>,
    {
        let mut all = HashSet::new();
        for s in simplices {
            let s = Simplex::new(s)?;
            if all.contains(&s) {
                continue;
            }
            for face in s.faces() {
                all.insert(face);
            }
        }
        Ok(Self::from_closed(all.into_iter().collect()))
    }

    /// Builds from a set that is already closed under faces.
    pub fn from_closed(mut simplices: Vec<Simplex>) -> Self {
        simplices.sort_unstable();
        simplices.dedup();
        let index: HashMap<Simplex, usize> = simplices.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut facets = Vec::with_capacity(simplices.len());
        let mut cofacets = vec![Vec::new(); simplices.len()];
        for (i, s) in simplices.iter().enumerate() {
            let f: SmallVec<[usize; 4]> = s
                .facets()
                .map(|face| {
                    *index
                        .get(&face)
                        .unwrap_or_else(|| panic!("{s} has facet {face} outside the complex"))
                })
                .collect();
            for &j in &f {
                cofacets[j].push(i);
            }
            facets.push(f);
        }
        SimplicialComplex {
            simplices,
            index,
            facets,
            cofacets,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.simplices.last().map(Simplex::dim)
    }

    #[inline]
    pub fn simplex(&self, i: usize) -> &Simplex {
        &self.simplices[i]
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    /// Facet indices; entry `k` omits the `k`-th vertex.
    #[inline]
    pub fn facets(&self, i: usize) -> &[usize] {
        &self.facets[i]
    }

    #[inline]
    pub fn cofacets(&self, i: usize) -> &[usize] {
        &self.cofacets[i]
    }

    pub fn dim(&self, i: usize) -> usize {
        self.simplices[i].dim()
    }

    pub fn count_of_dim(&self, d: usize) -> usize {
        self.simplices.iter().filter(|s| s.dim() == d).count()
    }

    pub fn vertex_ids(&self) -> Vec<Vertex> {
        self.simplices
            .iter()
            .take_while(|s| s.dim() == 0)
            .map(|s| s.vertices()[0])
            .collect()
    }

    /// The subcomplex on the given indices. The set must be face-closed.
    pub fn subcomplex(&self, indices: impl IntoIterator<Item = usize>) -> SimplicialComplex {
        Self::from_closed(indices.into_iter().map(|i| self.simplices[i].clone()).collect())
    }

    /// Checks that `indices` is closed under taking facets.
    pub fn is_face_closed(&self, member: &[bool]) -> bool {
        (0..self.len()).all(|i| !member[i] || self.facets[i].iter().all(|&f| member[f]))
    }

    /// True if every simplex of `self` belongs to `other`.
    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.simplices.iter().all(|s| other.contains(s))
    }
}
