use serde::Serialize;

use super::matrix::{rank, BoundaryMatrix, SparseColumnMatrix};
use super::reduce::ReductionResult;
use crate::chain::add_scaled_entries;
use crate::error::{Error, Result};
use crate::field::Field;

/// Which ordered basis of the chain complex a gradient lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BasisKind {
    /// The simplices in filtration order.
    Original,
    /// Births and essentials as simplices, deaths as columns of `S`.
    Reduction,
    /// Births as columns of `R`, deaths and essentials as columns of `S`.
    Decomposition,
}

/// An ordered basis whose `i`-th element has pivot `i` in the original basis.
#[derive(Clone, Debug)]
pub struct ChangeOfBasis {
    field: Field,
    elements: SparseColumnMatrix,
}

impl ChangeOfBasis {
    pub fn new(elements: SparseColumnMatrix, field: Field) -> Result<Self> {
        if (0..elements.len()).any(|i| elements.pivot(i) != Some(i)) {
            return Err(Error::InvalidGradient("basis element without diagonal pivot".into()));
        }
        Ok(ChangeOfBasis { field, elements })
    }

    pub fn identity(n: usize, field: Field) -> Self {
        ChangeOfBasis {
            field,
            elements: SparseColumnMatrix::identity(n),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Basis elements as columns in original coordinates.
    pub fn elements(&self) -> &SparseColumnMatrix {
        &self.elements
    }

    pub fn to_original(&self, v: &[(usize, u32)]) -> Vec<(usize, u32)> {
        self.elements.apply(v, self.field)
    }

    /// Coordinates of `v` in this basis, by back substitution on pivots.
    pub fn from_original(&self, v: &[(usize, u32)]) -> Vec<(usize, u32)> {
        let f = self.field;
        let mut v = v.to_vec();
        let mut out = Vec::new();
        while let Some(&(p, c)) = v.last() {
            let col = self.elements.column(p);
            let mu = f.div(c, col.last().unwrap().1);
            out.push((p, mu));
            add_scaled_entries(&mut v, col, f.neg(mu), f);
        }
        out.reverse();
        out
    }
}

/// A disjoint set of facet pairs on an ordered basis, with the boundary
/// operator expressed in that basis and a monotone witness function.
#[derive(Clone, Debug)]
pub struct AlgebraicGradient {
    kind: BasisKind,
    field: Field,
    dims: Vec<usize>,
    basis: ChangeOfBasis,
    boundary: SparseColumnMatrix,
    pairs: Vec<(usize, usize)>,
    cofacet_of: Vec<Option<usize>>,
    facet_of: Vec<Option<usize>>,
    coefficient: Vec<u32>,
    witness: Vec<usize>,
}

impl AlgebraicGradient {
    /// Validates the pairs against `boundary` and checks that `witness` is
    /// monotone with equality on facet pairs exactly for the given pairs.
    pub fn new(
        kind: BasisKind,
        basis: ChangeOfBasis,
        boundary: SparseColumnMatrix,
        dims: Vec<usize>,
        mut pairs: Vec<(usize, usize)>,
        witness: Vec<usize>,
    ) -> Result<Self> {
        let n = boundary.len();
        let field = basis.field;
        if basis.len() != n || dims.len() != n || witness.len() != n {
            return Err(Error::InvalidGradient("size mismatch".into()));
        }
        pairs.sort_unstable();
        let mut cofacet_of = vec![None; n];
        let mut facet_of = vec![None; n];
        let mut coefficient = vec![0; n];
        for &(a, b) in &pairs {
            if cofacet_of[a].is_some() || facet_of[a].is_some() || cofacet_of[b].is_some() || facet_of[b].is_some() {
                return Err(Error::InvalidGradient(format!("pairs are not disjoint at ({a}, {b})")));
            }
            let c = boundary.get(a, b);
            if c == 0 || dims[a] + 1 != dims[b] {
                return Err(Error::InvalidGradient(format!("({a}, {b}) is not a facet pair")));
            }
            cofacet_of[a] = Some(b);
            facet_of[b] = Some(a);
            coefficient[a] = c;
        }
        let g = AlgebraicGradient {
            kind,
            field,
            dims,
            basis,
            boundary,
            pairs,
            cofacet_of,
            facet_of,
            coefficient,
            witness,
        };
        g.check_witness()?;
        Ok(g)
    }

    fn check_witness(&self) -> Result<()> {
        let f = &self.witness;
        for j in 0..self.len() {
            for &(i, _) in self.boundary.column(j) {
                let paired = self.cofacet_of[i] == Some(j);
                if f[i] > f[j] || (f[i] == f[j]) != paired {
                    return Err(Error::InvalidGradient(format!(
                        "witness fails on facet pair ({i}, {j}): {} vs {}",
                        f[i], f[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn basis(&self) -> &ChangeOfBasis {
        &self.basis
    }

    /// Column `j` is the boundary of basis element `j` in basis coordinates.
    pub fn boundary(&self) -> &SparseColumnMatrix {
        &self.boundary
    }

    /// Pairs `(facet, cofacet)` sorted by facet.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn witness(&self) -> &[usize] {
        &self.witness
    }

    /// The gradient cofacet paired with gradient facet `a`.
    #[inline]
    pub fn cofacet_of(&self, a: usize) -> Option<usize> {
        self.cofacet_of[a]
    }

    /// The gradient facet paired with gradient cofacet `b`.
    #[inline]
    pub fn facet_of(&self, b: usize) -> Option<usize> {
        self.facet_of[b]
    }

    /// `<∂b, a>` for the pair `(a, b)`; zero if `a` is not a gradient facet.
    #[inline]
    pub fn pair_coefficient(&self, a: usize) -> u32 {
        self.coefficient[a]
    }

    pub fn is_critical(&self, i: usize) -> bool {
        self.cofacet_of[i].is_none() && self.facet_of[i].is_none()
    }

    pub fn critical(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_critical(i)).collect()
    }

    /// `pivot(∂b) = a` for every pair whose facet has degree `n`.
    pub fn is_reduced_in_degree(&self, n: usize) -> bool {
        self.pairs
            .iter()
            .filter(|&&(a, _)| self.dims[a] == n)
            .all(|&(a, b)| self.boundary.pivot(b) == Some(a))
    }

    pub fn is_reduced(&self) -> bool {
        self.pairs.iter().all(|&(a, b)| self.boundary.pivot(b) == Some(a))
    }

    /// The boundaries of gradient cofacets span all `n`-boundaries.
    pub fn generates_boundaries(&self, n: usize) -> bool {
        let cofacets = self
            .pairs
            .iter()
            .filter(|&&(a, _)| self.dims[a] == n)
            .map(|&(_, b)| self.boundary.column(b).to_vec());
        let all = (0..self.len())
            .filter(|&j| self.dims[j] == n + 1)
            .map(|j| self.boundary.column(j).to_vec());
        rank(cofacets, self.field) == rank(all, self.field)
    }

    /// The gradient restricted to the pairs with `keep[k]`, in the order of
    /// [`pairs`](Self::pairs).
    pub fn sub_gradient(&self, keep: &[bool]) -> Result<AlgebraicGradient> {
        let pairs: Vec<(usize, usize)> = self
            .pairs
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(&p, _)| p)
            .collect();
        let mut dropped = vec![false; self.len()];
        for (&(_, b), &k) in self.pairs.iter().zip(keep) {
            dropped[b] = !k;
        }
        // lifting dropped cofacets by one half step separates their pairs
        let witness = (0..self.len())
            .map(|i| 2 * self.witness[i] + dropped[i] as usize)
            .collect();
        AlgebraicGradient::new(
            self.kind,
            self.basis.clone(),
            self.boundary.clone(),
            self.dims.clone(),
            pairs,
            witness,
        )
    }
}

/// Boundary of every basis element, in basis coordinates.
fn boundary_in_basis(d: &SparseColumnMatrix, basis: &ChangeOfBasis) -> SparseColumnMatrix {
    let field = basis.field;
    let cols = (0..d.len())
        .map(|j| basis.from_original(&d.apply(basis.elements.column(j), field)))
        .collect();
    SparseColumnMatrix::from_columns(cols)
}

/// Pairs of the reduction `(pivot(R_j), S_j)` on the reduction basis.
pub fn reduction_gradient(res: &ReductionResult) -> Result<AlgebraicGradient> {
    let n = res.len();
    let field = res.field();
    let cols = (0..n)
        .map(|i| {
            if res.is_death(i) {
                res.s().column(i).to_vec()
            } else {
                vec![(i, 1)]
            }
        })
        .collect();
    let basis = ChangeOfBasis::new(SparseColumnMatrix::from_columns(cols), field)?;
    let boundary = boundary_in_basis(res.d(), &basis);
    let mut witness: Vec<usize> = (0..n).collect();
    for &(i, j) in res.pairs() {
        witness[j] = i;
    }
    AlgebraicGradient::new(
        BasisKind::Reduction,
        basis,
        boundary,
        res.dims().to_vec(),
        res.pairs().to_vec(),
        witness,
    )
}

/// Pairs `(R_j, S_j)` on the decomposition basis.
pub fn decomposition_gradient(res: &ReductionResult) -> Result<AlgebraicGradient> {
    let n = res.len();
    let field = res.field();
    let mut cols: Vec<Vec<(usize, u32)>> = (0..n).map(|i| res.s().column(i).to_vec()).collect();
    let mut witness: Vec<usize> = (0..n).collect();
    for &(i, j) in res.pairs() {
        cols[i] = res.r().column(j).to_vec();
        witness[i] = j;
    }
    let basis = ChangeOfBasis::new(SparseColumnMatrix::from_columns(cols), field)?;
    let boundary = boundary_in_basis(res.d(), &basis);
    AlgebraicGradient::new(
        BasisKind::Decomposition,
        basis,
        boundary,
        res.dims().to_vec(),
        res.pairs().to_vec(),
        witness,
    )
}

/// The apparent pairs of a filtration as a gradient on the original basis.
pub fn apparent_pairs_gradient(d: &BoundaryMatrix) -> Result<AlgebraicGradient> {
    let n = d.len();
    let pairs = d.apparent_pairs();
    let mut witness: Vec<usize> = (0..n).collect();
    for &(i, j) in &pairs {
        witness[i] = j;
    }
    AlgebraicGradient::new(
        BasisKind::Original,
        ChangeOfBasis::identity(n, d.field),
        d.matrix.clone(),
        d.dims.clone(),
        pairs,
        witness,
    )
}

/// An arbitrary pairing on the original basis, validated against `witness`.
pub fn original_gradient(
    d: &BoundaryMatrix,
    pairs: Vec<(usize, usize)>,
    witness: Vec<usize>,
) -> Result<AlgebraicGradient> {
    AlgebraicGradient::new(
        BasisKind::Original,
        ChangeOfBasis::identity(d.len(), d.field),
        d.matrix.clone(),
        d.dims.clone(),
        pairs,
        witness,
    )
}
