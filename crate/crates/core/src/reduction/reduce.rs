use serde::Serialize;

use super::matrix::{BoundaryMatrix, SparseColumnMatrix};
use crate::chain::{add_scaled_entries, Chain};
use crate::complex::Simplex;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::ElementwiseFiltration;
use crate::value::Value;

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReductionKind {
    Standard,
    Exhaustive,
    /// Supplied by the caller through [`ReductionResult::from_parts`].
    Custom,
}

/// Role of a filtration index in the persistence decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexClass {
    /// Paired with the given death index.
    Birth(usize),
    /// Paired with the given birth index.
    Death(usize),
    Essential,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CompatibilityFlags {
    pub totally_reduced: bool,
    pub death_compatible: bool,
    pub apparent_pairs_compatible: bool,
}

/// A reduction `R = D * S` together with its persistence pairs.
#[derive(Clone, Debug)]
pub struct ReductionResult {
    kind: ReductionKind,
    field: Field,
    dims: Vec<usize>,
    d: SparseColumnMatrix,
    r: SparseColumnMatrix,
    s: SparseColumnMatrix,
    pairs: Vec<(usize, usize)>,
    essential: Vec<usize>,
    class: Vec<IndexClass>,
}

/// One interval of a barcode.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bar {
    pub dim: usize,
    pub birth: Value,
    pub death: Option<Value>,
    pub birth_index: usize,
    pub death_index: Option<usize>,
    pub birth_simplex: Simplex,
    pub death_simplex: Option<Simplex>,
}

impl Bar {
    pub fn is_zero_persistence(&self) -> bool {
        self.death.as_ref() == Some(&self.birth)
    }
}

/// Standard left-to-right pivot elimination.
pub fn standard_reduce(d: &BoundaryMatrix) -> ReductionResult {
    standard_reduce_with(d, false)
}

/// Standard reduction, optionally leaving the columns of apparent pairs untouched.
///
/// Such columns are already reduced and no earlier column shares their
/// pivot, so the shortcut never changes the result.
pub fn standard_reduce_with(d: &BoundaryMatrix, apparent_shortcut: bool) -> ReductionResult {
    let n = d.len();
    let field = d.field;
    let mut skip = vec![false; n];
    if apparent_shortcut {
        for (_, j) in d.apparent_pairs() {
            skip[j] = true;
        }
    }
    let mut r = d.matrix.clone();
    let mut s = SparseColumnMatrix::identity(n);
    let mut pivot_col = vec![NONE; n];
    for (j, &skipped) in skip.iter().enumerate() {
        if !skipped {
            while let Some((p, c)) = r.column(j).last().copied() {
                let i = pivot_col[p];
                if i == NONE {
                    break;
                }
                let mu = field.neg(field.div(c, r.pivot_entry(i).unwrap()));
                eliminate(&mut r, &mut s, i, j, mu, field);
            }
        }
        if let Some(p) = r.pivot(j) {
            debug_assert_eq!(pivot_col[p], NONE);
            pivot_col[p] = j;
        }
    }
    ReductionResult::assemble(ReductionKind::Standard, d, r, s)
}

/// Exhaustive reduction: clears every entry of column `j` in a row that is the pivot
/// of an earlier column, scanning rows from the bottom up.
pub fn exhaustive_reduce(d: &BoundaryMatrix) -> ReductionResult {
    let n = d.len();
    let field = d.field;
    let mut r = d.matrix.clone();
    let mut s = SparseColumnMatrix::identity(n);
    let mut pivot_col = vec![NONE; n];
    for j in 0..n {
        let mut bound = usize::MAX;
        loop {
            // largest row below `bound` owned by an earlier pivot
            let col = r.column(j);
            let end = col.partition_point(|e| e.0 < bound);
            let Some(&(row, c)) = col[..end].iter().rev().find(|e| pivot_col[e.0] != NONE) else {
                break;
            };
            let i = pivot_col[row];
            let mu = field.neg(field.div(c, r.pivot_entry(i).unwrap()));
            eliminate(&mut r, &mut s, i, j, mu, field);
            bound = row;
        }
        if let Some(p) = r.pivot(j) {
            pivot_col[p] = j;
        }
    }
    ReductionResult::assemble(ReductionKind::Exhaustive, d, r, s)
}

/// `R_j += mu * R_i` and `S_j += mu * S_i` for `i < j`.
fn eliminate(r: &mut SparseColumnMatrix, s: &mut SparseColumnMatrix, i: usize, j: usize, mu: u32, field: Field) {
    debug_assert!(i < j);
    let (ri, rj) = split_pair(r, i, j);
    add_scaled_entries(rj, ri, mu, field);
    let (si, sj) = split_pair(s, i, j);
    add_scaled_entries(sj, si, mu, field);
}

type Column = Vec<(usize, u32)>;

fn split_pair(m: &mut SparseColumnMatrix, i: usize, j: usize) -> (&Column, &mut Column) {
    let (lo, hi) = m.columns_mut().split_at_mut(j);
    (&lo[i], &mut hi[0])
}

impl ReductionResult {
    fn assemble(kind: ReductionKind, d: &BoundaryMatrix, r: SparseColumnMatrix, s: SparseColumnMatrix) -> Self {
        let n = d.len();
        let mut class = vec![IndexClass::Essential; n];
        let mut pairs = Vec::new();
        for j in 0..n {
            if let Some(i) = r.pivot(j) {
                pairs.push((i, j));
                class[i] = IndexClass::Birth(j);
                class[j] = IndexClass::Death(i);
            }
        }
        pairs.sort_unstable();
        let essential = (0..n).filter(|&i| class[i] == IndexClass::Essential).collect();
        ReductionResult {
            kind,
            field: d.field,
            dims: d.dims.clone(),
            d: d.matrix.clone(),
            r,
            s,
            pairs,
            essential,
            class,
        }
    }

    /// Wraps a caller-supplied pair `(R, S)`; fails unless `R = D * S`
    /// with `R` reduced and `S` a valid reduction matrix.
    pub fn from_parts(d: &BoundaryMatrix, r: SparseColumnMatrix, s: SparseColumnMatrix) -> Result<Self> {
        if r.len() != d.len() || s.len() != d.len() {
            return Err(Error::InvalidGradient("matrix sizes differ".into()));
        }
        let res = Self::assemble(ReductionKind::Custom, d, r, s);
        if !res.verify_product() || !res.is_reduced() || !res.is_valid_reduction_matrix() {
            return Err(Error::InvalidGradient("not a reduction R = D * S".into()));
        }
        Ok(res)
    }

    pub fn kind(&self) -> ReductionKind {
        self.kind
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn d(&self) -> &SparseColumnMatrix {
        &self.d
    }

    pub fn r(&self) -> &SparseColumnMatrix {
        &self.r
    }

    pub fn s(&self) -> &SparseColumnMatrix {
        &self.s
    }

    /// Index persistence pairs `(birth, death)`, sorted by birth.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn essential(&self) -> &[usize] {
        &self.essential
    }

    pub fn class(&self, i: usize) -> IndexClass {
        self.class[i]
    }

    pub fn is_death(&self, i: usize) -> bool {
        matches!(self.class[i], IndexClass::Death(_))
    }

    pub fn is_birth(&self, i: usize) -> bool {
        matches!(self.class[i], IndexClass::Birth(_))
    }

    pub fn is_essential(&self, i: usize) -> bool {
        self.class[i] == IndexClass::Essential
    }

    /// Column `R_j` as a chain (the boundary of `S_j`).
    pub fn r_chain(&self, j: usize) -> Chain {
        self.r.chain(j, self.dims[j].saturating_sub(1))
    }

    /// Column `S_j` as a chain.
    pub fn s_chain(&self, j: usize) -> Chain {
        self.s.chain(j, self.dims[j])
    }

    /// Exact check of `R = D * S`.
    pub fn verify_product(&self) -> bool {
        self.d.multiply(&self.s, self.field) == self.r
    }

    /// Non-zero columns of `R` have pairwise distinct pivots.
    pub fn is_reduced(&self) -> bool {
        let mut seen = vec![false; self.len()];
        (0..self.len()).all(|j| match self.r.pivot(j) {
            Some(p) => !std::mem::replace(&mut seen[p], true),
            None => true,
        })
    }

    /// No column has a non-zero entry in a row that is an earlier column's pivot.
    pub fn is_totally_reduced(&self) -> bool {
        let mut owner = vec![NONE; self.len()];
        for j in 0..self.len() {
            if let Some(p) = self.r.pivot(j) {
                owner[p] = j;
            }
        }
        (0..self.len()).all(|j| self.r.column(j).iter().all(|e| owner[e.0] == NONE || owner[e.0] >= j))
    }

    /// For every death index `j`, `S_j` is supported on death indices.
    pub fn is_death_compatible(&self) -> bool {
        (0..self.len())
            .filter(|&j| self.is_death(j))
            .all(|j| self.s.column(j).iter().all(|e| self.is_death(e.0)))
    }

    /// For every apparent pair `(i, j)`, `S_j` is the unit vector `e_j`.
    pub fn is_apparent_pairs_compatible(&self) -> bool {
        let b = BoundaryMatrix {
            matrix: self.d.clone(),
            dims: self.dims.clone(),
            field: self.field,
        };
        b.apparent_pairs().iter().all(|&(_, j)| self.s.column(j) == [(j, 1)])
    }

    /// `S` is unit upper triangular and relates only equal dimensions.
    pub fn is_valid_reduction_matrix(&self) -> bool {
        self.s.is_unit_upper_triangular()
            && (0..self.len()).all(|j| self.s.column(j).iter().all(|e| self.dims[e.0] == self.dims[j]))
    }

    pub fn compatibility(&self) -> CompatibilityFlags {
        CompatibilityFlags {
            totally_reduced: self.is_totally_reduced(),
            death_compatible: self.is_death_compatible(),
            apparent_pairs_compatible: self.is_apparent_pairs_compatible(),
        }
    }

    /// The reduction of the first `m` columns, which is what either
    /// algorithm computes on that prefix of the filtration.
    pub fn restrict(&self, m: usize) -> ReductionResult {
        let cut = |mat: &SparseColumnMatrix| SparseColumnMatrix::from_columns(mat.columns()[..m].to_vec());
        let b = BoundaryMatrix {
            matrix: cut(&self.d),
            dims: self.dims[..m].to_vec(),
            field: self.field,
        };
        ReductionResult::assemble(self.kind, &b, cut(&self.r), cut(&self.s))
    }

    /// Number of essential indices in each dimension.
    pub fn betti_numbers(&self) -> Vec<usize> {
        let top = self.dims.iter().copied().max().map_or(0, |d| d + 1);
        let mut b = vec![0; top];
        for &i in &self.essential {
            b[self.dims[i]] += 1;
        }
        b
    }
}

/// Intervals `[f(birth), f(death))` and `[f(birth), inf)`, ordered by
/// dimension and then birth index.
pub fn barcode(res: &ReductionResult, filtration: &ElementwiseFiltration) -> Vec<Bar> {
    let mut bars: Vec<Bar> = res
        .pairs()
        .iter()
        .map(|&(i, j)| Bar {
            dim: res.dims()[i],
            birth: filtration.value(i).clone(),
            death: Some(filtration.value(j).clone()),
            birth_index: i,
            death_index: Some(j),
            birth_simplex: filtration.simplex(i).clone(),
            death_simplex: Some(filtration.simplex(j).clone()),
        })
        .chain(res.essential().iter().map(|&i| Bar {
            dim: res.dims()[i],
            birth: filtration.value(i).clone(),
            death: None,
            birth_index: i,
            death_index: None,
            birth_simplex: filtration.simplex(i).clone(),
            death_simplex: None,
        }))
        .collect();
    bars.sort_by_key(|b| (b.dim, b.birth_index));
    bars
}
