use crate::chain::{add_scaled_entries, Chain};
use crate::field::Field;
use crate::filtration::ElementwiseFiltration;

/// A square matrix stored as sorted sparse columns over Z/p.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseColumnMatrix {
    cols: Vec<Vec<(usize, u32)>>,
}

impl SparseColumnMatrix {
    /// Columns must be sorted by row with no zero entries.
    pub fn from_columns(cols: Vec<Vec<(usize, u32)>>) -> Self {
        debug_assert!(cols
            .iter()
            .all(|c| c.windows(2).all(|w| w[0].0 < w[1].0) && c.iter().all(|e| e.1 != 0)));
        SparseColumnMatrix { cols }
    }

    pub fn identity(n: usize) -> Self {
        SparseColumnMatrix {
            cols: (0..n).map(|j| vec![(j, 1)]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    #[inline]
    pub fn column(&self, j: usize) -> &[(usize, u32)] {
        &self.cols[j]
    }

    pub(crate) fn columns_mut(&mut self) -> &mut [Vec<(usize, u32)>] {
        &mut self.cols
    }

    pub fn columns(&self) -> &[Vec<(usize, u32)>] {
        &self.cols
    }

    #[inline]
    pub fn pivot(&self, j: usize) -> Option<usize> {
        self.cols[j].last().map(|e| e.0)
    }

    #[inline]
    pub fn pivot_entry(&self, j: usize) -> Option<u32> {
        self.cols[j].last().map(|e| e.1)
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        match self.cols[j].binary_search_by_key(&i, |e| e.0) {
            Ok(k) => self.cols[j][k].1,
            Err(_) => 0,
        }
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    /// Column `j` as a chain of the given degree.
    pub fn chain(&self, j: usize, degree: usize) -> Chain {
        Chain::from_sorted(degree, self.cols[j].clone())
    }

    /// `self * other`.
    pub fn multiply(&self, other: &SparseColumnMatrix, field: Field) -> SparseColumnMatrix {
        let cols = other.cols.iter().map(|col| self.apply(col, field)).collect();
        SparseColumnMatrix { cols }
    }

    /// `self * v` for a sparse vector `v`.
    pub fn apply(&self, v: &[(usize, u32)], field: Field) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        for &(k, c) in v {
            add_scaled_entries(&mut out, &self.cols[k], c, field);
        }
        out
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.cols
            .iter()
            .enumerate()
            .all(|(j, c)| c.last().is_none_or(|e| e.0 <= j))
    }

    /// Upper triangular with every diagonal entry equal to one.
    pub fn is_unit_upper_triangular(&self) -> bool {
        self.cols.iter().enumerate().all(|(j, c)| c.last() == Some(&(j, 1)))
    }
}

/// The boundary matrix of a filtration, with the dimension of every basis element.
#[derive(Clone, Debug)]
pub struct BoundaryMatrix {
    pub matrix: SparseColumnMatrix,
    pub dims: Vec<usize>,
    pub field: Field,
}

impl BoundaryMatrix {
    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    /// Apparent pairs `(i, j)`: `i` is the pivot of column `j` and `j` is
    /// the first column with a non-zero entry in row `i`.
    pub fn apparent_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut first = vec![usize::MAX; n];
        for j in 0..n {
            for &(i, _) in self.matrix.column(j) {
                if first[i] == usize::MAX {
                    first[i] = j;
                }
            }
        }
        (0..n)
            .filter_map(|j| {
                let i = self.matrix.pivot(j)?;
                (first[i] == j).then_some((i, j))
            })
            .collect()
    }
}

/// The boundary operator in filtration coordinates, with `(-1)^k` signs.
pub fn filtration_boundary_matrix(filtration: &ElementwiseFiltration, field: Field) -> BoundaryMatrix {
    let cols = (0..filtration.len())
        .map(|j| filtration.boundary_chain(j, field).into_entries())
        .collect();
    BoundaryMatrix {
        matrix: SparseColumnMatrix { cols },
        dims: (0..filtration.len()).map(|j| filtration.dim(j)).collect(),
        field,
    }
}

/// Rank of a set of sparse vectors by pivot elimination.
pub fn rank(vectors: impl IntoIterator<Item = Vec<(usize, u32)>>, field: Field) -> usize {
    let mut by_pivot: std::collections::HashMap<usize, Vec<(usize, u32)>> = Default::default();
    for mut v in vectors {
        while let Some(&(p, c)) = v.last() {
            let Some(w) = by_pivot.get(&p) else { break };
            let mu = field.neg(field.div(c, w.last().unwrap().1));
            add_scaled_entries(&mut v, w, mu, field);
        }
        if let Some(&(p, _)) = v.last() {
            by_pivot.insert(p, v);
        }
    }
    by_pivot.len()
}
