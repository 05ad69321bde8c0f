//! Boundary matrix reduction, persistence pairs and the algebraic gradients
//! they induce.

mod gradient;
mod matrix;
mod reduce;

pub use gradient::{
    apparent_pairs_gradient, decomposition_gradient, original_gradient, reduction_gradient, AlgebraicGradient,
    BasisKind, ChangeOfBasis,
};
pub use matrix::{filtration_boundary_matrix, rank, BoundaryMatrix, SparseColumnMatrix};
pub use reduce::{
    barcode, exhaustive_reduce, standard_reduce, standard_reduce_with, Bar, CompatibilityFlags, IndexClass,
    ReductionKind, ReductionResult,
};
