pub mod chain;
pub mod complex;
pub mod error;
pub mod field;
pub mod filtration;
pub mod flow;
pub mod geometry;
pub mod morse;
pub mod pipeline;
pub mod random;
pub mod reduction;
pub mod value;

pub use chain::{Chain, LexOrdering};
pub use complex::{Simplex, SimplicialComplex, Vertex};
pub use error::{Error, Result};
pub use field::Field;
pub use filtration::ElementwiseFiltration;
pub use flow::FlowContext;
pub use geometry::{Ball, PointCloud};
pub use morse::{DiscretePairing, GradientPartition, Interval, Subcomplex};
pub use reduction::{AlgebraicGradient, Bar, ReductionResult, SparseColumnMatrix};
pub use value::Value;
