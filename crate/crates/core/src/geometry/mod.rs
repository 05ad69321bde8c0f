//! Exact point-cloud geometry: balls, Delaunay triangulations and radius functions.

mod ball;
mod cloud;
mod delaunay;
mod exact;
mod radius;

pub use ball::Ball;
pub use cloud::{Perturbation, PointCloud};
pub use delaunay::{delaunay_complex, Delaunay};
pub use radius::{cech_complex, cech_radius_values, delaunay_radius_values, enclosing_radius_sq};
