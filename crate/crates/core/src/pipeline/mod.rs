//! End-to-end reconstruction: loading, feature selection, verification and export.

mod export;
mod io;
mod reconstruct;
mod verify;

pub use export::{export, ExportedFiles};
pub use io::{load_points, parse_points, InputFormat};
pub use reconstruct::{
    compute_barcode, euler_characteristic, is_watertight, reconstruct, select_feature, ChosenInterval, ComplexSummary,
    CycleTerm, IntervalRecord, Metadata, ReconstructOptions, Reconstruction, ReconstructionReport,
};
pub use verify::{verify_theorems, CheckCount, Failure, RGrid, VerificationReport};

use crate::error::Result;
use crate::geometry::PointCloud;
use crate::random;

/// Twelve evenly spaced points on the unit circle. They are cocircular, so
/// reconstruction needs the perturbation flag.
pub fn circle_sample() -> Result<PointCloud> {
    random::circle_cloud(12, 6)
}

/// `n` seeded points on the unit sphere, with six decimals.
pub fn sphere_sample(n: usize, seed: u64) -> Result<PointCloud> {
    random::sphere_cloud(&mut random::rng(seed), n, 3, 6)
}
