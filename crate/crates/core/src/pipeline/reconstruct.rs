use std::collections::HashMap;

use serde::Serialize;

use crate::chain::Chain;
use crate::complex::Simplex;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::ElementwiseFiltration;
use crate::geometry::{Perturbation, PointCloud};
use crate::morse::{DelaunayMorse, Subcomplex};
use crate::reduction::{barcode, exhaustive_reduce, filtration_boundary_matrix, Bar, ReductionResult};
use crate::value::Value;

#[derive(Clone, Copy, Debug)]
pub struct ReconstructOptions {
    /// Homology dimension of the feature; defaults to one less than the ambient dimension.
    pub dim: Option<usize>,
    pub field: Field,
    pub perturb: bool,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        ReconstructOptions {
            dim: None,
            field: Field::z2(),
            perturb: false,
        }
    }
}

/// A barcode interval in radius units, with exact squared radii.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalRecord {
    pub dim: usize,
    pub birth: f64,
    pub death: Option<f64>,
    pub birth_sq: String,
    pub death_sq: Option<String>,
    pub birth_simplex: Simplex,
    pub death_simplex: Option<Simplex>,
    pub zero_persistence: bool,
}

impl From<&Bar> for IntervalRecord {
    fn from(b: &Bar) -> Self {
        IntervalRecord {
            dim: b.dim,
            birth: radius(&b.birth),
            death: b.death.as_ref().map(radius),
            birth_sq: exact(&b.birth),
            death_sq: b.death.as_ref().map(exact),
            birth_simplex: b.birth_simplex.clone(),
            death_simplex: b.death_simplex.clone(),
            zero_persistence: b.is_zero_persistence(),
        }
    }
}

pub(crate) fn radius(v: &Value) -> f64 {
    v.to_f64().max(0.0).sqrt()
}

fn exact(v: &Value) -> String {
    v.as_rational().to_string()
}

#[derive(Clone, Debug, Serialize)]
pub struct ChosenInterval {
    #[serde(flatten)]
    pub interval: IntervalRecord,
    /// Ratio of death radius to birth radius.
    pub ratio: f64,
    pub birth_index: usize,
    pub death_index: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleTerm {
    pub simplex: Simplex,
    /// Signed representative of the coefficient in Z/p.
    pub coefficient: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexSummary {
    /// Number of simplices per dimension.
    pub counts: Vec<usize>,
    pub simplices: Vec<Simplex>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub points: usize,
    pub ambient_dim: usize,
    pub field: u32,
    pub perturbation: Option<Perturbation>,
    pub delaunay_simplices: usize,
    pub version: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReconstructionReport {
    pub interval: ChosenInterval,
    pub cycle: Vec<CycleTerm>,
    pub wrap_at_birth: ComplexSummary,
    /// Support of the cycle lies in the Wrap complex at the birth radius.
    pub containment: bool,
    /// Every edge of the cycle has exactly two incident triangles; only
    /// reported for 2-cycles over Z/2.
    pub watertight: Option<bool>,
    pub metadata: Metadata,
}

/// Everything produced by a reconstruction run.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub report: ReconstructionReport,
    pub cloud: PointCloud,
    pub filtration: ElementwiseFiltration,
    pub barcode: Vec<Bar>,
    /// The cycle in filtration coordinates.
    pub cycle: Chain,
    pub wrap: Subcomplex,
}

impl Reconstruction {
    /// Simplices of the cycle support with their coefficients.
    pub fn cycle_simplices(&self) -> Vec<(Simplex, u32)> {
        self.cycle
            .entries()
            .iter()
            .map(|&(i, c)| (self.filtration.simplex(i).clone(), c))
            .collect()
    }
}

/// Shared front half of the pipeline: Delaunay filtration and its reduction.
pub(crate) struct Persistence {
    pub cloud: PointCloud,
    pub morse: DelaunayMorse,
    pub reduction: ReductionResult,
}

pub(crate) fn persistence(cloud: &PointCloud, field: Field, perturb: bool) -> Result<Persistence> {
    let cloud = if perturb { cloud.perturbed()? } else { cloud.clone() };
    let morse = DelaunayMorse::new(&cloud)?;
    let reduction = exhaustive_reduce(&filtration_boundary_matrix(&morse.filtration, field));
    Ok(Persistence {
        cloud,
        morse,
        reduction,
    })
}

/// The barcode of the Delaunay filtration.
pub fn compute_barcode(cloud: &PointCloud, field: Field, perturb: bool) -> Result<Vec<Bar>> {
    let p = persistence(cloud, field, perturb)?;
    Ok(barcode(&p.reduction, &p.morse.filtration))
}

/// The finite `dim`-dimensional bar with positive birth and positive
/// persistence maximizing death/birth; ties go to the earlier death index.
pub fn select_feature(bars: &[Bar], dim: usize) -> Option<&Bar> {
    bars.iter()
        .filter(|b| {
            b.dim == dim
                && !b.is_zero_persistence()
                && b.death.is_some()
                && !b.birth.is_zero()
                && !b.birth.is_negative()
        })
        .max_by(|a, b| {
            let (da, db) = (a.death.as_ref().unwrap(), b.death.as_ref().unwrap());
            let lhs = da.as_rational() * b.birth.as_rational();
            let rhs = db.as_rational() * a.birth.as_rational();
            lhs.cmp(&rhs).then_with(|| b.death_index.cmp(&a.death_index))
        })
}

/// Runs the reconstruction heuristic: the most persistent feature's reduced
/// boundary column, checked against the Wrap complex at its birth.
pub fn reconstruct(cloud: &PointCloud, opts: &ReconstructOptions) -> Result<Reconstruction> {
    let ambient = cloud.dim();
    let dim = opts.dim.unwrap_or(ambient - 1);
    let Persistence {
        cloud,
        morse,
        reduction,
    } = persistence(cloud, opts.field, opts.perturb)?;
    let filt = &morse.filtration;
    let bars = barcode(&reduction, filt);
    let bar = select_feature(&bars, dim).ok_or(Error::NoFeature(dim))?.clone();
    let death_index = bar.death_index.expect("finite bar");
    let cycle = reduction.r_chain(death_index);
    let wrap = morse.wrap(&bar.birth);

    let outside: Vec<Simplex> = cycle
        .support()
        .filter(|&i| !wrap.contains(filt.complex_index(i)))
        .map(|i| filt.simplex(i).clone())
        .collect();
    if !outside.is_empty() {
        return Err(Error::TheoremViolation {
            what: "reconstructed cycle leaves the Wrap complex at its birth".into(),
            witness: outside,
        });
    }
    let support: Vec<Simplex> = cycle.support().map(|i| filt.simplex(i).clone()).collect();
    let watertight = (dim == 2 && opts.field.prime() == 2).then(|| is_watertight(&support));

    let f = opts.field;
    let death = bar.death.as_ref().unwrap();
    let report = ReconstructionReport {
        interval: ChosenInterval {
            interval: IntervalRecord::from(&bar),
            ratio: radius(death) / radius(&bar.birth),
            birth_index: bar.birth_index,
            death_index,
        },
        cycle: cycle
            .entries()
            .iter()
            .map(|&(i, c)| CycleTerm {
                simplex: filt.simplex(i).clone(),
                coefficient: f.to_signed(c),
            })
            .collect(),
        wrap_at_birth: summarize(&wrap),
        containment: true,
        watertight,
        metadata: Metadata {
            points: cloud.len(),
            ambient_dim: ambient,
            field: f.prime(),
            perturbation: cloud.perturbation().cloned(),
            delaunay_simplices: filt.len(),
            version: env!("CARGO_PKG_VERSION"),
        },
    };
    Ok(Reconstruction {
        report,
        cloud,
        filtration: morse.filtration.clone(),
        barcode: bars,
        cycle,
        wrap,
    })
}

fn summarize(sub: &Subcomplex) -> ComplexSummary {
    let mut simplices: Vec<Simplex> = sub.simplices().cloned().collect();
    simplices.sort();
    let mut counts = Vec::new();
    for s in &simplices {
        if counts.len() <= s.dim() {
            counts.resize(s.dim() + 1, 0);
        }
        counts[s.dim()] += 1;
    }
    ComplexSummary { counts, simplices }
}

/// Every edge of the triangles is shared by exactly two of them.
pub fn is_watertight(triangles: &[Simplex]) -> bool {
    if triangles.is_empty() || triangles.iter().any(|t| t.dim() != 2) {
        return false;
    }
    let mut degree: HashMap<Simplex, usize> = HashMap::new();
    for t in triangles {
        for e in t.facets() {
            *degree.entry(e).or_default() += 1;
        }
    }
    degree.values().all(|&d| d == 2)
}

/// `V - E + F` of the closure of a set of triangles.
pub fn euler_characteristic(triangles: &[Simplex]) -> i64 {
    let mut faces: Vec<Simplex> = triangles.iter().flat_map(|t| t.faces()).collect();
    faces.sort();
    faces.dedup();
    faces.iter().map(|s| if s.dim() % 2 == 0 { 1 } else { -1 }).sum()
}
