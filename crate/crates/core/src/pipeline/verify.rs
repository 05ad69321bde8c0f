use rayon::prelude::*;
use serde::Serialize;

use crate::complex::Simplex;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::flow::lex_minimal_cycle;
use crate::geometry::PointCloud;
use crate::morse::{DelaunayMorse, Subcomplex};
use crate::value::Value;

use super::reconstruct::{persistence, radius};

/// Radii at which the Wrap containment is checked.
#[derive(Clone, Debug, PartialEq)]
pub enum RGrid {
    /// Every distinct value of the radius function.
    Auto,
    /// Explicit radii (not squared).
    Radii(Vec<f64>),
}

impl RGrid {
    fn squared_levels(&self, morse: &DelaunayMorse) -> Result<Vec<Value>> {
        match self {
            RGrid::Auto => {
                let mut v = morse.filtration.values().to_vec();
                v.dedup();
                Ok(v)
            }
            RGrid::Radii(rs) => {
                let mut out = Vec::with_capacity(rs.len());
                for &r in rs {
                    let v = Value::from_f64(r).ok_or_else(|| Error::Coordinate(r.to_string()))?;
                    out.push(&v * &v);
                }
                Ok(out)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckCount {
    pub passed: usize,
    pub failed: usize,
}

impl CheckCount {
    fn record(&mut self, ok: bool) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }

    fn merge(self, other: CheckCount) -> CheckCount {
        CheckCount {
            passed: self.passed + other.passed,
            failed: self.failed + other.failed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    /// Which check failed: `wrap`, `pair` or `descending`.
    pub check: &'static str,
    /// Radius at which the check was made.
    pub r: f64,
    /// The simplex whose chain was checked.
    pub witness: Simplex,
    /// Support simplices outside the Wrap complex.
    pub outside: Vec<Simplex>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub points: usize,
    pub field: u32,
    pub grid_size: usize,
    /// Lex-minimal class representatives of `Del_r` lie in `Wrap_r`.
    pub wrap_containment: CheckCount,
    /// Reduced columns of non-zero persistence pairs lie in the Wrap complex
    /// at the birth radius.
    pub pair_containment: CheckCount,
    /// Reduction-matrix columns of critical simplices lie in their descending complex.
    pub descending_containment: CheckCount,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn is_success(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn total(&self) -> CheckCount {
        self.wrap_containment
            .merge(self.pair_containment)
            .merge(self.descending_containment)
    }
}

fn outside(wrap: &Subcomplex, morse: &DelaunayMorse, support: impl Iterator<Item = usize>) -> Vec<Simplex> {
    support
        .filter(|&i| !wrap.contains(morse.filtration.complex_index(i)))
        .map(|i| morse.filtration.simplex(i).clone())
        .collect()
}

/// Checks Wrap containment of lex-minimal cycles on every radius of `grid`,
/// and of reduced columns for every persistence pair and critical simplex.
pub fn verify_theorems(cloud: &PointCloud, grid: &RGrid, field: Field, perturb: bool) -> Result<VerificationReport> {
    let p = persistence(cloud, field, perturb)?;
    let morse = &p.morse;
    let res = &p.reduction;
    let filt = &morse.filtration;
    let levels = grid.squared_levels(morse)?;

    let per_level: Vec<(CheckCount, Vec<Failure>)> = levels
        .par_iter()
        .map(|level| -> Result<_> {
            let wrap = morse.wrap(level);
            let sub = res.restrict(filt.sublevel_len(level));
            let mut count = CheckCount::default();
            let mut failures = Vec::new();
            for &e in sub.essential() {
                let z = lex_minimal_cycle(&sub, &sub.s_chain(e))?;
                let out = outside(&wrap, morse, z.support());
                count.record(out.is_empty());
                if !out.is_empty() {
                    failures.push(Failure {
                        check: "wrap",
                        r: radius(level),
                        witness: filt.simplex(e).clone(),
                        outside: out,
                    });
                }
            }
            Ok((count, failures))
        })
        .collect::<Result<_>>()?;

    let mut wrap_containment = CheckCount::default();
    let mut failures = Vec::new();
    for (c, f) in per_level {
        wrap_containment = wrap_containment.merge(c);
        failures.extend(f);
    }

    let mut pair_containment = CheckCount::default();
    for &(i, j) in res.pairs() {
        if filt.value(i) == filt.value(j) {
            continue;
        }
        let wrap = morse.wrap(filt.value(i));
        let out = outside(&wrap, morse, res.r_chain(j).support());
        pair_containment.record(out.is_empty());
        if !out.is_empty() {
            failures.push(Failure {
                check: "pair",
                r: radius(filt.value(i)),
                witness: filt.simplex(j).clone(),
                outside: out,
            });
        }
    }

    let mut descending_containment = CheckCount::default();
    for pos in 0..filt.len() {
        if !morse.partition.is_critical(filt.complex_index(pos)) || res.is_birth(pos) {
            continue;
        }
        let wrap = morse.wrap(filt.value(pos));
        let out = outside(&wrap, morse, res.s_chain(pos).support());
        descending_containment.record(out.is_empty());
        if !out.is_empty() {
            failures.push(Failure {
                check: "descending",
                r: radius(filt.value(pos)),
                witness: filt.simplex(pos).clone(),
                outside: out,
            });
        }
    }

    Ok(VerificationReport {
        points: p.cloud.len(),
        field: field.prime(),
        grid_size: levels.len(),
        wrap_containment,
        pair_containment,
        descending_containment,
        failures,
    })
}
