use std::fmt::Write as _;

use thiserror::Error;

use crate::complex::Simplex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a supported prime modulus")]
    InvalidField(u32),

    #[error("simplex must have at least one vertex")]
    EmptySimplex,

    #[error("simplex {0} is not in the complex")]
    NotInComplex(Simplex),

    #[error("function is not monotone: f({face}) > f({coface})")]
    NotMonotone { face: Simplex, coface: Simplex },

    #[error("filtration prefix ending at {0} is not a subcomplex")]
    NotFaceClosed(Simplex),

    #[error("chains of degree {0} and {1} cannot be compared")]
    DegreeMismatch(usize, usize),

    #[error("chain is not a cycle")]
    NotACycle,

    #[error("point set is empty")]
    EmptyPointSet,

    #[error("points {} are affinely dependent", fmt_indices(.0))]
    AffinelyDependent(Vec<usize>),

    #[error("input is not in general position: points {} are {kind}", fmt_indices(points))]
    Degenerate { kind: &'static str, points: Vec<usize> },

    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),

    #[error("unsupported ambient dimension {0} (expected 2 or 3)")]
    UnsupportedDimension(usize),

    #[error("coordinate {0:?} cannot be represented exactly")]
    Coordinate(String),

    #[error("not a Delaunay complex: {0}")]
    NotDelaunay(String),

    #[error(
        "function is not a generalized discrete Morse function; witness class {}",
        fmt_simplices(witness)
    )]
    NotGeneralizedMorse { witness: Vec<Simplex> },

    #[error("simplex {0} is not critical")]
    NotCritical(Simplex),

    #[error("invalid gradient: {0}")]
    InvalidGradient(String),

    #[error("gradient is not reduced in degree {degree}: pivot of the boundary of {cofacet} is not {facet}")]
    GradientNotReduced {
        degree: usize,
        facet: usize,
        cofacet: usize,
    },

    #[error("flow did not stabilize within {0} steps")]
    FlowDidNotStabilize(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no finite interval with positive birth in dimension {0}")]
    NoFeature(usize),

    #[error("invariant violated: {what}; witness {}", fmt_simplices(witness))]
    TheoremViolation { what: String, witness: Vec<Simplex> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors that can only come from a bug, never from bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::TheoremViolation { .. } | Error::FlowDidNotStabilize(_))
    }
}

fn fmt_indices(idx: &[usize]) -> String {
    let mut s = String::from("{");
    for (k, i) in idx.iter().enumerate() {
        if k > 0 {
            s.push(',');
        }
        let _ = write!(s, "{i}");
    }
    s.push('}');
    s
}

fn fmt_simplices(s: &[Simplex]) -> String {
    let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(" "))
}
