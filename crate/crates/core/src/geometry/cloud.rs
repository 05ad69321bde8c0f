use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::value::Value;

/// Integer coordinates are kept below this magnitude so that coordinate
/// differences fit an `i128` and converting them to `f64` stays finite.
const COORD_LIMIT: i128 = 1 << 100;

/// Target extent (in integer units) when rescaling for perturbation.
const PERTURB_EXTENT_BITS: u32 = 62;

/// Perturbation amplitude relative to the bounding-box diagonal, as a power of two.
const PERTURB_REL_BITS: u32 = 40;

/// Metadata describing a symbolic-free deterministic perturbation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Perturbation {
    /// Maximum displacement per coordinate, in input units.
    pub amplitude: f64,
    /// `amplitude / bbox_diagonal`.
    pub relative: f64,
}

/// A finite point set in R^2 or R^3 with exact coordinates.
///
/// Coordinates are parsed as decimals and stored as integers at a common
/// scale (after translating the bounding-box corner to the origin), so every
/// predicate and every squared radius is computed exactly.
#[derive(Clone, Debug)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<i128>,
    input: Vec<f64>,
    origin: Vec<BigRational>,
    denom: BigInt,
    perturbation: Option<Perturbation>,
}

/// A decimal literal as `mantissa * 10^exp`.
fn parse_decimal(s: &str) -> Option<(BigInt, i64)> {
    let s = s.trim();
    let (body, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match body.as_bytes().first()? {
        b'-' => (true, &body[1..]),
        b'+' => (false, &body[1..]),
        _ => (false, body),
    };
    let (int_part, frac_part) = match body.find('.') {
        Some(k) => (&body[..k], &body[k + 1..]),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut m: BigInt = digits.parse().ok()?;
    if neg {
        m = -m;
    }
    Some((m, exp - frac_part.len() as i64))
}

fn pow10(k: u32) -> BigInt {
    BigInt::from(10).pow(k)
}

/// splitmix64, used for the deterministic perturbation.
fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

impl PointCloud {
    /// Parses rows of decimal literals. Every row must have the same length (2 or 3).
    pub fn from_decimal_rows<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let dim = rows[0].len();
        if dim != 2 && dim != 3 {
            return Err(Error::UnsupportedDimension(dim));
        }
        let mut parsed = Vec::with_capacity(rows.len() * dim);
        let mut input = Vec::with_capacity(rows.len() * dim);
        for (line, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Parse {
                    line: line + 1,
                    message: format!("expected {dim} coordinates, found {}", row.len()),
                });
            }
            for tok in row {
                let tok = tok.as_ref();
                let d = parse_decimal(tok).ok_or_else(|| Error::Coordinate(tok.to_string()))?;
                let f: f64 = tok.trim().parse().map_err(|_| Error::Coordinate(tok.to_string()))?;
                if !f.is_finite() {
                    return Err(Error::Coordinate(tok.to_string()));
                }
                parsed.push(d);
                input.push(f);
            }
        }
        // common scale 10^k with k the largest number of decimal places
        let k = parsed.iter().map(|(_, e)| (-e).max(0)).max().unwrap_or(0);
        if k > 400 {
            return Err(Error::Coordinate(format!("{k} decimal places")));
        }
        let scaled: Vec<BigInt> = parsed
            .into_iter()
            .map(|(m, e)| {
                let shift = (k + e) as u32;
                if shift > 400 {
                    return Err(Error::Coordinate(format!("{m}e{e}")));
                }
                Ok(m * pow10(shift))
            })
            .collect::<Result<_>>()?;
        let denom = pow10(k as u32);
        let n = scaled.len() / dim;
        let mut origin = Vec::with_capacity(dim);
        let mut min_int = Vec::with_capacity(dim);
        for a in 0..dim {
            let m = (0..n).map(|i| &scaled[i * dim + a]).min().unwrap().clone();
            origin.push(BigRational::new(m.clone(), denom.clone()));
            min_int.push(m);
        }
        let mut coords = Vec::with_capacity(scaled.len());
        for (idx, x) in scaled.iter().enumerate() {
            let t = x - &min_int[idx % dim];
            let v = t
                .to_i128()
                .filter(|v| v.abs() < COORD_LIMIT)
                .ok_or_else(|| Error::Coordinate(format!("{}", input[idx])))?;
            coords.push(v);
        }
        let cloud = PointCloud {
            dim,
            coords,
            input,
            origin,
            denom,
            perturbation: None,
        };
        cloud.check_duplicates()?;
        Ok(cloud)
    }

    /// Converts each float through its shortest round-trip decimal form.
    pub fn from_f64(points: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<String>> = points
            .iter()
            .map(|p| p.iter().map(|x| format!("{x:e}")).collect())
            .collect();
        Self::from_decimal_rows(&rows)
    }

    fn check_duplicates(&self) -> Result<()> {
        let mut seen: HashMap<&[i128], usize> = HashMap::with_capacity(self.len());
        for i in 0..self.len() {
            if let Some(&j) = seen.get(self.point(i)) {
                return Err(Error::DuplicatePoint(j, i));
            }
            seen.insert(self.point(i), i);
        }
        Ok(())
    }

    /// Applies a deterministic perturbation of relative size `2^-40` of the
    /// bounding-box diagonal. Coordinates are rescaled by a power of two
    /// first so the displacement is representable exactly.
    pub fn perturbed(&self) -> Result<Self> {
        let n = self.len();
        let extent: Vec<i128> = (0..self.dim)
            .map(|a| (0..n).map(|i| self.point(i)[a]).max().unwrap_or(0))
            .collect();
        let max_extent = extent.iter().copied().max().unwrap_or(0).max(1);
        let bits = 128 - max_extent.leading_zeros();
        let shift = PERTURB_EXTENT_BITS.saturating_sub(bits);
        let diag_f: f64 = extent
            .iter()
            .map(|&e| ((e << shift) as f64).powi(2))
            .sum::<f64>()
            .sqrt();
        let amplitude = ((diag_f / 2f64.powi(PERTURB_REL_BITS as i32)) as i128).max(1);
        let coords: Vec<i128> = self
            .coords
            .iter()
            .enumerate()
            .map(|(idx, &x)| {
                let h = (mix(idx as u64) >> 11) as i128 - (1 << 52);
                let offset = h * amplitude / (1 << 52);
                (x << shift) + offset
            })
            .collect();
        if coords.iter().any(|x| x.abs() >= COORD_LIMIT) {
            return Err(Error::Coordinate("perturbed coordinates out of range".into()));
        }
        let denom = &self.denom * (BigInt::one() << shift);
        let denom_f = denom.to_f64().unwrap_or(f64::INFINITY);
        let cloud = PointCloud {
            dim: self.dim,
            coords,
            input: self.input.clone(),
            origin: self.origin.clone(),
            denom,
            perturbation: Some(Perturbation {
                amplitude: amplitude as f64 / denom_f,
                relative: (amplitude as f64) / diag_f.max(1.0),
            }),
        };
        cloud.check_duplicates()?;
        Ok(cloud)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Exact integer coordinates of point `i` (translated and scaled).
    #[inline]
    pub fn point(&self, i: usize) -> &[i128] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Coordinates as given in the input.
    pub fn input_point(&self, i: usize) -> &[f64] {
        &self.input[i * self.dim..(i + 1) * self.dim]
    }

    pub fn perturbation(&self) -> Option<&Perturbation> {
        self.perturbation.as_ref()
    }

    /// Integer units per input unit.
    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    /// Converts a squared length in integer units to input units.
    pub fn squared_length_to_world(&self, r2: &BigRational) -> Value {
        let d2 = &self.denom * &self.denom;
        Value::from(r2 / BigRational::from_integer(d2))
    }

    /// Converts an exact point in integer units to input coordinates.
    pub fn to_world(&self, p: &[BigRational]) -> Vec<f64> {
        p.iter()
            .zip(&self.origin)
            .map(|(x, o)| {
                let w = x / BigRational::from_integer(self.denom.clone()) + o;
                Value::from(w).to_f64()
            })
            .collect()
    }
}
