//! Exact geometric predicates on integer coordinates.
//!
//! Each predicate first evaluates its determinant in floating point with a
//! conservative error bound and falls back to big-integer arithmetic when
//! the sign is not certified.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Relative error bound used by the floating-point filter. The true bound
/// for determinants up to 4x4 with rounded inputs is below `30 * 2^-53`.
const FILTER_EPS: f64 = 1e-12;

/// Determinant and permanent of an `n x n` matrix (`n <= 4`) by cofactor expansion.
fn det_perm_f64(m: &[[f64; 4]; 4], n: usize) -> (f64, f64) {
    match n {
        0 => (1.0, 1.0),
        1 => (m[0][0], m[0][0].abs()),
        2 => (
            m[0][0] * m[1][1] - m[0][1] * m[1][0],
            (m[0][0] * m[1][1]).abs() + (m[0][1] * m[1][0]).abs(),
        ),
        _ => {
            let mut det = 0.0;
            let mut perm = 0.0;
            for col in 0..n {
                let mut minor = [[0.0; 4]; 4];
                for r in 1..n {
                    let mut cc = 0;
                    for (c, &x) in m[r].iter().enumerate().take(n) {
                        if c != col {
                            minor[r - 1][cc] = x;
                            cc += 1;
                        }
                    }
                }
                let (d, p) = det_perm_f64(&minor, n - 1);
                let term = m[0][col] * d;
                if col % 2 == 0 {
                    det += term;
                } else {
                    det -= term;
                }
                perm += m[0][col].abs() * p;
            }
            (det, perm)
        }
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub(crate) fn det_big(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

fn sign_of(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of `det[p_1 - p_0, ..., p_d - p_0]` for `d + 1` points in R^d.
pub(crate) fn orient(pts: &[&[i128]]) -> i8 {
    let d = pts.len() - 1;
    debug_assert!(pts.iter().all(|p| p.len() == d));
    let mut fm = [[0.0f64; 4]; 4];
    for i in 0..d {
        for a in 0..d {
            fm[i][a] = (pts[i + 1][a] - pts[0][a]) as f64;
        }
    }
    let (det, perm) = det_perm_f64(&fm, d);
    if det.abs() > perm * FILTER_EPS {
        return if det > 0.0 { 1 } else { -1 };
    }
    let m: Vec<Vec<BigInt>> = (0..d)
        .map(|i| (0..d).map(|a| BigInt::from(pts[i + 1][a] - pts[0][a])).collect())
        .collect();
    sign_of(&det_big(m))
}

/// Sign of the lifted determinant with rows `[p_i - q, |p_i - q|^2]`.
fn lifted(pts: &[&[i128]], q: &[i128]) -> i8 {
    let d = q.len();
    let n = d + 1;
    debug_assert_eq!(pts.len(), n);
    let mut fm = [[0.0f64; 4]; 4];
    for i in 0..n {
        let mut lift = 0.0;
        for a in 0..d {
            let x = (pts[i][a] - q[a]) as f64;
            fm[i][a] = x;
            lift += x * x;
        }
        fm[i][d] = lift;
    }
    let (det, perm) = det_perm_f64(&fm, n);
    if det.abs() > perm * FILTER_EPS {
        return if det > 0.0 { 1 } else { -1 };
    }
    let m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let row: Vec<BigInt> = (0..d).map(|a| BigInt::from(pts[i][a] - q[a])).collect();
            let lift: BigInt = row.iter().map(|x| x * x).sum();
            row.into_iter().chain(std::iter::once(lift)).collect()
        })
        .collect();
    sign_of(&det_big(m))
}

/// `+1` if `q` is strictly inside the circumsphere of the full-dimensional
/// simplex `pts`, `-1` if strictly outside, `0` if on it.
///
/// Returns `None` when the simplex itself is flat.
pub(crate) fn in_sphere(pts: &[&[i128]], q: &[i128]) -> Option<i8> {
    let o = orient(pts);
    if o == 0 {
        return None;
    }
    let s = lifted(pts, q);
    // the lifted determinant flips sign relative to orientation in odd dimensions
    let parity = if q.len().is_multiple_of(2) { 1 } else { -1 };
    Some(s * o * parity)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_cofactor() {
        let rows = [[2i64, -1, 3, 0], [1, 4, -2, 5], [0, 3, 1, -1], [7, 0, 2, 2]];
        let m: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let mut fm = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                fm[i][j] = rows[i][j] as f64;
            }
        }
        let (d, _) = det_perm_f64(&fm, 4);
        assert_eq!(det_big(m), BigInt::from(d as i64));
    }

    #[test]
    fn bareiss_needs_pivoting() {
        let m = vec![
            vec![BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(0)],
        ];
        assert_eq!(det_big(m), BigInt::from(-1));
    }

    #[test]
    fn orientation_2d_and_3d() {
        let (a, b, c) = ([0i128, 0], [1i128, 0], [0i128, 1]);
        assert_eq!(orient(&[&a, &b, &c]), 1);
        assert_eq!(orient(&[&a, &c, &b]), -1);
        assert_eq!(orient(&[&a, &b, &[2, 0]]), 0);
        let t = [[0i128, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]];
        assert_eq!(orient(&[&t[0], &t[1], &t[2], &t[3]]), 1);
        assert_eq!(orient(&[&t[1], &t[0], &t[2], &t[3]]), -1);
    }

    #[test]
    fn in_sphere_is_orientation_independent() {
        let tri = [[0i128, 0], [4, 0], [0, 4]];
        for perm in [[0, 1, 2], [1, 0, 2]] {
            let pts: Vec<&[i128]> = perm.iter().map(|&k| &tri[k][..]).collect();
            assert_eq!(in_sphere(&pts, &[1, 1]), Some(1));
            assert_eq!(in_sphere(&pts, &[10, 10]), Some(-1));
            assert_eq!(in_sphere(&pts, &[4, 4]), Some(0));
        }
        let tet = [[0i128, 0, 0], [4, 0, 0], [0, 4, 0], [0, 0, 4]];
        for perm in [[0, 1, 2, 3], [1, 0, 2, 3]] {
            let pts: Vec<&[i128]> = perm.iter().map(|&k| &tet[k][..]).collect();
            assert_eq!(in_sphere(&pts, &[1, 1, 1]), Some(1));
            assert_eq!(in_sphere(&pts, &[9, 9, 9]), Some(-1));
            assert_eq!(in_sphere(&pts, &[4, 4, 4]), Some(0));
        }
    }

    #[test]
    fn filter_falls_back_on_near_degenerate_input() {
        // huge coordinates with an almost-collinear triple
        let big = 1i128 << 90;
        let a = [0i128, 0];
        let b = [big, big + 1];
        let c = [2 * big, 2 * big + 2];
        assert_eq!(orient(&[&a, &b, &c]), 0);
        let c2 = [2 * big, 2 * big + 3];
        assert_eq!(orient(&[&a, &b, &c2]), 1);
    }
}
