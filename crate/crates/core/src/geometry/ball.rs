use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::exact::det_big;
use super::PointCloud;
use crate::error::{Error, Result};
use crate::value::Value;

/// A ball with exact center and squared radius.
///
/// Internally the center is `center_num / denom` in the cloud's integer
/// units and `r2_scaled = radius^2 * denom^2`, so membership tests need
/// only integer arithmetic.
#[derive(Clone, Debug)]
pub struct Ball {
    center_num: Vec<BigInt>,
    denom: BigInt,
    r2_scaled: BigInt,
    support: Vec<usize>,
    radius_sq: Value,
    center: Vec<f64>,
}

impl Ball {
    /// Squared radius in input units.
    pub fn radius_sq(&self) -> &Value {
        &self.radius_sq
    }

    pub fn radius(&self) -> f64 {
        self.radius_sq.to_f64().sqrt()
    }

    /// Center in input coordinates.
    pub fn center(&self) -> &[f64] {
        &self.center
    }

    /// Indices of the points on the boundary that determine the ball.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// `Less` if `q` lies strictly inside, `Equal` on the sphere, `Greater` outside.
    pub fn classify(&self, q: &[i128]) -> Ordering {
        let d2: BigInt = q
            .iter()
            .zip(&self.center_num)
            .map(|(&x, c)| {
                let t = &self.denom * BigInt::from(x) - c;
                &t * &t
            })
            .sum();
        d2.cmp(&self.r2_scaled)
    }

    pub fn contains(&self, q: &[i128]) -> bool {
        self.classify(q) != Ordering::Greater
    }

    /// Exact comparison of radii.
    pub fn cmp_radius(&self, other: &Ball) -> Ordering {
        self.radius_sq.cmp(&other.radius_sq)
    }
}

impl PointCloud {
    /// The smallest sphere through the given points, centered in their affine hull.
    pub fn circumsphere(&self, idx: &[usize]) -> Result<Ball> {
        if idx.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let k = idx.len() - 1;
        if k > self.dim() {
            return Err(Error::AffinelyDependent(idx.to_vec()));
        }
        let p0: Vec<BigInt> = self.point(idx[0]).iter().map(|&x| BigInt::from(x)).collect();
        let vs: Vec<Vec<BigInt>> = idx[1..]
            .iter()
            .map(|&i| {
                self.point(i)
                    .iter()
                    .zip(&p0)
                    .map(|(&x, o)| BigInt::from(x) - o)
                    .collect()
            })
            .collect();
        let dot = |a: &[BigInt], b: &[BigInt]| -> BigInt { a.iter().zip(b).map(|(x, y)| x * y).sum() };
        let gram: Vec<Vec<BigInt>> = vs.iter().map(|a| vs.iter().map(|b| dot(a, b)).collect()).collect();
        let rhs: Vec<BigInt> = vs.iter().map(|a| dot(a, a)).collect();
        let det_g = det_big(gram.clone());
        if det_g.is_zero() {
            return Err(Error::AffinelyDependent(idx.to_vec()));
        }
        // Cramer: mu_i = det(G with column i replaced by rhs); lambda_i = mu_i / (2 det G)
        let mu: Vec<BigInt> = (0..k)
            .map(|col| {
                let m: Vec<Vec<BigInt>> = gram
                    .iter()
                    .enumerate()
                    .map(|(r, row)| {
                        let mut row = row.clone();
                        row[col] = rhs[r].clone();
                        row
                    })
                    .collect();
                det_big(m)
            })
            .collect();
        let two_det: BigInt = &det_g * 2;
        let mut center_num: Vec<BigInt> = p0.iter().map(|x| x * &two_det).collect();
        for (m, v) in mu.iter().zip(&vs) {
            for (c, x) in center_num.iter_mut().zip(v) {
                *c += m * x;
            }
        }
        let r2_scaled: BigInt = &det_g * mu.iter().zip(&rhs).map(|(m, b)| m * b).sum::<BigInt>();
        let mut denom = two_det;
        if denom.is_negative() {
            denom = -denom;
            center_num.iter_mut().for_each(|c| *c = -c.clone());
        }
        Ok(self.finish_ball(center_num, denom, r2_scaled, idx.to_vec()))
    }

    fn finish_ball(&self, center_num: Vec<BigInt>, denom: BigInt, r2_scaled: BigInt, support: Vec<usize>) -> Ball {
        let d2 = &denom * &denom;
        let r2_int = BigRational::new(r2_scaled.clone(), d2);
        let radius_sq = self.squared_length_to_world(&r2_int);
        let exact_center: Vec<BigRational> = center_num
            .iter()
            .map(|c| BigRational::new(c.clone(), denom.clone()))
            .collect();
        let center = self.to_world(&exact_center);
        Ball {
            center_num,
            denom,
            r2_scaled,
            support,
            radius_sq,
            center,
        }
    }

    /// The smallest ball enclosing the given points (Welzl's algorithm).
    pub fn min_enclosing_ball(&self, idx: &[usize]) -> Result<Ball> {
        if idx.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let mut boundary = Vec::with_capacity(self.dim() + 1);
        Ok(self.welzl(idx, &mut boundary)?.expect("non-empty input yields a ball"))
    }

    fn welzl(&self, pts: &[usize], boundary: &mut Vec<usize>) -> Result<Option<Ball>> {
        if pts.is_empty() || boundary.len() == self.dim() + 1 {
            if boundary.is_empty() {
                return Ok(None);
            }
            return self.circumsphere(boundary).map(Some);
        }
        let (&p, rest) = pts.split_last().unwrap();
        if let Some(ball) = self.welzl(rest, boundary)? {
            if ball.contains(self.point(p)) {
                return Ok(Some(ball));
            }
        }
        boundary.push(p);
        let out = self.welzl(rest, boundary);
        boundary.pop();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(pts: &[&[f64]]) -> PointCloud {
        PointCloud::from_f64(&pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// Smallest ball over all affinely independent support subsets that
    /// encloses every point.
    fn brute_force_enclosing(c: &PointCloud, idx: &[usize]) -> Ball {
        let n = idx.len();
        let mut best: Option<Ball> = None;
        for mask in 1u32..(1 << n) {
            let sub: Vec<usize> = (0..n).filter(|k| mask & (1 << k) != 0).map(|k| idx[k]).collect();
            let Ok(ball) = c.circumsphere(&sub) else { continue };
            if idx.iter().all(|&i| ball.contains(c.point(i)))
                && best.as_ref().is_none_or(|b| ball.cmp_radius(b) == Ordering::Less)
            {
                best = Some(ball);
            }
        }
        best.unwrap()
    }

    #[test]
    fn single_point() {
        let c = cloud(&[&[0.0, 0.0]]);
        let b = c.min_enclosing_ball(&[0]).unwrap();
        assert!(b.radius_sq().is_zero());
        assert_eq!(b.center(), &[0.0, 0.0]);
    }

    #[test]
    fn segment_midpoint() {
        let c = cloud(&[&[0.0, 0.0], &[2.0, 0.0]]);
        let b = c.min_enclosing_ball(&[0, 1]).unwrap();
        assert_eq!(b.center(), &[1.0, 0.0]);
        assert_eq!(b.radius_sq(), &Value::from_int(1));
    }

    #[test]
    fn obtuse_triangle_uses_long_edge() {
        let c = cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[0.5, 0.1]]);
        let b = c.min_enclosing_ball(&[0, 1, 2]).unwrap();
        let oracle = brute_force_enclosing(&c, &[0, 1, 2]);
        assert_eq!(b.radius_sq(), oracle.radius_sq());
        assert_eq!(b.radius_sq(), &Value::from_f64(0.25).unwrap());
        let mut s = b.support().to_vec();
        s.sort();
        assert_eq!(s, vec![0, 1]);
    }

    #[test]
    fn empty_input_is_an_error() {
        let c = cloud(&[&[0.0, 0.0]]);
        assert!(matches!(c.min_enclosing_ball(&[]), Err(Error::EmptyPointSet)));
    }

    #[test]
    fn right_triangle_circumsphere() {
        let c = cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        let b = c.circumsphere(&[0, 1, 2]).unwrap();
        assert_eq!(b.center(), &[0.5, 0.5]);
        assert_eq!(b.radius_sq(), &Value::from_f64(0.5).unwrap());
    }

    #[test]
    fn segment_circumsphere_in_plane() {
        let c = cloud(&[&[0.0, 0.0], &[2.0, 0.0]]);
        let b = c.circumsphere(&[0, 1]).unwrap();
        assert_eq!(b.center(), &[1.0, 0.0]);
        assert_eq!(b.radius(), 1.0);
    }

    #[test]
    fn collinear_triple_is_degenerate() {
        let c = cloud(&[&[0.0, 0.0], &[1.0, 1.0], &[2.0, 2.0]]);
        assert!(matches!(c.circumsphere(&[0, 1, 2]), Err(Error::AffinelyDependent(_))));
    }

    #[test]
    fn welzl_matches_brute_force_in_3d() {
        let c = cloud(&[
            &[0.1, 0.2, 0.3],
            &[1.7, -0.4, 0.2],
            &[0.3, 1.9, -0.8],
            &[-0.6, 0.4, 1.3],
            &[0.2, 0.3, 0.1],
        ]);
        for idx in [vec![0, 1, 2, 3], vec![0, 1, 4], vec![1, 2, 3, 4], vec![0, 4]] {
            let b = c.min_enclosing_ball(&idx).unwrap();
            let o = brute_force_enclosing(&c, &idx);
            assert_eq!(b.radius_sq(), o.radius_sq(), "{idx:?}");
            assert!(idx.iter().all(|&i| b.contains(c.point(i))));
        }
    }
}
