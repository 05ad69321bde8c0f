use std::cmp::Ordering;

use proptest::prelude::*;
use wrapcycle::filtration::check_monotone;
use wrapcycle::geometry::{cech_radius_values, delaunay_complex, delaunay_radius_values, PointCloud};
use wrapcycle::{Error, Simplex, Value};

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn empty_ball(c: &PointCloud, t: &[usize]) -> Option<Value> {
    let ball = c.circumsphere(t).ok()?;
    (0..c.len())
        .all(|j| t.contains(&j) || ball.classify(c.point(j)) != Ordering::Less)
        .then(|| ball.radius_sq().clone())
}

/// Top simplices whose circumsphere contains no other point.
fn brute_force_delaunay(c: &PointCloud) -> Vec<Vec<u32>> {
    let d = c.dim();
    subsets(c.len(), d + 1)
        .into_iter()
        .filter(|t| empty_ball(c, t).is_some())
        .map(|t| t.into_iter().map(|x| x as u32).collect())
        .collect()
}

/// Smallest empty sphere through `s`, minimizing over the circumspheres of all supersets.
fn brute_force_radius(c: &PointCloud, s: &[usize]) -> Value {
    let d = c.dim();
    let rest: Vec<usize> = (0..c.len()).filter(|i| !s.contains(i)).collect();
    let mut best: Option<Value> = None;
    for extra in 0..=(d + 1 - s.len()) {
        for pick in subsets(rest.len(), extra) {
            let mut t: Vec<usize> = s.to_vec();
            t.extend(pick.iter().map(|&k| rest[k]));
            if let Some(r) = empty_ball(c, &t) {
                if best.as_ref().is_none_or(|b| &r < b) {
                    best = Some(r);
                }
            }
        }
    }
    best.expect("every Delaunay simplex has an empty circumsphere")
}

fn simplex_volume(pts: &[&[f64]]) -> f64 {
    let d = pts.len() - 1;
    let m: Vec<Vec<f64>> = (1..=d)
        .map(|i| (0..d).map(|a| pts[i][a] - pts[0][a]).collect())
        .collect();
    let det = if d == 2 {
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    } else {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    det.abs() / if d == 2 { 2.0 } else { 6.0 }
}

/// Hull measure as a fan of cones over the hull facets from the centroid.
fn hull_measure(c: &PointCloud) -> f64 {
    let d = c.dim();
    let n = c.len();
    let pts: Vec<&[f64]> = (0..n).map(|i| c.input_point(i)).collect();
    let centroid: Vec<f64> = (0..d)
        .map(|a| pts.iter().map(|p| p[a]).sum::<f64>() / n as f64)
        .collect();
    let mut total = 0.0;
    for f in subsets(n, d) {
        let signs: Vec<f64> = (0..n)
            .filter(|j| !f.contains(j))
            .map(|j| {
                let mut s: Vec<&[f64]> = f.iter().map(|&i| pts[i]).collect();
                s.push(pts[j]);
                signed(&s)
            })
            .collect();
        if signs.iter().all(|&x| x > 0.0) || signs.iter().all(|&x| x < 0.0) {
            let mut s: Vec<&[f64]> = f.iter().map(|&i| pts[i]).collect();
            s.push(&centroid);
            total += simplex_volume(&s);
        }
    }
    total
}

fn signed(pts: &[&[f64]]) -> f64 {
    let d = pts.len() - 1;
    let m: Vec<Vec<f64>> = (1..=d)
        .map(|i| (0..d).map(|a| pts[i][a] - pts[0][a]).collect())
        .collect();
    if d == 2 {
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    } else {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
}

fn arb_cloud(d: usize, max_n: usize) -> impl Strategy<Value = PointCloud> {
    proptest::collection::vec(proptest::collection::vec(-1_000_000i64..1_000_000, d), (d + 2)..=max_n).prop_filter_map(
        "duplicate points",
        |rows| {
            let rows: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| {
                            let sign = if x < 0 { "-" } else { "" };
                            format!("{sign}{}.{:06}", x.abs() / 1_000_000, x.abs() % 1_000_000)
                        })
                        .collect()
                })
                .collect();
            PointCloud::from_decimal_rows(&rows).ok()
        },
    )
}

fn check_cloud(c: &PointCloud) -> Result<(), TestCaseError> {
    let del = match delaunay_complex(c) {
        Ok(d) => d,
        Err(Error::Degenerate { .. }) => return Ok(()),
        Err(e) => return Err(TestCaseError::fail(e.to_string())),
    };
    prop_assert_eq!(&del.cells, &brute_force_delaunay(c));
    let vol: f64 = del
        .cells
        .iter()
        .map(|t| simplex_volume(&t.iter().map(|&i| c.input_point(i as usize)).collect::<Vec<_>>()))
        .sum();
    let hull = hull_measure(c);
    prop_assert!((vol - hull).abs() <= 1e-9 * hull, "{} vs {}", vol, hull);

    let k = &del.complex;
    let rx = delaunay_radius_values(k, c).unwrap();
    let rc = cech_radius_values(k, c).unwrap();
    check_monotone(k, &rx).unwrap();
    check_monotone(k, &rc).unwrap();
    for (i, s) in k.simplices().iter().enumerate() {
        let idx: Vec<usize> = s.vertices().iter().map(|&v| v as usize).collect();
        prop_assert_eq!(&rx[i], &brute_force_radius(c, &idx), "simplex {}", s);
        prop_assert!(rx[i] >= rc[i]);
        if s.dim() == c.dim() {
            let ball = c.circumsphere(&idx).unwrap();
            prop_assert_eq!(&rx[i], ball.radius_sq());
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn planar_delaunay_matches_brute_force(c in arb_cloud(2, 10)) {
        check_cloud(&c)?;
    }

    #[test]
    fn spatial_delaunay_matches_brute_force(c in arb_cloud(3, 9)) {
        check_cloud(&c)?;
    }
}

#[test]
fn larger_clouds_are_locally_delaunay() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for d in [2usize, 3] {
        let rows: Vec<Vec<String>> = (0..400)
            .map(|_| (0..d).map(|_| format!("{:.9}", rng.random::<f64>())).collect())
            .collect();
        let c = PointCloud::from_decimal_rows(&rows).unwrap();
        let del = delaunay_complex(&c).unwrap();
        // Euler characteristic of a triangulated ball
        let chi: i64 = (0..=d)
            .map(|k| (-1i64).pow(k as u32) * del.complex.count_of_dim(k) as i64)
            .sum();
        assert_eq!(chi, 1);
        assert_eq!(del.complex.count_of_dim(0), 400);
        // the radius function checks every interior ridge exactly
        delaunay_radius_values(&del.complex, &c).unwrap();
        let vol: f64 = del
            .cells
            .iter()
            .map(|t| simplex_volume(&t.iter().map(|&i| c.input_point(i as usize)).collect::<Vec<_>>()))
            .sum();
        assert!(vol <= 1.0 && vol > 0.75, "{vol}");
        assert!(del.complex.contains(&Simplex::vertex(399)));
    }
}
