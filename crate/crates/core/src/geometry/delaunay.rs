//! Incremental (Bowyer-Watson) Delaunay triangulation in R^2 and R^3.
//!
//! The hull is closed off with a symbolic vertex at infinity, so points
//! outside the current hull are handled by the same cavity insertion as
//! interior points. All predicates are exact; any zero predicate means the
//! input violates general position and is reported with its witnesses.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::exact::{in_sphere, orient};
use super::PointCloud;
use crate::complex::{SimplicialComplex, Vertex};
use crate::error::{Error, Result};

const INF: u32 = u32::MAX;
const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Cell {
    v: [u32; 4],
    n: [u32; 4],
    alive: bool,
}

impl Cell {
    fn infinite_slot(&self, d: usize) -> Option<usize> {
        self.v[..=d].iter().position(|&x| x == INF)
    }
}

/// The Delaunay triangulation of a point cloud: its top-dimensional simplices
/// and the full complex they span.
#[derive(Clone, Debug)]
pub struct Delaunay {
    /// Top-dimensional simplices as sorted vertex lists.
    pub cells: Vec<Vec<Vertex>>,
    pub complex: SimplicialComplex,
}

struct Builder<'a> {
    cloud: &'a PointCloud,
    d: usize,
    cells: Vec<Cell>,
    free: Vec<u32>,
    last: u32,
    stamp: Vec<u32>,
    epoch: u32,
}

/// Computes the Delaunay complex. Fails with the violating point subset if
/// the input is not in general position.
pub fn delaunay_complex(cloud: &PointCloud) -> Result<Delaunay> {
    let d = cloud.dim();
    let n = cloud.len();
    if n == 0 {
        return Err(Error::EmptyPointSet);
    }
    if n <= d {
        // a single simplex, provided the points are affinely independent
        let all: Vec<usize> = (0..n).collect();
        cloud.circumsphere(&all)?;
        let cell: Vec<Vertex> = (0..n as Vertex).collect();
        let complex = SimplicialComplex::build([cell.clone()])?;
        return Ok(Delaunay {
            cells: vec![cell],
            complex,
        });
    }
    let seed = initial_simplex(cloud)?;
    let mut b = Builder {
        cloud,
        d,
        cells: Vec::with_capacity(8 * n),
        free: Vec::new(),
        last: 0,
        stamp: Vec::new(),
        epoch: 0,
    };
    b.init(&seed);
    for p in 0..n {
        if !seed.contains(&p) {
            b.insert(p as u32)?;
        }
    }
    let mut cells: Vec<Vec<Vertex>> = b
        .cells
        .iter()
        .filter(|c| c.alive && !c.v[..=d].contains(&INF))
        .map(|c| {
            let mut v = c.v[..=d].to_vec();
            v.sort_unstable();
            v
        })
        .collect();
    cells.sort_unstable();
    let complex = SimplicialComplex::build(cells.iter().cloned())?;
    Ok(Delaunay { cells, complex })
}

fn big_cross_is_zero(a: &[i128], b: &[i128], c: &[i128]) -> bool {
    let u: Vec<BigInt> = (0..3).map(|k| BigInt::from(b[k] - a[k])).collect();
    let v: Vec<BigInt> = (0..3).map(|k| BigInt::from(c[k] - a[k])).collect();
    (0..3).all(|k| {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        (&u[i] * &v[j] - &u[j] * &v[i]).is_zero()
    })
}

/// Finds `d + 1` affinely independent points, preferring low indices.
fn initial_simplex(cloud: &PointCloud) -> Result<Vec<usize>> {
    let n = cloud.len();
    let d = cloud.dim();
    let mut s = vec![0usize, 1];
    if d == 3 {
        let k = (2..n)
            .find(|&k| !big_cross_is_zero(cloud.point(0), cloud.point(1), cloud.point(k)))
            .ok_or_else(|| Error::Degenerate {
                kind: "collinear",
                points: (0..n).collect(),
            })?;
        s.push(k);
    }
    let start = *s.last().unwrap() + 1;
    let k = (start..n)
        .find(|&k| {
            let mut pts: Vec<&[i128]> = s.iter().map(|&i| cloud.point(i)).collect();
            pts.push(cloud.point(k));
            orient(&pts) != 0
        })
        .ok_or_else(|| Error::Degenerate {
            kind: if d == 2 { "collinear" } else { "coplanar" },
            points: (0..n).collect(),
        })?;
    s.push(k);
    Ok(s)
}

impl Builder<'_> {
    fn pt(&self, v: u32) -> &[i128] {
        self.cloud.point(v as usize)
    }

    fn orient_cell(&self, v: &[u32]) -> i8 {
        let pts: Vec<&[i128]> = v.iter().map(|&x| self.pt(x)).collect();
        orient(&pts)
    }

    fn alloc(&mut self, cell: Cell) -> u32 {
        match self.free.pop() {
            Some(k) => {
                self.cells[k as usize] = cell;
                k
            }
            None => {
                self.cells.push(cell);
                self.stamp.push(0);
                (self.cells.len() - 1) as u32
            }
        }
    }

    fn init(&mut self, seed: &[usize]) {
        let d = self.d;
        let mut v = [INF; 4];
        for (k, &p) in seed.iter().enumerate() {
            v[k] = p as u32;
        }
        if self.orient_cell(&v[..=d]) < 0 {
            v.swap(0, 1);
        }
        let finite = self.alloc(Cell {
            v,
            n: [NONE; 4],
            alive: true,
        });
        for i in 0..=d {
            // infinite cell across facet i, with two finite vertices swapped so
            // that substituting an outside point yields positive orientation
            let mut w = v;
            w[i] = INF;
            let (a, b) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            w.swap(a, b);
            let mut nb = [NONE; 4];
            nb[i] = finite;
            let c = self.alloc(Cell {
                v: w,
                n: nb,
                alive: true,
            });
            self.cells[finite as usize].n[i] = c;
        }
        // neighbors among the infinite cells: they share ridges containing INF
        let infinite: Vec<u32> = (1..=d as u32 + 1).collect();
        self.link_new_cells(&infinite);
        self.last = finite;
    }

    /// Pairs up the facets of `new` cells that contain no neighbor yet.
    fn link_new_cells(&mut self, new: &[u32]) {
        let d = self.d;
        let mut open: HashMap<[u32; 3], (u32, usize)> = HashMap::with_capacity(new.len() * d);
        for &c in new {
            for j in 0..=d {
                if self.cells[c as usize].n[j] != NONE {
                    continue;
                }
                let mut key = [0u32; 3];
                let mut k = 0;
                for (t, &x) in self.cells[c as usize].v[..=d].iter().enumerate() {
                    if t != j {
                        key[k] = x;
                        k += 1;
                    }
                }
                key[..d].sort_unstable();
                if let Some((other, oj)) = open.remove(&key) {
                    self.cells[c as usize].n[j] = other;
                    self.cells[other as usize].n[oj] = c;
                } else {
                    open.insert(key, (c, j));
                }
            }
        }
        debug_assert!(open.is_empty(), "unmatched facets after insertion");
    }

    /// Conflict test: is `p` strictly inside the (possibly infinite) cell's circumsphere?
    fn conflict(&self, c: u32, p: u32) -> Result<bool> {
        let d = self.d;
        let cell = &self.cells[c as usize];
        match cell.infinite_slot(d) {
            Some(slot) => {
                let mut v = cell.v;
                v[slot] = p;
                match self.orient_cell(&v[..=d]) {
                    0 => Err(Error::Degenerate {
                        kind: if d == 2 { "collinear" } else { "coplanar" },
                        points: sorted_points(&v[..=d]),
                    }),
                    s => Ok(s > 0),
                }
            }
            None => {
                let pts: Vec<&[i128]> = cell.v[..=d].iter().map(|&x| self.pt(x)).collect();
                match in_sphere(&pts, self.pt(p)) {
                    Some(0) => {
                        let mut w = cell.v[..=d].to_vec();
                        w.push(p);
                        Err(Error::Degenerate {
                            kind: if d == 2 { "cocircular" } else { "cospherical" },
                            points: sorted_points(&w),
                        })
                    }
                    Some(s) => Ok(s > 0),
                    None => unreachable!("finite cells are never flat"),
                }
            }
        }
    }

    /// Visibility walk towards `p`; returns a cell in conflict with `p`.
    fn locate(&self, p: u32) -> Result<u32> {
        let d = self.d;
        let mut c = self.last;
        if let Some(slot) = self.cells[c as usize].infinite_slot(d) {
            c = self.cells[c as usize].n[slot];
        }
        let mut turn = p as usize;
        loop {
            let cell = &self.cells[c as usize];
            if cell.infinite_slot(d).is_some() {
                return Ok(c);
            }
            let mut moved = false;
            turn = turn.wrapping_add(1);
            for t in 0..=d {
                let i = (t + turn) % (d + 1);
                let mut v = cell.v;
                v[i] = p;
                match self.orient_cell(&v[..=d]) {
                    s if s < 0 => {
                        c = cell.n[i];
                        moved = true;
                        break;
                    }
                    0 => {
                        return Err(Error::Degenerate {
                            kind: if d == 2 { "collinear" } else { "coplanar" },
                            points: sorted_points(&v[..=d]),
                        })
                    }
                    _ => {}
                }
            }
            if !moved {
                return Ok(c);
            }
        }
    }

    fn insert(&mut self, p: u32) -> Result<()> {
        let d = self.d;
        let start = self.locate(p)?;
        if !self.conflict(start, p)? {
            unreachable!("located cell must be in conflict");
        }
        self.epoch += 1;
        let epoch = self.epoch;
        // cavity search; stamp = epoch marks "visited", conflict status kept separately
        let mut cavity = vec![start];
        let mut in_cavity: HashMap<u32, bool> = HashMap::new();
        in_cavity.insert(start, true);
        self.stamp[start as usize] = epoch;
        let mut boundary: Vec<(u32, usize)> = Vec::new();
        let mut k = 0;
        while k < cavity.len() {
            let c = cavity[k];
            k += 1;
            for i in 0..=d {
                let nb = self.cells[c as usize].n[i];
                let is_conflict = if self.stamp[nb as usize] == epoch {
                    in_cavity[&nb]
                } else {
                    self.stamp[nb as usize] = epoch;
                    let cf = self.conflict(nb, p)?;
                    in_cavity.insert(nb, cf);
                    if cf {
                        cavity.push(nb);
                    }
                    cf
                };
                if !is_conflict {
                    boundary.push((c, i));
                }
            }
        }
        let mut new_cells = Vec::with_capacity(boundary.len());
        for &(c, i) in &boundary {
            let old = self.cells[c as usize].clone();
            let outside = old.n[i];
            let mut v = old.v;
            v[i] = p;
            let mut nb = [NONE; 4];
            nb[i] = outside;
            let nc = self.alloc(Cell { v, n: nb, alive: true });
            let back = self.cells[outside as usize]
                .n
                .iter()
                .position(|&x| x == c)
                .expect("neighbor relation is symmetric");
            self.cells[outside as usize].n[back] = nc;
            new_cells.push(nc);
        }
        for &c in &cavity {
            self.cells[c as usize].alive = false;
            self.free.push(c);
        }
        // freed slots may be reused by the new cells above only after this point
        self.link_new_cells(&new_cells);
        self.last = *new_cells
            .iter()
            .find(|&&c| self.cells[c as usize].infinite_slot(d).is_none())
            .unwrap_or(&new_cells[0]);
        Ok(())
    }
}

fn sorted_points(v: &[u32]) -> Vec<usize> {
    let mut w: Vec<usize> = v.iter().filter(|&&x| x != INF).map(|&x| x as usize).collect();
    w.sort_unstable();
    w.dedup();
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Simplex;

    fn cloud(pts: &[&[f64]]) -> PointCloud {
        PointCloud::from_f64(&pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn three_points_give_a_triangle() {
        let c = cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[0.3, 0.8]]);
        let del = delaunay_complex(&c).unwrap();
        assert_eq!(del.cells, vec![vec![0, 1, 2]]);
        assert_eq!(del.complex.len(), 7);
    }

    #[test]
    fn quad_picks_empty_circle_diagonal() {
        let c = cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[1.02, 1.0], &[0.0, 1.01]]);
        let del = delaunay_complex(&c).unwrap();
        assert_eq!(del.cells.len(), 2);
        // brute force: a triangle is Delaunay iff the fourth point is outside its circumcircle
        let mut expected = Vec::new();
        for tri in [[0usize, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
            let other = (0..4).find(|i| !tri.contains(i)).unwrap();
            let ball = c.circumsphere(&tri).unwrap();
            if ball.classify(c.point(other)) == std::cmp::Ordering::Greater {
                expected.push(tri.iter().map(|&x| x as u32).collect::<Vec<_>>());
            }
        }
        assert_eq!(del.cells, expected);
        assert_eq!(del.cells, vec![vec![0, 1, 3], vec![1, 2, 3]]);
        assert!(del.complex.contains(&Simplex::new([1, 3]).unwrap()));
        assert!(!del.complex.contains(&Simplex::new([0, 2]).unwrap()));
    }

    #[test]
    fn cocircular_square_is_rejected() {
        let c = cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]]);
        match delaunay_complex(&c) {
            Err(Error::Degenerate { points, .. }) => assert_eq!(points, vec![0, 1, 2, 3]),
            other => panic!("expected degeneracy, got {other:?}"),
        }
        // perturbation resolves it
        let del = delaunay_complex(&c.perturbed().unwrap()).unwrap();
        assert_eq!(del.cells.len(), 2);
    }

    #[test]
    fn collinear_input_is_rejected() {
        let c = cloud(&[&[0.0, 0.0], &[1.0, 1.0], &[2.0, 2.0], &[3.0, 3.0]]);
        assert!(matches!(delaunay_complex(&c), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn fewer_points_than_dimension_plus_one() {
        let c = cloud(&[&[0.0, 0.0, 0.0], &[1.0, 0.5, 0.25]]);
        let del = delaunay_complex(&c).unwrap();
        assert_eq!(del.complex.len(), 3);
    }

    #[test]
    fn regular_tetrahedron_plus_center() {
        let c = cloud(&[
            &[0.0, 0.0, 0.0],
            &[1.0, 0.1, 0.0],
            &[0.2, 1.1, 0.05],
            &[0.1, 0.3, 1.2],
            &[0.3, 0.35, 0.3],
        ]);
        let del = delaunay_complex(&c).unwrap();
        assert_eq!(del.cells.len(), 4);
        assert!(del.cells.iter().all(|t| t.contains(&4)));
    }
}
