//! Seeded generators for test instances and samples.

use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{Simplex, SimplicialComplex, Vertex};
use crate::error::Result;
use crate::filtration::ElementwiseFiltration;
use crate::geometry::PointCloud;
use crate::value::Value;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform points in the unit cube, rounded to `decimals` places.
pub fn uniform_cloud(rng: &mut impl Rng, n: usize, dim: usize, decimals: usize) -> Result<PointCloud> {
    let rows: Vec<Vec<String>> = (0..n)
        .map(|_| {
            (0..dim)
                .map(|_| format!("{:.*}", decimals, rng.random::<f64>()))
                .collect()
        })
        .collect();
    PointCloud::from_decimal_rows(&rows)
}

/// Points on the unit sphere (`dim = 3`) or circle (`dim = 2`), rounded to
/// `decimals` places.
pub fn sphere_cloud(rng: &mut impl Rng, n: usize, dim: usize, decimals: usize) -> Result<PointCloud> {
    let rows: Vec<Vec<String>> = (0..n)
        .map(|_| {
            let v: Vec<f64> = loop {
                let v: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
                let n2: f64 = v.iter().map(|x| x * x).sum();
                if n2 > 1e-3 && n2 <= 1.0 {
                    break v.iter().map(|x| x / n2.sqrt()).collect();
                }
            };
            v.iter().map(|x| format!("{:.*}", decimals, x)).collect()
        })
        .collect();
    PointCloud::from_decimal_rows(&rows)
}

/// `n` evenly spaced points on the unit circle, rounded to `decimals` places.
pub fn circle_cloud(n: usize, decimals: usize) -> Result<PointCloud> {
    let rows: Vec<Vec<String>> = (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64;
            vec![format!("{:.*}", decimals, t.cos()), format!("{:.*}", decimals, t.sin())]
        })
        .collect();
    PointCloud::from_decimal_rows(&rows)
}

/// A random complex: the closure of `tops` random simplices of dimension
/// 1..=`max_dim` on `n` vertices.
pub fn random_complex(rng: &mut impl Rng, n: usize, max_dim: usize, tops: usize) -> SimplicialComplex {
    let verts: Vec<Vertex> = (0..n as Vertex).collect();
    let mut simplices: Vec<Vec<Vertex>> = verts.iter().map(|&v| vec![v]).collect();
    for _ in 0..tops {
        let k = rng.random_range(1..=max_dim.min(n - 1)) + 1;
        simplices.push(verts.choose_multiple(rng, k).copied().collect());
    }
    SimplicialComplex::build(simplices).expect("non-empty simplices")
}

/// Random monotone values with frequent ties: each simplex draws a small
/// integer and takes the max with its facets.
pub fn random_monotone_values(rng: &mut impl Rng, k: &SimplicialComplex, range: u32) -> Vec<Value> {
    let mut raw: Vec<i64> = Vec::with_capacity(k.len());
    for i in 0..k.len() {
        let own = rng.random_range(0..range) as i64;
        let m = k.facets(i).iter().map(|&f| raw[f]).max().unwrap_or(0);
        raw.push(own.max(m));
    }
    raw.into_iter().map(Value::from_int).collect()
}

/// A random filtration: a random complex with random monotone values.
pub fn random_filtration(rng: &mut impl Rng, n: usize, max_dim: usize, tops: usize) -> ElementwiseFiltration {
    let k = random_complex(rng, n, max_dim, tops);
    let values = random_monotone_values(rng, &k, 6);
    ElementwiseFiltration::f_lexicographic(Arc::new(k), values).expect("values are monotone")
}

/// A random generalized discrete Morse function on `k`.
///
/// Intervals `[rho, phi]` with `|phi \ rho| <= 2` are merged at random as
/// long as the interval digraph stays acyclic; values are longest-path
/// levels, so unrelated intervals often share a value.
pub fn random_morse_function(rng: &mut impl Rng, k: &SimplicialComplex, attempts: usize) -> Vec<Value> {
    let n = k.len();
    let mut label: Vec<usize> = (0..n).collect();
    let mut free = vec![true; n];
    for _ in 0..attempts {
        if n == 0 {
            break;
        }
        let rho = rng.random_range(0..n);
        if !free[rho] {
            continue;
        }
        let codim = rng.random_range(1..=2usize);
        let mut phi = rho;
        for _ in 0..codim {
            match k.cofacets(phi).choose(rng) {
                Some(&c) => phi = c,
                None => break,
            }
        }
        if phi == rho {
            continue;
        }
        let phi = k.simplex(phi).clone();
        let members = interval_members(k, k.simplex(rho), &phi);
        let Some(members) = members else { continue };
        if members.iter().any(|&m| !free[m]) {
            continue;
        }
        let saved = label.clone();
        for &m in &members {
            label[m] = rho;
        }
        if levels(k, &label).is_some() {
            for &m in &members {
                free[m] = false;
            }
        } else {
            label = saved;
        }
    }
    let lv = levels(k, &label).expect("kept acyclic");
    (0..n).map(|i| Value::from_int(lv[label[i]] as i64)).collect()
}

/// All simplices between `rho` and `phi`, if all of them lie in `k`.
fn interval_members(k: &SimplicialComplex, rho: &Simplex, phi: &Simplex) -> Option<Vec<usize>> {
    let extra: Vec<Vertex> = phi.vertices().iter().copied().filter(|v| !rho.contains(*v)).collect();
    let mut out = Vec::with_capacity(1 << extra.len());
    for mask in 0u32..(1 << extra.len()) {
        let mut s = rho.clone();
        for (b, &v) in extra.iter().enumerate() {
            if mask & (1 << b) != 0 {
                s = s.with(v);
            }
        }
        out.push(k.index_of(&s)?);
    }
    Some(out)
}

/// Longest-path level of each label in the digraph "facet's label -> label",
/// or `None` on a cycle.
fn levels(k: &SimplicialComplex, label: &[usize]) -> Option<Vec<usize>> {
    let n = k.len();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for i in 0..n {
        for &f in k.facets(i) {
            let (a, b) = (label[f], label[i]);
            if a != b {
                succ[a].push(b);
                indeg[b] += 1;
            }
        }
    }
    let mut level = vec![0usize; n];
    let mut queue: Vec<usize> = (0..n).filter(|&l| label[l] == l && indeg[l] == 0).collect();
    let mut seen = 0;
    let roots = (0..n).filter(|&l| label[l] == l).count();
    while let Some(a) = queue.pop() {
        seen += 1;
        for &b in &succ[a] {
            level[b] = level[b].max(level[a] + 1);
            indeg[b] -= 1;
            if indeg[b] == 0 {
                queue.push(b);
            }
        }
    }
    (seen == roots).then_some(level)
}
