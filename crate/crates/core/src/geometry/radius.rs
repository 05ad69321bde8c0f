//! Radius functions on complexes over a point cloud.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::PointCloud;
use crate::complex::{Simplex, SimplicialComplex, Vertex};
use crate::error::{Error, Result};
use crate::value::Value;

fn point_indices(s: &Simplex, cloud: &PointCloud) -> Result<Vec<usize>> {
    s.vertices()
        .iter()
        .map(|&v| {
            let i = v as usize;
            if i < cloud.len() {
                Ok(i)
            } else {
                Err(Error::NotInComplex(Simplex::vertex(v)))
            }
        })
        .collect()
}

/// Squared radius of the smallest empty circumsphere of every simplex of a
/// Delaunay complex, indexed like the complex.
///
/// Maximal simplices get their circumradius. A lower simplex whose smallest
/// circumsphere contains no vertex of its star keeps that radius, and
/// otherwise inherits the minimum over its cofacets.
pub fn delaunay_radius_values(k: &SimplicialComplex, cloud: &PointCloud) -> Result<Vec<Value>> {
    let d = cloud.dim();
    let mut values: Vec<Option<Value>> = vec![None; k.len()];
    check_locally_delaunay(k, cloud)?;
    // simplices are stored by dimension, so a reverse sweep sees cofacets first
    for i in (0..k.len()).rev() {
        let s = k.simplex(i);
        let idx = point_indices(s, cloud)?;
        let cof = k.cofacets(i);
        if cof.is_empty() {
            if s.dim() < d && k.count_of_dim(d) > 0 {
                return Err(Error::NotDelaunay(format!("{s} is maximal but not top-dimensional")));
            }
            values[i] = Some(cloud.circumsphere(&idx)?.radius_sq().clone());
            continue;
        }
        let ball = cloud.circumsphere(&idx)?;
        let mut gabriel = true;
        for &c in cof {
            let w = *k
                .simplex(c)
                .vertices()
                .iter()
                .find(|v| !s.contains(**v))
                .expect("cofacet adds one vertex");
            // points on the sphere do not spoil emptiness
            if ball.classify(cloud.point(w as usize)) == Ordering::Less {
                gabriel = false;
            }
        }
        values[i] = Some(if gabriel {
            ball.radius_sq().clone()
        } else {
            cof.iter()
                .map(|&c| values[c].as_ref().expect("cofacets come first"))
                .min()
                .expect("non-empty")
                .clone()
        });
    }
    Ok(values.into_iter().map(|v| v.expect("all assigned")).collect())
}

/// Every ridge shared by two top simplices must be locally Delaunay.
fn check_locally_delaunay(k: &SimplicialComplex, cloud: &PointCloud) -> Result<()> {
    let d = cloud.dim();
    if k.count_of_dim(d) == 0 {
        return Ok(());
    }
    for i in 0..k.len() {
        if k.dim(i) + 1 != d {
            continue;
        }
        let cof = k.cofacets(i);
        if cof.len() > 2 {
            return Err(Error::NotDelaunay(format!(
                "{} has {} top cofacets",
                k.simplex(i),
                cof.len()
            )));
        }
        if let [a, b] = *cof {
            let ta = k.simplex(a);
            let w = *k.simplex(b).vertices().iter().find(|v| !ta.contains(**v)).unwrap();
            let ball = cloud.circumsphere(&point_indices(ta, cloud)?)?;
            match ball.classify(cloud.point(w as usize)) {
                Ordering::Less => return Err(Error::NotDelaunay(format!("circumsphere of {ta} contains point {w}"))),
                Ordering::Equal => {
                    let mut pts = point_indices(ta, cloud)?;
                    pts.push(w as usize);
                    pts.sort_unstable();
                    return Err(Error::Degenerate {
                        kind: "cospherical",
                        points: pts,
                    });
                }
                Ordering::Greater => {}
            }
        }
    }
    Ok(())
}

/// Squared radius of the smallest enclosing ball of every simplex.
pub fn cech_radius_values(k: &SimplicialComplex, cloud: &PointCloud) -> Result<Vec<Value>> {
    k.simplices()
        .iter()
        .map(|s| Ok(cloud.min_enclosing_ball(&point_indices(s, cloud)?)?.radius_sq().clone()))
        .collect()
}

/// Squared radius of the smallest ball enclosing the whole cloud.
pub fn enclosing_radius_sq(cloud: &PointCloud) -> Result<Value> {
    let mut idx: Vec<usize> = (0..cloud.len()).collect();
    // Welzl runs in expected linear time on a random order
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(0x5eed));
    Ok(cloud.min_enclosing_ball(&idx)?.radius_sq().clone())
}

/// The Čech complex truncated at `max_dim` and squared radius `max_radius_sq`
/// (defaulting to the enclosing radius of the cloud), with its radius values.
pub fn cech_complex(
    cloud: &PointCloud,
    max_dim: usize,
    max_radius_sq: Option<Value>,
) -> Result<(SimplicialComplex, Vec<Value>)> {
    if cloud.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let cap = match max_radius_sq {
        Some(c) => c,
        None => enclosing_radius_sq(cloud)?,
    };
    let n = cloud.len() as Vertex;
    let mut layer: Vec<Simplex> = (0..n).map(Simplex::vertex).collect();
    let mut all = layer.clone();
    for _ in 0..max_dim {
        let present: std::collections::HashSet<&Simplex> = layer.iter().collect();
        let mut next = Vec::new();
        for s in &layer {
            let top = *s.vertices().last().unwrap();
            for w in top + 1..n {
                let t = s.with(w);
                if !t.facets().all(|f| present.contains(&f)) {
                    continue;
                }
                let idx: Vec<usize> = t.vertices().iter().map(|&v| v as usize).collect();
                // affinely dependent sets exceed the ambient dimension; skip them
                if idx.len() > cloud.dim() + 1 {
                    continue;
                }
                if cloud.min_enclosing_ball(&idx)?.radius_sq() <= &cap {
                    next.push(t);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    let k = SimplicialComplex::from_closed(all);
    let values = cech_radius_values(&k, cloud)?;
    Ok((k, values))
}
