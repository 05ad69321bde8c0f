use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;
use wrapcycle::morse::{gradient_partition, zero_persistence_apparent_pairs, DelaunayMorse};
use wrapcycle::random::{random_complex, random_morse_function, rng, uniform_cloud};
use wrapcycle::{ElementwiseFiltration, Error, Value};

fn instance(seed: u64) -> (Arc<wrapcycle::SimplicialComplex>, Vec<Value>) {
    let mut r = rng(seed);
    let n = r.random_range(3..8);
    let tops = r.random_range(1..7);
    let k = random_complex(&mut r, n, 3, tops);
    let f = random_morse_function(&mut r, &k, 40);
    (Arc::new(k), f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn partition_covers_and_matches_intervals(seed in any::<u64>()) {
        let (k, f) = instance(seed);
        let p = gradient_partition(k.clone(), f.clone()).unwrap();
        let mut seen = vec![0usize; k.len()];
        for (id, iv) in p.intervals().iter().enumerate() {
            let lo = k.simplex(iv.lower);
            let hi = k.simplex(iv.upper);
            let between: Vec<usize> = (0..k.len())
                .filter(|&i| lo.is_face_of(k.simplex(i)) && k.simplex(i).is_face_of(hi))
                .collect();
            prop_assert_eq!(&between, &iv.members);
            for &m in &iv.members {
                seen[m] += 1;
                prop_assert_eq!(p.interval_of(m), id);
                prop_assert_eq!(&f[m], &f[iv.lower]);
            }
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn apparent_pairs_equal_refinement(seed in any::<u64>()) {
        let (k, f) = instance(seed);
        let p = gradient_partition(k.clone(), f.clone()).unwrap();
        let filt = ElementwiseFiltration::f_lexicographic(k, f).unwrap();
        let refined = p.minimal_vertex_refinement();
        prop_assert_eq!(zero_persistence_apparent_pairs(&filt).simplex_pairs(), refined.simplex_pairs());
        prop_assert_eq!(refined.critical(), {
            let mut c = p.critical();
            c.sort_unstable();
            c
        });
    }

    #[test]
    fn refined_descending_complex_is_nested(seed in any::<u64>(), mask in any::<u64>()) {
        let (k, f) = instance(seed);
        let p = gradient_partition(k, f).unwrap();
        let refined = p.minimal_vertex_refinement();
        let crit = p.critical();
        let chosen: Vec<usize> = crit.iter().enumerate().filter(|(b, _)| mask >> (b % 64) & 1 == 1).map(|(_, &c)| c).collect();
        let coarse = p.descending_complex(&chosen).unwrap();
        let fine = refined.descending_complex(&chosen).unwrap();
        prop_assert!(fine.is_subset_of(&coarse));
        prop_assert!(fine.is_face_closed() && coarse.is_face_closed());
        for &c in &chosen {
            prop_assert!(fine.contains(c));
        }
    }
}

fn clouds() -> impl Iterator<Item = wrapcycle::PointCloud> {
    (0..200u64).map(|seed| {
        let mut r = rng(1000 + seed);
        let d = if seed % 2 == 0 { 2 } else { 3 };
        let n = r.random_range(d + 2..=40);
        uniform_cloud(&mut r, n, d, 9).unwrap()
    })
}

#[test]
fn delaunay_radius_is_generalized_morse() {
    let mut checked = 0;
    for cloud in clouds() {
        let dm = match DelaunayMorse::new(&cloud) {
            Ok(dm) => dm,
            Err(Error::Degenerate { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        checked += 1;
        let values = dm.filtration.values_by_complex_index();
        let mut grid: Vec<Value> = values.clone();
        grid.sort();
        grid.dedup();
        let mut prev = dm.wrap(&Value::from_int(-1));
        assert!(prev.is_empty());
        for r in grid.iter().step_by(7).chain(grid.last()) {
            let w = dm.wrap(r);
            assert!(w.is_face_closed());
            assert!(prev.is_subset_of(&w));
            assert!(w.is_subset_of(&dm.sublevel(r)));
            prev = w;
        }
        for c in dm.partition.critical() {
            assert!(prev.contains(c));
        }
    }
    assert!(checked >= 190, "{checked}");
}

#[test]
fn generator_produces_large_intervals() {
    let mut sizes = [0usize; 3];
    for seed in 0..200 {
        let (k, f) = instance(seed);
        let p = gradient_partition(k, f).unwrap();
        for iv in p.intervals() {
            sizes[iv.members.len().trailing_zeros() as usize] += 1;
        }
    }
    assert!(sizes.iter().all(|&c| c > 20), "{sizes:?}");
}
