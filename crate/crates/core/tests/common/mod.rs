#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use wrapcycle::random::{random_complex, random_filtration, random_morse_function, rng};
use wrapcycle::reduction::{
    apparent_pairs_gradient, decomposition_gradient, exhaustive_reduce, filtration_boundary_matrix, reduction_gradient,
    AlgebraicGradient, ReductionResult,
};
use wrapcycle::{Chain, ElementwiseFiltration, Field, SimplicialComplex, Value};

pub fn complex(simplices: &[&[u32]]) -> Arc<SimplicialComplex> {
    Arc::new(SimplicialComplex::build(simplices.iter().map(|s| s.to_vec())).unwrap())
}

/// Filtration with all values zero, i.e. ordered by dimension then lexicographically.
pub fn flat(simplices: &[&[u32]]) -> ElementwiseFiltration {
    let k = complex(simplices);
    let n = k.len();
    ElementwiseFiltration::f_lexicographic(k, vec![Value::zero(); n]).unwrap()
}

pub fn hollow_triangle() -> ElementwiseFiltration {
    flat(&[&[0, 1], &[0, 2], &[1, 2]])
}

pub fn triangle() -> ElementwiseFiltration {
    flat(&[&[0, 1, 2]])
}

pub fn quad_rows() -> Vec<Vec<String>> {
    [["0", "0"], ["1", "0"], ["1.02", "1"], ["0", "1.01"]]
        .iter()
        .map(|r| r.iter().map(|s| s.to_string()).collect())
        .collect()
}

fn mod_p(x: i64, p: i64) -> i64 {
    x.rem_euclid(p)
}

fn inv_p(a: i64, p: i64) -> i64 {
    // Fermat: a^(p-2)
    let (mut base, mut e, mut acc) = (mod_p(a, p), p - 2, 1i64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Rank of a dense matrix over Z/p by Gaussian elimination.
pub fn dense_rank(mut m: Vec<Vec<i64>>, p: i64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..rows).find(|&k| mod_p(m[k][c], p) != 0) else {
            continue;
        };
        m.swap(r, k);
        let inv = inv_p(m[r][c], p);
        let pivot_row = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            let factor = mod_p(row[c], p) * inv % p;
            if k != r && factor != 0 {
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = mod_p(*x - factor * y, p);
                }
            }
        }
        r += 1;
    }
    r
}

/// Betti numbers from dense boundary matrices built directly from vertex lists.
pub fn dense_betti(k: &SimplicialComplex, p: u32) -> Vec<usize> {
    let p = p as i64;
    let top = k.max_dim().unwrap_or(0);
    let by_dim: Vec<Vec<Vec<u32>>> = (0..=top)
        .map(|d| {
            k.simplices()
                .iter()
                .filter(|s| s.dim() == d)
                .map(|s| s.vertices().to_vec())
                .collect()
        })
        .collect();
    let rank_of = |d: usize| -> usize {
        if d == 0 || d > top {
            return 0;
        }
        let rows = &by_dim[d - 1];
        let mut m = vec![vec![0i64; by_dim[d].len()]; rows.len()];
        for (j, s) in by_dim[d].iter().enumerate() {
            for drop in 0..s.len() {
                let mut f = s.clone();
                f.remove(drop);
                let i = rows.iter().position(|r| *r == f).unwrap();
                m[i][j] = if drop % 2 == 0 { 1 } else { p - 1 };
            }
        }
        dense_rank(m, p)
    };
    (0..=top)
        .map(|d| by_dim[d].len() - rank_of(d) - rank_of(d + 1))
        .collect()
}

/// Support bitset over filtration positions.
#[derive(Clone, PartialEq, Eq)]
pub struct Bits(pub Vec<u64>);

impl Bits {
    pub fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    pub fn from_chain(c: &Chain, n: usize) -> Self {
        let mut b = Bits::new(n);
        for i in c.support() {
            b.0[i / 64] ^= 1 << (i % 64);
        }
        b
    }

    pub fn xor(&mut self, o: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a ^= b;
        }
    }

    /// Lexicographic comparison from the largest index down.
    pub fn less(&self, o: &Bits) -> bool {
        for (a, b) in self.0.iter().zip(&o.0).rev() {
            if a != b {
                return a < b;
            }
        }
        false
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.0.len() * 64)
            .filter(|&i| self.0[i / 64] >> (i % 64) & 1 == 1)
            .collect()
    }
}

/// Lexicographic minimum of `z + span{∂τ : τ of degree n+1}` over Z/2 by
/// enumerating all subsets in Gray-code order.
pub fn brute_force_lex_min(filt: &ElementwiseFiltration, z: &Chain) -> Vec<usize> {
    let n = filt.len();
    let f = Field::z2();
    let cofaces: Vec<Bits> = (0..n)
        .filter(|&j| filt.dim(j) == z.degree() + 1)
        .map(|j| Bits::from_chain(&filt.boundary_chain(j, f), n))
        .collect();
    assert!(cofaces.len() <= 20, "too many cofaces for enumeration");
    let mut cur = Bits::from_chain(z, n);
    let mut best = cur.clone();
    for step in 1u64..(1 << cofaces.len()) {
        cur.xor(&cofaces[step.trailing_zeros() as usize]);
        if cur.less(&best) {
            best = cur.clone();
        }
    }
    best.indices()
}

/// Random filtered complex with its exhaustive reduction over Z/2, Z/3 or Z/5.
pub struct Instance {
    pub filt: ElementwiseFiltration,
    pub res: ReductionResult,
    pub field: Field,
}

pub fn instance(seed: u64) -> Instance {
    let mut r = rng(seed);
    let n = r.random_range(3..8);
    let tops = r.random_range(1..7);
    let field = Field::new([2, 3, 5][r.random_range(0..3)]).unwrap();
    let filt = random_filtration(&mut r, n, 3, tops);
    let res = exhaustive_reduce(&filtration_boundary_matrix(&filt, field));
    Instance { filt, res, field }
}

pub fn gradients(inst: &Instance, seed: u64) -> Vec<AlgebraicGradient> {
    let d = filtration_boundary_matrix(&inst.filt, inst.field);
    let full = [
        apparent_pairs_gradient(&d).unwrap(),
        reduction_gradient(&inst.res).unwrap(),
        decomposition_gradient(&inst.res).unwrap(),
    ];
    let mut r = rng(seed ^ 0xabcd);
    let mut out = full.to_vec();
    for g in &full {
        let keep: Vec<bool> = (0..g.pairs().len()).map(|_| r.random_bool(0.5)).collect();
        out.push(g.sub_gradient(&keep).unwrap());
    }
    out
}

pub fn random_chain(r: &mut impl Rng, n: usize, dims: &[usize], f: Field) -> Chain {
    let deg = dims[r.random_range(0..n)];
    chain_of_degree(r, deg, dims, f)
}

pub fn chain_of_degree(r: &mut impl Rng, deg: usize, dims: &[usize], f: Field) -> Chain {
    let mut terms = Vec::new();
    for (i, &d) in dims.iter().enumerate() {
        if d == deg && r.random_bool(0.5) {
            terms.push((i, r.random_range(1..f.prime())));
        }
    }
    Chain::from_terms(deg, terms, f)
}

/// A random cycle in original coordinates: a combination of essential
/// cycles `S_i` and boundaries `R_j`.
pub fn random_cycle(r: &mut impl Rng, res: &ReductionResult, deg: usize) -> Chain {
    let f = res.field();
    let mut c = Chain::zero(deg);
    for &e in res.essential() {
        if res.dims()[e] == deg && r.random_bool(0.6) {
            c.add_scaled(&res.s_chain(e), r.random_range(1..f.prime()), f);
        }
    }
    for &(_, j) in res.pairs() {
        if res.dims()[j] == deg + 1 && r.random_bool(0.6) {
            c.add_scaled(&res.r_chain(j), r.random_range(1..f.prime()), f);
        }
    }
    c
}

/// Random instance over Z/2 whose top-degree cofaces are few enough to enumerate.
pub fn small_instance(seed: u64) -> ElementwiseFiltration {
    let mut r = rng(seed);
    loop {
        let n = r.random_range(4..8);
        let tops = r.random_range(2..8);
        let f = random_filtration(&mut r, n, 3, tops);
        let max_cofaces = (0..3)
            .map(|d| (0..f.len()).filter(|&j| f.dim(j) == d + 1).count())
            .max()
            .unwrap();
        if max_cofaces <= 15 {
            return f;
        }
    }
}

/// Random complex with a generalized discrete Morse function.
pub fn morse_instance(seed: u64) -> (Arc<SimplicialComplex>, Vec<Value>) {
    let mut r = rng(seed);
    let n = r.random_range(3..8);
    let tops = r.random_range(1..7);
    let k = random_complex(&mut r, n, 3, tops);
    let f = random_morse_function(&mut r, &k, 40);
    (Arc::new(k), f)
}
