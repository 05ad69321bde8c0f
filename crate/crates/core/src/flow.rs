//! Algebraic gradient flow and lexicographically minimal cycles.
//!
//! All chains here are in the coordinates of the gradient's basis.

use crate::chain::{add_scaled_entries, Chain};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::reduction::{AlgebraicGradient, ReductionResult};

/// Read-only data shared by the flow operations.
#[derive(Clone, Debug)]
pub struct FlowContext {
    gradient: AlgebraicGradient,
}

impl FlowContext {
    pub fn new(gradient: AlgebraicGradient) -> Self {
        FlowContext { gradient }
    }

    pub fn gradient(&self) -> &AlgebraicGradient {
        &self.gradient
    }

    pub fn field(&self) -> Field {
        self.gradient.field()
    }

    pub fn len(&self) -> usize {
        self.gradient.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gradient.is_empty()
    }

    pub fn boundary(&self, c: &Chain) -> Chain {
        let entries = self.gradient.boundary().apply(c.entries(), self.field());
        Chain::from_sorted(c.degree().saturating_sub(1), entries)
    }

    pub fn is_cycle(&self, c: &Chain) -> bool {
        self.boundary(c).is_zero()
    }

    /// Whether the support of `c` contains a gradient facet.
    pub fn has_gradient_facet(&self, c: &Chain) -> bool {
        c.support().any(|i| self.gradient.cofacet_of(i).is_some())
    }
}

/// `F(a) = -<∂b, a>^{-1} b` for each pair `(a, b)`, zero on other elements.
pub fn apply_f(ctx: &FlowContext, c: &Chain) -> Chain {
    let f = ctx.field();
    let g = ctx.gradient();
    let terms = c.entries().iter().filter_map(|&(i, ci)| {
        let b = g.cofacet_of(i)?;
        Some((b, f.neg(f.div(ci, g.pair_coefficient(i)))))
    });
    Chain::from_terms(c.degree() + 1, terms, f)
}

/// `Φ(c) = c + ∂F(c) + F(∂c)`.
pub fn flow_once(ctx: &FlowContext, c: &Chain) -> Chain {
    let f = ctx.field();
    let mut out = c.clone();
    out.add(&ctx.boundary(&apply_f(ctx, c)), f);
    out.add(&apply_f(ctx, &ctx.boundary(c)), f);
    out
}

/// Iterates the flow until it reaches a fixed chain.
///
/// Fails after `l²` steps, which only happens for an invalid gradient.
pub fn stabilized_flow(ctx: &FlowContext, c: &Chain) -> Result<Chain> {
    let cap = (ctx.len() * ctx.len()).max(1);
    let mut cur = c.clone();
    for _ in 0..cap {
        let next = flow_once(ctx, &cur);
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
    Err(Error::FlowDidNotStabilize(cap))
}

fn eliminate(ctx: &FlowContext, c: &mut Vec<(usize, u32)>, i: usize, ci: u32) {
    let f = ctx.field();
    let g = ctx.gradient();
    let b = g.cofacet_of(i).expect("gradient facet");
    let mu = f.neg(f.div(ci, g.pair_coefficient(i)));
    add_scaled_entries(c, g.boundary().column(b), mu, f);
}

fn check_cycle(ctx: &FlowContext, c: &Chain) -> Result<()> {
    if ctx.is_cycle(c) {
        Ok(())
    } else {
        Err(Error::NotACycle)
    }
}

/// One ascending pass that clears each gradient facet once.
pub fn gradient_flow_reduction(ctx: &FlowContext, c: &Chain) -> Result<Chain> {
    check_cycle(ctx, c)?;
    let g = ctx.gradient();
    if let Some(&(a, b)) = g
        .pairs()
        .iter()
        .find(|&&(a, b)| g.dims()[a] == c.degree() && g.boundary().pivot(b) != Some(a))
    {
        return Err(Error::GradientNotReduced {
            degree: c.degree(),
            facet: a,
            cofacet: b,
        });
    }
    let mut v = c.entries().to_vec();
    let support: Vec<usize> = c.support().collect();
    for i in support {
        if ctx.gradient().cofacet_of(i).is_none() {
            continue;
        }
        if let Ok(k) = v.binary_search_by_key(&i, |e| e.0) {
            let ci = v[k].1;
            eliminate(ctx, &mut v, i, ci);
        }
    }
    Ok(Chain::from_sorted(c.degree(), v))
}

/// Clears gradient facets, largest first, until none is left.
pub fn stabilized_flow_reduction(ctx: &FlowContext, c: &Chain) -> Result<Chain> {
    check_cycle(ctx, c)?;
    let cap = (ctx.len() * ctx.len()).max(1);
    let mut v = c.entries().to_vec();
    for _ in 0..cap {
        let Some(&(i, ci)) = v.iter().rev().find(|e| ctx.gradient().cofacet_of(e.0).is_some()) else {
            return Ok(Chain::from_sorted(c.degree(), v));
        };
        eliminate(ctx, &mut v, i, ci);
    }
    Err(Error::FlowDidNotStabilize(cap))
}

/// The lexicographically minimal cycle homologous to `z`.
///
/// One descending pass: each birth index `i` of a pair `(i, j)` in the
/// support is cleared with `R_j`, whose other entries all lie below `i`.
/// `z` is in filtration coordinates of the reduced matrix.
pub fn lex_minimal_cycle(res: &ReductionResult, z: &Chain) -> Result<Chain> {
    let f = res.field();
    if z.support().any(|i| i >= res.len()) || !res.d().apply(z.entries(), f).is_empty() {
        return Err(Error::NotACycle);
    }
    let mut v = z.entries().to_vec();
    let mut bound = usize::MAX;
    loop {
        let end = v.partition_point(|e| e.0 < bound);
        let Some(&(i, ci)) = v[..end].iter().rev().find(|e| res.is_birth(e.0)) else {
            break;
        };
        let crate::reduction::IndexClass::Birth(j) = res.class(i) else {
            unreachable!()
        };
        let rj = res.r().column(j);
        let mu = f.neg(f.div(ci, rj.last().unwrap().1));
        add_scaled_entries(&mut v, rj, mu, f);
        bound = i;
    }
    Ok(Chain::from_sorted(z.degree(), v))
}

/// The same minimum computed literally as the stabilized flow of the
/// reduction gradient: `z` is moved to the reduction basis, flowed with
/// [`stabilized_flow_reduction`] and moved back.
pub fn lex_minimal_cycle_by_flow(ctx: &FlowContext, z: &Chain) -> Result<Chain> {
    let basis = ctx.gradient().basis();
    let local = Chain::from_sorted(z.degree(), basis.from_original(z.entries()));
    let flowed = stabilized_flow_reduction(ctx, &local)?;
    Ok(Chain::from_sorted(z.degree(), basis.to_original(flowed.entries())))
}
