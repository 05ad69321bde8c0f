//! Sparse chains over Z/p on an ordered basis.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;

/// A sparse chain: basis index → non-zero residue, sorted by index.
///
/// Basis indices are positions in some fixed ordered basis (usually a
/// filtration), so the pivot is simply the last entry.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Chain {
    degree: usize,
    entries: Vec<(usize, u32)>,
}

/// Outcome of comparing two chains in the support-lexicographic preorder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LexOrdering {
    Less,
    EqualSupport,
    Greater,
}

impl Chain {
    pub fn zero(degree: usize) -> Self {
        Chain {
            degree,
            entries: Vec::new(),
        }
    }

    pub fn basis(degree: usize, index: usize) -> Self {
        Chain {
            degree,
            entries: vec![(index, 1)],
        }
    }

    /// Builds from arbitrary `(index, residue)` terms, summing duplicates.
    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (usize, u32)>, field: Field) -> Self {
        let mut v: Vec<(usize, u32)> = terms.into_iter().collect();
        v.sort_unstable_by_key(|e| e.0);
        let mut entries: Vec<(usize, u32)> = Vec::with_capacity(v.len());
        for (i, c) in v {
            let c = c % field.prime();
            match entries.last_mut() {
                Some(last) if last.0 == i => last.1 = field.add(last.1, c),
                _ => entries.push((i, c)),
            }
        }
        entries.retain(|e| e.1 != 0);
        Chain { degree, entries }
    }

    /// Wraps entries that are already sorted, deduplicated and non-zero.
    pub(crate) fn from_sorted(degree: usize, entries: Vec<(usize, u32)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|e| e.1 != 0));
        Chain { degree, entries }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn set_degree(&mut self, degree: usize) {
        self.degree = degree;
    }

    #[inline]
    pub fn entries(&self) -> &[(usize, u32)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, u32)> {
        self.entries
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> impl DoubleEndedIterator<Item = usize> + ExactSizeIterator + '_ {
        self.entries.iter().map(|e| e.0)
    }

    /// Coefficient at `index` (zero if absent).
    pub fn get(&self, index: usize) -> u32 {
        match self.entries.binary_search_by_key(&index, |e| e.0) {
            Ok(k) => self.entries[k].1,
            Err(_) => 0,
        }
    }

    /// The largest index in the support.
    #[inline]
    pub fn pivot(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0)
    }

    #[inline]
    pub fn pivot_entry(&self) -> Option<(usize, u32)> {
        self.entries.last().copied()
    }

    pub fn scale(&mut self, mu: u32, field: Field) {
        let mu = mu % field.prime();
        if mu == 0 {
            self.entries.clear();
            return;
        }
        for e in &mut self.entries {
            e.1 = field.mul(e.1, mu);
        }
    }

    /// `self += mu * other` by a sorted merge.
    pub fn add_scaled(&mut self, other: &Chain, mu: u32, field: Field) {
        add_scaled_entries(&mut self.entries, &other.entries, mu, field);
    }

    pub fn add(&mut self, other: &Chain, field: Field) {
        self.add_scaled(other, 1, field);
    }

    pub fn sub(&mut self, other: &Chain, field: Field) {
        self.add_scaled(other, field.neg(1), field);
    }

    pub fn neg(&self, field: Field) -> Chain {
        let mut c = self.clone();
        c.scale(field.neg(1), field);
        c
    }

    /// Support-lexicographic comparison: `a ⊑ b` iff the supports agree or the
    /// largest index in their symmetric difference lies in `b`.
    pub fn lex_cmp(&self, other: &Chain) -> Result<LexOrdering> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        Ok(lex_cmp_supports(self.support(), other.support()))
    }
}

/// Compares two strictly increasing index sequences lexicographically from the top.
pub(crate) fn lex_cmp_supports(
    a: impl DoubleEndedIterator<Item = usize>,
    b: impl DoubleEndedIterator<Item = usize>,
) -> LexOrdering {
    let mut a = a.rev().peekable();
    let mut b = b.rev().peekable();
    loop {
        match (a.peek(), b.peek()) {
            (None, None) => return LexOrdering::EqualSupport,
            (Some(_), None) => return LexOrdering::Greater,
            (None, Some(_)) => return LexOrdering::Less,
            (Some(x), Some(y)) => match x.cmp(y) {
                Ordering::Equal => {
                    a.next();
                    b.next();
                }
                Ordering::Greater => return LexOrdering::Greater,
                Ordering::Less => return LexOrdering::Less,
            },
        }
    }
}

/// `dst += mu * src` for sorted sparse vectors.
pub(crate) fn add_scaled_entries(dst: &mut Vec<(usize, u32)>, src: &[(usize, u32)], mu: u32, field: Field) {
    let mu = mu % field.prime();
    if mu == 0 || src.is_empty() {
        return;
    }
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() && j < src.len() {
        let (a, b) = (dst[i], src[j]);
        match a.0.cmp(&b.0) {
            Ordering::Less => {
                out.push(a);
                i += 1;
            }
            Ordering::Greater => {
                out.push((b.0, field.mul(b.1, mu)));
                j += 1;
            }
            Ordering::Equal => {
                let c = field.add(a.1, field.mul(b.1, mu));
                if c != 0 {
                    out.push((a.0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&dst[i..]);
    out.extend(src[j..].iter().map(|&(k, c)| (k, field.mul(c, mu))));
    *dst = out;
}
