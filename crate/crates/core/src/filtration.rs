//! Elementwise (simplexwise) filtrations.

use std::sync::Arc;

use crate::chain::Chain;
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::value::Value;

/// A total order on the simplices of a complex whose prefixes are
/// subcomplexes, together with non-decreasing filtration values.
///
/// Chains over a filtration use *positions* in this order as basis indices.
#[derive(Clone, Debug)]
pub struct ElementwiseFiltration {
    complex: Arc<SimplicialComplex>,
    order: Vec<usize>,
    position: Vec<usize>,
    values: Vec<Value>,
}

impl ElementwiseFiltration {
    /// The f-lexicographic order: by value, then dimension, then vertex-lex.
    ///
    /// `values` is indexed by complex index and must be monotone under
    /// face inclusion.
    pub fn f_lexicographic(complex: Arc<SimplicialComplex>, values: Vec<Value>) -> Result<Self> {
        assert_eq!(values.len(), complex.len(), "one value per simplex");
        check_monotone(&complex, &values)?;
        let mut order: Vec<usize> = (0..complex.len()).collect();
        // complex indices already follow (dimension, lex)
        order.sort_by(|&a, &b| values[a].cmp(&values[b]).then(a.cmp(&b)));
        let sorted_values = order.iter().map(|&i| values[i].clone()).collect();
        Self::assemble(complex, order, sorted_values)
    }

    /// A filtration from an explicit order (complex indices) and values per position.
    pub fn from_order(complex: Arc<SimplicialComplex>, order: Vec<usize>, values: Vec<Value>) -> Result<Self> {
        assert_eq!(order.len(), complex.len());
        assert_eq!(values.len(), complex.len());
        for k in 1..values.len() {
            if values[k - 1] > values[k] {
                return Err(Error::NotMonotone {
                    face: complex.simplex(order[k - 1]).clone(),
                    coface: complex.simplex(order[k]).clone(),
                });
            }
        }
        Self::assemble(complex, order, values)
    }

    fn assemble(complex: Arc<SimplicialComplex>, order: Vec<usize>, values: Vec<Value>) -> Result<Self> {
        let mut position = vec![usize::MAX; complex.len()];
        for (p, &i) in order.iter().enumerate() {
            assert!(position[i] == usize::MAX, "order repeats a simplex");
            position[i] = p;
        }
        // every prefix must be a subcomplex: each facet precedes its cofacet
        for (p, &i) in order.iter().enumerate() {
            if complex.facets(i).iter().any(|&f| position[f] > p) {
                return Err(Error::NotFaceClosed(complex.simplex(i).clone()));
            }
        }
        Ok(ElementwiseFiltration {
            complex,
            order,
            position,
            values,
        })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn complex_arc(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Complex index of the simplex at `pos`.
    #[inline]
    pub fn complex_index(&self, pos: usize) -> usize {
        self.order[pos]
    }

    /// Position of the simplex with complex index `i`.
    #[inline]
    pub fn position(&self, i: usize) -> usize {
        self.position[i]
    }

    pub fn position_of(&self, s: &Simplex) -> Option<usize> {
        self.complex.index_of(s).map(|i| self.position[i])
    }

    #[inline]
    pub fn simplex(&self, pos: usize) -> &Simplex {
        self.complex.simplex(self.order[pos])
    }

    #[inline]
    pub fn dim(&self, pos: usize) -> usize {
        self.simplex(pos).dim()
    }

    #[inline]
    pub fn value(&self, pos: usize) -> &Value {
        &self.values[pos]
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    /// Values indexed by complex index.
    pub fn values_by_complex_index(&self) -> Vec<Value> {
        let mut v = vec![Value::zero(); self.len()];
        for (p, &i) in self.order.iter().enumerate() {
            v[i] = self.values[p].clone();
        }
        v
    }

    /// Positions of facets, paired with the vertex index they omit.
    pub fn facet_positions(&self, pos: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.complex
            .facets(self.order[pos])
            .iter()
            .enumerate()
            .map(|(k, &f)| (k, self.position[f]))
    }

    pub fn cofacet_positions(&self, pos: usize) -> impl Iterator<Item = usize> + '_ {
        self.complex.cofacets(self.order[pos]).iter().map(|&c| self.position[c])
    }

    /// The boundary of the simplex at `pos`, in position coordinates.
    pub fn boundary_chain(&self, pos: usize, field: Field) -> Chain {
        let d = self.dim(pos);
        Chain::from_terms(
            d.saturating_sub(1),
            self.facet_positions(pos).map(|(k, p)| (p, field.sign(k))),
            field,
        )
    }

    /// Boundary of an arbitrary chain.
    pub fn boundary(&self, c: &Chain, field: Field) -> Chain {
        let mut terms = Vec::new();
        for &(p, coeff) in c.entries() {
            for (k, f) in self.facet_positions(p) {
                terms.push((f, field.mul(coeff, field.sign(k))));
            }
        }
        Chain::from_terms(c.degree().saturating_sub(1), terms, field)
    }

    /// Number of leading simplices with value `<= r`.
    pub fn sublevel_len(&self, r: &Value) -> usize {
        self.values.partition_point(|v| v <= r)
    }

    /// Number of leading simplices with value `< r`.
    pub fn open_sublevel_len(&self, r: &Value) -> usize {
        self.values.partition_point(|v| v < r)
    }

    /// The filtration of the first `len` simplices, which form a subcomplex.
    pub fn prefix(&self, len: usize) -> ElementwiseFiltration {
        let sub = Arc::new(self.complex.subcomplex(self.order[..len].iter().copied()));
        let order: Vec<usize> = self.order[..len]
            .iter()
            .map(|&i| sub.index_of(self.complex.simplex(i)).unwrap())
            .collect();
        Self::assemble(sub, order, self.values[..len].to_vec()).expect("prefix of a filtration is a filtration")
    }

    /// Simplices at the given positions.
    pub fn simplices_at(&self, positions: impl IntoIterator<Item = usize>) -> Vec<Simplex> {
        positions.into_iter().map(|p| self.simplex(p).clone()).collect()
    }
}

/// Errors on the first facet pair with `f(face) > f(coface)`.
pub fn check_monotone(complex: &SimplicialComplex, values: &[Value]) -> Result<()> {
    for i in 0..complex.len() {
        for &f in complex.facets(i) {
            if values[f] > values[i] {
                return Err(Error::NotMonotone {
                    face: complex.simplex(f).clone(),
                    coface: complex.simplex(i).clone(),
                });
            }
        }
    }
    Ok(())
}
