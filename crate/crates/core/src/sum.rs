//! Formal rational-weighted sums of numbered graphs, and their projection
//! onto isomorphism classes.
//!
//! A [`GraphSum`] is homogeneous in vertex count: all terms live in the same
//! tensor width. Term keys are the numbered graphs themselves, so identical
//! numbered graphs merge additively; passing to unnumbered Feynman graphs
//! happens only in [`GraphSum::project`].

use std::collections::BTreeMap;

use num::Zero;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{Int, Rational};

/// Exact rational-weighted sum of numbered graphs on a fixed vertex count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSum {
    v: usize,
    terms: BTreeMap<Graph, Rational>,
}

impl GraphSum {
    pub fn zero(v: usize) -> GraphSum {
        GraphSum { v, terms: BTreeMap::new() }
    }

    /// A single graph with coefficient 1.
    pub fn from_graph(g: Graph) -> GraphSum {
        let mut s = GraphSum::zero(g.num_vertices());
        s.add_term(g, Rational::from_integer(Int::from(1))).expect("width matches");
        s
    }

    pub fn num_vertices(&self) -> usize {
        self.v
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Graph, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, g: &Graph) -> Rational {
        self.terms.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    /// Add `c * g`, merging with an existing identical numbered graph and
    /// dropping the term if the coefficient cancels.
    pub fn add_term(&mut self, g: Graph, c: Rational) -> Result<()> {
        if g.num_vertices() != self.v {
            return Err(Error::MixedWidth { left: self.v, right: g.num_vertices() });
        }
        if c.is_zero() {
            return Ok(());
        }
        let entry = self.terms.entry(g);
        match entry {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &GraphSum) -> Result<()> {
        if other.v != self.v {
            return Err(Error::MixedWidth { left: self.v, right: other.v });
        }
        for (g, c) in &other.terms {
            self.add_term(g.clone(), c.clone())?;
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> GraphSum {
        if c.is_zero() {
            return GraphSum::zero(self.v);
        }
        GraphSum {
            v: self.v,
            terms: self.terms.iter().map(|(g, w)| (g.clone(), w * c)).collect(),
        }
    }

    /// Apply a linear map term by term: `f` receives each graph and emits
    /// its image terms, which are scaled by the source coefficient.
    pub fn map_terms<F>(&self, out_v: usize, mut f: F) -> Result<GraphSum>
    where
        F: FnMut(&Graph) -> Result<Vec<(Graph, Rational)>>,
    {
        let mut out = GraphSum::zero(out_v);
        for (g, c) in &self.terms {
            for (h, w) in f(g)? {
                out.add_term(h, w * c)?;
            }
        }
        Ok(out)
    }

    /// Componentwise product: union of edges/loops/legs termwise, bilinear
    /// in the coefficients. Both sums must share the vertex count.
    pub fn componentwise_mul(&self, other: &GraphSum) -> Result<GraphSum> {
        if other.v != self.v {
            return Err(Error::MixedWidth { left: self.v, right: other.v });
        }
        let mut out = GraphSum::zero(self.v);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.union(b)?, ca * cb)?;
            }
        }
        Ok(out)
    }

    /// Collapse numbered terms into isomorphism classes, summing their
    /// coefficients.
    pub fn project(&self) -> ClassMap {
        let mut map: BTreeMap<FeynmanClass, Rational> = BTreeMap::new();
        for (g, c) in &self.terms {
            let class = FeynmanClass::of(g);
            let entry = map.entry(class).or_insert_with(Rational::zero);
            *entry += c;
        }
        map.retain(|_, c| !c.is_zero());
        map
    }
}

/// Canonical isomorphism class of an unnumbered graph together with its
/// automorphism order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FeynmanClass {
    canonical: Graph,
    aut_order: Int,
}

impl FeynmanClass {
    /// Class of a numbered graph: canonical representative plus `|Aut|`.
    pub fn of(g: &Graph) -> FeynmanClass {
        let (canonical, _) = g.canonical_with_vertex_aut();
        let aut_order = g.aut_order();
        FeynmanClass { canonical, aut_order }
    }

    pub fn canonical(&self) -> &Graph {
        &self.canonical
    }

    pub fn aut_order(&self) -> &Int {
        &self.aut_order
    }

    /// Inverse symmetry factor `1/|Aut|`.
    pub fn weight(&self) -> Rational {
        Rational::new(Int::from(1), self.aut_order.clone())
    }

    /// Coalgebra grading: a class on `v` vertices has degree `v - 1`.
    pub fn degree(&self) -> usize {
        self.canonical.num_vertices() - 1
    }
}

/// Weighted sum over isomorphism classes.
pub type ClassMap = BTreeMap<FeynmanClass, Rational>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn g(v: usize, edges: &[(usize, usize, usize)]) -> Graph {
        let mut out = Graph::isolated(v).unwrap();
        for &(i, j, m) in edges {
            out = out.with_edge(i, j, m).unwrap();
        }
        out
    }

    #[test]
    fn terms_merge_and_cancel() {
        let mut s = GraphSum::zero(2);
        let banana = g(2, &[(1, 2, 2)]);
        s.add_term(banana.clone(), rat(1, 4)).unwrap();
        s.add_term(banana.clone(), rat(1, 4)).unwrap();
        assert_eq!(s.coeff(&banana), rat(1, 2));
        s.add_term(banana.clone(), rat(-1, 2)).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn width_mismatch_rejected() {
        let mut s = GraphSum::zero(2);
        assert!(s.add_term(Graph::single_vertex(), rat(1, 1)).is_err());
    }

    #[test]
    fn project_merges_v23_fixture() {
        // The three numbered doubled-edge triangles carry (3/32, 1/16, 3/32)
        // and all project onto one class of weight 1/4.
        let mut s = GraphSum::zero(3);
        s.add_term(g(3, &[(1, 2, 2), (1, 3, 1), (2, 3, 1)]), rat(3, 32)).unwrap();
        s.add_term(g(3, &[(1, 2, 1), (1, 3, 2), (2, 3, 1)]), rat(1, 16)).unwrap();
        s.add_term(g(3, &[(1, 2, 1), (1, 3, 1), (2, 3, 2)]), rat(3, 32)).unwrap();
        let classes = s.project();
        assert_eq!(classes.len(), 1);
        let (class, w) = classes.iter().next().unwrap();
        assert_eq!(w, &rat(1, 4));
        assert_eq!(class.aut_order(), &Int::from(4));
    }

    #[test]
    fn project_empty() {
        assert!(GraphSum::zero(3).project().is_empty());
    }

    #[test]
    fn project_triangle() {
        let s = GraphSum::from_graph(g(3, &[(1, 2, 1), (1, 3, 1), (2, 3, 1)])).scale(&rat(1, 6));
        let classes = s.project();
        assert_eq!(classes.len(), 1);
        let (class, w) = classes.iter().next().unwrap();
        assert_eq!(w, &rat(1, 6));
        assert_eq!(w, &class.weight());
    }

    #[test]
    fn project_invariant_under_renumbering() {
        let mut s = GraphSum::zero(4);
        s.add_term(g(4, &[(1, 2, 1), (2, 3, 2), (3, 4, 1), (1, 4, 1)]), rat(2, 7)).unwrap();
        s.add_term(g(4, &[(1, 2, 3), (2, 3, 1), (1, 3, 1)]), rat(-1, 3)).unwrap();
        let perm = vec![3, 1, 4, 2];
        let relabeled = s
            .map_terms(4, |gr| Ok(vec![(gr.relabel(&perm)?, rat(1, 1))]))
            .unwrap();
        assert_eq!(s.project(), relabeled.project());
    }
}
