//! The commutative Hopf algebra on monomials of field-operator labels.
//!
//! Monomials are label multisets; the coproduct splits a monomial over two
//! tensor slots, its k-fold iterate over `k + 1` slots, and the truncated
//! coproduct keeps only splittings with both sides nonempty.

use std::collections::BTreeMap;

use num::Zero;

use crate::graph::Label;
use crate::rational::{Int, Rational};

/// A multiset of field-operator labels; degree 0 is the unit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<Label>);

impl Monomial {
    pub fn unit() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn new<I, L>(labels: I) -> Monomial
    where
        I: IntoIterator<Item = L>,
        L: Into<Label>,
    {
        let mut v: Vec<Label> = labels.into_iter().map(Into::into).collect();
        v.sort();
        Monomial(v)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    /// True when no label repeats.
    pub fn is_distinct(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1])
    }

    /// Free commutative product: multiset union.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        v.sort();
        Monomial(v)
    }
}

/// Rational-weighted sum of fixed-width monomial tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSum {
    width: usize,
    terms: BTreeMap<Vec<Monomial>, Rational>,
}

impl TensorSum {
    pub fn zero(width: usize) -> TensorSum {
        TensorSum { width, terms: BTreeMap::new() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Monomial>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, tuple: Vec<Monomial>, c: Rational) {
        assert_eq!(tuple.len(), self.width, "tuple width mismatch");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(tuple).or_insert_with(Rational::zero);
        *entry += c;
        // Negative coefficients never arise here, but keep the map clean.
        self.terms.retain(|_, w| !w.is_zero());
    }

    pub fn coeff(&self, tuple: &[Monomial]) -> Rational {
        self.terms.get(tuple).cloned().unwrap_or_else(Rational::zero)
    }

    /// Number of terms counted with multiplicity.
    pub fn term_count(&self) -> Rational {
        let mut total = Rational::zero();
        for c in self.terms.values() {
            total += c;
        }
        total
    }
}

/// Sum over all `(k+1)^n` ordered distributions of the labels into `k + 1`
/// slots. `k = 0` is the identity.
pub fn kfold_coproduct(m: &Monomial, k: usize) -> TensorSum {
    let width = k + 1;
    let mut out = TensorSum::zero(width);
    let n = m.degree();
    let mut assignment = vec![0usize; n];
    loop {
        let mut tuple = vec![Vec::new(); width];
        for (pos, &slot) in assignment.iter().enumerate() {
            tuple[slot].push(m.labels()[pos].clone());
        }
        let tuple: Vec<Monomial> = tuple.into_iter().map(Monomial::new).collect();
        out.add_term(tuple, Rational::from_integer(Int::from(1)));
        // Odometer over slot assignments.
        let mut pos = 0;
        loop {
            if pos == n {
                return out;
            }
            assignment[pos] += 1;
            if assignment[pos] < width {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

/// `m -> sum over all 2^n ordered splittings` of the label multiset.
pub fn coproduct(m: &Monomial) -> TensorSum {
    kfold_coproduct(m, 1)
}

/// Coproduct with both extreme terms removed: every surviving splitting has
/// degree >= 1 on each side. Zero for degrees 0 and 1.
pub fn truncated_coproduct(m: &Monomial) -> TensorSum {
    let full = coproduct(m);
    let mut out = TensorSum::zero(2);
    for (tuple, c) in full.terms() {
        if !tuple[0].is_unit() && !tuple[1].is_unit() {
            out.add_term(tuple.clone(), c.clone());
        }
    }
    out
}

/// Counit: 1 on the unit, 0 on positive degree.
pub fn counit(m: &Monomial) -> Rational {
    if m.is_unit() {
        Rational::from_integer(Int::from(1))
    } else {
        Rational::zero()
    }
}

/// Antipode: the same monomial with sign `(-1)^n`.
pub fn antipode(m: &Monomial) -> (Rational, Monomial) {
    let sign = if m.degree() % 2 == 0 { 1 } else { -1 };
    (Rational::from_integer(Int::from(sign)), m.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn mono(labels: &[&str]) -> Monomial {
        Monomial::new(labels.iter().copied())
    }

    #[test]
    fn coproduct_of_unit() {
        let cp = coproduct(&Monomial::unit());
        assert_eq!(cp.len(), 1);
        let (tuple, c) = cp.terms().next().unwrap();
        assert_eq!(tuple, &vec![Monomial::unit(), Monomial::unit()]);
        assert_eq!(c, &rat_int(1));
    }

    #[test]
    fn coproduct_of_generator() {
        let cp = coproduct(&mono(&["x"]));
        assert_eq!(cp.len(), 2);
        let expected: Vec<Vec<Monomial>> = vec![
            vec![Monomial::unit(), mono(&["x"])],
            vec![mono(&["x"]), Monomial::unit()],
        ];
        let got: Vec<Vec<Monomial>> = cp.terms().map(|(t, _)| t.clone()).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn coproduct_of_degree_two() {
        let cp = coproduct(&mono(&["x", "y"]));
        // xy@1 + x@1*y@2 + y@1*x@2 + xy@2: four distinct terms.
        assert_eq!(cp.len(), 4);
        assert_eq!(cp.term_count(), rat_int(4));
    }

    #[test]
    fn coproduct_with_repeated_label_merges() {
        let cp = coproduct(&mono(&["x", "x"]));
        assert_eq!(cp.len(), 3);
        assert_eq!(cp.coeff(&[mono(&["x"]), mono(&["x"])]), rat_int(2));
    }

    #[test]
    fn kfold_zero_is_identity() {
        let m = mono(&["x", "y"]);
        let cp = kfold_coproduct(&m, 0);
        assert_eq!(cp.len(), 1);
        assert_eq!(cp.coeff(&[m.clone()]), rat_int(1));
    }

    #[test]
    fn kfold_two_on_generator() {
        let cp = kfold_coproduct(&mono(&["x"]), 2);
        assert_eq!(cp.len(), 3);
        for (tuple, c) in cp.terms() {
            assert_eq!(tuple.iter().filter(|m| !m.is_unit()).count(), 1);
            assert_eq!(c, &rat_int(1));
        }
    }

    #[test]
    fn kfold_term_counts() {
        let m = mono(&["a", "b", "c"]);
        assert_eq!(kfold_coproduct(&m, 2).term_count(), rat_int(27));
        assert_eq!(coproduct(&m).term_count(), rat_int(8));
    }

    #[test]
    fn truncated_examples() {
        assert!(truncated_coproduct(&Monomial::unit()).is_empty());
        assert!(truncated_coproduct(&mono(&["x"])).is_empty());
        let cp = truncated_coproduct(&mono(&["x", "y"]));
        assert_eq!(cp.len(), 2);
        assert_eq!(cp.coeff(&[mono(&["x"]), mono(&["y"])]), rat_int(1));
        assert_eq!(cp.coeff(&[mono(&["y"]), mono(&["x"])]), rat_int(1));
        assert_eq!(truncated_coproduct(&mono(&["a", "b", "c"])).term_count(), rat_int(6));
    }

    #[test]
    fn counit_values() {
        assert_eq!(counit(&Monomial::unit()), rat_int(1));
        assert_eq!(counit(&mono(&["x", "y"])), rat(0, 1));
    }

    #[test]
    fn antipode_sign() {
        let (s1, m1) = antipode(&mono(&["x"]));
        assert_eq!(s1, rat_int(-1));
        assert_eq!(m1, mono(&["x"]));
        let (s2, m2) = antipode(&mono(&["x", "y"]));
        assert_eq!(s2, rat_int(1));
        assert_eq!(m2, mono(&["x", "y"]));
    }

    #[test]
    fn counit_law() {
        // (counit x id) o coproduct = id on a degree-3 monomial.
        let m = mono(&["a", "b", "c"]);
        let cp = coproduct(&m);
        let mut collapsed: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (tuple, c) in cp.terms() {
            let w = counit(&tuple[0]) * c;
            if !w.is_zero() {
                *collapsed.entry(tuple[1].clone()).or_insert_with(Rational::zero) += w;
            }
        }
        assert_eq!(collapsed, BTreeMap::from([(m, rat_int(1))]));
    }
}
