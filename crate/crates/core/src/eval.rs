//! Zero-dimensional evaluation of graph sums.
//!
//! A theory assigns a scalar propagator and one coupling per vertex degree
//! (degree counts all ends: edge copies, twice each self-loop, legs). A
//! graph evaluates to the product of its vertex couplings times one
//! propagator power per internal edge and per external leg; a sum evaluates
//! linearly with its exact coefficients. Values stay exact rationals unless
//! a float sneaks in through the theory.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::ToPrimitive;
use num::Zero;

use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::graph::{Graph, Label};
use crate::json::{rational_from_value, rational_to_value};
use crate::rational::{Int, Rational};
use crate::sum::GraphSum;

/// Exact rational or explicit floating-point scalar.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn from_int(n: i64) -> Scalar {
        Scalar::Exact(Rational::from_integer(Int::from(n)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(f) => *f == 0.0,
        }
    }

    fn as_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(f) => *f,
        }
    }

    /// Exact when both sides are exact, float otherwise.
    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            _ => Scalar::Float(self.as_f64() * other.as_f64()),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            _ => Scalar::Float(self.as_f64() + other.as_f64()),
        }
    }

    pub fn pow(&self, exp: usize) -> Scalar {
        match self {
            Scalar::Exact(r) => {
                let mut acc = Rational::from_integer(Int::from(1));
                for _ in 0..exp {
                    acc *= r;
                }
                Scalar::Exact(acc)
            }
            Scalar::Float(f) => Scalar::Float(f.powi(exp as i32)),
        }
    }

    fn to_value(&self) -> Result<Value> {
        match self {
            Scalar::Exact(r) => rational_to_value(r),
            Scalar::Float(f) => Number::from_f64(*f)
                .map(Value::Number)
                .ok_or_else(|| Error::Json(format!("non-finite float {f}"))),
        }
    }

    fn from_value(v: &Value) -> Result<Scalar> {
        match v {
            Value::Array(_) => Ok(Scalar::Exact(rational_from_value(v)?)),
            Value::Number(n) => {
                let f = n
                    .as_f64()
                    .ok_or_else(|| Error::Json(format!("cannot read number {n} as float")))?;
                Ok(Scalar::Float(f))
            }
            other => Err(Error::Json(format!("expected [num, den] or float, got {other}"))),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Zero-dimensional Feynman rules: a propagator scalar, per-degree vertex
/// couplings, and the set of vertex degrees the theory admits.
#[derive(Clone, Debug, PartialEq)]
pub struct Theory {
    propagator: Scalar,
    couplings: BTreeMap<usize, Scalar>,
    allowed: BTreeSet<usize>,
}

impl Theory {
    pub fn new(
        propagator: Scalar,
        couplings: BTreeMap<usize, Scalar>,
        allowed: BTreeSet<usize>,
    ) -> Result<Theory> {
        if propagator.is_zero() {
            return Err(Error::ZeroPropagator);
        }
        Ok(Theory { propagator, couplings, allowed })
    }

    /// Cubic theory: interactions up to degree 3, unit couplings.
    pub fn phi3() -> Theory {
        Theory::uniform_upto(3)
    }

    /// Quartic theory: interactions up to degree 4, unit couplings.
    pub fn phi4() -> Theory {
        Theory::uniform_upto(4)
    }

    fn uniform_upto(max_degree: usize) -> Theory {
        let couplings = (1..=max_degree).map(|d| (d, Scalar::from_int(1))).collect();
        let allowed = (1..=max_degree).collect();
        Theory { propagator: Scalar::from_int(1), couplings, allowed }
    }

    pub fn preset(name: &str) -> Option<Theory> {
        match name {
            "phi3" => Some(Theory::phi3()),
            "phi4" => Some(Theory::phi4()),
            _ => None,
        }
    }

    pub fn propagator(&self) -> &Scalar {
        &self.propagator
    }

    pub fn allowed(&self) -> &BTreeSet<usize> {
        &self.allowed
    }

    pub fn coupling(&self, degree: usize) -> Result<&Scalar> {
        if !self.allowed.contains(&degree) {
            return Err(Error::DegreeNotAllowed(degree));
        }
        self.couplings.get(&degree).ok_or(Error::MissingCoupling(degree))
    }

    pub fn to_value(&self) -> Result<Value> {
        let mut couplings = Map::new();
        for (d, c) in &self.couplings {
            couplings.insert(d.to_string(), c.to_value()?);
        }
        let mut obj = Map::new();
        obj.insert("propagator".into(), self.propagator.to_value()?);
        obj.insert("couplings".into(), Value::Object(couplings));
        obj.insert(
            "allowed".into(),
            Value::Array(self.allowed.iter().map(|&d| Value::Number(Number::from(d as u64))).collect()),
        );
        Ok(Value::Object(obj))
    }

    pub fn from_value(v: &Value) -> Result<Theory> {
        let obj = v.as_object().ok_or_else(|| Error::Json("theory must be an object".into()))?;
        let propagator = Scalar::from_value(
            obj.get("propagator")
                .ok_or_else(|| Error::Json("theory is missing \"propagator\"".into()))?,
        )?;
        let mut couplings = BTreeMap::new();
        if let Some(raw) = obj.get("couplings") {
            let map = raw
                .as_object()
                .ok_or_else(|| Error::Json("\"couplings\" must be an object".into()))?;
            for (key, value) in map {
                let degree: usize =
                    key.parse().map_err(|_| Error::Json(format!("bad coupling degree {key}")))?;
                couplings.insert(degree, Scalar::from_value(value)?);
            }
        }
        let allowed: BTreeSet<usize> = match obj.get("allowed") {
            Some(raw) => {
                let list = raw
                    .as_array()
                    .ok_or_else(|| Error::Json("\"allowed\" must be an array".into()))?;
                list.iter()
                    .map(|d| {
                        d.as_u64()
                            .map(|n| n as usize)
                            .ok_or_else(|| Error::Json(format!("bad allowed degree {d}")))
                    })
                    .collect::<Result<_>>()?
            }
            None => couplings.keys().copied().collect(),
        };
        Theory::new(propagator, couplings, allowed)
    }
}

/// Evaluate a sum: for each term, the coefficient times one coupling per
/// vertex (by total degree) times the propagator to the power
/// `internal edges + legs`. Errors on any degree the theory cannot serve.
pub fn evaluate(s: &GraphSum, theory: &Theory) -> Result<Scalar> {
    let mut total = Scalar::Exact(Rational::zero());
    for (term, coeff) in s.terms() {
        let mut factor = Scalar::Exact(coeff.clone());
        for u in 1..=term.num_vertices() {
            factor = factor.mul(theory.coupling(term.degree(u))?);
        }
        let power = term.edge_total() + term.leg_total();
        factor = factor.mul(&theory.propagator.pow(power));
        total = total.add(&factor);
    }
    Ok(total)
}

/// Drop every term containing a vertex whose degree is not allowed;
/// coefficients are untouched.
pub fn vertex_filter(s: &GraphSum, allowed: &BTreeSet<usize>) -> GraphSum {
    let mut out = GraphSum::zero(s.num_vertices());
    for (term, coeff) in s.terms() {
        let ok = (1..=term.num_vertices()).all(|u| allowed.contains(&term.degree(u)));
        if ok {
            out.add_term(term.clone(), coeff.clone()).expect("same width");
        }
    }
    out
}

/// One vertex-function symbol with its attached end labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexFactor {
    pub vertex: usize,
    pub ends: Vec<String>,
}

impl VertexFactor {
    pub fn degree(&self) -> usize {
        self.ends.len()
    }
}

/// Symbolic integrand of one graph: vertex functions over fresh internal
/// end labels, one inverse-propagator factor per internal edge copy, and
/// the external labels passed through.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrandDescriptor {
    pub vertex_factors: Vec<VertexFactor>,
    pub inverse_propagators: Vec<(String, String)>,
    pub external_legs: Vec<Label>,
}

impl IntegrandDescriptor {
    /// The bare external edge: no vertex functions, just the propagator
    /// connecting two external labels. This is the degenerate descriptor a
    /// two-point dressing collapses to when the theory has no degree-2
    /// vertex.
    pub fn feynman_propagator(x1: impl Into<Label>, x2: impl Into<Label>) -> IntegrandDescriptor {
        IntegrandDescriptor {
            vertex_factors: Vec::new(),
            inverse_propagators: Vec::new(),
            external_legs: vec![x1.into(), x2.into()],
        }
    }

    pub fn is_bare_propagator(&self) -> bool {
        self.vertex_factors.is_empty() && self.external_legs.len() == 2
    }
}

impl fmt::Display for IntegrandDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_bare_propagator() {
            return write!(f, "G({},{})", self.external_legs[0], self.external_legs[1]);
        }
        let mut first = true;
        for factor in &self.vertex_factors {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "V^({})({})", factor.degree(), factor.ends.join(","))?;
        }
        for (a, b) in &self.inverse_propagators {
            write!(f, " G^-1({a},{b})")?;
        }
        Ok(())
    }
}

/// Build the symbolic integrand of a connected graph: internal end labels
/// `y1, y1', y2, ...` are generated per edge copy in key order.
pub fn emit_integrand(g: &Graph) -> Result<IntegrandDescriptor> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut ends: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (&u, labels) in g.legs() {
        ends.entry(u).or_default().extend(labels.iter().cloned());
    }
    let mut inverse = Vec::new();
    let mut copy = 0usize;
    for (&(i, j), &mult) in g.edges() {
        for _ in 0..mult {
            copy += 1;
            let a = format!("y{copy}");
            let b = format!("y{copy}'");
            ends.entry(i).or_default().push(a.clone());
            ends.entry(j).or_default().push(b.clone());
            inverse.push((a, b));
        }
    }
    for (&u, &count) in g.loops() {
        for _ in 0..count {
            copy += 1;
            let a = format!("y{copy}");
            let b = format!("y{copy}'");
            let slot = ends.entry(u).or_default();
            slot.push(a.clone());
            slot.push(b.clone());
            inverse.push((a, b));
        }
    }
    let vertex_factors = (1..=g.num_vertices())
        .map(|u| VertexFactor { vertex: u, ends: ends.remove(&u).unwrap_or_default() })
        .collect();
    let mut external: Vec<Label> = g.legs().values().flatten().cloned().collect();
    external.sort();
    Ok(IntegrandDescriptor {
        vertex_factors,
        inverse_propagators: inverse,
        external_legs: external,
    })
}

/// Boundary conventions of the n-point families, used only in reporting:
/// the complete 0-point function is 1, the connected and 1PI ones vanish,
/// and every 1-point function vanishes.
pub mod conventions {
    pub const COMPLETE_ZERO_POINT: i64 = 1;
    pub const CONNECTED_ZERO_POINT: i64 = 0;
    pub const ONEPI_ZERO_POINT: i64 = 0;
    pub const VERTEX_ZERO_POINT: i64 = 0;
    pub const ONE_POINT: i64 = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn g(v: usize, edges: &[(usize, usize, usize)]) -> Graph {
        let mut out = Graph::isolated(v).unwrap();
        for &(i, j, m) in edges {
            out = out.with_edge(i, j, m).unwrap();
        }
        out
    }

    fn theory(propagator: Rational, pairs: &[(usize, Rational)]) -> Theory {
        Theory::new(
            Scalar::Exact(propagator),
            pairs.iter().map(|(d, c)| (*d, Scalar::Exact(c.clone()))).collect(),
            pairs.iter().map(|(d, _)| *d).collect(),
        )
        .unwrap()
    }

    #[test]
    fn evaluate_triangle() {
        let s = GraphSum::from_graph(g(3, &[(1, 2, 1), (1, 3, 1), (2, 3, 1)])).scale(&rat(1, 6));
        let th = theory(rat(2, 1), &[(2, rat(5, 1))]);
        // (1/6) * 5^3 * 2^3 = 500/3.
        assert_eq!(evaluate(&s, &th).unwrap(), Scalar::Exact(rat(500, 3)));
    }

    #[test]
    fn evaluate_empty_sum() {
        let th = Theory::phi3();
        assert_eq!(evaluate(&GraphSum::zero(3), &th).unwrap(), Scalar::Exact(rat_int(0)));
    }

    #[test]
    fn evaluate_is_renumbering_invariant() {
        let th = theory(rat(1, 3), &[(2, rat(2, 1)), (4, rat(7, 2))]);
        let term = g(3, &[(1, 2, 2), (2, 3, 2)]);
        let s = GraphSum::from_graph(term.clone()).scale(&rat(3, 7));
        let relabeled = GraphSum::from_graph(term.relabel(&[3, 1, 2]).unwrap()).scale(&rat(3, 7));
        assert_eq!(evaluate(&s, &th).unwrap(), evaluate(&relabeled, &th).unwrap());
    }

    #[test]
    fn evaluate_counts_self_loops_and_legs() {
        let term = Graph::single_vertex()
            .with_edge(1, 1, 1)
            .unwrap()
            .with_leg(1, "x1")
            .unwrap()
            .with_leg(1, "x2")
            .unwrap();
        // Degree 4 vertex; propagator power = 1 internal + 2 legs.
        let th = theory(rat(3, 1), &[(4, rat(1, 2))]);
        let s = GraphSum::from_graph(term).scale(&rat(1, 2));
        assert_eq!(evaluate(&s, &th).unwrap(), Scalar::Exact(rat(27, 4)));
    }

    #[test]
    fn evaluate_reports_missing_couplings() {
        let s = GraphSum::from_graph(g(2, &[(1, 2, 2)]));
        let th = theory(rat(1, 1), &[(3, rat(1, 1))]);
        assert!(matches!(evaluate(&s, &th), Err(Error::DegreeNotAllowed(2))));
        let th2 = Theory::new(
            Scalar::from_int(1),
            BTreeMap::new(),
            BTreeSet::from([2]),
        )
        .unwrap();
        assert!(matches!(evaluate(&s, &th2), Err(Error::MissingCoupling(2))));
    }

    #[test]
    fn evaluate_linear_in_the_sum() {
        let th = theory(rat(2, 3), &[(2, rat(5, 4)), (3, rat(1, 3))]);
        let a = GraphSum::from_graph(g(2, &[(1, 2, 2)])).scale(&rat(1, 4));
        let b = GraphSum::from_graph(g(2, &[(1, 2, 3)])).scale(&rat(-2, 9));
        let mut both = a.clone();
        both.add_assign(&b).unwrap();
        let va = evaluate(&a, &th).unwrap();
        let vb = evaluate(&b, &th).unwrap();
        assert_eq!(evaluate(&both, &th).unwrap(), va.add(&vb));
    }

    #[test]
    fn float_propagator_gives_float_values() {
        let th = Theory::new(
            Scalar::Float(0.5),
            BTreeMap::from([(2, Scalar::from_int(1))]),
            BTreeSet::from([2]),
        )
        .unwrap();
        let s = GraphSum::from_graph(g(2, &[(1, 2, 2)]));
        match evaluate(&s, &th).unwrap() {
            Scalar::Float(f) => assert!((f - 0.25).abs() < 1e-12),
            other => panic!("expected float, got {other:?}"),
        }
    }

    #[test]
    fn zero_propagator_rejected() {
        assert!(matches!(
            Theory::new(Scalar::from_int(0), BTreeMap::new(), BTreeSet::new()),
            Err(Error::ZeroPropagator)
        ));
    }

    #[test]
    fn filter_keeps_low_degrees() {
        let mut s = GraphSum::zero(2);
        s.add_term(g(2, &[(1, 2, 2)]), rat(1, 4)).unwrap();
        s.add_term(g(2, &[(1, 2, 4)]), rat(1, 48)).unwrap();
        let allowed: BTreeSet<usize> = [1, 2, 3].into();
        let filtered = vertex_filter(&s, &allowed);
        assert_eq!(filtered.len(), 1);
        assert_eq!(filtered.coeff(&g(2, &[(1, 2, 2)])), rat(1, 4));
        // Idempotent; the empty set clears everything.
        assert_eq!(vertex_filter(&filtered, &allowed), filtered);
        assert!(vertex_filter(&s, &BTreeSet::new()).is_empty());
    }

    #[test]
    fn theory_json_round_trip() {
        let th = theory(rat(2, 7), &[(3, rat(1, 3)), (4, rat(5, 1))]);
        let v = th.to_value().unwrap();
        assert_eq!(Theory::from_value(&v).unwrap(), th);
        let with_float = serde_json::json!({
            "propagator": 0.25,
            "couplings": {"3": [1, 3]},
            "allowed": [3]
        });
        let parsed = Theory::from_value(&with_float).unwrap();
        assert_eq!(parsed.propagator(), &Scalar::Float(0.25));
    }

    #[test]
    fn integrand_two_point_bubble() {
        let graph = g(2, &[(1, 2, 2)])
            .with_leg(1, "x1")
            .unwrap()
            .with_leg(2, "x2")
            .unwrap();
        let d = emit_integrand(&graph).unwrap();
        assert_eq!(d.vertex_factors.len(), 2);
        assert_eq!(d.vertex_factors[0].ends, vec!["x1", "y1", "y2"]);
        assert_eq!(d.vertex_factors[1].ends, vec!["x2", "y1'", "y2'"]);
        assert_eq!(
            d.inverse_propagators,
            vec![("y1".into(), "y1'".into()), ("y2".into(), "y2'".into())]
        );
        assert_eq!(
            d.to_string(),
            "V^(3)(x1,y1,y2) V^(3)(x2,y1',y2') G^-1(y1,y1') G^-1(y2,y2')"
        );
    }

    #[test]
    fn integrand_single_vertex_star() {
        let graph = Graph::single_vertex()
            .with_leg(1, "x1")
            .unwrap()
            .with_leg(1, "x2")
            .unwrap()
            .with_leg(1, "x3")
            .unwrap();
        let d = emit_integrand(&graph).unwrap();
        assert_eq!(d.vertex_factors.len(), 1);
        assert_eq!(d.vertex_factors[0].ends, vec!["x1", "x2", "x3"]);
        assert!(d.inverse_propagators.is_empty());
    }

    #[test]
    fn integrand_bare_propagator() {
        let d = IntegrandDescriptor::feynman_propagator("x1", "x2");
        assert!(d.is_bare_propagator());
        assert_eq!(d.to_string(), "G(x1,x2)");
    }

    #[test]
    fn integrand_counts_loop_ends() {
        let graph = Graph::single_vertex().with_edge(1, 1, 1).unwrap();
        let d = emit_integrand(&graph).unwrap();
        assert_eq!(d.vertex_factors[0].ends.len(), 2);
        assert_eq!(d.inverse_propagators.len(), 1);
    }

    #[test]
    fn boundary_conventions() {
        use conventions::*;
        assert_eq!(COMPLETE_ZERO_POINT, 1);
        assert_eq!((CONNECTED_ZERO_POINT, ONEPI_ZERO_POINT, VERTEX_ZERO_POINT), (0, 0, 0));
        assert_eq!(ONE_POINT, 0);
    }
}
