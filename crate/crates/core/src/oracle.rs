//! Brute-force ground truth: enumerate all multigraphs of a given loop and
//! vertex order, filter by kind, and weight each isomorphism class by the
//! inverse of its automorphism order.
//!
//! The enumeration shares nothing with the splitting machinery: it scans
//! multiplicity assignments directly, so agreement with the recursions is
//! meaningful evidence, not a tautology.

use std::fmt;

use num::Zero;

use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::graph::{Graph, Label};
use crate::hopf::Monomial;
use crate::json::{graph_to_value, rational_to_value};
use crate::rational::{next_composition, Int, Rational};
use crate::recursion::Engine;
use crate::sum::{ClassMap, FeynmanClass};

/// Which predicate the enumerated graphs must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    OneVi,
    OnePi,
    Connected,
}

impl GraphKind {
    pub fn parse(text: &str) -> Option<GraphKind> {
        match text {
            "1vi" => Some(GraphKind::OneVi),
            "1pi" => Some(GraphKind::OnePi),
            "connected" => Some(GraphKind::Connected),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GraphKind::OneVi => "1vi",
            GraphKind::OnePi => "1pi",
            GraphKind::Connected => "connected",
        }
    }
}

/// Size limits for the exhaustive scan; fields are plain configuration.
#[derive(Clone, Copy, Debug)]
pub struct Guard {
    pub max_vertices: usize,
    pub max_total_loops: usize,
    pub max_legs: usize,
}

impl Default for Guard {
    fn default() -> Guard {
        Guard { max_vertices: 7, max_total_loops: 6, max_legs: 4 }
    }
}

impl Guard {
    fn check(&self, l: usize, v: usize, selfloops: usize, legs: usize) -> Result<()> {
        if v > self.max_vertices {
            return Err(Error::GuardExceeded(format!(
                "v={v} exceeds max_vertices={}",
                self.max_vertices
            )));
        }
        if l + selfloops > self.max_total_loops {
            return Err(Error::GuardExceeded(format!(
                "l+l'={} exceeds max_total_loops={}",
                l + selfloops,
                self.max_total_loops
            )));
        }
        if legs > self.max_legs {
            return Err(Error::GuardExceeded(format!(
                "n={legs} exceeds max_legs={}",
                self.max_legs
            )));
        }
        Ok(())
    }
}

/// Enumerate all graphs with `l` loops (excluding self-loops), `v` vertices,
/// `selfloops` self-loops and the given leg labels, filter by `kind`, and
/// return each isomorphism class with weight `1/|Aut|`.
pub fn enumerate(
    l: usize,
    v: usize,
    kind: GraphKind,
    selfloops: usize,
    legs: &[Label],
    guard: &Guard,
) -> Result<ClassMap> {
    guard.check(l, v, selfloops, legs.len())?;
    if v == 0 {
        return Err(Error::BadParameter("enumeration needs v >= 1".into()));
    }
    {
        let mut seen = legs.to_vec();
        seen.sort();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::RepeatedLabel);
        }
    }

    let mut classes = ClassMap::new();
    let edge_budget = l + v - 1;
    let pairs: Vec<(usize, usize)> = (1..=v).flat_map(|i| (i + 1..=v).map(move |j| (i, j))).collect();

    // A single vertex has no pairs: only the loopless budget is realizable.
    if pairs.is_empty() {
        if edge_budget == 0 {
            collect_dressings(&Graph::single_vertex(), v, selfloops, legs, &mut classes)?;
        }
        return Ok(classes);
    }

    let mut mults = vec![0usize; pairs.len()];
    mults[0] = edge_budget;
    loop {
        let mut base = Graph::isolated(v)?;
        for (pair, &m) in pairs.iter().zip(&mults) {
            if m > 0 {
                base = base.with_edge(pair.0, pair.1, m)?;
            }
        }
        let c = base.classify();
        let keep = match kind {
            GraphKind::OneVi => c.one_vi,
            GraphKind::OnePi => c.one_pi,
            GraphKind::Connected => c.connected,
        };
        if keep {
            collect_dressings(&base, v, selfloops, legs, &mut classes)?;
        }
        if !next_composition(&mut mults) {
            break;
        }
    }
    Ok(classes)
}

/// Place `selfloops` loops and the legs on a base structure in all ways and
/// record the resulting classes. Loops and legs never change connectivity.
fn collect_dressings(
    base: &Graph,
    v: usize,
    selfloops: usize,
    legs: &[Label],
    classes: &mut ClassMap,
) -> Result<()> {
    let mut loop_parts = vec![0usize; v];
    loop_parts[0] = selfloops;
    loop {
        let mut looped = base.clone();
        for (u, &count) in loop_parts.iter().enumerate() {
            if count > 0 {
                looped = looped.with_edge(u + 1, u + 1, count)?;
            }
        }
        let mut assignment = vec![0usize; legs.len()];
        'assignments: loop {
            let mut full = looped.clone();
            for (label, &target) in legs.iter().zip(&assignment) {
                full = full.with_leg(target + 1, label.clone())?;
            }
            let class = FeynmanClass::of(&full);
            classes.entry(class.clone()).or_insert_with(|| class.weight());

            // Odometer over leg targets.
            let mut pos = 0;
            loop {
                if pos == assignment.len() {
                    break 'assignments;
                }
                assignment[pos] += 1;
                if assignment[pos] < v {
                    break;
                }
                assignment[pos] = 0;
                pos += 1;
            }
        }
        if !next_composition(&mut loop_parts) {
            return Ok(());
        }
    }
}

/// One class row of a verification report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportRow {
    pub class: FeynmanClass,
    pub oracle: Option<Rational>,
    pub recursion: Option<Rational>,
}

impl ReportRow {
    pub fn pass(&self) -> bool {
        match (&self.oracle, &self.recursion) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

/// Class-by-class comparison of the recursion output against the oracle.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub kind: GraphKind,
    pub l: usize,
    pub v: usize,
    pub selfloops: usize,
    pub legs: Vec<Label>,
    pub rows: Vec<ReportRow>,
    pub oracle_total: Rational,
    pub recursion_total: Rational,
    pub pass: bool,
}

impl OracleReport {
    fn build(
        kind: GraphKind,
        l: usize,
        v: usize,
        selfloops: usize,
        legs: Vec<Label>,
        oracle: ClassMap,
        recursion: ClassMap,
    ) -> OracleReport {
        let mut keys: Vec<FeynmanClass> = oracle.keys().cloned().collect();
        for key in recursion.keys() {
            if !oracle.contains_key(key) {
                keys.push(key.clone());
            }
        }
        keys.sort();
        let rows: Vec<ReportRow> = keys
            .into_iter()
            .map(|class| ReportRow {
                oracle: oracle.get(&class).cloned(),
                recursion: recursion.get(&class).cloned(),
                class,
            })
            .collect();
        let mut oracle_total = Rational::zero();
        let mut recursion_total = Rational::zero();
        for row in &rows {
            if let Some(w) = &row.oracle {
                oracle_total += w;
            }
            if let Some(w) = &row.recursion {
                recursion_total += w;
            }
        }
        let pass = rows.iter().all(ReportRow::pass);
        OracleReport { kind, l, v, selfloops, legs, rows, oracle_total, recursion_total, pass }
    }

    pub fn to_value(&self) -> Result<Value> {
        let weight = |w: &Option<Rational>| -> Result<Value> {
            Ok(match w {
                Some(r) => rational_to_value(r)?,
                None => Value::Null,
            })
        };
        let mut rows = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut obj = Map::new();
            obj.insert("graph".into(), graph_to_value(row.class.canonical())?);
            obj.insert("aut".into(), {
                let n = row.class.aut_order().to_string();
                Value::Number(n.parse().map_err(|_| Error::Json("aut order".into()))?)
            });
            obj.insert("oracle".into(), weight(&row.oracle)?);
            obj.insert("recursion".into(), weight(&row.recursion)?);
            obj.insert("pass".into(), Value::Bool(row.pass()));
            rows.push(Value::Object(obj));
        }
        let mut totals = Map::new();
        totals.insert("oracle".into(), rational_to_value(&self.oracle_total)?);
        totals.insert("recursion".into(), rational_to_value(&self.recursion_total)?);
        let mut obj = Map::new();
        obj.insert("kind".into(), Value::String(self.kind.as_str().into()));
        obj.insert("l".into(), Value::Number(Number::from(self.l as u64)));
        obj.insert("v".into(), Value::Number(Number::from(self.v as u64)));
        obj.insert("self_loops".into(), Value::Number(Number::from(self.selfloops as u64)));
        obj.insert(
            "legs".into(),
            Value::Array(self.legs.iter().map(|l| Value::String(l.clone())).collect()),
        );
        obj.insert("classes".into(), Value::Array(rows));
        obj.insert("totals".into(), Value::Object(totals));
        obj.insert("pass".into(), Value::Bool(self.pass));
        Ok(Value::Object(obj))
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "verify kind={} l={} v={}", self.kind.as_str(), self.l, self.v)?;
        if self.selfloops > 0 {
            write!(f, " self-loops={}", self.selfloops)?;
        }
        if !self.legs.is_empty() {
            write!(f, " legs={}", self.legs.join(","))?;
        }
        writeln!(f, ": {} ({} classes)", if self.pass { "PASS" } else { "FAIL" }, self.rows.len())?;
        writeln!(f, "{:>12} {:>12} {:>8}  class", "oracle", "recursion", "aut")?;
        let show = |w: &Option<Rational>| match w {
            Some(r) => r.to_string(),
            None => "-".into(),
        };
        for row in &self.rows {
            writeln!(
                f,
                "{:>12} {:>12} {:>8}  {}",
                show(&row.oracle),
                show(&row.recursion),
                row.class.aut_order().to_string(),
                row.class.canonical()
            )?;
        }
        write!(
            f,
            "totals: oracle {} recursion {}",
            self.oracle_total, self.recursion_total
        )
    }
}

/// Compare the projected recursion output for (`l`, `v`) with the oracle.
pub fn verify(
    engine: &mut Engine,
    l: usize,
    v: usize,
    kind: GraphKind,
    guard: &Guard,
) -> Result<OracleReport> {
    let recursion = match kind {
        GraphKind::OneVi => engine.onevi_sum(l, v)?.project(),
        GraphKind::OnePi => engine.onepi_sum(l, v)?.project(),
        GraphKind::Connected => {
            return Err(Error::BadParameter(
                "verification targets the 1vi and 1pi recursions".into(),
            ))
        }
    };
    let oracle = enumerate(l, v, kind, 0, &[], guard)?;
    Ok(OracleReport::build(kind, l, v, 0, Vec::new(), oracle, recursion))
}

/// Compare a dressed 1PI sum (self-loops and legs) with the oracle.
pub fn verify_dressed(
    engine: &mut Engine,
    l: usize,
    lprime: usize,
    v: usize,
    labels: &Monomial,
    guard: &Guard,
) -> Result<OracleReport> {
    let recursion = engine.dressed_sum(l, lprime, v, labels)?.project();
    let oracle = enumerate(l, v, GraphKind::OnePi, lprime, labels.labels(), guard)?;
    Ok(OracleReport::build(
        GraphKind::OnePi,
        l,
        v,
        lprime,
        labels.labels().to_vec(),
        oracle,
        recursion,
    ))
}

/// Representative-count cross-check: summing `v!/|Vertex-Aut|` over classes
/// must reproduce the number of numbered graphs of the kind.
pub fn representative_count(l: usize, v: usize, kind: GraphKind, guard: &Guard) -> Result<Int> {
    guard.check(l, v, 0, 0)?;
    let classes = enumerate(l, v, kind, 0, &[], guard)?;
    let vfact = crate::rational::factorial(v);
    let mut total = Int::from(0);
    for class in classes.keys() {
        let (_, vertex_aut) = class.canonical().canonical_with_vertex_aut();
        total += &vfact / Int::from(vertex_aut);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn count_numbered(l: usize, v: usize, kind: GraphKind) -> usize {
        // Direct numbered-graph count, bypassing classes entirely.
        let edge_budget = l + v - 1;
        let pairs: Vec<(usize, usize)> =
            (1..=v).flat_map(|i| (i + 1..=v).map(move |j| (i, j))).collect();
        if pairs.is_empty() {
            return usize::from(edge_budget == 0);
        }
        let mut mults = vec![0usize; pairs.len()];
        mults[0] = edge_budget;
        let mut count = 0;
        loop {
            let mut g = Graph::isolated(v).unwrap();
            for (pair, &m) in pairs.iter().zip(&mults) {
                if m > 0 {
                    g = g.with_edge(pair.0, pair.1, m).unwrap();
                }
            }
            let c = g.classify();
            let keep = match kind {
                GraphKind::OneVi => c.one_vi,
                GraphKind::OnePi => c.one_pi,
                GraphKind::Connected => c.connected,
            };
            if keep {
                count += 1;
            }
            if !next_composition(&mut mults) {
                break;
            }
        }
        count
    }

    #[test]
    fn enumerate_triangle() {
        let classes = enumerate(1, 3, GraphKind::OneVi, 0, &[], &Guard::default()).unwrap();
        assert_eq!(classes.len(), 1);
        let (class, w) = classes.iter().next().unwrap();
        assert_eq!(w, &rat(1, 6));
        assert_eq!(class.canonical().nonloop_edge_total(), 3);
    }

    #[test]
    fn enumerate_two_loop_one_pi() {
        let classes = enumerate(2, 3, GraphKind::OnePi, 0, &[], &Guard::default()).unwrap();
        assert_eq!(classes.len(), 2);
        let weights: Vec<Rational> = classes.values().cloned().collect();
        assert!(weights.contains(&rat(1, 4)));
        assert!(weights.contains(&rat(1, 8)));
    }

    #[test]
    fn enumerate_no_tree_level_biconnected() {
        for v in 3..=5 {
            assert!(enumerate(0, v, GraphKind::OneVi, 0, &[], &Guard::default())
                .unwrap()
                .is_empty());
        }
    }

    #[test]
    fn enumerate_single_vertex_dressings() {
        let classes =
            enumerate(0, 1, GraphKind::OnePi, 1, &["x1".into(), "x2".into()], &Guard::default())
                .unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes.values().next().unwrap(), &rat(1, 2));
    }

    #[test]
    fn enumerate_guard() {
        let tight = Guard { max_vertices: 3, max_total_loops: 2, max_legs: 0 };
        assert!(matches!(
            enumerate(1, 4, GraphKind::OneVi, 0, &[], &tight),
            Err(Error::GuardExceeded(_))
        ));
        assert!(matches!(
            enumerate(2, 3, GraphKind::OneVi, 1, &[], &tight),
            Err(Error::GuardExceeded(_))
        ));
    }

    #[test]
    fn verify_small_cases() {
        let mut engine = Engine::new();
        let guard = Guard::default();
        let r1 = verify(&mut engine, 1, 3, GraphKind::OneVi, &guard).unwrap();
        assert!(r1.pass);
        assert_eq!(r1.rows.len(), 1);
        let r2 = verify(&mut engine, 2, 3, GraphKind::OnePi, &guard).unwrap();
        assert!(r2.pass);
        assert_eq!(r2.rows.len(), 2);
        let r3 = verify(&mut engine, 0, 4, GraphKind::OneVi, &guard).unwrap();
        assert!(r3.pass);
        assert!(r3.rows.is_empty());
    }

    #[test]
    fn verify_dressed_banana() {
        let mut engine = Engine::new();
        let report =
            verify_dressed(&mut engine, 1, 1, 2, &Monomial::unit(), &Guard::default()).unwrap();
        assert!(report.pass);
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].oracle, Some(rat(1, 4)));
    }

    #[test]
    fn representative_counting_consistency() {
        // Sum over classes of v!/|Vertex-Aut| equals the direct numbered
        // count, for each kind.
        let guard = Guard::default();
        for (l, v) in [(1, 3), (2, 3), (2, 4), (3, 4)] {
            for kind in [GraphKind::OneVi, GraphKind::OnePi, GraphKind::Connected] {
                let by_classes = representative_count(l, v, kind, &guard).unwrap();
                let direct = count_numbered(l, v, kind);
                assert_eq!(by_classes, Int::from(direct), "l={l} v={v} {kind:?}");
            }
        }
    }

    #[test]
    fn report_serializes() {
        let mut engine = Engine::new();
        let report = verify(&mut engine, 2, 3, GraphKind::OnePi, &Guard::default()).unwrap();
        let value = report.to_value().unwrap();
        assert_eq!(value["pass"], Value::Bool(true));
        assert_eq!(value["classes"].as_array().unwrap().len(), 2);
        let text = report.to_string();
        assert!(text.contains("PASS"));
        assert!(text.contains("1/8"));
    }
}
