//! JSON encoding of graphs, sums and class maps.
//!
//! Graph schema: `{"v": 3, "edges": [[1, 2, 2], [1, 3, 1]], "loops":
//! {"2": 1}, "legs": {"1": ["x1"]}}` with edge triples `[i, j, mult]`,
//! `i < j`, sorted. Sum schema: `{"v": ..., "terms": [{"graph": ...,
//! "coeff": [num, den]}, ...]}` with terms sorted by their graph key.
//! Rationals serialize as exact `[num, den]` integer pairs (arbitrary
//! precision); all maps are ordered, so output bytes are deterministic.

use std::str::FromStr;

use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{Int, Rational};
use crate::sum::{ClassMap, GraphSum};

fn int_to_value(n: &Int) -> Result<Value> {
    let number = Number::from_str(&n.to_string())
        .map_err(|e| Error::Json(format!("cannot encode integer {n}: {e}")))?;
    Ok(Value::Number(number))
}

fn int_from_value(v: &Value) -> Result<Int> {
    let n = v.as_number().ok_or_else(|| Error::Json(format!("expected integer, got {v}")))?;
    Int::from_str(&n.to_string()).map_err(|_| Error::Json(format!("expected integer, got {v}")))
}

fn usize_from_value(v: &Value) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| Error::Json(format!("expected nonnegative integer, got {v}")))
}

pub fn rational_to_value(r: &Rational) -> Result<Value> {
    Ok(Value::Array(vec![int_to_value(r.numer())?, int_to_value(r.denom())?]))
}

pub fn rational_from_value(v: &Value) -> Result<Rational> {
    let pair = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
        Error::Json(format!("expected [numerator, denominator], got {v}"))
    })?;
    let num = int_from_value(&pair[0])?;
    let den = int_from_value(&pair[1])?;
    if den == Int::from(0) {
        return Err(Error::Json("zero denominator".into()));
    }
    Ok(Rational::new(num, den))
}

pub fn graph_to_value(g: &Graph) -> Result<Value> {
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|(&(i, j), &m)| {
            Value::Array(vec![
                Value::Number(Number::from(i as u64)),
                Value::Number(Number::from(j as u64)),
                Value::Number(Number::from(m as u64)),
            ])
        })
        .collect();
    let mut loops = Map::new();
    for (&i, &c) in g.loops() {
        loops.insert(i.to_string(), Value::Number(Number::from(c as u64)));
    }
    let mut legs = Map::new();
    for (&i, labels) in g.legs() {
        legs.insert(
            i.to_string(),
            Value::Array(labels.iter().map(|l| Value::String(l.clone())).collect()),
        );
    }
    let mut obj = Map::new();
    obj.insert("v".into(), Value::Number(Number::from(g.num_vertices() as u64)));
    obj.insert("edges".into(), Value::Array(edges));
    obj.insert("loops".into(), Value::Object(loops));
    obj.insert("legs".into(), Value::Object(legs));
    Ok(Value::Object(obj))
}

pub fn graph_from_value(v: &Value) -> Result<Graph> {
    let obj = v.as_object().ok_or_else(|| Error::Json("graph must be an object".into()))?;
    let width = usize_from_value(
        obj.get("v").ok_or_else(|| Error::Json("graph is missing \"v\"".into()))?,
    )?;
    let mut g = Graph::isolated(width).map_err(|e| Error::Json(e.to_string()))?;
    if let Some(edges) = obj.get("edges") {
        let list =
            edges.as_array().ok_or_else(|| Error::Json("\"edges\" must be an array".into()))?;
        for entry in list {
            let triple = entry.as_array().filter(|a| a.len() == 3).ok_or_else(|| {
                Error::Json(format!("edge must be [i, j, mult], got {entry}"))
            })?;
            let i = usize_from_value(&triple[0])?;
            let j = usize_from_value(&triple[1])?;
            let m = usize_from_value(&triple[2])?;
            if i >= j {
                return Err(Error::Json(format!("edge endpoints must satisfy i < j: {entry}")));
            }
            if m == 0 {
                return Err(Error::Json(format!("edge multiplicity must be positive: {entry}")));
            }
            g = g.with_edge(i, j, m).map_err(|e| Error::Json(e.to_string()))?;
        }
    }
    if let Some(loops) = obj.get("loops") {
        let map =
            loops.as_object().ok_or_else(|| Error::Json("\"loops\" must be an object".into()))?;
        for (key, count) in map {
            let i: usize =
                key.parse().map_err(|_| Error::Json(format!("bad loop vertex {key}")))?;
            let c = usize_from_value(count)?;
            g = g.with_edge(i, i, c).map_err(|e| Error::Json(e.to_string()))?;
        }
    }
    if let Some(legs) = obj.get("legs") {
        let map =
            legs.as_object().ok_or_else(|| Error::Json("\"legs\" must be an object".into()))?;
        for (key, labels) in map {
            let i: usize = key.parse().map_err(|_| Error::Json(format!("bad leg vertex {key}")))?;
            let list = labels
                .as_array()
                .ok_or_else(|| Error::Json("leg labels must be an array".into()))?;
            for label in list {
                let l = label
                    .as_str()
                    .ok_or_else(|| Error::Json("leg labels must be strings".into()))?;
                g = g.with_leg(i, l).map_err(|e| Error::Json(e.to_string()))?;
            }
        }
    }
    if !g.legs_distinct() {
        return Err(Error::Json("leg labels must be pairwise distinct".into()));
    }
    Ok(g)
}

pub fn sum_to_value(s: &GraphSum) -> Result<Value> {
    let mut terms = Vec::with_capacity(s.len());
    for (g, c) in s.terms() {
        let mut term = Map::new();
        term.insert("graph".into(), graph_to_value(g)?);
        term.insert("coeff".into(), rational_to_value(c)?);
        terms.push(Value::Object(term));
    }
    let mut obj = Map::new();
    obj.insert("v".into(), Value::Number(Number::from(s.num_vertices() as u64)));
    obj.insert("terms".into(), Value::Array(terms));
    Ok(Value::Object(obj))
}

pub fn sum_from_value(v: &Value) -> Result<GraphSum> {
    let obj = v.as_object().ok_or_else(|| Error::Json("sum must be an object".into()))?;
    let width = usize_from_value(
        obj.get("v").ok_or_else(|| Error::Json("sum is missing \"v\"".into()))?,
    )?;
    let mut s = GraphSum::zero(width);
    let terms = obj
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Json("sum is missing \"terms\"".into()))?;
    for term in terms {
        let t = term.as_object().ok_or_else(|| Error::Json("term must be an object".into()))?;
        let graph = graph_from_value(
            t.get("graph").ok_or_else(|| Error::Json("term is missing \"graph\"".into()))?,
        )?;
        let coeff = rational_from_value(
            t.get("coeff").ok_or_else(|| Error::Json("term is missing \"coeff\"".into()))?,
        )?;
        s.add_term(graph, coeff).map_err(|e| Error::Json(e.to_string()))?;
    }
    Ok(s)
}

/// Class maps reuse the sum schema over canonical representatives, with the
/// automorphism order as an extra per-term field.
pub fn classes_to_value(v: usize, classes: &ClassMap) -> Result<Value> {
    let mut terms = Vec::with_capacity(classes.len());
    for (class, w) in classes {
        let mut term = Map::new();
        term.insert("graph".into(), graph_to_value(class.canonical())?);
        term.insert("coeff".into(), rational_to_value(w)?);
        term.insert("aut".into(), int_to_value(class.aut_order())?);
        terms.push(Value::Object(term));
    }
    let mut obj = Map::new();
    obj.insert("v".into(), Value::Number(Number::from(v as u64)));
    obj.insert("terms".into(), Value::Array(terms));
    Ok(Value::Object(obj))
}
