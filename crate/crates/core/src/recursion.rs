//! The memoized recursions over loop and vertex order.
//!
//! `onevi_sum` builds the weighted sum over all 1VI graphs by splitting a
//! vertex of the next-smaller sums (the Q maps) and, from four vertices on,
//! splitting the shared vertex of bouquets (the Q-hat maps). `bouquet_sum`
//! glues 1VI sums into connected graphs whose blocks all share the last
//! vertex. `onepi_sum` corrects the 1VI sum by merging smaller 1VI cores
//! into every vertex of smaller 1PI sums. `dressed_sum` multiplies in
//! self-loops and distributes external legs.
//!
//! Every coefficient is exact; the same parameters always produce the same
//! sum, so results memoize in memory and optionally on disk.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde_json::{Map, Number, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hopf::Monomial;
use crate::json::{sum_from_value, sum_to_value};
use crate::ops::{distribute_legs, glue, merge_map, q_map, qhat_map, selfloop_coproduct};
use crate::rational::{factorial, pow2, Int, Rational};
use crate::sum::GraphSum;

/// Name of the environment variable pointing at the on-disk cache.
pub const CACHE_DIR_ENV: &str = "ONEPI_CACHE_DIR";

/// Bumped whenever the cache file layout changes.
pub const CACHE_FORMAT_VERSION: u64 = 1;

/// Which recursion a cached sum belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SumKind {
    OneVi,
    Bouquet,
    OnePi,
}

impl SumKind {
    pub fn tag(self) -> &'static str {
        match self {
            SumKind::OneVi => "V",
            SumKind::Bouquet => "B",
            SumKind::OnePi => "I",
        }
    }

    pub fn from_tag(tag: &str) -> Option<SumKind> {
        match tag {
            "V" => Some(SumKind::OneVi),
            "B" => Some(SumKind::Bouquet),
            "I" => Some(SumKind::OnePi),
            _ => None,
        }
    }
}

/// Memo key: kind, loop order, vertex order and (for bouquets) block count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SumKey {
    pub kind: SumKind,
    pub l: usize,
    pub v: usize,
    pub k: usize,
}

impl SumKey {
    pub fn onevi(l: usize, v: usize) -> SumKey {
        SumKey { kind: SumKind::OneVi, l, v, k: 0 }
    }

    pub fn bouquet(l: usize, v: usize, k: usize) -> SumKey {
        SumKey { kind: SumKind::Bouquet, l, v, k }
    }

    pub fn onepi(l: usize, v: usize) -> SumKey {
        SumKey { kind: SumKind::OnePi, l, v, k: 0 }
    }

    fn file_name(&self) -> String {
        match self.kind {
            SumKind::Bouquet => format!("B_l{}_v{}_k{}.json", self.l, self.v, self.k),
            kind => format!("{}_l{}_v{}.json", kind.tag(), self.l, self.v),
        }
    }
}

/// Recursion driver with an in-memory memo table and an optional on-disk
/// cache directory.
#[derive(Debug, Default)]
pub struct Engine {
    memo: HashMap<SumKey, Arc<GraphSum>>,
    cache_dir: Option<PathBuf>,
}

impl Engine {
    /// In-memory memoization only.
    pub fn new() -> Engine {
        Engine { memo: HashMap::new(), cache_dir: None }
    }

    /// Memoization backed by cache files under `dir` (created on demand).
    pub fn with_cache_dir(dir: impl Into<PathBuf>) -> Engine {
        Engine { memo: HashMap::new(), cache_dir: Some(dir.into()) }
    }

    /// Use the directory named by `ONEPI_CACHE_DIR` when set.
    pub fn from_env() -> Engine {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Engine::with_cache_dir(PathBuf::from(dir)),
            _ => Engine::new(),
        }
    }

    pub fn cache_dir(&self) -> Option<&Path> {
        self.cache_dir.as_deref()
    }

    /// Look a key up in memory, then on disk. Disk hits are checksummed and
    /// promoted into memory.
    pub fn lookup(&mut self, key: &SumKey) -> Result<Option<Arc<GraphSum>>> {
        if let Some(hit) = self.memo.get(key) {
            return Ok(Some(hit.clone()));
        }
        if let Some(dir) = &self.cache_dir {
            let path = dir.join(key.file_name());
            if path.exists() {
                let sum = read_cache_file(&path, key)?;
                let arc = Arc::new(sum);
                self.memo.insert(*key, arc.clone());
                return Ok(Some(arc));
            }
        }
        Ok(None)
    }

    /// Store a computed sum in memory and, when configured, on disk.
    pub fn store(&mut self, key: SumKey, sum: GraphSum) -> Result<Arc<GraphSum>> {
        let arc = Arc::new(sum);
        if let Some(dir) = &self.cache_dir {
            fs::create_dir_all(dir)?;
            let path = dir.join(key.file_name());
            write_cache_file(&path, &key, &arc)?;
        }
        self.memo.insert(key, arc.clone());
        Ok(arc)
    }

    /// Drop the in-memory table; the disk cache, when present, still
    /// reproduces every value.
    pub fn evict_memory(&mut self) {
        self.memo.clear();
    }

    /// Keys currently memoized in memory.
    pub fn memoized_keys(&self) -> Vec<SumKey> {
        let mut keys: Vec<SumKey> = self.memo.keys().copied().collect();
        keys.sort();
        keys
    }

    /// The weighted sum over all 1VI graphs with `l` loops and `v` vertices
    /// (no self-loops, no legs). Base case: the `(l+1)`-fold banana with
    /// coefficient `1/(2 (l+1)!)`.
    pub fn onevi_sum(&mut self, l: usize, v: usize) -> Result<Arc<GraphSum>> {
        if v < 2 {
            return Err(Error::BadParameter(format!("1VI sums need v >= 2, got v={v}")));
        }
        let key = SumKey::onevi(l, v);
        if let Some(hit) = self.lookup(&key)? {
            return Ok(hit);
        }
        let result = if v == 2 {
            let banana = Graph::isolated(2)?.with_edge(1, 2, l + 1)?;
            let coeff = Rational::new(Int::from(1), Int::from(2) * factorial(l + 1));
            let mut s = GraphSum::zero(2);
            s.add_term(banana, coeff)?;
            s
        } else if l == 0 {
            GraphSum::zero(v)
        } else {
            let mut acc = GraphSum::zero(v);
            for rho in 1..=l {
                let prev = self.onevi_sum(l + 1 - rho, v - 1)?;
                if prev.is_empty() {
                    continue;
                }
                for i in 1..=v - 1 {
                    acc.add_assign(&q_map(&prev, i, rho)?)?;
                }
            }
            // The bouquet correction only exists from v = 4 and l = 2 on.
            if v >= 4 && l >= 2 {
                for k in 2..=v - 2 {
                    for rho in 1..=(l + 1).saturating_sub(k) {
                        let bouquet = self.bouquet_sum(l + 1 - rho, v - 1, k)?;
                        if bouquet.is_empty() {
                            continue;
                        }
                        acc.add_assign(&qhat_map(&bouquet, v - 1, rho)?)?;
                    }
                }
            }
            acc.scale(&Rational::new(Int::from(1), Int::from(l + v - 1)))
        };
        self.store(key, result)
    }

    /// Connected graphs with `l` loops, `v` vertices and exactly `k` blocks
    /// all sharing the last vertex, glued together from 1VI sums. Empty for
    /// `l < k` (each block carries at least one loop).
    pub fn bouquet_sum(&mut self, l: usize, v: usize, k: usize) -> Result<Arc<GraphSum>> {
        if k < 2 {
            return Err(Error::BadParameter(format!("bouquets need k >= 2 blocks, got k={k}")));
        }
        if v < k + 1 {
            return Err(Error::BadParameter(format!(
                "bouquets with k={k} blocks need v >= {}, got v={v}",
                k + 1
            )));
        }
        let key = SumKey::bouquet(l, v, k);
        if let Some(hit) = self.lookup(&key)? {
            return Ok(hit);
        }
        let mut acc = GraphSum::zero(v);
        if l >= k {
            for lp in 1..l {
                for vp in 2..v {
                    let left = self.onevi_sum(lp, vp)?;
                    if left.is_empty() {
                        continue;
                    }
                    let weight = Rational::from_integer(Int::from(lp + vp - 1));
                    let right_v = v - vp + 1;
                    if k == 2 {
                        let right = self.onevi_sum(l - lp, right_v)?;
                        if right.is_empty() {
                            continue;
                        }
                        for i in 1..=vp {
                            for j in 1..=right_v {
                                acc.add_assign(&glue(&left, i, &right, j)?.scale(&weight))?;
                            }
                        }
                    } else {
                        if right_v < k {
                            continue;
                        }
                        let right = self.bouquet_sum(l - lp, right_v, k - 1)?;
                        if right.is_empty() {
                            continue;
                        }
                        for i in 1..=vp {
                            acc.add_assign(&glue(&left, i, &right, right_v)?.scale(&weight))?;
                        }
                    }
                }
            }
            acc = acc.scale(&Rational::new(Int::from(1), Int::from(l + v - 1)));
        }
        self.store(key, acc)
    }

    /// The weighted sum over all 1PI graphs with `l` loops and `v` vertices
    /// (no self-loops, no legs).
    pub fn onepi_sum(&mut self, l: usize, v: usize) -> Result<Arc<GraphSum>> {
        if l < 1 {
            return Err(Error::BadParameter(format!("1PI sums need l >= 1, got l={l}")));
        }
        if v < 2 {
            return Err(Error::BadParameter(format!("1PI sums need v >= 2, got v={v}")));
        }
        let key = SumKey::onepi(l, v);
        if let Some(hit) = self.lookup(&key)? {
            return Ok(hit);
        }
        let mut result = (*self.onevi_sum(l, v)?).clone();
        if v > 2 {
            let mut correction = GraphSum::zero(v);
            for lp in 1..l {
                for vp in 2..v {
                    let core = self.onevi_sum(lp, vp)?;
                    if core.is_empty() {
                        continue;
                    }
                    let target = self.onepi_sum(l - lp, v - vp + 1)?;
                    if target.is_empty() {
                        continue;
                    }
                    let weight = Rational::from_integer(Int::from(lp + vp - 1));
                    for i in 1..=v - vp + 1 {
                        correction.add_assign(&merge_map(&core, &target, i)?.scale(&weight))?;
                    }
                }
            }
            result
                .add_assign(&correction.scale(&Rational::new(Int::from(1), Int::from(l + v - 1))))?;
        }
        self.store(key, result)
    }

    /// 1PI graphs dressed with `lprime` self-loops and the labels of a
    /// monomial as external legs. `v = 1` carries no internal edges and
    /// requires `l = 0`; wider sums require `l >= 1`.
    pub fn dressed_sum(
        &mut self,
        l: usize,
        lprime: usize,
        v: usize,
        labels: &Monomial,
    ) -> Result<GraphSum> {
        if !labels.is_distinct() {
            return Err(Error::RepeatedLabel);
        }
        if v == 1 {
            if l != 0 {
                return Err(Error::BadParameter(
                    "a single vertex carries no internal loops; use l = 0".into(),
                ));
            }
            let mut g = Graph::single_vertex().with_edge(1, 1, lprime)?;
            for label in labels.labels() {
                g = g.with_leg(1, label.clone())?;
            }
            let coeff = Rational::new(Int::from(1), factorial(lprime) * pow2(lprime));
            let mut s = GraphSum::zero(1);
            s.add_term(g, coeff)?;
            return Ok(s);
        }
        let base = self.onepi_sum(l, v)?;
        let loops = selfloop_coproduct(lprime, v)?;
        let dressed = base
            .componentwise_mul(&loops)?
            .scale(&Rational::new(Int::from(1), factorial(lprime)));
        distribute_legs(labels, &dressed)
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

fn write_cache_file(path: &Path, key: &SumKey, sum: &GraphSum) -> Result<()> {
    let sum_value = sum_to_value(sum)?;
    let sum_text = serde_json::to_string(&sum_value).map_err(|e| Error::Json(e.to_string()))?;
    let mut header = Map::new();
    header.insert("kind".into(), Value::String(key.kind.tag().into()));
    header.insert("l".into(), Value::Number(Number::from(key.l as u64)));
    header.insert("v".into(), Value::Number(Number::from(key.v as u64)));
    header.insert("k".into(), Value::Number(Number::from(key.k as u64)));
    header.insert("version".into(), Value::Number(Number::from(CACHE_FORMAT_VERSION)));
    header.insert("checksum".into(), Value::String(sha256_hex(sum_text.as_bytes())));
    let mut file = Map::new();
    file.insert("header".into(), Value::Object(header));
    file.insert("sum".into(), sum_value);
    let text =
        serde_json::to_string_pretty(&Value::Object(file)).map_err(|e| Error::Json(e.to_string()))?;
    fs::write(path, text)?;
    Ok(())
}

fn read_cache_file(path: &Path, key: &SumKey) -> Result<GraphSum> {
    let corrupt = |msg: String| Error::CacheCorrupt(format!("{}: {msg}", path.display()));
    let text = fs::read_to_string(path)?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| corrupt(format!("unparsable JSON: {e}")))?;
    let obj = value.as_object().ok_or_else(|| corrupt("not an object".into()))?;
    let header = obj
        .get("header")
        .and_then(Value::as_object)
        .ok_or_else(|| corrupt("missing header".into()))?;
    let version = header.get("version").and_then(Value::as_u64);
    if version != Some(CACHE_FORMAT_VERSION) {
        return Err(corrupt(format!("format version {version:?} != {CACHE_FORMAT_VERSION}")));
    }
    let kind = header
        .get("kind")
        .and_then(Value::as_str)
        .and_then(SumKind::from_tag)
        .ok_or_else(|| corrupt("bad kind".into()))?;
    let (l, v, k) = (
        header.get("l").and_then(Value::as_u64),
        header.get("v").and_then(Value::as_u64),
        header.get("k").and_then(Value::as_u64),
    );
    if kind != key.kind
        || l != Some(key.l as u64)
        || v != Some(key.v as u64)
        || k != Some(key.k as u64)
    {
        return Err(corrupt("header key does not match the requested sum".into()));
    }
    let sum_value = obj.get("sum").ok_or_else(|| corrupt("missing sum".into()))?;
    let sum_text =
        serde_json::to_string(sum_value).map_err(|e| corrupt(format!("reserialize: {e}")))?;
    let expected = header
        .get("checksum")
        .and_then(Value::as_str)
        .ok_or_else(|| corrupt("missing checksum".into()))?;
    let actual = sha256_hex(sum_text.as_bytes());
    if expected != actual {
        return Err(corrupt(format!("checksum mismatch: header {expected}, content {actual}")));
    }
    let sum = sum_from_value(sum_value).map_err(|e| corrupt(e.to_string()))?;
    if sum.num_vertices() != key.v {
        return Err(corrupt("sum width does not match header".into()));
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use crate::sum::FeynmanClass;

    fn g(v: usize, edges: &[(usize, usize, usize)]) -> Graph {
        let mut out = Graph::isolated(v).unwrap();
        for &(i, j, m) in edges {
            out = out.with_edge(i, j, m).unwrap();
        }
        out
    }

    #[test]
    fn onevi_base_cases() {
        let mut engine = Engine::new();
        for l in 0..=6usize {
            let s = engine.onevi_sum(l, 2).unwrap();
            assert_eq!(s.len(), 1);
            let banana = g(2, &[(1, 2, l + 1)]);
            let expected = Rational::new(Int::from(1), Int::from(2) * factorial(l + 1));
            assert_eq!(s.coeff(&banana), expected);
        }
    }

    #[test]
    fn onevi_vanishes_at_tree_level() {
        let mut engine = Engine::new();
        for v in 3..=5 {
            assert!(engine.onevi_sum(0, v).unwrap().is_empty());
        }
    }

    #[test]
    fn onevi_one_loop_triangle() {
        let mut engine = Engine::new();
        let s = engine.onevi_sum(1, 3).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.coeff(&g(3, &[(1, 2, 1), (1, 3, 1), (2, 3, 1)])), rat(1, 6));
    }

    #[test]
    fn onevi_two_loops_three_vertices() {
        // Numbered coefficients are not class-symmetric: (3/32, 1/16, 3/32).
        let mut engine = Engine::new();
        let s = engine.onevi_sum(2, 3).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.coeff(&g(3, &[(1, 2, 2), (1, 3, 1), (2, 3, 1)])), rat(3, 32));
        assert_eq!(s.coeff(&g(3, &[(1, 2, 1), (1, 3, 2), (2, 3, 1)])), rat(1, 16));
        assert_eq!(s.coeff(&g(3, &[(1, 2, 1), (1, 3, 1), (2, 3, 2)])), rat(3, 32));
        let classes = s.project();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes.values().next().unwrap(), &rat(1, 4));
    }

    #[test]
    fn onevi_rejects_single_vertex() {
        assert!(Engine::new().onevi_sum(1, 1).is_err());
    }

    #[test]
    fn bouquet_two_bananas() {
        let mut engine = Engine::new();
        let s = engine.bouquet_sum(2, 3, 2).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.coeff(&g(3, &[(1, 3, 2), (2, 3, 2)])), rat(1, 8));
        let classes = s.project();
        assert_eq!(classes.values().next().unwrap(), &rat(1, 8));
    }

    #[test]
    fn bouquet_empty_below_block_loops() {
        let mut engine = Engine::new();
        assert!(engine.bouquet_sum(1, 3, 2).unwrap().is_empty());
        assert!(engine.bouquet_sum(2, 4, 3).unwrap().is_empty());
    }

    #[test]
    fn bouquet_structure() {
        let mut engine = Engine::new();
        let s = engine.bouquet_sum(3, 4, 2).unwrap();
        assert!(!s.is_empty());
        for (term, _) in s.terms() {
            let d = term.blocks().unwrap();
            assert_eq!(d.blocks.len(), 2, "term {term}");
            assert!(d.blocks.iter().all(|b| b.contains_vertex(4)), "term {term}");
            assert_eq!(term.loop_number().unwrap(), 3);
        }
    }

    #[test]
    fn bouquet_rejects_bad_parameters() {
        assert!(Engine::new().bouquet_sum(2, 3, 1).is_err());
        assert!(Engine::new().bouquet_sum(3, 3, 3).is_err());
    }

    #[test]
    fn onepi_agrees_with_onevi_at_two_vertices() {
        let mut engine = Engine::new();
        for l in 1..=4 {
            assert_eq!(engine.onepi_sum(l, 2).unwrap(), engine.onevi_sum(l, 2).unwrap());
        }
    }

    #[test]
    fn onepi_one_loop_equals_onevi() {
        let mut engine = Engine::new();
        assert_eq!(*engine.onepi_sum(1, 3).unwrap(), *engine.onevi_sum(1, 3).unwrap());
    }

    #[test]
    fn onepi_two_loops_three_vertices() {
        let mut engine = Engine::new();
        let s = engine.onepi_sum(2, 3).unwrap();
        // Correction term: (1/32)(R12^2 R13^2 + 2 R12^2 R23^2 + R13^2 R23^2).
        let chain_a = g(3, &[(1, 2, 2), (1, 3, 2)]);
        let chain_b = g(3, &[(1, 2, 2), (2, 3, 2)]);
        let chain_c = g(3, &[(1, 3, 2), (2, 3, 2)]);
        assert_eq!(s.coeff(&chain_a), rat(1, 32));
        assert_eq!(s.coeff(&chain_b), rat(1, 16));
        assert_eq!(s.coeff(&chain_c), rat(1, 32));
        let classes = s.project();
        assert_eq!(classes.len(), 2);
        let weights: Vec<Rational> = classes.values().cloned().collect();
        assert!(weights.contains(&rat(1, 4)));
        assert!(weights.contains(&rat(1, 8)));
    }

    #[test]
    fn onepi_rejects_tree_level() {
        assert!(Engine::new().onepi_sum(0, 3).is_err());
    }

    #[test]
    fn dressed_single_vertex() {
        let mut engine = Engine::new();
        let s = engine.dressed_sum(0, 1, 1, &Monomial::new(["x1", "x2"])).unwrap();
        assert_eq!(s.len(), 1);
        let expected = Graph::single_vertex()
            .with_edge(1, 1, 1)
            .unwrap()
            .with_leg(1, "x1")
            .unwrap()
            .with_leg(1, "x2")
            .unwrap();
        assert_eq!(s.coeff(&expected), rat(1, 2));
        assert_eq!(FeynmanClass::of(&expected).aut_order(), &Int::from(2));
    }

    #[test]
    fn dressed_trivial_dressing_is_onepi() {
        let mut engine = Engine::new();
        let plain = engine.dressed_sum(2, 0, 3, &Monomial::unit()).unwrap();
        assert_eq!(plain, *engine.onepi_sum(2, 3).unwrap());
    }

    #[test]
    fn dressed_banana_with_self_loop() {
        let mut engine = Engine::new();
        let s = engine.dressed_sum(1, 1, 2, &Monomial::unit()).unwrap();
        assert_eq!(s.len(), 2);
        let looped_1 = g(2, &[(1, 2, 2), (1, 1, 1)]);
        assert_eq!(s.coeff(&looped_1), rat(1, 8));
        let classes = s.project();
        assert_eq!(classes.len(), 1);
        let (class, w) = classes.iter().next().unwrap();
        // Two numbered terms of 1/8 each; |Aut| = 2! * (1! 2^1) = 4.
        assert_eq!(w, &rat(1, 4));
        assert_eq!(class.aut_order(), &Int::from(4));
        assert_eq!(w, &class.weight());
    }

    #[test]
    fn dressed_rejects_bad_parameters() {
        let mut engine = Engine::new();
        assert!(engine.dressed_sum(1, 0, 1, &Monomial::unit()).is_err());
        assert!(engine.dressed_sum(0, 0, 2, &Monomial::unit()).is_err());
        assert!(engine.dressed_sum(1, 0, 2, &Monomial::new(["x", "x"])).is_err());
    }

    #[test]
    fn leg_distribution_multiplies_term_count() {
        let mut engine = Engine::new();
        let bare = engine.dressed_sum(2, 0, 3, &Monomial::unit()).unwrap();
        let dressed = engine.dressed_sum(2, 0, 3, &Monomial::new(["x1", "x2"])).unwrap();
        assert_eq!(dressed.len(), bare.len() * 9);
        for (term, _) in dressed.terms() {
            assert_eq!(term.leg_total(), 2);
        }
    }

    #[test]
    fn store_then_lookup_round_trip() {
        let mut engine = Engine::new();
        let key = SumKey::onevi(1, 3);
        let sum = (*engine.onevi_sum(1, 3).unwrap()).clone();
        let stored = engine.store(key, sum.clone()).unwrap();
        assert_eq!(*stored, sum);
        assert_eq!(*engine.lookup(&key).unwrap().unwrap(), sum);
    }

    #[test]
    fn disk_cache_cold_and_warm_runs_agree() {
        let dir = tempfile::tempdir().unwrap();
        let cold = {
            let mut engine = Engine::with_cache_dir(dir.path());
            (*engine.onepi_sum(2, 3).unwrap()).clone()
        };
        let mut warm_engine = Engine::with_cache_dir(dir.path());
        let warm = warm_engine.onepi_sum(2, 3).unwrap();
        assert_eq!(*warm, cold);
        // The warm run answered from disk: the 1VI ingredients were not
        // recomputed into memory beyond what lookup promoted.
        assert!(dir.path().join("I_l2_v3.json").exists());
    }

    #[test]
    fn eviction_never_changes_results() {
        let mut engine = Engine::new();
        let before = (*engine.onepi_sum(2, 4).unwrap()).clone();
        engine.evict_memory();
        assert!(engine.memoized_keys().is_empty());
        assert_eq!(*engine.onepi_sum(2, 4).unwrap(), before);
    }

    #[test]
    fn corrupted_cache_files_are_detected() {
        let dir = tempfile::tempdir().unwrap();
        let key = SumKey::onevi(1, 3);
        {
            let mut engine = Engine::with_cache_dir(dir.path());
            engine.onevi_sum(1, 3).unwrap();
        }
        let path = dir.path().join(key.file_name());
        let mut value: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        value["sum"]["terms"][0]["coeff"][1] = Value::Number(Number::from(7u64));
        fs::write(&path, serde_json::to_string_pretty(&value).unwrap()).unwrap();
        let mut engine = Engine::with_cache_dir(dir.path());
        match engine.onevi_sum(1, 3) {
            Err(Error::CacheCorrupt(_)) => {}
            other => panic!("expected cache corruption, got {other:?}"),
        }
    }
}
