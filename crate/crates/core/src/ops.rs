//! Graph-level operators: edge multiplication, embedding, gluing, the
//! coalgebra on 1VI classes, vertex-splitting maps, the Q and Q-hat maps,
//! the self-loop coproduct and external-leg distribution.
//!
//! Every operator is linear: it acts term by term on a [`GraphSum`] and
//! commutes with rational linear combinations.

use std::collections::BTreeMap;

use num::Zero;

use crate::error::{Error, Result};
use crate::graph::{Graph, Label};
use crate::hopf::{kfold_coproduct, Monomial};
use crate::rational::{factorial, multinomial, next_composition, pow2, Int, Rational};
use crate::sum::{FeynmanClass, GraphSum};

/// Injective vertex map `{1..source} -> {1..target}`, the index bookkeeping
/// behind embeddings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Injection {
    target: usize,
    map: Vec<usize>,
}

impl Injection {
    pub fn new(target: usize, map: Vec<usize>) -> Result<Injection> {
        let mut seen = vec![false; target];
        for &t in &map {
            if t == 0 || t > target || seen[t - 1] {
                return Err(Error::BadInjection);
            }
            seen[t - 1] = true;
        }
        Ok(Injection { target, map })
    }

    pub fn identity(v: usize) -> Injection {
        Injection { target: v, map: (1..=v).collect() }
    }

    /// The window `{i, i+1, ..., i+width-1}` inside `1..=target`, in order.
    pub fn window(target: usize, i: usize, width: usize) -> Result<Injection> {
        if i == 0 || i + width - 1 > target {
            return Err(Error::BadInjection);
        }
        Injection::new(target, (i..i + width).collect())
    }

    pub fn source(&self) -> usize {
        self.map.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `then` after `self`; requires `then.source() == self.target()`.
    pub fn compose(&self, then: &Injection) -> Result<Injection> {
        if then.source() != self.target {
            return Err(Error::BadInjection);
        }
        let map = self.map.iter().map(|&k| then.map[k - 1]).collect();
        Injection::new(then.target, map)
    }
}

/// Multiply every term by `rho` copies of the edge `{i, j}` (self-loops for
/// `i == j`); coefficients are unchanged.
pub fn add_edge(s: &GraphSum, i: usize, j: usize, rho: usize) -> Result<GraphSum> {
    let v = s.num_vertices();
    check_index(i, v)?;
    check_index(j, v)?;
    s.map_terms(v, |g| Ok(vec![(g.clone().with_edge(i, j, rho)?, one())]))
}

/// Widen each term to `inj.target()` vertices, renaming vertex `k` to
/// `inj(k)`; the remaining vertices stay isolated.
pub fn embed(s: &GraphSum, inj: &Injection) -> Result<GraphSum> {
    if inj.source() != s.num_vertices() {
        return Err(Error::BadInjection);
    }
    s.map_terms(inj.target(), |g| Ok(vec![(g.map_vertices(inj.map(), inj.target())?, one())]))
}

/// Glue vertex `i` of `a` to vertex `j` of `b`. The result lives on
/// `v + v' - 1` vertices: the non-glued vertices of `a` keep their order at
/// positions `1..v-1`, those of `b` follow at `v..v+v'-2`, and the merged
/// vertex takes the last index, carrying both incidence sets.
pub fn glue(a: &GraphSum, i: usize, b: &GraphSum, j: usize) -> Result<GraphSum> {
    let (va, vb) = (a.num_vertices(), b.num_vertices());
    check_index(i, va)?;
    check_index(j, vb)?;
    let new_v = va + vb - 1;
    let map_a: Vec<usize> =
        (1..=va).map(|k| if k == i { new_v } else if k < i { k } else { k - 1 }).collect();
    let map_b: Vec<usize> = (1..=vb)
        .map(|k| if k == j { new_v } else if k < j { va - 1 + k } else { va + k - 2 })
        .collect();
    let mut out = GraphSum::zero(new_v);
    for (ga, ca) in a.terms() {
        let ga = ga.map_vertices(&map_a, new_v)?;
        for (gb, cb) in b.terms() {
            let gb = gb.map_vertices(&map_b, new_v)?;
            out.add_term(ga.union(&gb)?, ca * cb)?;
        }
    }
    Ok(out)
}

/// One attachment unit at the split vertex: a whole block, a single
/// self-loop, or a single external leg.
enum SplitUnit {
    /// Edges of a block incident to the split vertex move together.
    Block(BTreeMap<(usize, usize), usize>),
    Loop,
    Leg(Label),
}

/// Decompose a term around vertex `i`: the shifted base graph (everything
/// not attached to `i`) plus the attachment units at `i`. Total over
/// arbitrary terms: every edge multiset partitions into blocks, and
/// splitting an articulation vertex legitimately produces disconnected
/// intermediates that later edge factors reconnect.
fn split_parts(g: &Graph, i: usize, m: usize) -> Result<(Graph, Vec<SplitUnit>)> {
    let v = g.num_vertices();
    let shift = |k: usize| if k < i { k } else { k + m };

    let mut base = Graph::isolated(v + m)?;
    let mut units: Vec<SplitUnit> = Vec::new();
    for block in &g.edge_blocks() {
        if block.contains_vertex(i) {
            units.push(SplitUnit::Block(block.edges.clone()));
        } else {
            for (&(a, b), &mult) in &block.edges {
                base = base.with_edge(shift(a), shift(b), mult)?;
            }
        }
    }
    for (&u, &count) in g.loops() {
        if u == i {
            for _ in 0..count {
                units.push(SplitUnit::Loop);
            }
        } else {
            base = base.with_edge(shift(u), shift(u), count)?;
        }
    }
    for (&u, labels) in g.legs() {
        if u == i {
            for l in labels {
                units.push(SplitUnit::Leg(l.clone()));
            }
        } else {
            for l in labels {
                base = base.with_leg(shift(u), l.clone())?;
            }
        }
    }
    Ok((base, units))
}

/// Attach a unit to the new vertex `target`, shifting the other endpoints.
fn attach_unit(mut g: Graph, unit: &SplitUnit, i: usize, m: usize, target: usize) -> Result<Graph> {
    let shift = |k: usize| if k < i { k } else { k + m };
    match unit {
        SplitUnit::Block(edges) => {
            for (&(a, b), &mult) in edges {
                let aa = if a == i { target } else { shift(a) };
                let bb = if b == i { target } else { shift(b) };
                g = g.with_edge(aa, bb, mult)?;
            }
        }
        SplitUnit::Loop => {
            g = g.with_edge(target, target, 1)?;
        }
        SplitUnit::Leg(l) => {
            g = g.with_leg(target, l.clone())?;
        }
    }
    Ok(g)
}

/// The iterated vertex-splitting map: replace vertex `i` of every term by
/// `m + 1` new vertices `i..=i+m` and distribute each attachment unit at
/// `i` (block, self-loop or leg) over the new vertices in all ways.
/// Higher-numbered vertices shift up by `m`. Terms must be connected.
pub fn block_split(s: &GraphSum, i: usize, m: usize) -> Result<GraphSum> {
    check_index(i, s.num_vertices())?;
    if m == 0 {
        return Ok(s.clone());
    }
    s.map_terms(s.num_vertices() + m, |g| {
        let (base, units) = split_parts(g, i, m)?;
        let mut out = Vec::new();
        let mut choice = vec![0usize; units.len()];
        loop {
            let mut candidate = base.clone();
            for (unit, &c) in units.iter().zip(&choice) {
                candidate = attach_unit(candidate, unit, i, m, i + c)?;
            }
            out.push((candidate, one()));
            // Odometer over the (m+1)^units choices.
            let mut pos = 0;
            loop {
                if pos == units.len() {
                    return Ok(out);
                }
                choice[pos] += 1;
                if choice[pos] <= m {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
        }
    })
}

/// One end of an edge incident to the split vertex.
#[derive(Clone)]
enum End {
    /// End of a non-loop edge; the far endpoint is already shifted.
    Edge { other: usize },
    /// One of the two halves of a self-loop; halves pair up by id.
    LoopHalf { pair: usize },
    Leg(Label),
}

/// All ends at vertex `i`: one per incident edge copy, two per self-loop,
/// one per leg. Far endpoints come out shifted by the split width.
fn ends_at(g: &Graph, i: usize, width: usize) -> Vec<End> {
    let shift = |k: usize| if k < i { k } else { k + width };
    let mut ends = Vec::new();
    for ((a, b), mult) in g.incident_edges(i) {
        let other = if a == i { b } else { a };
        for _ in 0..mult {
            ends.push(End::Edge { other: shift(other) });
        }
    }
    for pair in 0..g.self_loops_at(i) {
        ends.push(End::LoopHalf { pair });
        ends.push(End::LoopHalf { pair });
    }
    for l in g.legs_at(i) {
        ends.push(End::Leg(l.clone()));
    }
    ends
}

/// Rebuild a term from an assignment of its ends at `i` to the two new
/// vertices `i` and `i + 1` (`mask` bit set sends an end to `i + 1`).
fn reassemble(g: &Graph, i: usize, ends: &[End], mask: usize) -> Result<Graph> {
    let v = g.num_vertices();
    let shift = |k: usize| if k < i { k } else { k + 1 };
    let mut out = Graph::isolated(v + 1)?;
    for (&(a, b), &mult) in g.edges() {
        if a != i && b != i {
            out = out.with_edge(shift(a), shift(b), mult)?;
        }
    }
    for (&u, &count) in g.loops() {
        if u != i {
            out = out.with_edge(shift(u), shift(u), count)?;
        }
    }
    for (&u, labels) in g.legs() {
        if u != i {
            for l in labels {
                out = out.with_leg(shift(u), l.clone())?;
            }
        }
    }
    let mut loop_sides: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (pos, end) in ends.iter().enumerate() {
        let side = i + ((mask >> pos) & 1);
        match end {
            End::Edge { other } => {
                out = out.with_edge(side, *other, 1)?;
            }
            End::LoopHalf { pair } => {
                loop_sides.entry(*pair).or_default().push(side);
            }
            End::Leg(l) => {
                out = out.with_leg(side, l.clone())?;
            }
        }
    }
    for sides in loop_sides.values() {
        out = out.with_edge(sides[0], sides[1], 1)?;
    }
    Ok(out)
}

/// The map `Q_i^(rho)`: split vertex `i` in two, distribute the ends at `i`
/// over the two new vertices with both sides nonempty, bridge the new
/// vertices with `rho` edges, and scale by `1/(2 (rho-1)!)`.
pub fn q_map(s: &GraphSum, i: usize, rho: usize) -> Result<GraphSum> {
    check_index(i, s.num_vertices())?;
    if rho == 0 {
        return Err(Error::BadParameter("edge count rho must be >= 1".into()));
    }
    let prefactor = Rational::new(Int::from(1), Int::from(2) * factorial(rho - 1));
    s.map_terms(s.num_vertices() + 1, |g| {
        let ends = ends_at(g, i, 1);
        let d = ends.len();
        let mut out = Vec::new();
        if d >= 2 {
            for mask in 1..(1usize << d) - 1 {
                let candidate = reassemble(g, i, &ends, mask)?.with_edge(i, i + 1, rho)?;
                out.push((candidate, prefactor.clone()));
            }
        }
        Ok(out)
    })
}

/// The map `Q-hat_i^(rho)` on connected graphs: the truncated split acts on
/// each block at `i` separately, so every block keeps at least one end on
/// each new vertex. A term with a block (or a lone leg) that cannot split
/// this way contributes zero.
pub fn qhat_map(s: &GraphSum, i: usize, rho: usize) -> Result<GraphSum> {
    check_index(i, s.num_vertices())?;
    if rho == 0 {
        return Err(Error::BadParameter("edge count rho must be >= 1".into()));
    }
    let prefactor = Rational::new(Int::from(1), Int::from(2) * factorial(rho - 1));
    s.map_terms(s.num_vertices() + 1, |g| {
        let blocks = g.edge_blocks();
        // A block missing the split vertex carries the unit in that factor
        // and the truncated coproduct annihilates it. This also zeroes every
        // disconnected term: blocks in a second component cannot contain i.
        if blocks.iter().any(|b| !b.contains_vertex(i)) {
            return Ok(Vec::new());
        }
        if !g.legs_at(i).is_empty() {
            return Ok(Vec::new());
        }
        // Ends at i grouped per unit: each block splits independently.
        let mut groups: Vec<Vec<End>> = Vec::new();
        for block in &blocks {
            let mut ends = Vec::new();
            for (&(a, b), &mult) in &block.edges {
                if a == i || b == i {
                    let other = if a == i { b } else { a };
                    let shifted = if other < i { other } else { other + 1 };
                    for _ in 0..mult {
                        ends.push(End::Edge { other: shifted });
                    }
                }
            }
            groups.push(ends);
        }
        for pair in 0..g.self_loops_at(i) {
            groups.push(vec![End::LoopHalf { pair }, End::LoopHalf { pair }]);
        }
        if groups.is_empty() {
            return Ok(Vec::new());
        }

        // Per-group masks with both sides nonempty.
        let mut options: Vec<Vec<usize>> = Vec::new();
        for ends in &groups {
            let d = ends.len();
            if d < 2 {
                return Ok(Vec::new());
            }
            options.push((1..(1usize << d) - 1).collect());
        }

        let flat_ends: Vec<End> = groups.iter().flatten().cloned().collect();
        let offsets: Vec<usize> = groups
            .iter()
            .scan(0usize, |acc, ends| {
                let here = *acc;
                *acc += ends.len();
                Some(here)
            })
            .collect();

        let mut out = Vec::new();
        let mut pick = vec![0usize; groups.len()];
        loop {
            let mut mask = 0usize;
            for (gi, &p) in pick.iter().enumerate() {
                mask |= options[gi][p] << offsets[gi];
            }
            let candidate = reassemble(g, i, &flat_ends, mask)?.with_edge(i, i + 1, rho)?;
            out.push((candidate, prefactor.clone()));
            let mut pos = 0;
            loop {
                if pos == groups.len() {
                    return Ok(out);
                }
                pick[pos] += 1;
                if pick[pos] < options[pos].len() {
                    break;
                }
                pick[pos] = 0;
                pos += 1;
            }
        }
    })
}

/// Merge a sum of 1VI cores into vertex `i` of the target: split `i` into
/// `v'` new vertices, then multiply by the core embedded on the window
/// `{i, ..., i + v' - 1}` (order preserving). Bilinear in both arguments.
pub fn merge_map(core: &GraphSum, target: &GraphSum, i: usize) -> Result<GraphSum> {
    check_index(i, target.num_vertices())?;
    for (g, _) in core.terms() {
        if !g.classify().one_vi {
            return Err(Error::NotOneVi);
        }
    }
    let vc = core.num_vertices();
    let out_v = target.num_vertices() + vc - 1;
    let split = block_split(target, i, vc - 1)?;
    let embedded = embed(core, &Injection::window(out_v, i, vc)?)?;
    embedded.componentwise_mul(&split)
}

/// The iterated self-loop coproduct: distribute `k` self-loops over `v`
/// vertices, each composition weighted by its multinomial coefficient and
/// the half-loop normalization `(1/2)^k`.
pub fn selfloop_coproduct(k: usize, v: usize) -> Result<GraphSum> {
    if v == 0 {
        return Err(Error::BadParameter("width must be >= 1".into()));
    }
    let mut out = GraphSum::zero(v);
    let mut parts = vec![0usize; v];
    parts[0] = k;
    loop {
        let mut g = Graph::isolated(v)?;
        for (u, &p) in parts.iter().enumerate() {
            if p > 0 {
                g = g.with_edge(u + 1, u + 1, p)?;
            }
        }
        let coeff = Rational::new(multinomial(&parts), pow2(k));
        out.add_term(g, coeff)?;
        if !next_composition(&mut parts) {
            break;
        }
    }
    Ok(out)
}

/// Attach the labels of a monomial as external legs in all `v^n` ways.
pub fn distribute_legs(labels: &Monomial, s: &GraphSum) -> Result<GraphSum> {
    if !labels.is_distinct() {
        return Err(Error::RepeatedLabel);
    }
    if labels.degree() == 0 {
        return Ok(s.clone());
    }
    let v = s.num_vertices();
    let assignments = kfold_coproduct(labels, v - 1);
    s.map_terms(v, |g| {
        let mut out = Vec::new();
        for (tuple, c) in assignments.terms() {
            let mut candidate = g.clone();
            for (slot, part) in tuple.iter().enumerate() {
                for l in part.labels() {
                    candidate = candidate.with_leg(slot + 1, l.clone())?;
                }
            }
            if !candidate.legs_distinct() {
                return Err(Error::RepeatedLabel);
            }
            out.push((candidate, c.clone()));
        }
        Ok(out)
    })
}

/// Formal sum of ordered pairs of classes, the codomain of the coalgebra
/// coproduct on 1VI Feynman graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPairSum {
    terms: BTreeMap<(FeynmanClass, FeynmanClass), Rational>,
}

impl ClassPairSum {
    pub fn zero() -> ClassPairSum {
        ClassPairSum { terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, left: FeynmanClass, right: FeynmanClass, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((left, right)).or_insert_with(Rational::zero);
        *entry += c;
        self.terms.retain(|_, w| !w.is_zero());
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(FeynmanClass, FeynmanClass), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

fn require_bare_onevi(c: &FeynmanClass) -> Result<()> {
    let g = c.canonical();
    if !g.classify().one_vi || g.selfloop_total() > 0 || g.leg_total() > 0 {
        return Err(Error::NotOneVi);
    }
    Ok(())
}

/// The single-vertex class, the group-like element of the coalgebra.
pub fn single_vertex_class() -> FeynmanClass {
    FeynmanClass::of(&Graph::single_vertex())
}

/// Coproduct on 1VI classes: the single vertex is group-like, every other
/// class is primitive over it.
pub fn cb_coproduct(c: &FeynmanClass) -> Result<ClassPairSum> {
    require_bare_onevi(c)?;
    let s = single_vertex_class();
    let mut out = ClassPairSum::zero();
    if *c == s {
        out.add_term(s.clone(), s, one());
    } else {
        out.add_term(s.clone(), c.clone(), one());
        out.add_term(c.clone(), s, one());
    }
    Ok(out)
}

/// Counit on 1VI classes: 1 on the single vertex, 0 otherwise.
pub fn cb_counit(c: &FeynmanClass) -> Result<Rational> {
    require_bare_onevi(c)?;
    if *c == single_vertex_class() {
        Ok(one())
    } else {
        Ok(Rational::zero())
    }
}

fn check_index(i: usize, v: usize) -> Result<()> {
    if i == 0 || i > v {
        Err(Error::IndexOutOfRange { index: i, v })
    } else {
        Ok(())
    }
}

fn one() -> Rational {
    Rational::from_integer(Int::from(1))
}
