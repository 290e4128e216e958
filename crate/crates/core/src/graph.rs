//! Vertex-numbered multigraphs.
//!
//! A [`Graph`] stores internal edges as an unordered-pair multiset,
//! self-loops and labeled external legs as per-vertex attributes. Vertices
//! are numbered `1..=v`. The module provides the connectivity and
//! irreducibility predicates, the block (maximal biconnected subgraph)
//! decomposition, and the exhaustive canonical-form / automorphism scan
//! used to project numbered sums onto isomorphism classes.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{factorial, pow2, Int};

/// Opaque external-leg label. Labels are compared as plain strings and are
/// expected to be pairwise distinct within a single graph.
pub type Label = String;

/// A vertex-numbered multigraph with self-loops and labeled external legs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    v: usize,
    /// `{i, j} -> multiplicity`, keys normalized to `i < j`, multiplicity >= 1.
    edges: BTreeMap<(usize, usize), usize>,
    /// `vertex -> self-loop count`, counts >= 1.
    loops: BTreeMap<usize, usize>,
    /// `vertex -> sorted leg labels`.
    legs: BTreeMap<usize, Vec<Label>>,
}

/// Result of the connectivity / irreducibility predicates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub connected: bool,
    pub one_vi: bool,
    pub one_pi: bool,
}

/// One block (maximal biconnected subgraph) of a connected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub vertices: BTreeSet<usize>,
    /// The sub-multiset of internal edges owned by this block.
    pub edges: BTreeMap<(usize, usize), usize>,
}

impl Block {
    pub fn contains_vertex(&self, u: usize) -> bool {
        self.vertices.contains(&u)
    }
}

/// Block decomposition of a connected graph. Blocks partition the internal
/// edge multiset; self-loops and external legs stay vertex attributes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub blocks: Vec<Block>,
    /// Vertices belonging to at least two blocks.
    pub articulation: BTreeSet<usize>,
    /// `vertex -> indices into blocks`.
    pub vertex_blocks: BTreeMap<usize, Vec<usize>>,
}

impl Graph {
    /// `v` isolated vertices (the unit tensor of width `v`).
    pub fn isolated(v: usize) -> Result<Graph> {
        if v == 0 {
            return Err(Error::BadParameter("graph needs at least one vertex".into()));
        }
        Ok(Graph { v, edges: BTreeMap::new(), loops: BTreeMap::new(), legs: BTreeMap::new() })
    }

    pub fn single_vertex() -> Graph {
        Graph::isolated(1).expect("1 >= 1")
    }

    pub fn num_vertices(&self) -> usize {
        self.v
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.v {
            Err(Error::IndexOutOfRange { index: i, v: self.v })
        } else {
            Ok(())
        }
    }

    /// Add `mult` copies of the internal edge `{i, j}`; `i == j` adds
    /// self-loops instead.
    pub fn with_edge(mut self, i: usize, j: usize, mult: usize) -> Result<Graph> {
        self.check_index(i)?;
        self.check_index(j)?;
        if mult == 0 {
            return Ok(self);
        }
        if i == j {
            *self.loops.entry(i).or_insert(0) += mult;
        } else {
            let key = (i.min(j), i.max(j));
            *self.edges.entry(key).or_insert(0) += mult;
        }
        Ok(self)
    }

    /// Attach an external leg labeled `label` to vertex `i`.
    pub fn with_leg(mut self, i: usize, label: impl Into<Label>) -> Result<Graph> {
        self.check_index(i)?;
        let slot = self.legs.entry(i).or_default();
        slot.push(label.into());
        slot.sort();
        Ok(self)
    }

    pub fn edges(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.edges
    }

    pub fn loops(&self) -> &BTreeMap<usize, usize> {
        &self.loops
    }

    pub fn legs(&self) -> &BTreeMap<usize, Vec<Label>> {
        &self.legs
    }

    pub fn self_loops_at(&self, u: usize) -> usize {
        self.loops.get(&u).copied().unwrap_or(0)
    }

    pub fn legs_at(&self, u: usize) -> &[Label] {
        self.legs.get(&u).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Incident non-loop edges of `u` as `((i, j), mult)` pairs.
    pub fn incident_edges(&self, u: usize) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.edges
            .iter()
            .filter(move |((i, j), _)| *i == u || *j == u)
            .map(|(&k, &m)| (k, m))
    }

    /// Total non-loop internal edge copies.
    pub fn nonloop_edge_total(&self) -> usize {
        self.edges.values().sum()
    }

    /// Total self-loop count over all vertices.
    pub fn selfloop_total(&self) -> usize {
        self.loops.values().sum()
    }

    /// Total internal edge copies including self-loops.
    pub fn edge_total(&self) -> usize {
        self.nonloop_edge_total() + self.selfloop_total()
    }

    pub fn leg_total(&self) -> usize {
        self.legs.values().map(Vec::len).sum()
    }

    /// Total ends at `u`: one per incident non-loop edge copy, two per
    /// self-loop, one per external leg.
    pub fn degree(&self, u: usize) -> usize {
        let e: usize = self.incident_edges(u).map(|(_, m)| m).sum();
        e + 2 * self.self_loops_at(u) + self.legs_at(u).len()
    }

    /// True when all leg labels over all vertices are pairwise distinct.
    pub fn legs_distinct(&self) -> bool {
        let mut seen = BTreeSet::new();
        for labels in self.legs.values() {
            for l in labels {
                if !seen.insert(l) {
                    return false;
                }
            }
        }
        true
    }

    /// Rebuild the graph with vertex `k` renamed to `map[k-1]` on a graph of
    /// `new_v` vertices. The map must be injective into `1..=new_v`.
    pub fn map_vertices(&self, map: &[usize], new_v: usize) -> Result<Graph> {
        if map.len() != self.v {
            return Err(Error::BadInjection);
        }
        let mut seen = vec![false; new_v];
        for &t in map {
            if t == 0 || t > new_v || seen[t - 1] {
                return Err(Error::BadInjection);
            }
            seen[t - 1] = true;
        }
        let mut edges = BTreeMap::new();
        for (&(i, j), &m) in &self.edges {
            let (a, b) = (map[i - 1], map[j - 1]);
            let key = (a.min(b), a.max(b));
            *edges.entry(key).or_insert(0) += m;
        }
        let mut loops = BTreeMap::new();
        for (&i, &c) in &self.loops {
            *loops.entry(map[i - 1]).or_insert(0) += c;
        }
        let mut legs: BTreeMap<usize, Vec<Label>> = BTreeMap::new();
        for (&i, labels) in &self.legs {
            legs.entry(map[i - 1]).or_default().extend(labels.iter().cloned());
        }
        for labels in legs.values_mut() {
            labels.sort();
        }
        Ok(Graph { v: new_v, edges, loops, legs })
    }

    /// Renumber vertices by a permutation of `1..=v`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        self.map_vertices(perm, self.v)
    }

    /// Componentwise product with another graph of the same width: edge
    /// multiplicities and self-loop counts add, legs accumulate. Rejects
    /// repeated leg labels.
    pub fn union(&self, other: &Graph) -> Result<Graph> {
        if self.v != other.v {
            return Err(Error::MixedWidth { left: self.v, right: other.v });
        }
        let mut out = self.clone();
        for (&(i, j), &m) in &other.edges {
            *out.edges.entry((i, j)).or_insert(0) += m;
        }
        for (&i, &c) in &other.loops {
            *out.loops.entry(i).or_insert(0) += c;
        }
        for (&i, labels) in &other.legs {
            let slot = out.legs.entry(i).or_default();
            slot.extend(labels.iter().cloned());
            slot.sort();
        }
        if !out.legs_distinct() {
            return Err(Error::RepeatedLabel);
        }
        Ok(out)
    }

    /// Connectivity over non-loop internal edges (self-loops and legs are
    /// ignored; a single vertex is connected).
    pub fn is_connected(&self) -> bool {
        if self.v == 1 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.v + 1];
        for &(i, j) in self.edges.keys() {
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut seen = vec![false; self.v + 1];
        let mut queue = VecDeque::from([1usize]);
        seen[1] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.v
    }

    /// True when the vertices in `keep` are connected among themselves using
    /// only edges with both endpoints in `keep`. Empty and singleton sets
    /// count as connected.
    fn subset_connected(&self, keep: &[bool]) -> bool {
        let total = keep.iter().filter(|&&k| k).count();
        if total <= 1 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.v + 1];
        for &(i, j) in self.edges.keys() {
            if keep[i] && keep[j] {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
        let start = (1..=self.v).find(|&u| keep[u]).expect("total >= 1");
        let mut seen = vec![false; self.v + 1];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == total
    }

    /// Connectivity, 1-vertex irreducibility (no articulation vertex) and
    /// 1-particle irreducibility (no bridge copy). A single vertex is both
    /// 1VI and 1PI by convention.
    pub fn classify(&self) -> Classification {
        let connected = self.is_connected();
        if !connected {
            return Classification { connected, one_vi: false, one_pi: false };
        }
        if self.v == 1 {
            return Classification { connected, one_vi: true, one_pi: true };
        }
        let mut one_vi = true;
        for x in 1..=self.v {
            let mut keep = vec![true; self.v + 1];
            keep[0] = false;
            keep[x] = false;
            if !self.subset_connected(&keep) {
                one_vi = false;
                break;
            }
        }
        // Erasing one copy of an edge with multiplicity >= 2 never
        // disconnects, so only single edges are bridge candidates.
        let mut one_pi = true;
        for (&(i, j), &m) in &self.edges {
            if m > 1 {
                continue;
            }
            let mut reduced = self.clone();
            reduced.edges.remove(&(i, j));
            if !reduced.is_connected() {
                one_pi = false;
                break;
            }
        }
        Classification { connected, one_vi, one_pi }
    }

    /// Cyclomatic loop number including self-loops: `E - v + 1 + s`.
    pub fn loop_number(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(self.nonloop_edge_total() + 1 - self.v + self.selfloop_total())
    }

    /// Loop number with self-loops excluded: `E - v + 1`.
    pub fn loop_number_excluding_self_loops(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(self.nonloop_edge_total() + 1 - self.v)
    }

    /// Number of connected components containing at least one non-loop
    /// internal edge. Embedded tensors carry isolated vertices, so "one
    /// nontrivial component" is the useful connectivity notion for the
    /// splitting maps.
    pub fn edge_component_count(&self) -> usize {
        let mut adj = vec![Vec::new(); self.v + 1];
        for &(i, j) in self.edges.keys() {
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut seen = vec![false; self.v + 1];
        let mut components = 0;
        for start in 1..=self.v {
            if seen[start] || adj[start].is_empty() {
                continue;
            }
            components += 1;
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        components
    }

    /// Maximal biconnected subgraphs of a connected graph. Bridges form
    /// their own blocks; parallel copies of a pair always share a block.
    /// The single-vertex graph decomposes into one edgeless block.
    pub fn blocks(&self) -> Result<BlockDecomposition> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        if self.v == 1 {
            let block = Block { vertices: BTreeSet::from([1]), edges: BTreeMap::new() };
            return Ok(BlockDecomposition {
                blocks: vec![block],
                articulation: BTreeSet::new(),
                vertex_blocks: BTreeMap::from([(1, vec![0])]),
            });
        }
        let blocks = self.edge_blocks();
        let mut vertex_blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (idx, block) in blocks.iter().enumerate() {
            for &u in &block.vertices {
                vertex_blocks.entry(u).or_default().push(idx);
            }
        }
        let articulation = vertex_blocks
            .iter()
            .filter(|(_, ids)| ids.len() >= 2)
            .map(|(&u, _)| u)
            .collect();
        Ok(BlockDecomposition { blocks, articulation, vertex_blocks })
    }

    /// Biconnected components of the edge multiset alone, computed per
    /// connected component; isolated vertices contribute nothing.
    pub fn edge_blocks(&self) -> Vec<Block> {
        // Expand multiplicities into individual edge instances.
        let mut instances: Vec<(usize, usize)> = Vec::new();
        for (&(i, j), &m) in &self.edges {
            for _ in 0..m {
                instances.push((i, j));
            }
        }
        let mut adj = vec![Vec::new(); self.v + 1];
        for (id, &(i, j)) in instances.iter().enumerate() {
            adj[i].push((j, id));
            adj[j].push((i, id));
        }

        struct Dfs<'a> {
            adj: &'a [Vec<(usize, usize)>],
            instances: &'a [(usize, usize)],
            disc: Vec<usize>,
            low: Vec<usize>,
            used: Vec<bool>,
            stack: Vec<usize>,
            timer: usize,
            components: Vec<Vec<usize>>,
        }

        impl Dfs<'_> {
            fn run(&mut self, u: usize) {
                self.timer += 1;
                self.disc[u] = self.timer;
                self.low[u] = self.timer;
                for idx in 0..self.adj[u].len() {
                    let (w, inst) = self.adj[u][idx];
                    if self.used[inst] {
                        continue;
                    }
                    self.used[inst] = true;
                    self.stack.push(inst);
                    if self.disc[w] == 0 {
                        self.run(w);
                        self.low[u] = self.low[u].min(self.low[w]);
                        if self.low[w] >= self.disc[u] {
                            let mut comp = Vec::new();
                            while let Some(top) = self.stack.pop() {
                                comp.push(top);
                                if top == inst {
                                    break;
                                }
                            }
                            self.components.push(comp);
                        }
                    } else {
                        self.low[u] = self.low[u].min(self.disc[w]);
                    }
                }
            }

            fn instance_ends(&self, id: usize) -> (usize, usize) {
                self.instances[id]
            }
        }

        let mut dfs = Dfs {
            adj: &adj,
            instances: &instances,
            disc: vec![0; self.v + 1],
            low: vec![0; self.v + 1],
            used: vec![false; instances.len()],
            stack: Vec::new(),
            timer: 0,
            components: Vec::new(),
        };
        for root in 1..=self.v {
            if dfs.disc[root] == 0 && !adj[root].is_empty() {
                dfs.run(root);
            }
        }

        let mut blocks: Vec<Block> = dfs
            .components
            .iter()
            .map(|comp| {
                let mut vertices = BTreeSet::new();
                let mut edges = BTreeMap::new();
                for &id in comp {
                    let (i, j) = dfs.instance_ends(id);
                    vertices.insert(i);
                    vertices.insert(j);
                    *edges.entry((i, j)).or_insert(0) += 1;
                }
                Block { vertices, edges }
            })
            .collect();
        blocks.sort_by(|a, b| a.edges.cmp(&b.edges));
        blocks
    }

    /// Per-vertex invariant used to prune the permutation scan. Stable under
    /// renumbering, so automorphisms and canonical candidates only permute
    /// vertices within equal-signature classes.
    fn vertex_signatures(&self) -> Vec<(usize, Vec<usize>, usize, Vec<Label>)> {
        (1..=self.v)
            .map(|u| {
                let mut mults: Vec<usize> = self.incident_edges(u).map(|(_, m)| m).collect();
                mults.sort_unstable();
                let deg: usize = mults.iter().sum();
                (deg, mults, self.self_loops_at(u), self.legs_at(u).to_vec())
            })
            .collect()
    }

    /// Lexicographically minimal renumbering together with the order of the
    /// vertex automorphism group (renumberings fixing the graph; external
    /// legs pin their vertices since labels are distinct).
    pub fn canonical_with_vertex_aut(&self) -> (Graph, u64) {
        if self.v == 1 {
            return (self.clone(), 1);
        }
        let sigs = self.vertex_signatures();
        let mut order: Vec<usize> = (1..=self.v).collect();
        order.sort_by(|&a, &b| sigs[a - 1].cmp(&sigs[b - 1]).then(a.cmp(&b)));
        let mut rho = vec![0usize; self.v];
        for (pos, &old) in order.iter().enumerate() {
            rho[old - 1] = pos + 1;
        }
        let base = self.relabel(&rho).expect("rho is a permutation");

        // Positions grouped into ranges of equal signature.
        let mut ranges: Vec<(usize, usize)> = Vec::new();
        let mut start = 0;
        for pos in 1..=self.v {
            if pos == self.v || sigs[order[pos] - 1] != sigs[order[start] - 1] {
                ranges.push((start + 1, pos + 1));
                start = pos;
            }
        }
        let range_of: Vec<(usize, usize)> = {
            let mut r = vec![(0, 0); self.v + 1];
            for &(s, e) in &ranges {
                for p in s..e {
                    r[p] = (s, e);
                }
            }
            r
        };

        let mut best = base.clone();
        let mut aut: u64 = 0;
        let mut perm = vec![0usize; self.v];
        let mut used = vec![false; self.v + 1];

        fn backtrack(
            p: usize,
            v: usize,
            range_of: &[(usize, usize)],
            used: &mut [bool],
            perm: &mut [usize],
            base: &Graph,
            best: &mut Graph,
            aut: &mut u64,
        ) {
            if p > v {
                let cand = base.relabel(perm).expect("block-diagonal permutation");
                if &cand == base {
                    *aut += 1;
                }
                if cand < *best {
                    *best = cand;
                }
                return;
            }
            let (s, e) = range_of[p];
            for t in s..e {
                if !used[t] {
                    used[t] = true;
                    perm[p - 1] = t;
                    backtrack(p + 1, v, range_of, used, perm, base, best, aut);
                    used[t] = false;
                }
            }
        }
        backtrack(1, self.v, &range_of, &mut used, &mut perm, &base, &mut best, &mut aut);
        (best, aut)
    }

    /// Symmetry factor: vertex automorphisms times `m!` per parallel edge
    /// family times `s! * 2^s` per self-loop family.
    pub fn aut_order(&self) -> Int {
        let (_, vaut) = self.canonical_with_vertex_aut();
        let mut order = Int::from(vaut);
        for &m in self.edges.values() {
            order *= factorial(m);
        }
        for &s in self.loops.values() {
            order *= factorial(s) * pow2(s);
        }
        order
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[v={}]", self.v)?;
        for (&(i, j), &m) in &self.edges {
            if m == 1 {
                write!(f, " {i}-{j}")?;
            } else {
                write!(f, " {i}-{j}^{m}")?;
            }
        }
        for (&i, &s) in &self.loops {
            if s == 1 {
                write!(f, " @{i}")?;
            } else {
                write!(f, " @{i}^{s}")?;
            }
        }
        for (&i, labels) in &self.legs {
            for l in labels {
                write!(f, " {i}:{l}")?;
            }
        }
        Ok(())
    }
}
