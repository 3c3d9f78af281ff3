//! Finite colored graphs: symmetric irreflexive adjacency over dense ids
//! `0..n-1`, plus unary color predicates, named constants, and boolean flags.
//!
//! Adjacency is stored as one bitset row per vertex, so flips and
//! neighborhood traces are word-parallel.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::par;

/// Graph distance: a non-negative integer or infinity. `Infinite` orders
/// above every finite value, so `d > r` is true for disconnected pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dist {
    Finite(u32),
    Infinite,
}

impl Dist {
    pub fn gt(self, r: u32) -> bool {
        match self {
            Dist::Finite(d) => d > r,
            Dist::Infinite => true,
        }
    }

    pub fn le(self, r: u32) -> bool {
        !self.gt(r)
    }
}

impl std::fmt::Display for Dist {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Dist::Finite(d) => write!(f, "{d}"),
            Dist::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Dist {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Dist::Finite(d) => s.serialize_u32(*d),
            Dist::Infinite => s.serialize_str("inf"),
        }
    }
}

/// A finite colored graph.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Bitset>,
    pub colors: BTreeMap<String, Bitset>,
    pub constants: BTreeMap<String, usize>,
    pub flags: BTreeMap<String, bool>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![Bitset::new(n); n],
            colors: BTreeMap::new(),
            constants: BTreeMap::new(),
            flags: BTreeMap::new(),
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex(v, self.n))
        }
    }

    /// Add an undirected edge. Self-loops are rejected.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidParam(format!("self-loop at vertex {u}")));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// The neighborhood of `v` as a bitset row.
    pub fn neighbors(&self, v: usize) -> &Bitset {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Bitset::count).sum::<usize>() / 2
    }

    /// Edges as sorted `(u, v)` pairs with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn set_color(&mut self, name: &str, members: impl IntoIterator<Item = usize>) {
        self.colors
            .insert(name.to_string(), Bitset::from_iter(self.n, members));
    }

    pub fn set_constant(&mut self, name: &str, v: usize) -> Result<()> {
        self.check_vertex(v)?;
        self.constants.insert(name.to_string(), v);
        Ok(())
    }

    pub fn set_flag(&mut self, name: &str, value: bool) {
        self.flags.insert(name.to_string(), value);
    }

    pub fn color(&self, name: &str) -> Option<&Bitset> {
        self.colors.get(name)
    }

    /// BFS distance between two vertices.
    pub fn bfs_dist(&self, u: usize, v: usize) -> Result<Dist> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Ok(Dist::Finite(0));
        }
        let row = self.bfs_row(u);
        Ok(row[v])
    }

    /// Single-source BFS distances to all vertices.
    pub fn bfs_row(&self, src: usize) -> Vec<Dist> {
        let mut dist = vec![Dist::Infinite; self.n];
        dist[src] = Dist::Finite(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = match dist[u] {
                Dist::Finite(d) => d,
                Dist::Infinite => unreachable!(),
            };
            for w in self.adj[u].iter() {
                if dist[w] == Dist::Infinite {
                    dist[w] = Dist::Finite(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// All vertices at distance at most `r` from `v`, including `v`.
    pub fn ball(&self, v: usize, r: u32) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        let row = self.bfs_row(v);
        Ok((0..self.n).filter(|&w| row[w].le(r)).collect())
    }

    /// Restriction to `vertices` (kept in the given order; ids are remapped
    /// to `0..k-1`). Constants pointing outside are dropped and reported.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<InducedSubgraph> {
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            self.check_vertex(v)?;
            if new_id[v] != usize::MAX {
                return Err(Error::InvalidParam(format!("duplicate vertex {v}")));
            }
            new_id[v] = i;
        }
        let k = vertices.len();
        let mut g = Graph::new(k);
        for (i, &v) in vertices.iter().enumerate() {
            for w in self.adj[v].iter() {
                if new_id[w] != usize::MAX && new_id[w] > i {
                    g.add_edge(i, new_id[w])?;
                }
            }
        }
        for (name, set) in &self.colors {
            let members: Vec<usize> = vertices
                .iter()
                .enumerate()
                .filter(|(_, &v)| set.contains(v))
                .map(|(i, _)| i)
                .collect();
            g.set_color(name, members);
        }
        let mut dropped = Vec::new();
        for (name, &v) in &self.constants {
            if new_id[v] != usize::MAX {
                g.set_constant(name, new_id[v])?;
            } else {
                dropped.push(name.clone());
            }
        }
        g.flags = self.flags.clone();
        Ok(InducedSubgraph {
            graph: g,
            back_map: vertices.to_vec(),
            dropped_constants: dropped,
        })
    }

    /// All-pairs BFS distances, one source per row.
    pub fn dist_matrix(&self) -> DistMatrix {
        let rows = par::map_range(self.n, |v| self.bfs_row(v));
        DistMatrix { n: self.n, rows }
    }

    /// Complement the adjacency between every pair of distinct vertices whose
    /// cells are related under `spec.rel`. Colors, constants, and flags are
    /// untouched; `(v, v)` pairs are never flipped.
    pub fn apply_flip(&self, spec: &FlipSpec) -> Result<Graph> {
        spec.validate(self.n)?;
        let masks: Vec<Bitset> = spec
            .parts
            .iter()
            .map(|cell| Bitset::from_iter(self.n, cell.iter().copied()))
            .collect();
        let mut out = self.clone();
        for v in 0..self.n {
            let pv = spec.part_of(v);
            for j in 0..spec.parts.len() {
                if spec.related(pv, j) {
                    out.adj[v].xor_with(&masks[j]);
                }
            }
            // keep the diagonal clean when (pv, pv) is in rel
            if out.adj[v].contains(v) {
                out.adj[v].remove(v);
            }
        }
        Ok(out)
    }

    /// Partition of the vertices by their neighborhood trace on `s`: the cell
    /// of `v` is determined by which positions `i` have `v ~ s[i]`. Cells are
    /// ordered by ascending trace mask.
    pub fn guarded_partition(&self, s: &[usize]) -> Result<GuardedPartition> {
        for &v in s {
            self.check_vertex(v)?;
        }
        let mut by_trace: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for v in 0..self.n {
            let mut mask = 0u64;
            for (i, &sv) in s.iter().enumerate() {
                if self.has_edge(v, sv) {
                    mask |= 1 << i;
                }
            }
            by_trace.entry(mask).or_default().push(v);
        }
        let (labels, cells): (Vec<u64>, Vec<Vec<usize>>) = by_trace.into_iter().unzip();
        Ok(GuardedPartition { labels, cells })
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .field("colors", &self.colors)
            .field("constants", &self.constants)
            .field("flags", &self.flags)
            .finish()
    }
}

/// Result of [`Graph::induced_subgraph`].
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// new id -> original id
    pub back_map: Vec<usize>,
    pub dropped_constants: Vec<String>,
}

/// Precomputed all-pairs distances; the pseudometric handed to the locality
/// and witness-set machinery.
#[derive(Clone, Debug)]
pub struct DistMatrix {
    n: usize,
    rows: Vec<Vec<Dist>>,
}

impl DistMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> Dist {
        self.rows[u][v]
    }

    /// Reindex through `ids`: entry `(i, j)` becomes `self[ids[i]][ids[j]]`.
    pub fn reindex(&self, ids: &[usize]) -> DistMatrix {
        let rows = ids
            .iter()
            .map(|&u| ids.iter().map(|&v| self.get(u, v)).collect())
            .collect();
        DistMatrix { n: ids.len(), rows }
    }

    /// Largest finite distance, if any pair is connected.
    pub fn max_finite(&self) -> Option<u32> {
        self.rows
            .iter()
            .flatten()
            .filter_map(|d| match d {
                Dist::Finite(x) => Some(*x),
                Dist::Infinite => None,
            })
            .max()
    }
}

/// A flip operation: a labeled partition of the vertices together with a
/// symmetric relation over part indices. Related part pairs (including a
/// part with itself) have their adjacency complemented.
#[derive(Clone, Debug)]
pub struct FlipSpec {
    parts: Vec<Vec<usize>>,
    rel: BTreeSet<(usize, usize)>,
    part_of: Vec<usize>,
}

impl FlipSpec {
    /// `rel` pairs are stored symmetrically; `(i, i)` diagonal pairs are
    /// allowed.
    pub fn new(n: usize, parts: Vec<Vec<usize>>, rel: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut part_of = vec![usize::MAX; n];
        for (i, cell) in parts.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::MalformedPartition(format!("cell {i} is empty")));
            }
            for &v in cell {
                if v >= n {
                    return Err(Error::InvalidVertex(v, n));
                }
                if part_of[v] != usize::MAX {
                    return Err(Error::MalformedPartition(format!(
                        "vertex {v} appears in two cells"
                    )));
                }
                part_of[v] = i;
            }
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(Error::MalformedPartition(format!(
                "vertex {v} not covered by any cell"
            )));
        }
        let mut canon = BTreeSet::new();
        for (i, j) in rel {
            if i >= parts.len() || j >= parts.len() {
                return Err(Error::MalformedPartition(format!(
                    "rel pair ({i}, {j}) references a missing part"
                )));
            }
            canon.insert((i.min(j), i.max(j)));
        }
        Ok(FlipSpec {
            parts,
            rel: canon,
            part_of,
        })
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn rel(&self) -> &BTreeSet<(usize, usize)> {
        &self.rel
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    pub fn related(&self, i: usize, j: usize) -> bool {
        self.rel.contains(&(i.min(j), i.max(j)))
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.part_of.len() != n {
            return Err(Error::MalformedPartition(format!(
                "flip spec built for {} vertices, graph has {n}",
                self.part_of.len()
            )));
        }
        Ok(())
    }
}

/// Partition of the vertices by neighborhood trace on an enumeration of
/// guard vertices; `labels[c]` is the trace bitmask realized by `cells[c]`.
#[derive(Clone, Debug)]
pub struct GuardedPartition {
    pub labels: Vec<u64>,
    pub cells: Vec<Vec<usize>>,
}

impl GuardedPartition {
    /// The flip determined by a symmetric relation over trace masks.
    pub fn flip_spec(
        &self,
        n: usize,
        rel_masks: impl IntoIterator<Item = (u64, u64)>,
    ) -> Result<FlipSpec> {
        let index: BTreeMap<u64, usize> = self
            .labels
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, i))
            .collect();
        let mut rel = Vec::new();
        for (a, b) in rel_masks {
            // pairs over unrealized traces flip nothing
            if let (Some(&i), Some(&j)) = (index.get(&a), index.get(&b)) {
                rel.push((i, j));
            }
        }
        FlipSpec::new(n, self.cells.clone(), rel)
    }
}

// ---------------------------------------------------------------------------
// JSON format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    colors: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    constants: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    flags: BTreeMap<String, bool>,
}

impl Graph {
    pub fn to_json(&self) -> serde_json::Value {
        let j = GraphJson {
            n: self.n,
            edges: self.edges(),
            colors: self
                .colors
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().collect()))
                .collect(),
            constants: self.constants.clone(),
            flags: self.flags.clone(),
        };
        serde_json::to_value(j).expect("graph serialization cannot fail")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Graph> {
        let j: GraphJson = serde_json::from_value(value.clone())?;
        let mut g = Graph::new(j.n);
        for (u, v) in j.edges {
            g.add_edge(u, v)?;
        }
        for (name, members) in j.colors {
            for &v in &members {
                g.check_vertex(v)?;
            }
            g.set_color(&name, members);
        }
        for (name, v) in j.constants {
            g.set_constant(&name, v)?;
        }
        for (name, b) in j.flags {
            g.set_flag(&name, b);
        }
        Ok(g)
    }
}
