//! Undirected simple graphs and the elementary traversals every metric and
//! rewiring method is built on.
//!
//! Nodes are the indices `0..n`. Edge and node weights default to `1.0` and
//! are stored sparsely, so unit-weight graphs (every dataset graph) carry no
//! weight maps at all.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An unordered node pair, stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[usize; 2]", try_from = "[usize; 2]")]
pub struct Edge {
    u: usize,
    v: usize,
}

impl Edge {
    /// Normalizes the endpoint order. Self-loops are rejected.
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::Input(format!("self-loop on node {a}")));
        }
        Ok(Self {
            u: a.min(b),
            v: a.max(b),
        })
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.u, self.v)
    }
}

impl From<Edge> for [usize; 2] {
    fn from(e: Edge) -> Self {
        [e.u, e.v]
    }
}

impl TryFrom<[usize; 2]> for Edge {
    type Error = Error;

    fn try_from(p: [usize; 2]) -> Result<Self> {
        Edge::new(p[0], p[1])
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.u, self.v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
    edge_count: usize,
    edge_weight: BTreeMap<Edge, f64>,
    node_weight: BTreeMap<usize, f64>,
}

impl Graph {
    /// Edgeless graph on `n` nodes.
    pub fn new(n: usize) -> Self {
        Self {
            adj: vec![BTreeSet::new(); n],
            edge_count: 0,
            edge_weight: BTreeMap::new(),
            node_weight: BTreeMap::new(),
        }
    }

    /// Builds a graph from node pairs. Repeated pairs (in either orientation)
    /// collapse into one edge; self-loops and out-of-range endpoints are errors.
    pub fn from_edges<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::new(n);
        for (a, b) in pairs {
            let e = Edge::new(a, b)?;
            g.check_node(e.v)?;
            g.insert(e);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert(Edge { u, v });
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 1..n {
            g.insert(Edge { u: u - 1, v: u });
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::path(n);
        if n >= 3 {
            g.insert(Edge { u: 0, v: n - 1 });
        }
        g
    }

    /// Star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let mut g = Self::new(leaves + 1);
        for v in 1..=leaves {
            g.insert(Edge { u: 0, v });
        }
        g
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(BTreeSet::len).collect()
    }

    /// Neighbours of `u` in ascending order.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].iter().copied()
    }

    pub fn neighbor_set(&self, u: usize) -> &BTreeSet<usize> {
        &self.adj[u]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && a < self.adj.len() && self.adj[a].contains(&b)
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.range(u + 1..).map(move |&v| Edge { u, v })
        })
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges().collect()
    }

    /// Node pairs that are not edges, in lexicographic order.
    pub fn non_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let n = self.node_count();
        (0..n).flat_map(move |u| {
            (u + 1..n)
                .filter(move |v| !self.adj[u].contains(v))
                .map(move |v| Edge { u, v })
        })
    }

    pub fn is_complete(&self) -> bool {
        let n = self.node_count();
        self.edge_count == n * n.saturating_sub(1) / 2
    }

    pub fn edge_weight(&self, e: Edge) -> f64 {
        self.edge_weight.get(&e).copied().unwrap_or(1.0)
    }

    pub fn node_weight(&self, u: usize) -> f64 {
        self.node_weight.get(&u).copied().unwrap_or(1.0)
    }

    pub fn set_edge_weight(&mut self, e: Edge, w: f64) -> Result<()> {
        if !self.has_edge(e.u, e.v) {
            return Err(Error::Input(format!("edge {e} not in graph")));
        }
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::Input(format!("edge weight must be positive, got {w}")));
        }
        self.edge_weight.insert(e, w);
        Ok(())
    }

    pub fn set_node_weight(&mut self, u: usize, w: f64) -> Result<()> {
        self.check_node(u)?;
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::Input(format!("node weight must be positive, got {w}")));
        }
        self.node_weight.insert(u, w);
        Ok(())
    }

    pub fn is_unit_weighted(&self) -> bool {
        self.edge_weight.values().all(|&w| w == 1.0) && self.node_weight.values().all(|&w| w == 1.0)
    }

    fn check_node(&self, u: usize) -> Result<()> {
        if u >= self.node_count() {
            return Err(Error::Input(format!(
                "node {u} out of range for graph with {} nodes",
                self.node_count()
            )));
        }
        Ok(())
    }

    /// Returns `false` if the edge was already present.
    pub(crate) fn insert(&mut self, e: Edge) -> bool {
        if self.adj[e.u].insert(e.v) {
            self.adj[e.v].insert(e.u);
            self.edge_count += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn remove(&mut self, e: Edge) -> bool {
        if self.adj[e.u].remove(&e.v) {
            self.adj[e.v].remove(&e.u);
            self.edge_count -= 1;
            self.edge_weight.remove(&e);
            true
        } else {
            false
        }
    }

    /// Dense 0/1 adjacency matrix, row-major.
    pub fn adjacency_rows(&self) -> Vec<Vec<f64>> {
        let n = self.node_count();
        let mut a = vec![vec![0.0; n]; n];
        for e in self.edges() {
            a[e.u][e.v] = 1.0;
            a[e.v][e.u] = 1.0;
        }
        a
    }
}

/// Hop distances from one source. `None` marks nodes in other components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceField {
    pub source: usize,
    pub dist: Vec<Option<usize>>,
}

impl DistanceField {
    pub fn get(&self, v: usize) -> Option<usize> {
        self.dist[v]
    }
}

pub fn bfs_distances(g: &Graph, source: usize) -> Result<DistanceField> {
    g.check_node(source)?;
    Ok(DistanceField {
        source,
        dist: bfs_unchecked(g, source),
    })
}

pub(crate) fn bfs_unchecked(g: &Graph, source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.node_count()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap_or(0);
        for v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// All-pairs hop distances by repeated BFS.
pub fn all_pairs_distances(g: &Graph) -> Vec<Vec<Option<usize>>> {
    (0..g.node_count()).map(|s| bfs_unchecked(g, s)).collect()
}

/// Connected components, each sorted, ordered by smallest member.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut blocks = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut block = Vec::new();
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            block.push(u);
            for v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        block.sort_unstable();
        blocks.push(block);
    }
    blocks
}

/// Component id per node, numbered in the order of [`connected_components`].
pub fn component_labels(g: &Graph) -> Vec<usize> {
    let mut label = vec![0; g.node_count()];
    for (c, block) in connected_components(g).iter().enumerate() {
        for &v in block {
            label[v] = c;
        }
    }
    label
}

pub fn is_connected(g: &Graph) -> bool {
    g.node_count() <= 1 || bfs_unchecked(g, 0).iter().all(Option::is_some)
}

/// Applies removals then additions, strictly: removing a missing edge or
/// adding an edge that survives the removals is an [`Error::Edit`].
pub fn apply_edits(g: &Graph, additions: &[Edge], removals: &[Edge]) -> Result<Graph> {
    let mut out = g.clone();
    for &e in removals {
        if e.v >= out.node_count() || !out.remove(e) {
            return Err(Error::Edit(format!("cannot remove {e}: not an edge")));
        }
    }
    for &e in additions {
        if e.v >= out.node_count() {
            return Err(Error::Edit(format!("cannot add {e}: node out of range")));
        }
        if !out.insert(e) {
            return Err(Error::Edit(format!("cannot add {e}: already an edge")));
        }
    }
    Ok(out)
}
