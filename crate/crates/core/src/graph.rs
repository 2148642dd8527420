//! Simple undirected graphs over dense vertex ids `0..n`.
//!
//! Adjacency is kept twice: as sorted neighbour lists for iteration and as
//! per-vertex bit rows for constant-time adjacency tests, which the
//! enumeration oracles hit constantly.

use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng::substream;
use crate::Error;

pub type Vertex = usize;
pub type VertexSet = BTreeSet<Vertex>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<Vertex>>,
    rows: Vec<Vec<u64>>,
    edge_count: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Canonical JSON form: `{"n": .., "edges": [[u, v], ..]}` with `u < v`
/// and the edge list sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[Vertex; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.n,
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(json: GraphJson) -> Result<Self, Error> {
        Graph::new(json.n, json.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let json = GraphJson::deserialize(d)?;
        Graph::try_from(json).map_err(serde::de::Error::custom)
    }
}

impl Graph {
    /// Builds a simple graph, deduplicating edges given in either
    /// orientation. Self-loops and out-of-range endpoints are rejected.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let words = n.div_ceil(64);
        let mut rows = vec![vec![0u64; words]; n];
        let mut adj = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: u.max(v),
                    n,
                });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if rows[u][v / 64] >> (v % 64) & 1 == 1 {
                continue;
            }
            rows[u][v / 64] |= 1 << (v % 64);
            rows[v][u / 64] |= 1 << (u % 64);
            adj[u].push(v);
            adj[v].push(u);
            edge_count += 1;
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            adj,
            rows,
            edge_count,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph::new(n, std::iter::empty()).expect("edgeless graph is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn neighbours(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && v < self.n && self.rows[u][v / 64] >> (v % 64) & 1 == 1
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), Error> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    fn check_set<'a, I: IntoIterator<Item = &'a Vertex>>(&self, set: I) -> Result<(), Error> {
        set.into_iter().try_for_each(|&v| self.check_vertex(v))
    }

    /// `N(A)` when `closed` is false, `N[A] = N(A) ∪ A` otherwise.
    pub fn neighbourhood(&self, set: &VertexSet, closed: bool) -> Result<VertexSet, Error> {
        self.check_set(set)?;
        let mut out: VertexSet = set
            .iter()
            .flat_map(|&v| self.adj[v].iter().copied())
            .collect();
        if closed {
            out.extend(set.iter().copied());
        }
        Ok(out)
    }

    /// `E[A, B]`: the edges with one endpoint in `a` and the other in `b`,
    /// normalized to `(min, max)`.
    pub fn edges_between(&self, a: &VertexSet, b: &VertexSet) -> Result<BTreeSet<(Vertex, Vertex)>, Error> {
        self.check_set(a)?;
        self.check_set(b)?;
        let mut out = BTreeSet::new();
        for &u in a {
            for &v in &self.adj[u] {
                if b.contains(&v) {
                    out.insert((u.min(v), u.max(v)));
                }
            }
        }
        Ok(out)
    }

    /// The subgraph induced by `keep`, with original vertex ids.
    pub fn induced(&self, keep: &VertexSet) -> Result<Subgraph, Error> {
        self.check_set(keep)?;
        let edges = self
            .edges()
            .filter(|(u, v)| keep.contains(u) && keep.contains(v));
        Ok(Subgraph {
            graph: Graph::new(self.n, edges)?,
            vertices: keep.clone(),
        })
    }

    /// `G − A`.
    pub fn without(&self, removed: &VertexSet) -> Result<Subgraph, Error> {
        self.check_set(removed)?;
        let keep = self.vertices().filter(|v| !removed.contains(v)).collect();
        self.induced(&keep)
    }

    pub fn bfs_distances(&self, source: Vertex) -> Result<Vec<Option<usize>>, Error> {
        self.check_vertex(source)?;
        let mut dist = vec![None; self.n];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &w in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// Shortest-path length, or `None` when `v` is unreachable from `u`.
    pub fn distance(&self, u: Vertex, v: Vertex) -> Result<Option<usize>, Error> {
        self.check_vertex(v)?;
        Ok(self.bfs_distances(u)?[v])
    }

    /// All vertices within distance `radius` of `center`.
    pub fn ball(&self, center: Vertex, radius: usize) -> Result<VertexSet, Error> {
        Ok(self
            .bfs_distances(center)?
            .into_iter()
            .enumerate()
            .filter_map(|(v, d)| d.filter(|&d| d <= radius).map(|_| v))
            .collect())
    }

    /// An `r`-clique if one exists, searching lowest ids first.
    pub fn find_clique(&self, r: usize) -> Option<Vec<Vertex>> {
        self.find_clique_within(r, &self.vertices().collect())
    }

    pub fn contains_clique(&self, r: usize) -> bool {
        self.find_clique(r).is_some()
    }

    /// Clique search restricted to the subgraph induced by `within`.
    /// Vertices whose degree inside `within` is below `r − 1` are pruned
    /// before branching.
    pub fn find_clique_within(&self, r: usize, within: &VertexSet) -> Option<Vec<Vertex>> {
        if r == 0 {
            return Some(Vec::new());
        }
        let candidates: Vec<Vertex> = within
            .iter()
            .copied()
            .filter(|&v| v < self.n)
            .filter(|&v| self.adj[v].iter().filter(|w| within.contains(w)).count() + 1 >= r)
            .collect();
        let mut clique = Vec::with_capacity(r);
        if self.extend_clique(r, &candidates, &mut clique) {
            Some(clique)
        } else {
            None
        }
    }

    fn extend_clique(&self, r: usize, candidates: &[Vertex], clique: &mut Vec<Vertex>) -> bool {
        if clique.len() == r {
            return true;
        }
        let needed = r - clique.len();
        for (idx, &v) in candidates.iter().enumerate() {
            if candidates.len() - idx < needed {
                return false;
            }
            let next: Vec<Vertex> = candidates[idx + 1..]
                .iter()
                .copied()
                .filter(|&w| self.has_edge(v, w))
                .collect();
            if next.len() + 1 < needed {
                continue;
            }
            clique.push(v);
            if self.extend_clique(r, &next, clique) {
                return true;
            }
            clique.pop();
        }
        false
    }
}

/// An induced subgraph that keeps the parent's vertex ids. `graph` has the
/// parent's vertex count but only the edges among `vertices`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: Graph,
    pub vertices: VertexSet,
}

impl Subgraph {
    pub fn full(graph: &Graph) -> Self {
        Subgraph {
            graph: graph.clone(),
            vertices: graph.vertices().collect(),
        }
    }

    pub fn degree(&self, v: Vertex) -> usize {
        if self.vertices.contains(&v) {
            self.graph.degree(v)
        } else {
            0
        }
    }

    pub fn neighbours(&self, v: Vertex) -> &[Vertex] {
        if self.vertices.contains(&v) {
            self.graph.neighbours(v)
        } else {
            &[]
        }
    }

    pub fn contains_clique(&self, r: usize) -> Option<Vec<Vertex>> {
        self.graph.find_clique_within(r, &self.vertices)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum GraphKind {
    Complete { n: usize },
    Cycle { n: usize },
    Path { n: usize },
    /// Erdős–Rényi `G(n, p)`.
    RandomEdgeDensity { n: usize, p: f64 },
    /// Candidate edges of `G(n, p)` offered in random order, each kept only
    /// when it closes no triangle.
    RandomTriangleFree { n: usize, p: f64 },
}

/// Deterministic given `(kind, seed)`.
pub fn generate_graph(kind: &GraphKind, seed: u64) -> Result<Graph, Error> {
    let mut rng = substream(seed, 0);
    match *kind {
        GraphKind::Complete { n } => {
            Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
        }
        GraphKind::Cycle { n } => {
            if n == 1 || n == 2 {
                return Err(Error::InvalidParameter(format!(
                    "a simple cycle needs 0 or at least 3 vertices, got {n}"
                )));
            }
            Graph::new(n, (0..n).map(|v| (v, (v + 1) % n)))
        }
        GraphKind::Path { n } => Graph::new(n, (1..n).map(|v| (v - 1, v))),
        GraphKind::RandomEdgeDensity { n, p } => {
            check_density(p)?;
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.random::<f64>() < p)
                .collect();
            Graph::new(n, edges)
        }
        GraphKind::RandomTriangleFree { n, p } => {
            check_density(p)?;
            let mut candidates: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.random::<f64>() < p)
                .collect();
            candidates.shuffle(&mut rng);
            let mut nbrs = vec![VertexSet::new(); n];
            let mut kept = Vec::new();
            for (u, v) in candidates {
                if nbrs[u].intersection(&nbrs[v]).next().is_none() {
                    nbrs[u].insert(v);
                    nbrs[v].insert(u);
                    kept.push((u, v));
                }
            }
            let g = Graph::new(n, kept)?;
            if let Some(t) = g.find_clique(3) {
                return Err(Error::InvariantViolated(format!(
                    "triangle-free generator produced triangle {t:?}"
                )));
            }
            Ok(g)
        }
    }
}

fn check_density(p: f64) -> Result<(), Error> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("edge density {p} not in [0, 1]")))
    }
}

/// The Petersen graph: outer 5-cycle `0..5`, inner pentagram `5..10`.
pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::new(10, outer.chain(spokes).chain(inner)).unwrap()
}
