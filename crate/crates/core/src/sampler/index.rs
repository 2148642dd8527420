//! Exact counting with rank/unrank for independent sets and partial
//! colourings.
//!
//! Both indexes walk the vertices in increasing id order and memoize the
//! number of completions keyed by the *frontier*: the already-decided
//! vertices that still have an undecided neighbour. Only the frontier's
//! choices constrain the rest, so the memo stays small on sparse or narrow
//! instances and every completion count needed for unranking is available
//! once the root has been counted.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;

use crate::graph::{Graph, Subgraph, Vertex};
use crate::lists::{Colour, ListAssignment, PartialColouring, BLANK};
use crate::rng;
use crate::{Error, ENUMERATION_LIMIT};

fn checked_add(a: u64, b: u64) -> Result<u64, Error> {
    a.checked_add(b).ok_or(Error::TooLarge {
        what: "count",
        count: a as u128 + b as u128,
        limit: u64::MAX as u128,
    })
}

/// For each position `i` of `order`, the positions `j < i` whose vertex has
/// a neighbour at some position `≥ i`.
fn frontiers(graph: &Graph, order: &[Vertex]) -> Vec<Vec<usize>> {
    let mut pos = vec![usize::MAX; graph.vertex_count()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let last_neighbour: Vec<usize> = order
        .iter()
        .map(|&v| {
            graph
                .neighbours(v)
                .iter()
                .filter(|&&w| pos[w] != usize::MAX)
                .map(|&w| pos[w])
                .max()
                .unwrap_or(0)
        })
        .collect();
    (0..=order.len())
        .map(|i| (0..i).filter(|&j| last_neighbour[j] >= i).collect())
        .collect()
}

/// All independent sets of a [`Subgraph`], ordered by size and then
/// lexicographically by sorted vertex sequence. Rank 0 is always `∅`.
#[derive(Clone, Debug)]
pub struct IndependentSetIndex {
    order: Vec<Vertex>,
    graph: Graph,
    frontier: Vec<Vec<usize>>,
    memo: HashMap<(usize, Vec<bool>), Arc<Vec<u64>>>,
    histogram: Vec<u64>,
    total: u64,
}

impl IndependentSetIndex {
    pub fn new(sub: &Subgraph) -> Result<Self, Error> {
        Self::with_limit(sub, ENUMERATION_LIMIT)
    }

    pub fn for_graph(graph: &Graph) -> Result<Self, Error> {
        Self::new(&Subgraph::full(graph))
    }

    pub fn with_limit(sub: &Subgraph, limit: u128) -> Result<Self, Error> {
        let order: Vec<Vertex> = sub.vertices.iter().copied().collect();
        let frontier = frontiers(&sub.graph, &order);
        let mut index = IndependentSetIndex {
            order,
            graph: sub.graph.clone(),
            frontier,
            memo: HashMap::new(),
            histogram: Vec::new(),
            total: 0,
        };
        let root = index.completions(0, &[])?;
        index.histogram = root.to_vec();
        index.total = root.iter().try_fold(0u64, |a, &b| checked_add(a, b))?;
        if index.total as u128 > limit {
            return Err(Error::TooLarge {
                what: "independent sets",
                count: index.total as u128,
                limit,
            });
        }
        Ok(index)
    }

    /// Completion counts by size for position `i` with frontier choices
    /// `state` (aligned with `self.frontier[i]`).
    fn completions(&mut self, i: usize, state: &[bool]) -> Result<Arc<Vec<u64>>, Error> {
        if i == self.order.len() {
            return Ok(Arc::new(vec![1]));
        }
        let key = (i, state.to_vec());
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let (excluded, included) = self.successors(i, state);
        let mut poly = self.completions(i + 1, &excluded)?.to_vec();
        if let Some(included) = included {
            let with = self.completions(i + 1, &included)?;
            if poly.len() < with.len() + 1 {
                poly.resize(with.len() + 1, 0);
            }
            for (k, &c) in with.iter().enumerate() {
                poly[k + 1] = checked_add(poly[k + 1], c)?;
            }
        }
        let poly = Arc::new(poly);
        self.memo.insert(key, poly.clone());
        Ok(poly)
    }

    /// Next-frontier states after excluding / including `order[i]`; the
    /// inclusion state is `None` when an included frontier vertex is adjacent.
    fn successors(&self, i: usize, state: &[bool]) -> (Vec<bool>, Option<Vec<bool>>) {
        let v = self.order[i];
        let here = &self.frontier[i];
        let can_include = here
            .iter()
            .zip(state)
            .all(|(&j, &chosen)| !chosen || !self.graph.has_edge(self.order[j], v));
        let next = |include_v: bool| -> Vec<bool> {
            self.frontier[i + 1]
                .iter()
                .map(|&j| {
                    if j == i {
                        include_v
                    } else {
                        state[here.binary_search(&j).expect("frontier is monotone")]
                    }
                })
                .collect()
        };
        (next(false), can_include.then(|| next(true)))
    }

    fn lookup(&self, i: usize, state: &[bool]) -> &[u64] {
        if i == self.order.len() {
            return &[1];
        }
        &self.memo[&(i, state.to_vec())]
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of independent sets of each size, starting at size 0.
    pub fn size_histogram(&self) -> &[u64] {
        &self.histogram
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.order
    }

    /// The independent set of rank `rank`, as a sorted vertex list.
    pub fn unrank(&self, rank: u64) -> Result<Vec<Vertex>, Error> {
        if rank >= self.total {
            return Err(Error::InvalidParameter(format!("rank {rank} >= {}", self.total)));
        }
        let mut k = rank;
        let mut size = 0;
        while k >= self.histogram[size] {
            k -= self.histogram[size];
            size += 1;
        }
        let mut out = Vec::with_capacity(size);
        let mut state: Vec<bool> = Vec::new();
        for i in 0..self.order.len() {
            let (excluded, included) = self.successors(i, &state);
            let need = size - out.len();
            let with = match (&included, need) {
                (Some(inc), 1..) => self.lookup(i + 1, inc).get(need - 1).copied().unwrap_or(0),
                _ => 0,
            };
            if k < with {
                out.push(self.order[i]);
                state = included.unwrap();
            } else {
                k -= with;
                state = excluded;
            }
        }
        debug_assert_eq!(out.len(), size);
        Ok(out)
    }

    /// Inverse of [`unrank`](Self::unrank).
    pub fn rank(&self, set: &[Vertex]) -> Result<u64, Error> {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != set.len() {
            return Err(Error::NotIndependent("repeated vertex".into()));
        }
        let size = sorted.len();
        let mut k: u64 = self.histogram.iter().take(size).sum();
        let mut state: Vec<bool> = Vec::new();
        let mut taken = 0;
        for i in 0..self.order.len() {
            let (excluded, included) = self.successors(i, &state);
            let v = self.order[i];
            let need = size - taken;
            let with = match (&included, need) {
                (Some(inc), 1..) => self.lookup(i + 1, inc).get(need - 1).copied().unwrap_or(0),
                _ => 0,
            };
            if sorted.binary_search(&v).is_ok() {
                state = included.ok_or_else(|| Error::NotIndependent(format!("vertex {v} conflicts")))?;
                taken += 1;
            } else {
                k += with;
                state = excluded;
            }
        }
        if taken != size {
            return Err(Error::NotIndependent("set leaves the indexed vertex set".into()));
        }
        Ok(k)
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<Vertex>> + '_ {
        (0..self.total).map(|k| self.unrank(k).expect("rank in range"))
    }

    pub fn sample(&self, rng: &mut rng::Rng) -> Vec<Vertex> {
        self.unrank(rng.random_range(0..self.total)).expect("rank in range")
    }
}

/// All partial L-colourings of a graph, ordered lexicographically by the
/// colour vector with blank before every colour.
#[derive(Clone, Debug)]
pub struct ColouringIndex {
    graph: Graph,
    lists: ListAssignment,
    frontier: Vec<Vec<usize>>,
    memo: HashMap<(usize, Vec<Colour>), u64>,
    total: u64,
}

impl ColouringIndex {
    pub fn new(graph: &Graph, lists: &ListAssignment) -> Result<Self, Error> {
        Self::with_limit(graph, lists, ENUMERATION_LIMIT)
    }

    pub fn with_limit(graph: &Graph, lists: &ListAssignment, limit: u128) -> Result<Self, Error> {
        lists.check_graph(graph)?;
        let order: Vec<Vertex> = graph.vertices().collect();
        let mut index = ColouringIndex {
            graph: graph.clone(),
            lists: lists.clone(),
            frontier: frontiers(graph, &order),
            memo: HashMap::new(),
            total: 0,
        };
        index.total = index.completions(0, &[])?;
        if index.total as u128 > limit {
            return Err(Error::TooLarge {
                what: "partial colourings",
                count: index.total as u128,
                limit,
            });
        }
        Ok(index)
    }

    /// Admissible values at vertex `i` given frontier colours `state`,
    /// in order, each with its successor state.
    fn successors(&self, i: usize, state: &[Colour]) -> Vec<(Colour, Vec<Colour>)> {
        let here = &self.frontier[i];
        let used = |c: Colour| {
            here.iter()
                .zip(state)
                .any(|(&j, &col)| col == c && self.graph.has_edge(j, i))
        };
        std::iter::once(BLANK)
            .chain(self.lists.list(i).iter().copied().filter(|&c| !used(c)))
            .map(|c| {
                let next = self.frontier[i + 1]
                    .iter()
                    .map(|&j| if j == i { c } else { state[here.binary_search(&j).unwrap()] })
                    .collect();
                (c, next)
            })
            .collect()
    }

    fn completions(&mut self, i: usize, state: &[Colour]) -> Result<u64, Error> {
        if i == self.graph.vertex_count() {
            return Ok(1);
        }
        let key = (i, state.to_vec());
        if let Some(&hit) = self.memo.get(&key) {
            return Ok(hit);
        }
        let mut total = 0u64;
        for (_, next) in self.successors(i, state) {
            total = checked_add(total, self.completions(i + 1, &next)?)?;
        }
        self.memo.insert(key, total);
        Ok(total)
    }

    fn lookup(&self, i: usize, state: &[Colour]) -> u64 {
        if i == self.graph.vertex_count() {
            1
        } else {
            self.memo[&(i, state.to_vec())]
        }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn unrank(&self, rank: u64) -> Result<PartialColouring, Error> {
        if rank >= self.total {
            return Err(Error::InvalidParameter(format!("rank {rank} >= {}", self.total)));
        }
        let mut k = rank;
        let mut state = Vec::new();
        let mut out = Vec::with_capacity(self.graph.vertex_count());
        for i in self.graph.vertices() {
            for (c, next) in self.successors(i, &state) {
                let count = self.lookup(i + 1, &next);
                if k < count {
                    out.push(c);
                    state = next;
                    break;
                }
                k -= count;
            }
        }
        Ok(PartialColouring(out))
    }

    pub fn rank(&self, omega: &PartialColouring) -> Result<u64, Error> {
        omega.check(&self.graph, &self.lists)?;
        let mut k = 0;
        let mut state = Vec::new();
        for i in self.graph.vertices() {
            let mut found = false;
            for (c, next) in self.successors(i, &state) {
                if c == omega.colour(i) {
                    state = next;
                    found = true;
                    break;
                }
                k += self.lookup(i + 1, &next);
            }
            debug_assert!(found);
        }
        Ok(k)
    }

    pub fn iter(&self) -> impl Iterator<Item = PartialColouring> + '_ {
        (0..self.total).map(|k| self.unrank(k).expect("rank in range"))
    }

    /// A uniformly random partial colouring: each vertex in turn takes a
    /// value with probability proportional to its number of completions.
    pub fn sample(&self, rng: &mut rng::Rng) -> PartialColouring {
        let mut state = Vec::new();
        let mut out = Vec::with_capacity(self.graph.vertex_count());
        for i in self.graph.vertices() {
            let options = self.successors(i, &state);
            let weights: Vec<u64> = options.iter().map(|(_, next)| self.lookup(i + 1, next)).collect();
            let mut k = rng.random_range(0..weights.iter().sum::<u64>());
            for ((c, next), w) in options.into_iter().zip(weights) {
                if k < w {
                    out.push(c);
                    state = next;
                    break;
                }
                k -= w;
            }
        }
        PartialColouring(out)
    }
}

/// Every independent set of a graph with at most 64 vertices, restricted
/// to `allowed`, as bitmasks in increasing numeric order. Plain
/// backtracking; used by the sweeps and as a cross-check for the indexes.
pub fn independent_masks(adj: &[u64], allowed: u64) -> Vec<u64> {
    fn rec(adj: &[u64], candidates: u64, current: u64, out: &mut Vec<u64>) {
        out.push(current);
        let mut rest = candidates;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            rec(adj, rest & !adj[v], current | 1 << v, out);
        }
    }
    let mut out = Vec::new();
    rec(adj, allowed, 0, &mut out);
    out.sort_unstable();
    out
}

/// Adjacency bit rows of a graph with at most 64 vertices.
pub fn adjacency_masks(graph: &Graph) -> Result<Vec<u64>, Error> {
    if graph.vertex_count() > 64 {
        return Err(Error::InvalidParameter(format!(
            "bitmask enumeration supports at most 64 vertices, got {}",
            graph.vertex_count()
        )));
    }
    Ok(graph
        .vertices()
        .map(|v| graph.neighbours(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_graph, GraphKind};
    use proptest::prelude::*;

    fn k(n: usize) -> Graph {
        generate_graph(&GraphKind::Complete { n }, 0).unwrap()
    }

    #[test]
    fn independent_set_counts() {
        assert_eq!(IndependentSetIndex::for_graph(&Graph::empty(3)).unwrap().total(), 8);
        assert_eq!(IndependentSetIndex::for_graph(&k(2)).unwrap().total(), 3);
        let c5 = generate_graph(&GraphKind::Cycle { n: 5 }, 0).unwrap();
        let idx = IndependentSetIndex::for_graph(&c5).unwrap();
        assert_eq!(idx.total(), 11);
        assert_eq!(idx.size_histogram(), &[1, 5, 5]);
        assert_eq!(IndependentSetIndex::for_graph(&Graph::empty(0)).unwrap().total(), 1);
    }

    #[test]
    fn independent_set_order_is_size_then_lex() {
        let p3 = generate_graph(&GraphKind::Path { n: 3 }, 0).unwrap();
        let idx = IndependentSetIndex::for_graph(&p3).unwrap();
        let all: Vec<Vec<usize>> = idx.iter().collect();
        assert_eq!(all, vec![vec![], vec![0], vec![1], vec![2], vec![0, 2]]);
    }

    #[test]
    fn subgraph_index_uses_original_ids() {
        let c5 = generate_graph(&GraphKind::Cycle { n: 5 }, 0).unwrap();
        let sub = c5.induced(&[1, 3, 4].into_iter().collect()).unwrap();
        let idx = IndependentSetIndex::new(&sub).unwrap();
        let all: Vec<Vec<usize>> = idx.iter().collect();
        assert_eq!(all, vec![vec![], vec![1], vec![3], vec![4], vec![1, 3], vec![1, 4]]);
        assert!(idx.rank(&[0]).is_err());
        assert!(idx.rank(&[3, 4]).is_err());
    }

    #[test]
    fn colouring_counts() {
        let one = ListAssignment::new(vec![vec![1, 2]]).unwrap();
        assert_eq!(ColouringIndex::new(&Graph::empty(1), &one).unwrap().total(), 3);
        let same = ListAssignment::new(vec![vec![1], vec![1]]).unwrap();
        let idx = ColouringIndex::new(&k(2), &same).unwrap();
        assert_eq!(idx.total(), 3);
        let all: Vec<Vec<Colour>> = idx.iter().map(|w| w.0).collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        let diff = ListAssignment::new(vec![vec![1], vec![2]]).unwrap();
        assert_eq!(ColouringIndex::new(&k(2), &diff).unwrap().total(), 4);
        let empty = ListAssignment::new(vec![Vec::<Colour>::new()]).unwrap();
        assert_eq!(ColouringIndex::new(&Graph::empty(1), &empty).unwrap().total(), 1);
    }

    #[test]
    fn guards() {
        let big = Graph::empty(25);
        assert!(matches!(IndependentSetIndex::for_graph(&big), Err(Error::TooLarge { .. })));
        let lists = ListAssignment::uniform(13, &[1, 2, 3]).unwrap();
        assert!(matches!(ColouringIndex::new(&Graph::empty(13), &lists), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn mask_enumerator() {
        let c5 = generate_graph(&GraphKind::Cycle { n: 5 }, 0).unwrap();
        let adj = adjacency_masks(&c5).unwrap();
        assert_eq!(independent_masks(&adj, 0b11111).len(), 11);
        assert_eq!(independent_masks(&adj, 0b00011).len(), 3);
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (0..=max_n).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let m = pairs.len();
            proptest::collection::vec(any::<bool>(), m).prop_map(move |mask| {
                Graph::new(n, pairs.iter().zip(&mask).filter(|(_, &b)| b).map(|(&e, _)| e)).unwrap()
            })
        })
    }

    /// Brute-force partial colouring enumeration in lexicographic order.
    fn all_colourings(g: &Graph, l: &ListAssignment) -> Vec<PartialColouring> {
        let mut out = vec![vec![]];
        for v in g.vertices() {
            out = out
                .into_iter()
                .flat_map(|w: Vec<Colour>| {
                    std::iter::once(0).chain(l.list(v).iter().copied()).map(move |c| {
                        let mut w = w.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        out.into_iter()
            .map(PartialColouring)
            .filter(|w| w.is_partial_colouring(g, l))
            .collect()
    }

    proptest! {
        #[test]
        fn independent_index_round_trips_and_matches_brute_force(g in arb_graph(10)) {
            let idx = IndependentSetIndex::for_graph(&g).unwrap();
            let adj = adjacency_masks(&g).unwrap();
            let masks = independent_masks(&adj, (1u64 << g.vertex_count()) - 1);
            prop_assert_eq!(idx.total(), masks.len() as u64);
            let mut prev: Option<Vec<usize>> = None;
            for r in 0..idx.total() {
                let s = idx.unrank(r).unwrap();
                prop_assert_eq!(idx.rank(&s).unwrap(), r);
                if let Some(p) = prev {
                    prop_assert!((p.len(), &p) < (s.len(), &s));
                }
                prev = Some(s);
            }
        }

        #[test]
        fn colouring_index_round_trips_and_matches_brute_force(
            g in arb_graph(5),
            lists in proptest::collection::vec(proptest::collection::btree_set(1u32..4, 0..3), 5)
        ) {
            let l = ListAssignment::new(lists.into_iter().take(g.vertex_count())).unwrap();
            let idx = ColouringIndex::new(&g, &l).unwrap();
            let brute = all_colourings(&g, &l);
            prop_assert_eq!(idx.total(), brute.len() as u64);
            for (r, w) in brute.iter().enumerate() {
                prop_assert_eq!(&idx.unrank(r as u64).unwrap(), w);
                prop_assert_eq!(idx.rank(w).unwrap(), r as u64);
            }
        }
    }
}
