//! List assignments and partial list colourings.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, Vertex, VertexSet};
use crate::Error;

/// A colour id. Positive ids are colours, [`BLANK`] means uncoloured.
pub type Colour = u32;

pub const BLANK: Colour = 0;

/// Per-vertex lists of positive colours, each stored sorted and
/// deduplicated. Colour ids need not be contiguous and lists may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ListsJson", into = "ListsJson")]
pub struct ListAssignment {
    lists: Vec<Vec<Colour>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ListsJson {
    pub lists: Vec<Vec<Colour>>,
}

impl TryFrom<ListsJson> for ListAssignment {
    type Error = Error;
    fn try_from(json: ListsJson) -> Result<Self, Error> {
        ListAssignment::new(json.lists)
    }
}

impl From<ListAssignment> for ListsJson {
    fn from(l: ListAssignment) -> Self {
        ListsJson { lists: l.lists }
    }
}

impl ListAssignment {
    pub fn new<I, C>(lists: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = C>,
        C: IntoIterator<Item = Colour>,
    {
        let lists = lists
            .into_iter()
            .enumerate()
            .map(|(v, list)| {
                let set: BTreeSet<Colour> = list.into_iter().collect();
                if set.contains(&BLANK) {
                    Err(Error::BlankInList(v))
                } else {
                    Ok(set.into_iter().collect())
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(ListAssignment { lists })
    }

    /// Every vertex gets the same list.
    pub fn uniform(n: usize, list: &[Colour]) -> Result<Self, Error> {
        ListAssignment::new(vec![list.to_vec(); n])
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn list(&self, v: Vertex) -> &[Colour] {
        &self.lists[v]
    }

    pub fn lists(&self) -> &[Vec<Colour>] {
        &self.lists
    }

    pub fn contains(&self, v: Vertex, c: Colour) -> bool {
        self.lists[v].binary_search(&c).is_ok()
    }

    /// True when every list has exactly `k` colours.
    pub fn is_k_assignment(&self, k: usize) -> bool {
        self.lists.iter().all(|l| l.len() == k)
    }

    pub fn min_list_size(&self) -> usize {
        self.lists.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_list_size(&self) -> usize {
        self.lists.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Total number of (vertex, colour) entries.
    pub fn entry_count(&self) -> usize {
        self.lists.iter().map(Vec::len).sum()
    }

    pub fn palette(&self) -> BTreeSet<Colour> {
        self.lists.iter().flatten().copied().collect()
    }

    pub fn check_graph(&self, g: &Graph) -> Result<(), Error> {
        if self.len() == g.vertex_count() {
            Ok(())
        } else {
            Err(Error::SizeMismatch {
                expected: g.vertex_count(),
                got: self.len(),
            })
        }
    }

    /// `N_L^c(u)`: the neighbours of `u` with `c` in their list.
    pub fn availability(&self, g: &Graph, u: Vertex, c: Colour) -> Result<Vec<Vertex>, Error> {
        self.check_graph(g)?;
        g.check_vertex(u)?;
        if c == BLANK {
            return Err(Error::BlankColour);
        }
        Ok(g.neighbours(u)
            .iter()
            .copied()
            .filter(|&v| self.contains(v, c))
            .collect())
    }

    fn availability_count(&self, g: &Graph, u: Vertex, c: Colour) -> usize {
        g.neighbours(u).iter().filter(|&&v| self.contains(v, c)).count()
    }

    /// Searches for a colour whose availability class induces `K_r`.
    /// `None` means the assignment is `K_r`-free.
    pub fn find_monochromatic_clique(&self, g: &Graph, r: usize) -> Result<Option<(Colour, Vec<Vertex>)>, Error> {
        self.check_graph(g)?;
        for c in self.palette() {
            let class: VertexSet = g.vertices().filter(|&v| self.contains(v, c)).collect();
            if let Some(clique) = g.find_clique_within(r, &class) {
                return Ok(Some((c, clique)));
            }
        }
        Ok(None)
    }

    pub fn is_clique_free(&self, g: &Graph, r: usize) -> Result<bool, Error> {
        if r < 3 {
            return Err(Error::InvalidParameter(format!("clique order {r} < 3")));
        }
        Ok(self.find_monochromatic_clique(g, r)?.is_none())
    }

    /// `L^ω`: for uncoloured `u`, `L(u)` minus the colours used on its
    /// neighbours; empty for coloured `u`.
    pub fn residual(&self, g: &Graph, omega: &PartialColouring) -> Result<ListAssignment, Error> {
        omega.check(g, self)?;
        Ok(self.residual_of(g, omega))
    }

    /// The same residual rule for an `ω` drawn from other lists, as in
    /// `(L − L')^{ω'}` with `ω'` a partial `L'`-colouring. Only the length
    /// of `ω` must match.
    pub fn residual_of(&self, g: &Graph, omega: &PartialColouring) -> ListAssignment {
        debug_assert_eq!(omega.len(), g.vertex_count());
        let lists = g
            .vertices()
            .map(|u| {
                if omega.colour(u) != BLANK {
                    return Vec::new();
                }
                self.lists[u]
                    .iter()
                    .copied()
                    .filter(|&c| g.neighbours(u).iter().all(|&v| omega.colour(v) != c))
                    .collect()
            })
            .collect();
        ListAssignment { lists }
    }

    /// Whether `self(v) ⊆ parent(v)` for every vertex.
    pub fn is_subassignment_of(&self, parent: &ListAssignment) -> Result<(), Error> {
        if self.len() != parent.len() {
            return Err(Error::SizeMismatch {
                expected: parent.len(),
                got: self.len(),
            });
        }
        match (0..self.len()).find(|&v| self.lists[v].iter().any(|&c| !parent.contains(v, c))) {
            Some(v) => Err(Error::NotSubassignment(v)),
            None => Ok(()),
        }
    }

    /// `L − L'` for a subassignment `sub ⊆ self`.
    pub fn minus(&self, sub: &ListAssignment) -> Result<ListAssignment, Error> {
        sub.is_subassignment_of(self)?;
        let lists = self
            .lists
            .iter()
            .zip(&sub.lists)
            .map(|(l, s)| l.iter().copied().filter(|c| s.binary_search(c).is_err()).collect())
            .collect();
        Ok(ListAssignment { lists })
    }

    /// Restrict each list to the vertices of `keep`; other lists become empty.
    pub fn restricted_to(&self, keep: &VertexSet) -> ListAssignment {
        let lists = (0..self.len())
            .map(|v| if keep.contains(&v) { self.lists[v].clone() } else { Vec::new() })
            .collect();
        ListAssignment { lists }
    }

    /// Checks the finishing condition: `|L(u)| ≥ l` and
    /// `|N_L^c(u)| ≤ l/(2e)` for all `u` and `c ∈ L(u)`.
    ///
    /// The availability side is evaluated as `|N_L^c(u)| · 2e ≤ l` in `f64`;
    /// only a strict excess counts as a violation.
    pub fn reed_condition(&self, g: &Graph, l: f64) -> Result<Option<ReedViolation>, Error> {
        self.check_graph(g)?;
        if !(l > 0.0) {
            return Err(Error::InvalidParameter(format!("l = {l} must be positive")));
        }
        for u in g.vertices() {
            let size = self.lists[u].len();
            if (size as f64) < l {
                return Ok(Some(ReedViolation::ListTooShort { vertex: u, size }));
            }
            for &c in &self.lists[u] {
                let a = self.availability_count(g, u, c);
                if a as f64 * 2.0 * std::f64::consts::E > l {
                    return Ok(Some(ReedViolation::AvailabilityTooHigh {
                        vertex: u,
                        colour: c,
                        availability: a,
                    }));
                }
            }
        }
        Ok(None)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ReedViolation {
    ListTooShort { vertex: Vertex, size: usize },
    AvailabilityTooHigh { vertex: Vertex, colour: Colour, availability: usize },
}

/// `ω`: a colour or [`BLANK`] per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PartialColouring(pub Vec<Colour>);

impl PartialColouring {
    pub fn blank(n: usize) -> Self {
        PartialColouring(vec![BLANK; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn colour(&self, v: Vertex) -> Colour {
        self.0[v]
    }

    pub fn colours(&self) -> &[Colour] {
        &self.0
    }

    /// Checks list membership and properness, describing the first failure.
    pub fn check(&self, g: &Graph, lists: &ListAssignment) -> Result<(), Error> {
        lists.check_graph(g)?;
        if self.len() != g.vertex_count() {
            return Err(Error::SizeMismatch {
                expected: g.vertex_count(),
                got: self.len(),
            });
        }
        for v in g.vertices() {
            let c = self.0[v];
            if c != BLANK && !lists.contains(v, c) {
                return Err(Error::NotPartialColouring(format!(
                    "vertex {v} has colour {c} outside its list"
                )));
            }
        }
        if let Some((u, v)) = g.edges().find(|&(u, v)| self.0[u] != BLANK && self.0[u] == self.0[v]) {
            return Err(Error::NotPartialColouring(format!(
                "edge ({u}, {v}) is monochromatic in colour {}",
                self.0[u]
            )));
        }
        Ok(())
    }

    pub fn is_partial_colouring(&self, g: &Graph, lists: &ListAssignment) -> bool {
        self.check(g, lists).is_ok()
    }

    /// A proper colouring with no blank vertex.
    pub fn is_full_colouring(&self, g: &Graph, lists: &ListAssignment) -> bool {
        self.is_partial_colouring(g, lists) && self.0.iter().all(|&c| c != BLANK)
    }

    /// `O_ω`.
    pub fn uncoloured(&self) -> VertexSet {
        (0..self.len()).filter(|&v| self.0[v] == BLANK).collect()
    }

    /// `O_ω(u) = O_ω ∩ N(u)`.
    pub fn uncoloured_neighbours(&self, g: &Graph, u: Vertex) -> VertexSet {
        g.neighbours(u)
            .iter()
            .copied()
            .filter(|&v| self.0[v] == BLANK)
            .collect()
    }

    /// `ω|_{L'}`: keeps `ω(u)` only where it lies in `L'(u)`.
    pub fn narrowed(&self, sub: &ListAssignment) -> Result<PartialColouring, Error> {
        if sub.len() != self.len() {
            return Err(Error::SizeMismatch {
                expected: self.len(),
                got: sub.len(),
            });
        }
        Ok(PartialColouring(
            self.0
                .iter()
                .enumerate()
                .map(|(v, &c)| if c != BLANK && sub.contains(v, c) { c } else { BLANK })
                .collect(),
        ))
    }
}

/// `(L − L', ω|_{L'})` in one call.
pub fn subassignment_ops(
    lists: &ListAssignment,
    sub: &ListAssignment,
    omega: &PartialColouring,
) -> Result<(ListAssignment, PartialColouring), Error> {
    let rest = lists.minus(sub)?;
    Ok((rest, omega.narrowed(sub)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_graph, GraphKind};
    use proptest::prelude::*;

    fn la(lists: &[&[Colour]]) -> ListAssignment {
        ListAssignment::new(lists.iter().map(|l| l.to_vec())).unwrap()
    }

    fn k(n: usize) -> Graph {
        generate_graph(&GraphKind::Complete { n }, 0).unwrap()
    }

    fn path(n: usize) -> Graph {
        generate_graph(&GraphKind::Path { n }, 0).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        Graph::new(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }

    #[test]
    fn rejects_blank_in_lists() {
        assert_eq!(ListAssignment::new(vec![vec![1], vec![0, 2]]), Err(Error::BlankInList(1)));
    }

    #[test]
    fn availability_examples() {
        let s = star(3);
        let l = ListAssignment::uniform(4, &[1]).unwrap();
        assert_eq!(l.availability(&s, 0, 1).unwrap(), vec![1, 2, 3]);
        assert!(l.availability(&s, 0, 2).unwrap().is_empty());
        assert_eq!(l.availability(&s, 0, 0), Err(Error::BlankColour));
        let p = path(3);
        let l = la(&[&[1, 2], &[2], &[2]]);
        assert_eq!(l.availability(&p, 1, 2).unwrap(), vec![0, 2]);
    }

    #[test]
    fn clique_free_examples() {
        let k3 = k(3);
        assert!(la(&[&[1], &[2], &[3]]).is_clique_free(&k3, 3).unwrap());
        let mono = ListAssignment::uniform(3, &[1]).unwrap();
        assert_eq!(mono.find_monochromatic_clique(&k3, 3).unwrap(), Some((1, vec![0, 1, 2])));
        assert!(!ListAssignment::uniform(4, &[1]).unwrap().is_clique_free(&k(4), 4).unwrap());
        assert!(mono.is_clique_free(&k3, 2).is_err());
    }

    #[test]
    fn partial_colouring_examples() {
        let k2 = k(2);
        let l = la(&[&[1], &[1]]);
        assert!(PartialColouring::blank(2).is_partial_colouring(&k2, &l));
        assert!(!PartialColouring(vec![1, 1]).is_partial_colouring(&k2, &l));
        let w = PartialColouring(vec![1, 0]);
        assert!(w.is_partial_colouring(&k2, &l));
        assert_eq!(w.uncoloured(), [1].into_iter().collect());
        assert_eq!(w.uncoloured_neighbours(&k2, 0), [1].into_iter().collect());
        assert!(!PartialColouring(vec![2, 0]).is_partial_colouring(&k2, &l));
    }

    #[test]
    fn residual_examples() {
        let k2 = k(2);
        let l = la(&[&[1, 2], &[1, 2]]);
        assert_eq!(l.residual(&k2, &PartialColouring::blank(2)).unwrap(), l);
        assert_eq!(l.residual(&k2, &PartialColouring(vec![1, 0])).unwrap(), la(&[&[], &[2]]));
        let iso = Graph::empty(1);
        let l1 = la(&[&[3, 5]]);
        assert_eq!(l1.residual(&iso, &PartialColouring::blank(1)).unwrap(), l1);
        assert!(l.residual(&k2, &PartialColouring(vec![1, 1])).is_err());
    }

    #[test]
    fn subassignment_examples() {
        let l = la(&[&[1, 2], &[3]]);
        let w = PartialColouring(vec![1, 3]);
        let (rest, narrowed) = subassignment_ops(&l, &l, &w).unwrap();
        assert_eq!(rest, la(&[&[], &[]]));
        assert_eq!(narrowed, w);
        let (rest, narrowed) = subassignment_ops(&l, &la(&[&[], &[]]), &w).unwrap();
        assert_eq!(rest, l);
        assert_eq!(narrowed, PartialColouring::blank(2));
        let (rest, narrowed) = subassignment_ops(&l, &la(&[&[2], &[3]]), &w).unwrap();
        assert_eq!(rest, la(&[&[1], &[]]));
        assert_eq!(narrowed, PartialColouring(vec![0, 3]));
        assert_eq!(l.minus(&la(&[&[4], &[]])), Err(Error::NotSubassignment(0)));
    }

    #[test]
    fn reed_condition_examples() {
        // availability 1 everywhere: a perfect matching with disjoint-ish lists
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let l = la(&[&[1, 2, 3, 4, 5, 6], &[1, 7, 8, 9, 10, 11]]);
        assert_eq!(l.reed_condition(&g, 6.0).unwrap(), None);
        let short = la(&[&[1, 2, 3, 4, 5], &[1, 2, 3, 4, 5, 6]]);
        assert_eq!(
            short.reed_condition(&g, 6.0).unwrap(),
            Some(ReedViolation::ListTooShort { vertex: 0, size: 5 })
        );
        let s = star(10);
        let l = ListAssignment::uniform(11, &[1]).unwrap();
        assert_eq!(
            l.reed_condition(&s, 1.0).unwrap(),
            Some(ReedViolation::AvailabilityTooHigh { vertex: 0, colour: 1, availability: 10 })
        );
        // equality on the availability side passes
        assert_eq!(la(&[&[1, 2, 3, 4, 5, 6], &[1, 7, 8, 9, 10, 11]]).reed_condition(&g, 2.0 * std::f64::consts::E).unwrap(), None);
    }

    fn arb_instance() -> impl Strategy<Value = (Graph, ListAssignment, Vec<u8>)> {
        (1usize..6).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let m = pairs.len();
            (
                proptest::collection::vec(any::<bool>(), m),
                proptest::collection::vec(proptest::collection::btree_set(1u32..5, 0..4), n),
                proptest::collection::vec(any::<u8>(), n),
            )
                .prop_map(move |(mask, lists, picks)| {
                    let edges = pairs.iter().zip(&mask).filter(|(_, &b)| b).map(|(&e, _)| e);
                    (Graph::new(n, edges).unwrap(), ListAssignment::new(lists).unwrap(), picks)
                })
        })
    }

    /// Greedy partial colouring driven by `picks`: vertex v tries the colour
    /// indexed by its pick (0 = blank) and stays blank on conflict.
    fn colouring_from(g: &Graph, l: &ListAssignment, picks: &[u8]) -> PartialColouring {
        let mut w = vec![BLANK; g.vertex_count()];
        for v in g.vertices() {
            let list = l.list(v);
            let p = picks[v] as usize % (list.len() + 1);
            if p > 0 {
                let c = list[p - 1];
                if g.neighbours(v).iter().all(|&u| w[u] != c) {
                    w[v] = c;
                }
            }
        }
        PartialColouring(w)
    }

    proptest! {
        #[test]
        fn residuals_shrink_when_colouring_grows((g, l, picks) in arb_instance()) {
            let w = colouring_from(&g, &l, &picks);
            prop_assert!(w.is_partial_colouring(&g, &l));
            let full = l.residual(&g, &w).unwrap();
            // blank out the highest coloured vertex: a sub-colouring
            let mut smaller = w.clone();
            if let Some(v) = (0..smaller.len()).rev().find(|&v| smaller.0[v] != BLANK) {
                smaller.0[v] = BLANK;
            }
            let partial = l.residual(&g, &smaller).unwrap();
            for v in g.vertices() {
                prop_assert!(full.list(v).iter().all(|c| partial.contains(v, *c)));
            }
            prop_assert_eq!(l.residual(&g, &PartialColouring::blank(g.vertex_count())).unwrap(), l.clone());
        }

        #[test]
        fn narrowing_gives_partial_sub_colouring((g, l, picks) in arb_instance(), keep in proptest::collection::vec(any::<bool>(), 24)) {
            let w = colouring_from(&g, &l, &picks);
            let mut bits = keep.into_iter().cycle();
            let sub = ListAssignment::new(l.lists().iter().map(|list| {
                list.iter().copied().filter(|_| bits.next().unwrap()).collect::<Vec<_>>()
            }).collect::<Vec<_>>()).unwrap();
            let narrowed = w.narrowed(&sub).unwrap();
            prop_assert!(narrowed.is_partial_colouring(&g, &sub));
        }

        #[test]
        fn clique_freeness_survives_shrinking((g, l, picks) in arb_instance(), r in 3usize..5) {
            if l.is_clique_free(&g, r).unwrap() {
                let shrunk = ListAssignment::new(l.lists().iter().zip(&picks).map(|(list, p)| {
                    list.iter().copied().skip(*p as usize % 2).collect::<Vec<_>>()
                }).collect::<Vec<_>>()).unwrap();
                prop_assert!(shrunk.is_clique_free(&g, r).unwrap());
            }
        }

        #[test]
        fn reed_condition_monotone_in_list_side((g, l, _p) in arb_instance(), lo in 0.5f64..3.0, d in 0.0f64..3.0) {
            // a list-size failure at l persists at any larger l
            if let Some(ReedViolation::ListTooShort { .. }) = l.reed_condition(&g, lo).unwrap() {
                prop_assert!(l.reed_condition(&g, lo + d).unwrap().is_some());
            }
            // an availability failure at a larger l persists at smaller l
            if let Some(ReedViolation::AvailabilityTooHigh { .. }) = l.reed_condition(&g, lo + d).unwrap() {
                prop_assert!(l.reed_condition(&g, lo).unwrap().is_some());
            }
        }
    }
}
