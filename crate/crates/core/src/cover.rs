//! Covers of a graph and their conflict graphs.
//!
//! A cover of `G` attaches to every vertex `v` its *v-set*
//! `L_v = {v_c : c ∈ L(v)}` and to every edge `uv` a (possibly empty)
//! matching between `L_u` and `L_v`. The conflict graph `H` joins the
//! members of each v-set pairwise and adds the matching edges; `H*` keeps
//! only the matching edges. The list-colouring cover matches `u_c` with
//! `v_c` for every common colour `c`.
//!
//! Cover vertices get flat ids `0..|V(H)|`, laid out v-set by v-set in
//! owner order and colour order within a v-set. `H` and `H*` are ordinary
//! [`Graph`]s over those ids.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, GraphJson, Subgraph, Vertex, VertexSet};
use crate::lists::{Colour, ListAssignment, PartialColouring, BLANK};
use crate::Error;

/// `v_c`: the copy of base vertex `owner` indexed by `colour`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoverVertex {
    pub owner: Vertex,
    pub colour: Colour,
}

impl fmt::Display for CoverVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.owner, self.colour)
    }
}

/// Flat cover-vertex ids.
pub type CoverSet = BTreeSet<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingJson {
    pub edge: [Vertex; 2],
    pub pairs: Vec<[Colour; 2]>,
}

/// Serialized form of a cover. Not validated; see [`RawCover::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCover {
    pub graph: GraphJson,
    pub lists: Vec<Vec<Colour>>,
    pub matchings: Vec<MatchingJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum CoverViolation {
    BadGraph { message: String },
    BadLists { message: String },
    ListCountMismatch { vertices: usize, lists: usize },
    /// A matching was given for a pair of base vertices that is not an edge.
    NotAnEdge { edge: [Vertex; 2] },
    /// A matched colour is missing from its endpoint's list.
    ColourNotInList { vertex: Vertex, colour: Colour, edge: [Vertex; 2] },
    /// A colour is used by more than one pair of the same edge's matching.
    MatchedTwice { vertex: Vertex, colour: Colour, edge: [Vertex; 2] },
}

impl RawCover {
    /// Every violation of the cover axioms, empty when the cover is valid.
    pub fn validate(&self) -> Vec<CoverViolation> {
        let mut out = Vec::new();
        let graph = match Graph::try_from(self.graph.clone()) {
            Ok(g) => g,
            Err(e) => {
                out.push(CoverViolation::BadGraph { message: e.to_string() });
                return out;
            }
        };
        let lists = match ListAssignment::new(self.lists.clone()) {
            Ok(l) => l,
            Err(e) => {
                out.push(CoverViolation::BadLists { message: e.to_string() });
                return out;
            }
        };
        if lists.len() != graph.vertex_count() {
            out.push(CoverViolation::ListCountMismatch {
                vertices: graph.vertex_count(),
                lists: lists.len(),
            });
            return out;
        }
        // matchings given per edge may be split across several entries
        let mut used: BTreeMap<([Vertex; 2], Vertex), BTreeSet<Colour>> = BTreeMap::new();
        for m in &self.matchings {
            let [u, v] = m.edge;
            if !graph.has_edge(u, v) {
                out.push(CoverViolation::NotAnEdge { edge: m.edge });
                continue;
            }
            let edge = [u.min(v), u.max(v)];
            for &[cu, cv] in &m.pairs {
                for (x, c) in [(u, cu), (v, cv)] {
                    if !lists.contains(x, c) {
                        out.push(CoverViolation::ColourNotInList { vertex: x, colour: c, edge });
                    }
                    if !used.entry((edge, x)).or_default().insert(c) {
                        out.push(CoverViolation::MatchedTwice { vertex: x, colour: c, edge });
                    }
                }
            }
        }
        out
    }

    pub fn into_cover(self) -> Result<Cover, Error> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(Error::InvalidCover(violations));
        }
        let graph = Graph::try_from(self.graph)?;
        let lists = ListAssignment::new(self.lists)?;
        let mut matchings: BTreeMap<(Vertex, Vertex), Vec<(Colour, Colour)>> = BTreeMap::new();
        for m in self.matchings {
            let [u, v] = m.edge;
            let entry = matchings.entry((u.min(v), u.max(v))).or_default();
            for [cu, cv] in m.pairs {
                entry.push(if u < v { (cu, cv) } else { (cv, cu) });
            }
        }
        Ok(Cover::assemble(graph, lists, matchings))
    }
}

/// A validated cover with its conflict graphs precomputed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    base: Graph,
    lists: ListAssignment,
    /// Keyed by `(u, v)` with `u < v`; a pair `(c, c')` joins `u_c` and `v_{c'}`.
    matchings: BTreeMap<(Vertex, Vertex), Vec<(Colour, Colour)>>,
    vertices: Vec<CoverVertex>,
    offsets: Vec<usize>,
    h_star: Graph,
    h: Graph,
}

impl Serialize for Cover {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_raw().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cover {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        RawCover::deserialize(d)?.into_cover().map_err(serde::de::Error::custom)
    }
}

impl Cover {
    fn assemble(base: Graph, lists: ListAssignment, mut matchings: BTreeMap<(Vertex, Vertex), Vec<(Colour, Colour)>>) -> Self {
        matchings.retain(|_, pairs| !pairs.is_empty());
        for pairs in matchings.values_mut() {
            pairs.sort_unstable();
        }
        let mut vertices = Vec::new();
        let mut offsets = vec![0];
        for v in base.vertices() {
            vertices.extend(lists.list(v).iter().map(|&colour| CoverVertex { owner: v, colour }));
            offsets.push(vertices.len());
        }
        let id = |v: Vertex, c: Colour| offsets[v] + lists.list(v).binary_search(&c).expect("validated");
        let cross: Vec<(usize, usize)> = matchings
            .iter()
            .flat_map(|(&(u, v), pairs)| pairs.iter().map(move |&(cu, cv)| (u, v, cu, cv)))
            .map(|(u, v, cu, cv)| (id(u, cu), id(v, cv)))
            .collect();
        let h_star = Graph::new(vertices.len(), cross.iter().copied()).expect("matching edges are simple");
        let in_set = base.vertices().flat_map(|v| {
            let r = offsets[v]..offsets[v + 1];
            r.clone().flat_map(move |a| (a + 1..r.end).map(move |b| (a, b)))
        });
        let h = Graph::new(vertices.len(), cross.iter().copied().chain(in_set)).expect("simple");
        Cover {
            base,
            lists,
            matchings,
            vertices,
            offsets,
            h_star,
            h,
        }
    }

    /// The cover of a list colouring problem: `u_c v_c` for every edge `uv`
    /// and every common colour `c`.
    pub fn canonical(base: &Graph, lists: &ListAssignment) -> Result<Self, Error> {
        lists.check_graph(base)?;
        let matchings = base
            .edges()
            .map(|(u, v)| {
                let common = lists.list(u).iter().copied().filter(|&c| lists.contains(v, c));
                ((u, v), common.map(|c| (c, c)).collect())
            })
            .collect();
        Ok(Cover::assemble(base.clone(), lists.clone(), matchings))
    }

    pub fn to_raw(&self) -> RawCover {
        RawCover {
            graph: GraphJson::from(&self.base),
            lists: self.lists.lists().to_vec(),
            matchings: self
                .matchings
                .iter()
                .map(|(&(u, v), pairs)| MatchingJson {
                    edge: [u, v],
                    pairs: pairs.iter().map(|&(a, b)| [a, b]).collect(),
                })
                .collect(),
        }
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn lists(&self) -> &ListAssignment {
        &self.lists
    }

    pub fn matchings(&self) -> &BTreeMap<(Vertex, Vertex), Vec<(Colour, Colour)>> {
        &self.matchings
    }

    /// `|V(H)|`.
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_k_fold(&self, k: usize) -> bool {
        self.lists.is_k_assignment(k)
    }

    pub fn cover_vertex(&self, id: usize) -> CoverVertex {
        self.vertices[id]
    }

    pub fn owner(&self, id: usize) -> Vertex {
        self.vertices[id].owner
    }

    pub fn id(&self, v: CoverVertex) -> Option<usize> {
        if v.owner >= self.base.vertex_count() {
            return None;
        }
        let pos = self.lists.list(v.owner).binary_search(&v.colour).ok()?;
        Some(self.offsets[v.owner] + pos)
    }

    /// Flat ids of the v-set `L_v`.
    pub fn v_set(&self, v: Vertex) -> Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    pub fn v_set_ids(&self, v: Vertex) -> CoverSet {
        self.v_set(v).collect()
    }

    /// `H*`: matching edges only.
    pub fn h_star(&self) -> &Graph {
        &self.h_star
    }

    /// `H`: matching edges plus a clique on every v-set.
    pub fn h(&self) -> &Graph {
        &self.h
    }

    pub fn to_cover_vertices(&self, set: &CoverSet) -> Vec<CoverVertex> {
        set.iter().map(|&i| self.vertices[i]).collect()
    }

    pub fn from_cover_vertices(&self, vs: &[CoverVertex]) -> Result<CoverSet, Error> {
        vs.iter()
            .map(|&v| self.id(v).ok_or_else(|| Error::InvalidParameter(format!("{v} is not a cover vertex"))))
            .collect()
    }

    /// A `K_r` in `H*`, if any.
    pub fn find_clique(&self, r: usize) -> Option<Vec<CoverVertex>> {
        self.h_star
            .find_clique(r)
            .map(|c| c.into_iter().map(|i| self.vertices[i]).collect())
    }

    /// Whether `H*` is `K_r`-free.
    pub fn is_clique_free(&self, r: usize) -> Result<bool, Error> {
        if r < 3 {
            return Err(Error::InvalidParameter(format!("clique order {r} < 3")));
        }
        Ok(self.find_clique(r).is_none())
    }

    /// `I_ω = {v_{ω(v)} : ω(v) > 0}`, failing with the violated `H`-edge
    /// when `ω` is not a partial colouring for this cover.
    pub fn embed(&self, omega: &PartialColouring) -> Result<CoverSet, Error> {
        if omega.len() != self.base.vertex_count() {
            return Err(Error::SizeMismatch {
                expected: self.base.vertex_count(),
                got: omega.len(),
            });
        }
        let mut set = CoverSet::new();
        for v in self.base.vertices() {
            let c = omega.colour(v);
            if c == BLANK {
                continue;
            }
            let id = self
                .id(CoverVertex { owner: v, colour: c })
                .ok_or_else(|| Error::NotPartialColouring(format!("colour {c} not in the list of {v}")))?;
            set.insert(id);
        }
        self.check_independent(&set).map_err(|e| match e {
            Error::NotIndependent(msg) => Error::NotPartialColouring(msg),
            e => e,
        })?;
        Ok(set)
    }

    /// The partial colouring read off an independent set (blank where the
    /// v-set is untouched).
    pub fn colouring_of(&self, set: &CoverSet) -> PartialColouring {
        let mut w = PartialColouring::blank(self.base.vertex_count());
        for &i in set {
            let cv = self.vertices[i];
            w.0[cv.owner] = cv.colour;
        }
        w
    }

    pub fn check_independent(&self, set: &CoverSet) -> Result<(), Error> {
        if let Some(&bad) = set.iter().find(|&&i| i >= self.vertices.len()) {
            return Err(Error::NotIndependent(format!("{bad} is not a cover vertex id")));
        }
        for &a in set {
            if let Some(&b) = self.h.neighbours(a).iter().find(|b| **b > a && set.contains(b)) {
                return Err(Error::NotIndependent(format!(
                    "H-edge {} -- {}",
                    self.vertices[a], self.vertices[b]
                )));
            }
        }
        Ok(())
    }

    pub fn is_independent(&self, set: &CoverSet) -> bool {
        self.check_independent(set).is_ok()
    }

    /// `N_H[I]`.
    pub fn closed_neighbourhood(&self, set: &CoverSet) -> CoverSet {
        set.iter()
            .flat_map(|&i| self.h.neighbours(i).iter().copied().chain(std::iter::once(i)))
            .collect()
    }

    /// `H^I = H − N_H[I]` together with the residual v-sets and the
    /// uncovered base vertices.
    pub fn residual(&self, set: &CoverSet) -> Result<CoverResidual, Error> {
        self.check_independent(set)?;
        let blocked = self.closed_neighbourhood(set);
        let conflict = self.h.without(&blocked)?;
        let lists = self
            .base
            .vertices()
            .map(|v| self.v_set(v).filter(|i| !blocked.contains(i)).collect())
            .collect();
        let uncovered: VertexSet = self
            .base
            .vertices()
            .filter(|&v| self.v_set(v).all(|i| !set.contains(&i)))
            .collect();
        let base = self.base.induced(&uncovered)?;
        Ok(CoverResidual {
            conflict,
            lists,
            uncovered,
            base,
        })
    }

    /// `(H^I)*`: the residual cover vertices with matching edges only.
    pub fn residual_star(&self, residual: &CoverResidual) -> Result<Subgraph, Error> {
        self.h_star.induced(&residual.conflict.vertices)
    }

    /// An independent set of size `|V(G)|` in `H`.
    pub fn is_h_colouring(&self, set: &CoverSet) -> bool {
        set.len() == self.base.vertex_count() && self.is_independent(set)
    }
}

/// The residual structure left by an independent set `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverResidual {
    /// `H^I = H − N_H[I]`.
    pub conflict: Subgraph,
    /// `L^I_u = L_u ∖ N_H[I]`, as flat ids, per base vertex.
    pub lists: Vec<CoverSet>,
    /// `O_I = {v : L_v ∩ I = ∅}`.
    pub uncovered: VertexSet,
    /// `G_I = G[O_I]`.
    pub base: Subgraph,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_graph, GraphKind};
    use crate::instances::twisted_c4;

    fn la(lists: &[&[Colour]]) -> ListAssignment {
        ListAssignment::new(lists.iter().map(|l| l.to_vec())).unwrap()
    }

    fn k(n: usize) -> Graph {
        generate_graph(&GraphKind::Complete { n }, 0).unwrap()
    }

    fn cv(owner: Vertex, colour: Colour) -> CoverVertex {
        CoverVertex { owner, colour }
    }

    #[test]
    fn canonical_examples() {
        let c = Cover::canonical(&k(2), &la(&[&[1], &[1]])).unwrap();
        assert_eq!(c.matchings().get(&(0, 1)), Some(&vec![(1, 1)]));
        let c = Cover::canonical(&k(2), &la(&[&[1], &[2]])).unwrap();
        assert!(c.matchings().is_empty());
        let c = Cover::canonical(&k(3), &la(&[&[1, 2], &[2, 3], &[3, 1]])).unwrap();
        let pairs: usize = c.matchings().values().map(Vec::len).sum();
        assert_eq!(pairs, 3);
        assert!(!c.h_star().contains_clique(3));
        assert!(c.to_raw().validate().is_empty());
    }

    #[test]
    fn validation_reports_violations() {
        let raw = RawCover {
            graph: GraphJson { n: 2, edges: vec![[0, 1]] },
            lists: vec![vec![1, 2], vec![1]],
            matchings: vec![MatchingJson { edge: [0, 1], pairs: vec![[1, 1], [2, 1]] }],
        };
        assert_eq!(
            raw.validate(),
            vec![CoverViolation::MatchedTwice { vertex: 1, colour: 1, edge: [0, 1] }]
        );
        let raw = RawCover {
            graph: GraphJson { n: 3, edges: vec![[0, 1]] },
            lists: vec![vec![1], vec![1], vec![1]],
            matchings: vec![MatchingJson { edge: [0, 2], pairs: vec![[1, 1]] }],
        };
        assert_eq!(raw.validate(), vec![CoverViolation::NotAnEdge { edge: [0, 2] }]);
        let raw = RawCover {
            graph: GraphJson { n: 2, edges: vec![[0, 1]] },
            lists: vec![vec![1], vec![1]],
            matchings: vec![MatchingJson { edge: [1, 0], pairs: vec![[2, 1]] }],
        };
        assert_eq!(
            raw.validate(),
            vec![CoverViolation::ColourNotInList { vertex: 1, colour: 2, edge: [0, 1] }]
        );
        assert!(matches!(raw.into_cover(), Err(Error::InvalidCover(_))));
    }

    #[test]
    fn reversed_edge_orientation_is_normalized() {
        let raw = RawCover {
            graph: GraphJson { n: 2, edges: vec![[0, 1]] },
            lists: vec![vec![1, 2], vec![1, 2]],
            matchings: vec![MatchingJson { edge: [1, 0], pairs: vec![[1, 2]] }],
        };
        let c = raw.into_cover().unwrap();
        // v_1 -- u_2
        assert_eq!(c.matchings().get(&(0, 1)), Some(&vec![(2, 1)]));
        let a = c.id(cv(0, 2)).unwrap();
        let b = c.id(cv(1, 1)).unwrap();
        assert!(c.h_star().has_edge(a, b));
    }

    #[test]
    fn conflict_graphs() {
        let c = Cover::canonical(&k(2), &la(&[&[1], &[1]])).unwrap();
        assert_eq!(c.h_star().edge_count(), 1);
        assert_eq!(c.h(), c.h_star());
        let c = Cover::canonical(&k(3), &la(&[&[1], &[1], &[1]])).unwrap();
        assert_eq!(c.find_clique(3).map(|v| v.len()), Some(3));
        let c = Cover::canonical(&Graph::empty(1), &la(&[&[1, 2]])).unwrap();
        assert_eq!(c.h_star().edge_count(), 0);
        assert_eq!(c.h().edge_count(), 1);
        assert_eq!(c.vertex_count(), 2);
    }

    #[test]
    fn clique_free_covers() {
        let mono = Cover::canonical(&k(3), &la(&[&[1], &[1], &[1]])).unwrap();
        assert!(!mono.is_clique_free(3).unwrap());
        let rainbow = Cover::canonical(&k(3), &la(&[&[1], &[2], &[3]])).unwrap();
        assert!(rainbow.is_clique_free(3).unwrap());
        let t = twisted_c4();
        assert!(t.is_clique_free(3).unwrap());
        // H* is a single 8-cycle
        assert_eq!(t.h_star().edge_count(), 8);
        assert!(t.h_star().vertices().all(|v| t.h_star().degree(v) == 2));
        assert_eq!(t.h_star().bfs_distances(0).unwrap().iter().filter(|d| d.is_none()).count(), 0);
    }

    #[test]
    fn independent_ops() {
        let c = Cover::canonical(&k(2), &la(&[&[1], &[1]])).unwrap();
        let empty = c.embed(&PartialColouring::blank(2)).unwrap();
        assert!(empty.is_empty());
        let r = c.residual(&empty).unwrap();
        assert_eq!(r.conflict.vertices.len(), c.vertex_count());
        assert_eq!(r.lists, vec![c.v_set_ids(0), c.v_set_ids(1)]);
        assert_eq!(r.uncovered, [0, 1].into_iter().collect());

        let i = c.embed(&PartialColouring(vec![1, 0])).unwrap();
        assert_eq!(c.to_cover_vertices(&i), vec![cv(0, 1)]);
        let r = c.residual(&i).unwrap();
        assert!(r.lists[1].is_empty());
        assert_eq!(r.uncovered, [1].into_iter().collect());
        assert_eq!(r.base.vertices, [1].into_iter().collect());
        assert_eq!(r.base.graph.edge_count(), 0);

        let single = Cover::canonical(&Graph::empty(1), &la(&[&[1, 2]])).unwrap();
        assert!(!single.is_independent(&[0, 1].into_iter().collect()));
        assert!(matches!(c.embed(&PartialColouring(vec![1, 1])), Err(Error::NotPartialColouring(_))));
    }

    #[test]
    fn h_colourings() {
        let c = Cover::canonical(&k(2), &la(&[&[1], &[2]])).unwrap();
        let i = c.from_cover_vertices(&[cv(0, 1), cv(1, 2)]).unwrap();
        assert!(c.is_h_colouring(&i));
        let c = Cover::canonical(&k(2), &la(&[&[1], &[1]])).unwrap();
        let i = c.from_cover_vertices(&[cv(0, 1), cv(1, 1)]).unwrap();
        assert!(!c.is_h_colouring(&i));
        assert!(!c.is_h_colouring(&CoverSet::new()));
    }

    #[test]
    fn json_round_trip() {
        let t = twisted_c4();
        let text = serde_json::to_string(&t).unwrap();
        let back: Cover = serde_json::from_str(&text).unwrap();
        assert_eq!(back, t);
    }
}
