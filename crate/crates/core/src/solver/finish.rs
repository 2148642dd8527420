//! Finishing procedures and the exhaustive oracle.

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use serde::Serialize;

use crate::cover::{Cover, CoverSet};
use crate::graph::{Graph, Subgraph, Vertex};
use crate::lists::{ListAssignment, PartialColouring};
use crate::rng::substream;
use crate::{Error, ENUMERATION_LIMIT};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReedOutcome {
    /// A proper colouring with every colour from its list, when found.
    pub colouring: Option<PartialColouring>,
    pub resamples: u64,
    pub reed_condition: bool,
}

impl ReedOutcome {
    pub fn exhausted(&self) -> bool {
        self.colouring.is_none()
    }
}

/// Uniform independent colour per vertex, then repeatedly resamples both
/// endpoints of the lowest monochromatic edge.
pub fn moser_tardos_reed(g: &Graph, lists: &ListAssignment, l: f64, seed: u64, max_resamples: u64) -> Result<ReedOutcome, Error> {
    lists.check_graph(g)?;
    if let Some(v) = g.vertices().find(|&v| lists.list(v).is_empty()) {
        return Err(Error::EmptyList(v));
    }
    let reed_condition = lists.reed_condition(g, l)?.is_none();
    let mut rng = substream(seed, 0);
    let mut colour: Vec<u32> = g
        .vertices()
        .map(|v| *lists.list(v).choose(&mut rng).expect("nonempty"))
        .collect();
    let mut violated: BTreeSet<(Vertex, Vertex)> = g.edges().filter(|&(u, v)| colour[u] == colour[v]).collect();
    let mut resamples = 0;
    while let Some(&(u, v)) = violated.iter().next() {
        if resamples == max_resamples {
            return Ok(ReedOutcome { colouring: None, resamples, reed_condition });
        }
        resamples += 1;
        for x in [u, v] {
            colour[x] = *lists.list(x).choose(&mut rng).expect("nonempty");
        }
        for x in [u, v] {
            for &w in g.neighbours(x) {
                let e = (x.min(w), x.max(w));
                if colour[x] == colour[w] {
                    violated.insert(e);
                } else {
                    violated.remove(&e);
                }
            }
        }
    }
    let colouring = PartialColouring(colour);
    debug_assert!(colouring.is_full_colouring(g, lists));
    Ok(ReedOutcome { colouring: Some(colouring), resamples, reed_condition })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HaxellOutcome {
    /// One vertex per part, sorted by part, independent in `F`.
    pub transversal: Option<Vec<Vertex>>,
    pub max_degree: usize,
    pub min_part: usize,
    /// `Δ(F) ≤ l/2` and every part has at least `l` vertices.
    pub hypothesis_half: bool,
    /// The same with `l/(2e)`.
    pub hypothesis_2e: bool,
    pub nodes: u64,
}

fn is_independent_in(f: &Subgraph, set: &[Vertex]) -> bool {
    set.iter().enumerate().all(|(i, &a)| set[i + 1..].iter().all(|&b| !f.graph.has_edge(a, b)))
}

/// Independent transversal search: backtracking, always branching on the
/// part with the fewest candidates left.
pub fn haxell_transversal(f: &Subgraph, parts: &[Vec<Vertex>], l: f64) -> Result<HaxellOutcome, Error> {
    let mut seen = BTreeSet::new();
    for (i, part) in parts.iter().enumerate() {
        for &v in part {
            if !f.vertices.contains(&v) {
                return Err(Error::InvalidInstance(format!("part {i} contains {v}, which is not a vertex of F")));
            }
            if !seen.insert(v) {
                return Err(Error::InvalidInstance(format!("vertex {v} lies in two parts")));
            }
        }
    }
    if seen.len() != f.vertices.len() {
        return Err(Error::InvalidInstance("parts do not cover V(F)".into()));
    }
    let max_degree = f.vertices.iter().map(|&v| f.degree(v)).max().unwrap_or(0);
    let min_part = parts.iter().map(Vec::len).min().unwrap_or(0);
    let sizes_ok = |l: f64| parts.iter().all(|p| p.len() as f64 >= l);
    let hypothesis_half = max_degree as f64 <= l / 2.0 && sizes_ok(l);
    let hypothesis_2e = max_degree as f64 <= l / (2.0 * std::f64::consts::E) && sizes_ok(l);

    let mut chosen: Vec<Option<Vertex>> = vec![None; parts.len()];
    let mut nodes = 0u64;
    let found = search(f, parts, &mut chosen, &mut nodes)?;
    let transversal = found.then(|| chosen.iter().map(|c| c.expect("complete")).collect::<Vec<_>>());
    if let Some(t) = &transversal {
        debug_assert!(is_independent_in(f, t));
    }
    Ok(HaxellOutcome {
        transversal,
        max_degree,
        min_part,
        hypothesis_half,
        hypothesis_2e,
        nodes,
    })
}

fn search(f: &Subgraph, parts: &[Vec<Vertex>], chosen: &mut [Option<Vertex>], nodes: &mut u64) -> Result<bool, Error> {
    *nodes += 1;
    if *nodes as u128 > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            what: "transversal search nodes",
            count: *nodes as u128,
            limit: ENUMERATION_LIMIT,
        });
    }
    let free = |v: Vertex, chosen: &[Option<Vertex>]| chosen.iter().flatten().all(|&w| !f.graph.has_edge(v, w));
    let mut best: Option<(usize, Vec<Vertex>)> = None;
    for (i, part) in parts.iter().enumerate() {
        if chosen[i].is_some() {
            continue;
        }
        let options: Vec<Vertex> = part.iter().copied().filter(|&v| free(v, chosen)).collect();
        if best.as_ref().is_none_or(|(_, b)| options.len() < b.len()) {
            best = Some((i, options));
        }
    }
    let Some((i, options)) = best else {
        return Ok(true);
    };
    for v in options {
        chosen[i] = Some(v);
        if search(f, parts, chosen, nodes)? {
            return Ok(true);
        }
    }
    chosen[i] = None;
    Ok(false)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum GreedyOutcome {
    Complete { colouring: CoverSet },
    Stuck { vertex: Vertex, partial: CoverSet },
}

/// Covers the lowest uncovered vertex with a nonempty residual list by its
/// lowest available cover vertex until every vertex is covered or all
/// uncovered vertices have empty residual lists.
pub fn greedy_complete(cov: &Cover, set: &CoverSet) -> Result<GreedyOutcome, Error> {
    cov.check_independent(set)?;
    let mut current = set.clone();
    loop {
        let residual = cov.residual(&current)?;
        let Some(&first) = residual.uncovered.iter().next() else {
            return Ok(GreedyOutcome::Complete { colouring: current });
        };
        match residual.uncovered.iter().find(|&&v| !residual.lists[v].is_empty()) {
            Some(&v) => {
                current.insert(*residual.lists[v].iter().next().expect("nonempty"));
            }
            None => return Ok(GreedyOutcome::Stuck { vertex: first, partial: current }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleOutcome {
    pub colourable: bool,
    pub witness: Option<CoverSet>,
    /// Selections explored.
    pub nodes: u64,
}

/// Exact `H`-colourability by backtracking over one cover vertex per
/// v-set, lowest vertex and lowest colour first.
pub fn exhaustive_colourable(cov: &Cover) -> Result<OracleOutcome, Error> {
    let product = cov
        .base()
        .vertices()
        .try_fold(1u128, |acc, v| acc.checked_mul(cov.v_set(v).len() as u128))
        .unwrap_or(u128::MAX);
    if product > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            what: "colour selections",
            count: product,
            limit: ENUMERATION_LIMIT,
        });
    }
    fn rec(cov: &Cover, v: Vertex, chosen: &mut Vec<usize>, nodes: &mut u64) -> bool {
        *nodes += 1;
        if v == cov.base().vertex_count() {
            return true;
        }
        for x in cov.v_set(v) {
            if chosen.iter().all(|&y| !cov.h().has_edge(x, y)) {
                chosen.push(x);
                if rec(cov, v + 1, chosen, nodes) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    let mut nodes = 0;
    let colourable = rec(cov, 0, &mut chosen, &mut nodes);
    let witness = colourable.then(|| chosen.into_iter().collect::<CoverSet>());
    if let Some(w) = &witness {
        debug_assert!(cov.is_h_colouring(w));
    }
    Ok(OracleOutcome { colourable, witness, nodes })
}

/// [`exhaustive_colourable`] on the canonical cover of `(G, L)`, with the
/// witness read back as a colouring.
pub fn exhaustive_list_colourable(g: &Graph, lists: &ListAssignment) -> Result<(OracleOutcome, Option<PartialColouring>), Error> {
    let cov = Cover::canonical(g, lists)?;
    let outcome = exhaustive_colourable(&cov)?;
    let colouring = outcome.witness.as_ref().map(|w| cov.colouring_of(w));
    Ok((outcome, colouring))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_graph, GraphKind};
    use crate::instances::twisted_c4;
    use crate::lists::Colour;

    fn la(lists: &[&[Colour]]) -> ListAssignment {
        ListAssignment::new(lists.iter().map(|l| l.to_vec())).unwrap()
    }

    fn k(n: usize) -> Graph {
        generate_graph(&GraphKind::Complete { n }, 0).unwrap()
    }

    #[test]
    fn reed_examples() {
        let out = moser_tardos_reed(&Graph::empty(3), &la(&[&[1], &[2, 3], &[4]]), 1.0, 0, 10).unwrap();
        assert_eq!(out.resamples, 0);
        assert!(out.colouring.is_some());
        let l = la(&[&[1, 2], &[1, 2]]);
        for seed in 0..20 {
            let w = moser_tardos_reed(&k(2), &l, 2.0, seed, 1000).unwrap().colouring.unwrap();
            assert_ne!(w.colour(0), w.colour(1));
        }
        let stuck = moser_tardos_reed(&k(2), &la(&[&[1], &[1]]), 1.0, 0, 50).unwrap();
        assert!(stuck.exhausted());
        assert_eq!(stuck.resamples, 50);
        assert_eq!(moser_tardos_reed(&k(2), &la(&[&[], &[1]]), 1.0, 0, 5), Err(Error::EmptyList(0)));
    }

    #[test]
    fn reed_reaches_both_proper_colourings() {
        let l = la(&[&[1, 2], &[1, 2]]);
        let outcomes: BTreeSet<Vec<u32>> = (0..64)
            .map(|s| moser_tardos_reed(&k(2), &l, 2.0, s, 1000).unwrap().colouring.unwrap().0)
            .collect();
        assert_eq!(outcomes, [vec![1, 2], vec![2, 1]].into_iter().collect());
    }

    #[test]
    fn haxell_examples() {
        // a=0, b=1, c=2, d=3 with edge a-c
        let f = Graph::new(4, [(0, 2)]).unwrap();
        let out = haxell_transversal(&Subgraph::full(&f), &[vec![0, 1], vec![2, 3]], 2.0).unwrap();
        assert!(out.hypothesis_half);
        let t = out.transversal.unwrap();
        assert!(!(t.contains(&0) && t.contains(&2)));
        let single = haxell_transversal(&Subgraph::full(&Graph::empty(1)), &[vec![0]], 1.0).unwrap();
        assert_eq!(single.transversal, Some(vec![0]));
        let blocked = Graph::new(2, [(0, 1)]).unwrap();
        let none = haxell_transversal(&Subgraph::full(&blocked), &[vec![0], vec![1]], 1.0).unwrap();
        assert_eq!(none.transversal, None);
        assert!(!none.hypothesis_half);
        assert!(haxell_transversal(&Subgraph::full(&f), &[vec![0, 1], vec![1, 2, 3]], 1.0).is_err());
        assert!(haxell_transversal(&Subgraph::full(&f), &[vec![0, 1]], 1.0).is_err());
    }

    #[test]
    fn greedy_examples() {
        let one = Cover::canonical(&Graph::empty(1), &la(&[&[1, 2]])).unwrap();
        assert_eq!(
            greedy_complete(&one, &CoverSet::new()).unwrap(),
            GreedyOutcome::Complete { colouring: [0].into_iter().collect() }
        );
        let k2 = Cover::canonical(&k(2), &la(&[&[1], &[1]])).unwrap();
        assert_eq!(
            greedy_complete(&k2, &CoverSet::new()).unwrap(),
            GreedyOutcome::Stuck { vertex: 1, partial: [0].into_iter().collect() }
        );
        let done: CoverSet = [0].into_iter().collect();
        assert_eq!(greedy_complete(&one, &done).unwrap(), GreedyOutcome::Complete { colouring: done });
    }

    #[test]
    fn oracle_examples() {
        let (out, w) = exhaustive_list_colourable(&k(3), &ListAssignment::uniform(3, &[1, 2, 3]).unwrap()).unwrap();
        assert!(out.colourable);
        assert!(w.unwrap().is_full_colouring(&k(3), &ListAssignment::uniform(3, &[1, 2, 3]).unwrap()));
        assert!(!exhaustive_list_colourable(&k(2), &la(&[&[1], &[1]])).unwrap().0.colourable);
        let twisted = exhaustive_colourable(&twisted_c4()).unwrap();
        assert!(!twisted.colourable);
        let c4 = generate_graph(&GraphKind::Cycle { n: 4 }, 0).unwrap();
        assert!(exhaustive_list_colourable(&c4, &ListAssignment::uniform(4, &[1, 2]).unwrap()).unwrap().0.colourable);
        let big = ListAssignment::uniform(13, &[1, 2, 3, 4]).unwrap();
        assert!(exhaustive_list_colourable(&Graph::empty(13), &big).is_err());
    }
}
