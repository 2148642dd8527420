//! Fixture instances and seeded random instance generators.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::cover::{Cover, MatchingJson, RawCover};
use crate::graph::{generate_graph, Graph, GraphJson, GraphKind, Vertex};
use crate::lists::{Colour, ListAssignment};
use crate::lottery::LotteryInstance;
use crate::rng::substream;
use crate::Error;

/// `C4` with all lists `{1, 2}`, identity matchings on three edges and the
/// swap `(1, 2), (2, 1)` on the fourth. It has no `H`-colouring although
/// `C4` is 2-choosable.
pub fn twisted_c4() -> Cover {
    let id = vec![[1, 1], [2, 2]];
    RawCover {
        graph: GraphJson { n: 4, edges: vec![[0, 1], [1, 2], [2, 3], [0, 3]] },
        lists: vec![vec![1, 2]; 4],
        matchings: vec![
            MatchingJson { edge: [0, 1], pairs: id.clone() },
            MatchingJson { edge: [1, 2], pairs: id.clone() },
            MatchingJson { edge: [2, 3], pairs: id },
            MatchingJson { edge: [0, 3], pairs: vec![[1, 2], [2, 1]] },
        ],
    }
    .into_cover()
    .expect("fixture is a valid cover")
}

/// Random lists: each vertex independently gets a uniformly random
/// `size`-subset of `1..=palette`.
pub fn random_lists(n: usize, size: usize, palette: Colour, seed: u64) -> Result<ListAssignment, Error> {
    if size > palette as usize {
        return Err(Error::InvalidParameter(format!("list size {size} > palette {palette}")));
    }
    let mut rng = substream(seed, 1);
    let colours: Vec<Colour> = (1..=palette).collect();
    ListAssignment::new((0..n).map(|_| colours.choose_multiple(&mut rng, size).copied().collect::<Vec<_>>()))
}

/// A random cover over `base` with lists drawn as in [`random_lists`] and,
/// on every edge, a uniformly random partial matching between the two lists
/// in which each possible pair is kept with probability `density`.
pub fn random_cover(base: &Graph, size: usize, palette: Colour, density: f64, seed: u64) -> Result<Cover, Error> {
    let lists = random_lists(base.vertex_count(), size, palette, seed)?;
    let mut rng = substream(seed, 2);
    let matchings = base
        .edges()
        .map(|(u, v)| {
            let mut right: Vec<Colour> = lists.list(v).to_vec();
            let mut pairs = Vec::new();
            for &c in lists.list(u) {
                if right.is_empty() {
                    break;
                }
                if rng.random::<f64>() < density {
                    let k = rng.random_range(0..right.len());
                    pairs.push([c, right.swap_remove(k)]);
                }
            }
            MatchingJson { edge: [u, v], pairs }
        })
        .collect();
    RawCover {
        graph: GraphJson::from(base),
        lists: lists.lists().to_vec(),
        matchings,
    }
    .into_cover()
}

/// Random cover whose `H*` has no `K_r`: matching pairs are offered in a
/// random order and any pair that would close a `K_r` in `H*` is skipped.
pub fn random_clique_free_cover(base: &Graph, size: usize, palette: Colour, density: f64, r: usize, seed: u64) -> Result<Cover, Error> {
    let dense = random_cover(base, size, palette, density, seed)?;
    let mut kept: Vec<MatchingJson> = Vec::new();
    let mut current = RawCover {
        graph: GraphJson::from(base),
        lists: dense.lists().lists().to_vec(),
        matchings: Vec::new(),
    };
    let mut offered: Vec<([Vertex; 2], [Colour; 2])> = dense
        .matchings()
        .iter()
        .flat_map(|(&(u, v), pairs)| pairs.iter().map(move |&(a, b)| ([u, v], [a, b])))
        .collect();
    let mut rng = substream(seed, 3);
    rand::seq::SliceRandom::shuffle(offered.as_mut_slice(), &mut rng);
    for (edge, pair) in offered {
        current.matchings = kept.clone();
        current.matchings.push(MatchingJson { edge, pairs: vec![pair] });
        let candidate = current.clone().into_cover()?;
        if candidate.find_clique(r).is_none() {
            kept = current.matchings.clone();
        }
    }
    current.matchings = kept;
    current.into_cover()
}

/// A random list instance satisfying the finishing condition at `l`:
/// every list has `ceil(l)` colours and every colour's availability around
/// a vertex holding it is at most `floor(l / 2e)`. Colours are assigned
/// vertex by vertex, retrying random palette colours that would break the
/// availability cap.
pub fn random_reed_instance(n: usize, edge_density: f64, l: f64, seed: u64) -> Result<(Graph, ListAssignment), Error> {
    let g = generate_graph(&GraphKind::RandomEdgeDensity { n, p: edge_density }, seed)?;
    let size = l.ceil() as usize;
    let cap = (l / (2.0 * std::f64::consts::E)).floor() as usize;
    let palette = (size * (g.max_degree() + 1) * 2).max(size) as Colour;
    let mut rng = substream(seed, 4);
    let mut lists: Vec<Vec<Colour>> = vec![Vec::new(); n];
    let has = |lists: &Vec<Vec<Colour>>, v: Vertex, c: Colour| lists[v].contains(&c);
    for v in 0..n {
        let mut attempts = 0;
        while lists[v].len() < size {
            attempts += 1;
            if attempts > 100_000 {
                return Err(Error::InvalidParameter("could not satisfy the availability cap".into()));
            }
            let c = rng.random_range(1..=palette);
            if has(&lists, v, c) {
                continue;
            }
            // v's own availability for c, and every neighbour holding c
            let own = g.neighbours(v).iter().filter(|&&w| has(&lists, w, c)).count();
            let neighbours_ok = g
                .neighbours(v)
                .iter()
                .filter(|&&w| has(&lists, w, c))
                .all(|&w| g.neighbours(w).iter().filter(|&&x| has(&lists, x, c)).count() < cap);
            if own <= cap && neighbours_ok {
                lists[v].push(c);
            }
        }
    }
    let lists = ListAssignment::new(lists)?;
    debug_assert!(lists.reed_condition(&g, l)?.is_none());
    Ok((g, lists))
}

/// A random `K_r`-free graph: each pair is offered once, in random order,
/// with probability `p`, and kept unless it would close a `K_r`.
pub fn random_clique_free_graph(n: usize, p: f64, r: usize, seed: u64) -> Result<Graph, Error> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("clique order {r} < 2")));
    }
    let mut rng = substream(seed, 6);
    let mut pairs: Vec<(Vertex, Vertex)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    rand::seq::SliceRandom::shuffle(pairs.as_mut_slice(), &mut rng);
    let mut g = Graph::empty(n);
    let mut edges = Vec::new();
    for (u, v) in pairs {
        if rng.random::<f64>() >= p {
            continue;
        }
        let common: crate::graph::VertexSet = g.neighbours(u).iter().copied().filter(|&w| g.has_edge(v, w)).collect();
        if g.find_clique_within(r - 2, &common).is_none() {
            edges.push((u, v));
            g = Graph::new(n, edges.iter().copied())?;
        }
    }
    debug_assert!(!g.contains_clique(r));
    Ok(g)
}

/// A random lottery with `m` decks over `[n]`, each deck a random nonempty
/// subset of size at most `max_deck`.
pub fn random_lottery(n: u32, m: usize, max_deck: usize, seed: u64) -> Result<LotteryInstance, Error> {
    let mut rng = substream(seed, 5);
    let coupons: Vec<u32> = (1..=n).collect();
    let decks = (0..m)
        .map(|_| {
            let size = rng.random_range(1..=max_deck.min(n as usize));
            coupons.choose_multiple(&mut rng, size).copied().collect()
        })
        .collect();
    LotteryInstance::new(n, decks)
}

/// A random instance for independent transversals: `parts` parts of
/// `part_size` vertices each (part `i` is `i·part_size..(i+1)·part_size`)
/// and random edges between distinct parts, offered in random order with
/// probability `density` and kept while both endpoints have degree below
/// `max_degree`.
pub fn random_transversal_instance(
    parts: usize,
    part_size: usize,
    max_degree: usize,
    density: f64,
    seed: u64,
) -> Result<(Graph, Vec<Vec<Vertex>>), Error> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParameter(format!("edge density {density} not in [0, 1]")));
    }
    let n = parts * part_size;
    let part_of = |v: Vertex| v / part_size;
    let mut rng = substream(seed, 7);
    let mut pairs: Vec<(Vertex, Vertex)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| part_of(u) != part_of(v))
        .collect();
    rand::seq::SliceRandom::shuffle(pairs.as_mut_slice(), &mut rng);
    let mut degree = vec![0; n];
    let mut edges = Vec::new();
    for (u, v) in pairs {
        if rng.random::<f64>() < density && degree[u] < max_degree && degree[v] < max_degree {
            degree[u] += 1;
            degree[v] += 1;
            edges.push((u, v));
        }
    }
    let partition = (0..parts).map(|i| (i * part_size..(i + 1) * part_size).collect()).collect();
    Ok((Graph::new(n, edges)?, partition))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic_and_valid() {
        let g = generate_graph(&GraphKind::RandomEdgeDensity { n: 6, p: 0.5 }, 3).unwrap();
        let a = random_cover(&g, 3, 4, 0.7, 9).unwrap();
        assert_eq!(a, random_cover(&g, 3, 4, 0.7, 9).unwrap());
        assert!(a.to_raw().validate().is_empty());
        assert!(a.is_k_fold(3));
        let b = random_clique_free_cover(&g, 3, 3, 1.0, 3, 9).unwrap();
        assert!(b.is_clique_free(3).unwrap());
        let (g, l) = random_reed_instance(12, 0.3, 8.0, 4).unwrap();
        assert!(l.reed_condition(&g, 8.0).unwrap().is_none());
        let (f, parts) = random_transversal_instance(4, 4, 2, 0.9, 2).unwrap();
        assert!(f.max_degree() <= 2);
        assert!(f.edges().all(|(u, v)| u / 4 != v / 4));
        assert_eq!(parts[3], vec![12, 13, 14, 15]);
        for r in 2..6 {
            assert!(!random_clique_free_graph(12, 0.8, r, 1).unwrap().contains_clique(r));
        }
        let lot = random_lottery(5, 4, 3, 2).unwrap();
        assert_eq!(lot.m(), 4);
        assert!(lot.decks().iter().all(|d| !d.is_empty() && d.len() <= 3));
    }
}
