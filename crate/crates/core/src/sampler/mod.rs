//! Exact enumeration and uniform sampling of partial colourings and
//! independent sets, conditional-uniformity checks, and the neighbourhood
//! resampling chain.

mod chain;
mod conditional;
mod index;

pub use chain::{
    chain_distribution, resampling_chain, Bookkeeping, ChainDistribution, ChainMode, ChainParams, ChainRun, ChainSetup,
    ChainStep, Variable,
};
pub use conditional::{
    sweep_conditional_uniformity_cover, sweep_conditional_uniformity_lists, verify_conditional_uniformity_cover,
    verify_conditional_uniformity_lists, ConditionalCheck, SweepSummary, SWEEP_MAX_ELEMENTS,
};
pub use index::{adjacency_masks, independent_masks, ColouringIndex, IndependentSetIndex};

use crate::graph::{Graph, Subgraph, Vertex};
use crate::lists::{ListAssignment, PartialColouring};
use crate::rng::{substream, Rng};
use crate::Error;

pub fn enumerate_partial_colourings(g: &Graph, lists: &ListAssignment) -> Result<ColouringIndex, Error> {
    ColouringIndex::new(g, lists)
}

pub fn enumerate_independent_sets(f: &Subgraph) -> Result<IndependentSetIndex, Error> {
    IndependentSetIndex::new(f)
}

/// A uniform partial colouring from substream `(seed, 0)`.
pub fn sample_uniform_partial_colouring(g: &Graph, lists: &ListAssignment, seed: u64) -> Result<PartialColouring, Error> {
    Ok(ColouringIndex::new(g, lists)?.sample(&mut substream(seed, 0)))
}

/// A uniform independent set from substream `(seed, 0)`.
pub fn sample_uniform_independent_set(f: &Subgraph, seed: u64) -> Result<Vec<Vertex>, Error> {
    Ok(IndependentSetIndex::new(f)?.sample(&mut substream(seed, 0)))
}

/// Pearson statistic of `counts` against the uniform law on `counts.len()`
/// outcomes.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum()
}

/// Draws `draws` samples, each from its own substream of `seed`, and tallies
/// them by rank.
pub fn tally<F>(total: u64, draws: u64, seed: u64, mut draw: F) -> Vec<u64>
where
    F: FnMut(&mut Rng) -> u64,
{
    let mut counts = vec![0; total as usize];
    for t in 0..draws {
        counts[draw(&mut substream(seed, t)) as usize] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_graph, GraphKind};

    #[test]
    fn sampler_frequencies() {
        let k2 = generate_graph(&GraphKind::Complete { n: 2 }, 0).unwrap();
        let l = ListAssignment::new(vec![vec![1], vec![1]]).unwrap();
        let idx = ColouringIndex::new(&k2, &l).unwrap();
        let counts = tally(idx.total(), 100_000, 5, |rng| idx.rank(&idx.sample(rng)).unwrap());
        let sigma = (100_000.0_f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for &c in &counts {
            assert!((c as f64 - 100_000.0 / 3.0).abs() < 3.0 * sigma, "{counts:?}");
        }
        let k3 = generate_graph(&GraphKind::Complete { n: 3 }, 0).unwrap();
        let sets = IndependentSetIndex::for_graph(&k3).unwrap();
        assert_eq!(sets.total(), 4);
        let counts = tally(4, 100_000, 6, |rng| sets.rank(&sets.sample(rng)).unwrap());
        // 0.999 quantile of chi-square with 3 degrees of freedom
        assert!(chi_square_uniform(&counts) < 16.27, "{counts:?}");
    }

    #[test]
    fn trivial_samples() {
        let g = Graph::empty(1);
        let none = ListAssignment::new(vec![Vec::<u32>::new()]).unwrap();
        for seed in 0..5 {
            assert_eq!(sample_uniform_partial_colouring(&g, &none, seed).unwrap(), PartialColouring::blank(1));
        }
        let s = sample_uniform_independent_set(&Subgraph::full(&g), 3).unwrap();
        assert!(s.is_empty() || s == vec![0]);
    }
}
