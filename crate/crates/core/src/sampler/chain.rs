//! Resampling a uniform independent set around one base vertex, one colour
//! neighbourhood at a time.
//!
//! With `H₀ = H[⋃_{c∈L(u)} N_{H*}(u_c)]` and `I'` an independent set of
//! `H − H₀`, the chain starts from a uniform `I₀ ∈ Ind(H₀^{I'})` and for each
//! colour `c_i` of `L(u)` (ascending) replaces `I ∩ N_i` by a uniform
//! independent set of `H_i = (H₀[N_i])^{I_{i−1}∖N_i}`, where
//! `N_i = N_{H*}(u_{c_i}) ∩ V(H₀^{I'})`. The output stays uniform on
//! `Ind(H₀^{I'})`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::index::IndependentSetIndex;
use crate::cover::{Cover, CoverSet};
use crate::graph::Vertex;
use crate::lists::Colour;
use crate::rng::Rng;
use crate::{Error, ENUMERATION_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainMode {
    /// Each step draws its own uniform index.
    Direct,
    /// All `2k` uniforms `X_1..X_k, Y_1..Y_k` are drawn up front; small
    /// steps consume the next `X`, the others `Y_{i − k_x}`.
    Predrawn,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    pub mode: ChainMode,
    /// Degree parameter `Δ` for the predrawn threshold.
    pub delta: f64,
    /// Clique order: when the cover is `K_r`-free every `H_i` is checked to
    /// be `K_{r−1}`-free.
    pub r: usize,
}

impl ChainParams {
    pub fn direct(r: usize) -> Self {
        ChainParams { mode: ChainMode::Direct, delta: 1.0, r }
    }

    pub fn predrawn(delta: f64, r: usize) -> Self {
        ChainParams { mode: ChainMode::Predrawn, delta, r }
    }

    /// `Δ^{1/2 − 1/(4r)}`: steps with fewer independent sets use `X`.
    pub fn threshold(&self) -> f64 {
        self.delta.powf(0.5 - 1.0 / (4.0 * self.r as f64))
    }

    fn validate(&self) -> Result<(), Error> {
        if self.r < 3 {
            return Err(Error::InvalidParameter(format!("clique order {} < 3", self.r)));
        }
        if !(self.delta.is_finite() && self.delta >= 1.0) {
            return Err(Error::InvalidParameter(format!("Δ = {} must be a finite value ≥ 1", self.delta)));
        }
        Ok(())
    }
}

/// The fixed structure of a chain: `H₀^{I'}` and the neighbourhoods `N_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainSetup {
    pub u: Vertex,
    pub colours: Vec<Colour>,
    /// `V(H₀)`.
    pub h0: CoverSet,
    /// `V(H₀^{I'}) = V(H₀) ∖ N_H[I']`.
    pub h0_residual: CoverSet,
    /// `N_i` for each colour in order.
    pub neighbourhoods: Vec<CoverSet>,
    /// Whether the `K_{r−1}` check on each `H_i` applies.
    pub clique_free: bool,
}

impl ChainSetup {
    pub fn new(cov: &Cover, u: Vertex, i_prime: &CoverSet, r: usize) -> Result<Self, Error> {
        cov.base().check_vertex(u)?;
        cov.check_independent(i_prime)?;
        let star = cov.h_star();
        let colours = cov.lists().list(u).to_vec();
        let centres: Vec<usize> = cov.v_set(u).collect();
        let h0: CoverSet = centres.iter().flat_map(|&uc| star.neighbours(uc).iter().copied()).collect();
        if let Some(v) = i_prime.iter().find(|v| h0.contains(v)) {
            return Err(Error::NotIndependent(format!("{} lies in H0", cov.cover_vertex(*v))));
        }
        let blocked = cov.closed_neighbourhood(i_prime);
        let h0_residual: CoverSet = h0.difference(&blocked).copied().collect();
        let neighbourhoods = centres
            .iter()
            .map(|&uc| star.neighbours(uc).iter().copied().filter(|v| h0_residual.contains(v)).collect())
            .collect();
        Ok(ChainSetup {
            u,
            colours,
            h0,
            h0_residual,
            neighbourhoods,
            clique_free: cov.is_clique_free(r)?,
        })
    }

    /// Index over `Ind(H₀^{I'})`, the target distribution's support.
    pub fn target(&self, cov: &Cover) -> Result<IndependentSetIndex, Error> {
        IndependentSetIndex::new(&cov.h().induced(&self.h0_residual)?)
    }

    /// `(I_{i−1} ∖ N_i, index over Ind(H_i))` for step `i` (0-based).
    fn step(&self, cov: &Cover, i: usize, current: &CoverSet, r: usize) -> Result<(CoverSet, IndependentSetIndex), Error> {
        let n_i = &self.neighbourhoods[i];
        let kept: CoverSet = current.difference(n_i).copied().collect();
        let blocked = cov.closed_neighbourhood(&kept);
        let h_i: CoverSet = n_i.difference(&blocked).copied().collect();
        if self.clique_free {
            if let Some(clique) = cov.h().find_clique_within(r - 1, &h_i) {
                return Err(Error::InvariantViolated(format!(
                    "H_{} contains K_{} on {:?} although the cover is K_{}-free",
                    i + 1,
                    r - 1,
                    clique,
                    r
                )));
            }
        }
        Ok((kept, IndependentSetIndex::new(&cov.h().induced(&h_i)?)?))
    }
}

/// Which uniform a predrawn step consumed (1-based, as `X_j` / `Y_j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variable {
    X(usize),
    Y(usize),
}

fn variable_for(i: usize, k: usize, k_x: &mut usize, l_i: u64, threshold: f64) -> Result<Variable, Error> {
    let var = if (l_i as f64) < threshold {
        *k_x += 1;
        Variable::X(*k_x)
    } else {
        Variable::Y(i + 1 - *k_x)
    };
    match var {
        Variable::X(j) | Variable::Y(j) if j == 0 || j > k => {
            Err(Error::InvariantViolated(format!("step {} needs {var:?} but only {k} were drawn", i + 1)))
        }
        _ => Ok(var),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainStep {
    pub colour: Colour,
    /// `|N_i|`.
    pub neighbourhood: usize,
    /// `l_i = ind(H_i)`.
    pub choices: u64,
    pub variable: Option<Variable>,
    pub chosen: Vec<usize>,
}

/// Quantities from the analysis of the predrawn realization, computed from
/// the drawn uniforms for inspection only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bookkeeping {
    pub p1: f64,
    pub p2: f64,
    pub k1: u64,
    /// `k − k1`, negative when `k1 > k`.
    pub k2: i64,
    /// `#{j ≤ k1 : X_j < p1}`.
    pub x_count: usize,
    /// `#{j ≤ k2 : Y_j ≥ 1 − p2}`.
    pub y_count: usize,
}

impl Bookkeeping {
    fn new(delta: f64, r: usize, k: usize, x: &[f64], y: &[f64]) -> Self {
        let r = r as f64;
        let p1 = delta.powf(-0.5 + 1.0 / (4.0 * r));
        let p2 = 1.0 - delta.powf(-1.0 / (r * r * r));
        let k1 = (2.0 * delta.powf(1.0 - 1.0 / (8.0 * r))).ceil() as u64;
        let k2 = k as i64 - k1 as i64;
        Bookkeeping {
            p1,
            p2,
            k1,
            k2,
            x_count: x.iter().take(k1 as usize).filter(|&&v| v < p1).count(),
            y_count: y.iter().take(k2.max(0) as usize).filter(|&&v| v >= 1.0 - p2).count(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainRun {
    pub initial: CoverSet,
    pub steps: Vec<ChainStep>,
    pub result: CoverSet,
    /// Final value of `k_x` (predrawn mode).
    pub k_x: usize,
    pub bookkeeping: Option<Bookkeeping>,
}

/// Runs the chain once.
pub fn resampling_chain(cov: &Cover, u: Vertex, i_prime: &CoverSet, params: ChainParams, rng: &mut Rng) -> Result<ChainRun, Error> {
    params.validate()?;
    let setup = ChainSetup::new(cov, u, i_prime, params.r)?;
    let k = setup.colours.len();
    let initial: CoverSet = setup.target(cov)?.sample(rng).into_iter().collect();
    let (x, y): (Vec<f64>, Vec<f64>) = match params.mode {
        ChainMode::Direct => (Vec::new(), Vec::new()),
        ChainMode::Predrawn => {
            let x = (0..k).map(|_| rng.random::<f64>()).collect();
            let y = (0..k).map(|_| rng.random::<f64>()).collect();
            (x, y)
        }
    };
    let threshold = params.threshold();
    let mut current = initial.clone();
    let mut steps = Vec::with_capacity(k);
    let mut k_x = 0;
    for i in 0..k {
        let (kept, index) = setup.step(cov, i, &current, params.r)?;
        let l_i = index.total();
        let (variable, chosen) = match params.mode {
            ChainMode::Direct => (None, index.sample(rng)),
            ChainMode::Predrawn => {
                let var = variable_for(i, k, &mut k_x, l_i, threshold)?;
                let value = match var {
                    Variable::X(j) => x[j - 1],
                    Variable::Y(j) => y[j - 1],
                };
                let q = ((value * l_i as f64) as u64).min(l_i - 1);
                (Some(var), index.unrank(q)?)
            }
        };
        current = kept;
        current.extend(chosen.iter().copied());
        steps.push(ChainStep {
            colour: setup.colours[i],
            neighbourhood: setup.neighbourhoods[i].len(),
            choices: l_i,
            variable,
            chosen,
        });
    }
    let bookkeeping = (params.mode == ChainMode::Predrawn).then(|| Bookkeeping::new(params.delta, params.r, k, &x, &y));
    Ok(ChainRun {
        initial,
        steps,
        result: current,
        k_x,
        bookkeeping,
    })
}

/// Exact output law of the chain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainDistribution {
    /// `ind(H₀^{I'})`.
    pub target_size: u64,
    /// Outcome (sorted ids) → probability, as `"num/den"`.
    pub outcomes: BTreeMap<String, String>,
    /// Root-to-leaf paths of the chain's choice tree.
    pub leaves: u128,
    /// Number of `H_i` checked for `K_{r−1}`.
    pub clique_checks: u64,
    pub uniform: bool,
    /// Largest `|Pr(I) − 1/ind|` over the support of either law, as `f64`.
    pub max_deviation: f64,
}

/// Computes the exact output distribution by sweeping all random choices,
/// merging equal states. In predrawn mode each step's choice `q` is the
/// event `U ∈ [q/l_i, (q+1)/l_i)` for a uniform `U` not used before on that
/// path, so it carries measure `1/l_i`.
pub fn chain_distribution(cov: &Cover, u: Vertex, i_prime: &CoverSet, params: ChainParams) -> Result<ChainDistribution, Error> {
    params.validate()?;
    let setup = ChainSetup::new(cov, u, i_prime, params.r)?;
    let k = setup.colours.len();
    let threshold = params.threshold();
    let target = setup.target(cov)?;
    let start = BigRational::new(BigInt::one(), BigInt::from(target.total()));
    // state (I, k_x) → (probability, path count)
    let mut states: BTreeMap<(Vec<usize>, usize), (BigRational, u128)> = target
        .iter()
        .map(|s| ((s, 0), (start.clone(), 1)))
        .collect();
    let mut work: u128 = states.len() as u128;
    let mut clique_checks = 0;
    for i in 0..k {
        let mut next: BTreeMap<(Vec<usize>, usize), (BigRational, u128)> = BTreeMap::new();
        for ((set, k_x), (p, paths)) in states {
            let current: CoverSet = set.into_iter().collect();
            let (kept, index) = setup.step(cov, i, &current, params.r)?;
            clique_checks += setup.clique_free as u64;
            let l_i = index.total();
            let mut k_x = k_x;
            if params.mode == ChainMode::Predrawn {
                variable_for(i, k, &mut k_x, l_i, threshold)?;
            }
            let measure = BigRational::new(BigInt::one(), BigInt::from(l_i));
            work += l_i as u128;
            if work > ENUMERATION_LIMIT {
                return Err(Error::TooLarge {
                    what: "chain transitions",
                    count: work,
                    limit: ENUMERATION_LIMIT,
                });
            }
            for chosen in index.iter() {
                let mut out = kept.clone();
                out.extend(chosen);
                let entry = next
                    .entry((out.into_iter().collect(), k_x))
                    .or_insert_with(|| (BigRational::zero(), 0));
                entry.0 += &p * &measure;
                entry.1 += paths;
            }
        }
        states = next;
    }
    let mut law: BTreeMap<Vec<usize>, BigRational> = BTreeMap::new();
    let mut leaves = 0;
    for ((set, _), (p, paths)) in states {
        *law.entry(set).or_insert_with(BigRational::zero) += p;
        leaves += paths;
    }
    let expected: std::collections::BTreeSet<Vec<usize>> = target.iter().collect();
    let mut max_deviation: f64 = 0.0;
    let mut uniform = law.len() == expected.len();
    for s in &expected {
        let p = law.get(s).cloned().unwrap_or_else(BigRational::zero);
        if p != start {
            uniform = false;
        }
        let diff = (p - &start).abs();
        max_deviation = max_deviation.max(ratio_f64(&diff));
    }
    for (s, p) in &law {
        if !expected.contains(s) {
            uniform = false;
            max_deviation = max_deviation.max(ratio_f64(p));
        }
    }
    Ok(ChainDistribution {
        target_size: target.total(),
        outcomes: law
            .iter()
            .map(|(s, p)| (format!("{s:?}"), p.to_string()))
            .collect(),
        leaves,
        clique_checks,
        uniform,
        max_deviation,
    })
}

fn ratio_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::instances::{random_clique_free_cover, twisted_c4};
    use crate::lists::ListAssignment;
    use crate::rng::substream;

    fn star_cover() -> Cover {
        let g = Graph::new(3, [(0, 1), (0, 2)]).unwrap();
        Cover::canonical(&g, &ListAssignment::uniform(3, &[1]).unwrap()).unwrap()
    }

    #[test]
    fn empty_list_is_just_the_initial_draw() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let l = ListAssignment::new(vec![vec![], vec![1, 2]]).unwrap();
        let cov = Cover::canonical(&g, &l).unwrap();
        let run = resampling_chain(&cov, 0, &CoverSet::new(), ChainParams::direct(3), &mut substream(1, 0)).unwrap();
        assert!(run.steps.is_empty());
        assert_eq!(run.result, run.initial);
        let dist = chain_distribution(&cov, 0, &CoverSet::new(), ChainParams::direct(3)).unwrap();
        assert_eq!(dist.target_size, 1);
        assert!(dist.uniform);
    }

    #[test]
    fn star_distribution_is_uniform() {
        let cov = star_cover();
        let setup = ChainSetup::new(&cov, 0, &CoverSet::new(), 3).unwrap();
        assert_eq!(setup.h0_residual, [1, 2].into_iter().collect());
        for params in [ChainParams::direct(3), ChainParams::predrawn(4.0, 3)] {
            let dist = chain_distribution(&cov, 0, &CoverSet::new(), params).unwrap();
            assert_eq!(dist.target_size, 4);
            assert!(dist.uniform, "{dist:?}");
            assert_eq!(dist.max_deviation, 0.0);
        }
    }

    #[test]
    fn rejects_i_prime_inside_h0() {
        let cov = star_cover();
        let err = ChainSetup::new(&cov, 0, &[1].into_iter().collect(), 3);
        assert!(matches!(err, Err(Error::NotIndependent(_))));
    }

    #[test]
    fn twisted_cover_both_modes() {
        let cov = twisted_c4();
        for u in 0..4 {
            for params in [ChainParams::direct(3), ChainParams::predrawn(9.0, 3), ChainParams::predrawn(1.0, 3)] {
                let dist = chain_distribution(&cov, u, &CoverSet::new(), params).unwrap();
                assert!(dist.uniform, "u = {u}, {params:?}");
            }
        }
    }

    #[test]
    fn clique_free_random_covers() {
        let base = crate::graph::generate_graph(&crate::graph::GraphKind::RandomEdgeDensity { n: 5, p: 0.6 }, 2).unwrap();
        for seed in 0..6 {
            let cov = random_clique_free_cover(&base, 2, 3, 1.0, 3, seed).unwrap();
            for u in 0..5 {
                let direct = chain_distribution(&cov, u, &CoverSet::new(), ChainParams::direct(3)).unwrap();
                let pre = chain_distribution(&cov, u, &CoverSet::new(), ChainParams::predrawn(16.0, 3)).unwrap();
                assert!(direct.uniform && pre.uniform);
                assert_eq!(direct.outcomes, pre.outcomes);
                assert!(direct.clique_checks > 0 || direct.leaves == direct.target_size as u128);
            }
        }
    }

    #[test]
    fn runs_are_deterministic_and_land_in_the_target() {
        let cov = twisted_c4();
        let params = ChainParams::predrawn(4.0, 3);
        let a = resampling_chain(&cov, 1, &CoverSet::new(), params, &mut substream(7, 3)).unwrap();
        let b = resampling_chain(&cov, 1, &CoverSet::new(), params, &mut substream(7, 3)).unwrap();
        assert_eq!(a, b);
        assert!(cov.is_independent(&a.result));
        let setup = ChainSetup::new(&cov, 1, &CoverSet::new(), 3).unwrap();
        assert!(a.result.is_subset(&setup.h0_residual));
        assert!(a.k_x <= 2);
        assert!(a.bookkeeping.is_some());
    }
}
