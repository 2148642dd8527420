//! Independent-set counts of `K_r`-free graphs: the two-sided bound
//! `2^{|V|^{1/(r−1)} − 1} ≤ ind(F) ≤ 2^{|V|}` and the fraction of small
//! independent sets.

use serde::Serialize;

use crate::graph::{Graph, Subgraph};
use crate::sampler::IndependentSetIndex;
use crate::Error;

/// Relative slack for comparing integer counts with real-valued bounds.
pub const RELATIVE_SLACK: f64 = 1e-12;

fn le(a: f64, b: f64) -> bool {
    a <= b + RELATIVE_SLACK * b.abs().max(1.0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndProfile {
    pub n: usize,
    pub r: usize,
    pub ind: u64,
    /// Independent sets by size, from size 0.
    pub histogram: Vec<u64>,
}

/// Exact `ind(F)` and size histogram, rejecting graphs that contain `K_r`.
pub fn profile(f: &Graph, r: usize) -> Result<IndProfile, Error> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("clique order {r} < 2")));
    }
    if let Some(clique) = f.find_clique(r) {
        return Err(Error::InvalidInstance(format!("graph contains K_{r} on {clique:?}")));
    }
    let index = IndependentSetIndex::new(&Subgraph::full(f))?;
    Ok(IndProfile {
        n: f.vertex_count(),
        r,
        ind: index.total(),
        histogram: index.size_histogram().to_vec(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShearerCheck {
    pub lower: f64,
    pub upper: f64,
    pub ok: bool,
}

pub fn verify_shearer(p: &IndProfile) -> ShearerCheck {
    let n = p.n as f64;
    let lower = 2f64.powf(n.powf(1.0 / (p.r as f64 - 1.0)) - 1.0);
    let upper = 2f64.powf(n);
    let ind = p.ind as f64;
    ShearerCheck {
        lower,
        upper,
        ok: le(lower, ind) && le(ind, upper),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

impl Inequality {
    fn new(lhs: f64, rhs: f64) -> Self {
        Inequality { lhs, rhs, ok: le(lhs, rhs) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Preconditions {
    /// `(1 + log₂ i)^{r−1} ≥ n`.
    pub clique_bound: bool,
    /// `n ≥ log₂ i`.
    pub n_covers_log: bool,
    /// `log₂ i ≥ 2t`.
    pub log_covers_t: bool,
}

impl Preconditions {
    pub fn all(&self) -> bool {
        self.clique_bound && self.n_covers_log && self.log_covers_t
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmallSetReport {
    pub ind: u64,
    pub n: usize,
    pub r: usize,
    /// `((1 + 1/r)/(r−1)) · log₂ i / log₂log₂ i`.
    pub threshold: f64,
    pub t: u64,
    /// Independent sets of size below `threshold`.
    pub below_threshold: u64,
    /// Independent sets of size below `t`.
    pub below_t: u64,
    /// `i^{1 − 1/r²}`.
    pub bound: f64,
    pub fraction_ok: bool,
    /// `Σ_{j ≤ t} C(n, j)`.
    pub subset_sum: f64,
    pub subset_claim_ok: bool,
    pub preconditions: Preconditions,
    /// The six steps from `Σ_{j≤t} C(n,j)` to `i^{1−1/r²}`, in order.
    pub chain: Vec<Inequality>,
    /// Whether every precondition and chain step holds, so that the bounds
    /// are asserted at this size.
    pub asserted: bool,
}

impl SmallSetReport {
    /// `None` when the conclusion is only reported, not asserted.
    pub fn claims_ok(&self) -> Option<bool> {
        self.asserted.then_some(self.fraction_ok && self.subset_claim_ok)
    }
}

fn binomial_prefix(n: usize, t: u64) -> f64 {
    let mut term: u128 = 1;
    let mut sum = 1.0;
    for j in 1..=(t as usize).min(n) {
        match term.checked_mul((n + 1 - j) as u128) {
            Some(x) => term = x / j as u128,
            None => return f64::INFINITY,
        }
        sum += term as f64;
    }
    sum
}

/// `x^t` with `0^0 = 1`, for the chain's `(a/t)^t` factors at `t = 0`.
fn over_t_pow(a: f64, t: u64) -> f64 {
    if t == 0 {
        1.0
    } else {
        (a / t as f64).powi(t as i32)
    }
}

/// The small-set fraction for a profile. `None` when `log₂log₂ i` is not
/// positive (`i ≤ 2`).
pub fn small_set_fraction(p: &IndProfile) -> Option<SmallSetReport> {
    if p.ind <= 2 {
        return None;
    }
    let i = p.ind as f64;
    let r = p.r as f64;
    let n = p.n as f64;
    let log = i.log2();
    let loglog = log.log2();
    let threshold = (1.0 + 1.0 / r) / (r - 1.0) * log / loglog;
    let t = threshold.floor() as u64;
    let below = |cut: f64| -> u64 {
        p.histogram
            .iter()
            .enumerate()
            .filter(|(j, _)| (*j as f64) < cut)
            .map(|(_, &c)| c)
            .sum()
    };
    let below_threshold = below(threshold);
    let below_t = below(t as f64);
    let bound = i.powf(1.0 - 1.0 / (r * r));
    let subset_sum = binomial_prefix(p.n, t);
    let tf = t as f64;
    let e = std::f64::consts::E;
    let power = log.powf((r - 1.0) * tf);
    let s1 = (tf + 1.0) * over_t_pow(e * n, t);
    let s2 = (tf + 1.0) * over_t_pow(e, t) * (1.0 + log).powf((r - 1.0) * tf);
    let s3 = over_t_pow(3.0, t) * power;
    let s4 = (3.0 * (r - 1.0) * loglog / log).powi(t as i32) * power;
    let s5 = log.powf((1.0 - 1.0 / r) * (r - 1.0) * tf);
    let s6 = log.powf((1.0 - 1.0 / r) * (1.0 + 1.0 / r) * log / loglog);
    let chain = vec![
        Inequality::new(subset_sum, s1),
        Inequality::new(s1, s2),
        Inequality::new(s2, s3),
        Inequality::new(s3, s4),
        Inequality::new(s4, s5),
        Inequality::new(s5, s6),
    ];
    let preconditions = Preconditions {
        clique_bound: le(n, (1.0 + log).powf(r - 1.0)),
        n_covers_log: le(log, n),
        log_covers_t: le(2.0 * tf, log),
    };
    let asserted = preconditions.all() && chain.iter().all(|s| s.ok);
    Some(SmallSetReport {
        ind: p.ind,
        n: p.n,
        r: p.r,
        threshold,
        t,
        below_threshold,
        below_t,
        bound,
        fraction_ok: le(below_threshold as f64, bound),
        subset_sum,
        subset_claim_ok: le(subset_sum, bound),
        preconditions,
        chain,
        asserted,
    })
}
