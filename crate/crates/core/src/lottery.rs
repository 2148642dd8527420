//! The coupon-collector lottery with blank coupons.
//!
//! An instance is a family of decks `L_1, …, L_m ⊆ [n]`. One draw picks,
//! independently for every deck, a uniform element of `{0} ∪ L_i`, where 0
//! is the blank. A deck whose draw is blank is *missed*; coupons of `[n]`
//! drawn by no deck are *uncollected*.

use std::collections::HashMap;

use num_bigint::BigUint;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rng::{self, substream};
use crate::{Error, ENUMERATION_LIMIT};

pub type Coupon = u32;

/// Largest `n` for which [`LotteryInstance::exact_stats`] checks negative
/// correlation over all `2^n` coupon subsets.
pub const NEGATIVE_CORRELATION_MAX_N: u32 = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceJson", into = "InstanceJson")]
pub struct LotteryInstance {
    n: u32,
    decks: Vec<Vec<Coupon>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceJson {
    pub n: u32,
    pub decks: Vec<Vec<Coupon>>,
}

impl TryFrom<InstanceJson> for LotteryInstance {
    type Error = Error;
    fn try_from(j: InstanceJson) -> Result<Self, Error> {
        LotteryInstance::new(j.n, j.decks)
    }
}

impl From<LotteryInstance> for InstanceJson {
    fn from(i: LotteryInstance) -> Self {
        InstanceJson { n: i.n, decks: i.decks }
    }
}

/// `(c_1, …, c_m)`, one draw per deck.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LotteryOutcome(pub Vec<Coupon>);

impl LotteryInstance {
    /// Every deck must be a nonempty subset of `[n] = {1, …, n}`.
    pub fn new(n: u32, decks: Vec<Vec<Coupon>>) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::InvalidInstance("n must be positive".into()));
        }
        let decks = decks
            .into_iter()
            .enumerate()
            .map(|(i, mut deck)| {
                deck.sort_unstable();
                deck.dedup();
                if deck.is_empty() {
                    return Err(Error::InvalidInstance(format!("deck {i} is empty")));
                }
                if let Some(&c) = deck.iter().find(|&&c| c == 0 || c > n) {
                    return Err(Error::InvalidInstance(format!("deck {i} holds coupon {c} outside [1, {n}]")));
                }
                Ok(deck)
            })
            .collect::<Result<_, _>>()?;
        Ok(LotteryInstance { n, decks })
    }

    /// `m` copies of the full deck `[n]`.
    pub fn full_decks(n: u32, m: usize) -> Result<Self, Error> {
        LotteryInstance::new(n, vec![(1..=n).collect(); m])
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> usize {
        self.decks.len()
    }

    pub fn decks(&self) -> &[Vec<Coupon>] {
        &self.decks
    }

    /// Size of the draw space `∏ (|L_i| + 1)`, saturating.
    pub fn outcome_count(&self) -> u128 {
        self.decks
            .iter()
            .fold(1u128, |acc, d| acc.saturating_mul(d.len() as u128 + 1))
    }

    pub fn draw(&self, rng: &mut rng::Rng) -> LotteryOutcome {
        LotteryOutcome(
            self.decks
                .iter()
                .map(|deck| {
                    let k = rng.random_range(0..=deck.len());
                    if k == 0 { 0 } else { deck[k - 1] }
                })
                .collect(),
        )
    }

    /// The draw for trial `trial` of the run keyed by `seed`.
    pub fn draw_seeded(&self, seed: u64, trial: u64) -> LotteryOutcome {
        self.draw(&mut substream(seed, trial))
    }

    fn check_outcome(&self, out: &LotteryOutcome) -> Result<(), Error> {
        if out.0.len() != self.decks.len() {
            return Err(Error::SizeMismatch {
                expected: self.decks.len(),
                got: out.0.len(),
            });
        }
        for (i, (&c, deck)) in out.0.iter().zip(&self.decks).enumerate() {
            if c != 0 && deck.binary_search(&c).is_err() {
                return Err(Error::InvalidInstance(format!("draw {c} is not in deck {i}")));
            }
        }
        Ok(())
    }

    /// `U = [n] ∖ {c_1, …, c_m}`.
    pub fn uncollected(&self, out: &LotteryOutcome) -> Result<Vec<Coupon>, Error> {
        self.check_outcome(out)?;
        let mut collected = vec![false; self.n as usize + 1];
        for &c in &out.0 {
            collected[c as usize] = true;
        }
        Ok((1..=self.n).filter(|&c| !collected[c as usize]).collect())
    }

    /// `|𝓛'_c|`: the number of missed decks containing `c`.
    pub fn missed_containing(&self, out: &LotteryOutcome, c: Coupon) -> Result<usize, Error> {
        self.check_outcome(out)?;
        if c == 0 || c > self.n {
            return Err(Error::InvalidParameter(format!("coupon {c} not in [1, {}]", self.n)));
        }
        Ok(self
            .decks
            .iter()
            .zip(&out.0)
            .filter(|(deck, &draw)| draw == 0 && deck.binary_search(&c).is_ok())
            .count())
    }

    /// `Pr(c ∈ U) = ∏_{L ∋ c} |L|/(|L|+1)`, for every coupon.
    pub fn uncollected_probability_closed_form(&self) -> Vec<f64> {
        let mut p = vec![1.0; self.n as usize];
        for deck in &self.decks {
            let f = deck.len() as f64 / (deck.len() as f64 + 1.0);
            for &c in deck {
                p[c as usize - 1] *= f;
            }
        }
        p
    }

    /// The lower and upper ends of the exponential sandwich for
    /// `Pr(c ∈ U)`: `exp(−Σ 1/|L|)` and `exp(−Σ 1/(|L|+1))` over `L ∋ c`.
    pub fn sandwich_bounds(&self) -> Vec<(f64, f64)> {
        let mut sums = vec![(0.0, 0.0); self.n as usize];
        for deck in &self.decks {
            let k = deck.len() as f64;
            for &c in deck {
                let s = &mut sums[c as usize - 1];
                s.0 += 1.0 / k;
                s.1 += 1.0 / (k + 1.0);
            }
        }
        sums.into_iter().map(|(a, b)| ((-a).exp(), (-b).exp())).collect()
    }

    /// Exact statistics of the lottery by enumerating all `∏ (|L_i|+1)`
    /// outcomes. Requires `n ≤ 64`; negative correlation of the collected
    /// indicators is checked when `n ≤ 20`.
    pub fn exact_stats(&self) -> Result<ExactStats, Error> {
        let total = self.outcome_count();
        if total > ENUMERATION_LIMIT {
            return Err(Error::TooLarge {
                what: "lottery outcomes",
                count: total,
                limit: ENUMERATION_LIMIT,
            });
        }
        if self.n > 64 {
            return Err(Error::InvalidParameter(format!(
                "exact enumeration supports n <= 64, got {}",
                self.n
            )));
        }
        let n = self.n as usize;
        let masks = self.collected_mask_distribution();

        let mut uncollected_counts = vec![0u64; n];
        let mut size_counts = vec![0u64; n + 1];
        for (&mask, &count) in &masks {
            size_counts[n - mask.count_ones() as usize] += count;
            for (c, slot) in uncollected_counts.iter_mut().enumerate() {
                if mask >> c & 1 == 0 {
                    *slot += count;
                }
            }
        }

        let t = total as f64;
        let uncollected_probability: Vec<f64> = uncollected_counts.iter().map(|&k| k as f64 / t).collect();
        let product_formula_ok = self.check_product_formula(&uncollected_counts, total);
        let sandwich_ok = uncollected_probability
            .iter()
            .zip(self.sandwich_bounds())
            .all(|(&p, (lo, hi))| lo <= p * (1.0 + 1e-12) && p <= hi * (1.0 + 1e-12));
        let expected_uncollected: f64 = uncollected_probability.iter().sum();
        let expectation_bound = n as f64 * (-(self.m() as f64) / n as f64).exp();
        let negative_correlation = (self.n <= NEGATIVE_CORRELATION_MAX_N)
            .then(|| negative_correlation(n, &masks, total));

        Ok(ExactStats {
            outcomes: total as u64,
            uncollected_counts,
            uncollected_probability,
            product_formula_ok,
            sandwich_ok,
            size_distribution: size_counts.iter().map(|&k| k as f64 / t).collect(),
            size_counts,
            expected_uncollected,
            expectation_bound,
            expectation_bound_ok: expected_uncollected >= expectation_bound * (1.0 - 1e-12),
            negative_correlation,
        })
    }

    /// Outcome counts grouped by collected set (bit `c − 1` set when coupon
    /// `c` was drawn). Walks the draw space as an odometer, keeping per-coupon
    /// draw multiplicities so each step updates the mask in O(1).
    fn collected_mask_distribution(&self) -> HashMap<u64, u64> {
        let m = self.m();
        let mut digits = vec![0usize; m];
        let mut multiplicity = vec![0u32; self.n as usize + 1];
        let mut mask = 0u64;
        let mut out: HashMap<u64, u64> = HashMap::new();
        loop {
            *out.entry(mask).or_default() += 1;
            // advance
            let mut i = 0;
            loop {
                if i == m {
                    return out;
                }
                let deck = &self.decks[i];
                let old = if digits[i] == 0 { 0 } else { deck[digits[i] - 1] };
                if old != 0 {
                    multiplicity[old as usize] -= 1;
                    if multiplicity[old as usize] == 0 {
                        mask &= !(1u64 << (old - 1));
                    }
                }
                digits[i] += 1;
                if digits[i] <= deck.len() {
                    let new = deck[digits[i] - 1];
                    multiplicity[new as usize] += 1;
                    mask |= 1u64 << (new - 1);
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    /// Exact integer check of `#{c ∈ U} = T · ∏_{L∋c} |L|/(|L|+1)`.
    fn check_product_formula(&self, counts: &[u64], total: u128) -> bool {
        (1..=self.n).all(|c| {
            let (mut num, mut den) = (1u128, 1u128);
            for deck in self.decks.iter().filter(|d| d.binary_search(&c).is_ok()) {
                num *= deck.len() as u128;
                den *= deck.len() as u128 + 1;
            }
            counts[c as usize - 1] as u128 * den == total * num
        })
    }
}

fn negative_correlation(n: usize, masks: &HashMap<u64, u64>, total: u128) -> NegativeCorrelation {
    // at_least[S] = number of outcomes whose collected set contains S
    let size = 1usize << n;
    let mut at_least = vec![0u64; size];
    for (&mask, &count) in masks {
        at_least[mask as usize] += count;
    }
    for bit in 0..n {
        for s in 0..size {
            if s >> bit & 1 == 0 {
                at_least[s] += at_least[s | 1 << bit];
            }
        }
    }
    let singles: Vec<u64> = (0..n).map(|i| at_least[1 << i]).collect();
    let ln_total = (total as f64).ln();
    let mut counterexample = None;
    for s in 1..size {
        let members = s.count_ones();
        if members < 2 || at_least[s] == 0 {
            continue;
        }
        // Pr(∧ Y_i) ≤ ∏ Pr(Y_i)  ⇔  f(S)·T^{|S|−1} ≤ ∏ f({i})
        let lhs = (at_least[s] as f64).ln() + (members - 1) as f64 * ln_total;
        let rhs: f64 = (0..n).filter(|i| s >> i & 1 == 1).map(|i| (singles[i] as f64).ln()).sum();
        let holds = if lhs < rhs - 1e-9 {
            true
        } else if lhs > rhs + 1e-9 {
            false
        } else {
            let lhs = BigUint::from(at_least[s]) * BigUint::from(total).pow(members - 1);
            let rhs = (0..n)
                .filter(|i| s >> i & 1 == 1)
                .fold(BigUint::from(1u32), |acc, i| acc * singles[i]);
            lhs <= rhs
        };
        if !holds {
            counterexample = Some((0..n).filter(|i| s >> i & 1 == 1).map(|i| i as Coupon + 1).collect());
            break;
        }
    }
    NegativeCorrelation {
        ok: counterexample.is_none(),
        subsets_checked: size as u64,
        counterexample,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactStats {
    pub outcomes: u64,
    /// Outcomes in which coupon `c` (index `c − 1`) is uncollected.
    pub uncollected_counts: Vec<u64>,
    pub uncollected_probability: Vec<f64>,
    /// Enumerated `Pr(c ∈ U)` equals the product formula, in exact integers.
    pub product_formula_ok: bool,
    /// `exp(−Σ 1/|L|) ≤ Pr(c ∈ U) ≤ exp(−Σ 1/(|L|+1))` for every `c`.
    pub sandwich_ok: bool,
    /// Outcomes with `|U| = k`, indexed by `k`.
    pub size_counts: Vec<u64>,
    pub size_distribution: Vec<f64>,
    pub expected_uncollected: f64,
    /// `n · exp(−m/n)`.
    pub expectation_bound: f64,
    pub expectation_bound_ok: bool,
    /// `None` when `n` is too large for the subset sweep.
    pub negative_correlation: Option<NegativeCorrelation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegativeCorrelation {
    pub ok: bool,
    pub subsets_checked: u64,
    pub counterexample: Option<Vec<Coupon>>,
}

/// One tail event compared against its bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailCheck {
    pub bound: f64,
    pub hits: u64,
    pub frequency: f64,
    /// Binomial standard error `sqrt(bound (1 − bound) / trials)`.
    pub std_error: f64,
    /// `frequency > bound + 3 · std_error`.
    pub violated: bool,
}

impl TailCheck {
    fn new(bound: f64, hits: u64, trials: u64) -> Self {
        let frequency = hits as f64 / trials as f64;
        let std_error = (bound * (1.0 - bound) / trials as f64).sqrt();
        TailCheck {
            bound,
            hits,
            frequency,
            std_error,
            violated: frequency > bound + 3.0 * std_error,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub n: u32,
    pub m: usize,
    pub epsilon: f64,
    pub trials: u64,
    pub seed: u64,
    /// `(1 − ε) n log n`.
    pub max_decks: f64,
    /// `(1 − ε) n^ε`.
    pub size_threshold: f64,
    /// `ε² n^ε`.
    pub missed_threshold: f64,
    /// `Σ_c Pr(c ∈ U)` from the product formula.
    pub expected_uncollected: f64,
    /// `n e^{−m/n}`, which is at least `n^ε` under the precondition.
    pub expectation_lower_bound: f64,
    /// Small `U`: `|U| < (1 − ε) n^ε`, against `exp(−ε² n^ε / 2)`.
    pub small_uncollected: TailCheck,
    /// Overmissed: the coupon with the highest frequency of
    /// `c ∈ U and |𝓛'_c| > ε² n^ε`, against `exp(−ε² n^ε / 6)`.
    pub overmissed_worst: TailCheck,
    pub overmissed_worst_coupon: Coupon,
    /// Whether the bounds are treated as assertions (`n ≥ 64` and
    /// `ε ∈ {0.3, 0.5, 0.7}`); otherwise values are reported only.
    pub asserted: bool,
}

impl TailReport {
    pub fn passed(&self) -> bool {
        !self.asserted || (!self.small_uncollected.violated && !self.overmissed_worst.violated)
    }
}

/// Whether the tail bounds are asserted for this `(n, ε)`.
pub fn tail_bounds_asserted(n: u32, epsilon: f64) -> bool {
    n >= 64 && [0.3, 0.5, 0.7].iter().any(|&e| (e - epsilon).abs() < 1e-12)
}

/// Monte Carlo estimate of both tail events of the lottery, trial `t` using
/// stream `(seed, t)`. Rejects `m > (1 − ε) n log n`.
pub fn monte_carlo_tails(inst: &LotteryInstance, epsilon: f64, trials: u64, seed: u64) -> Result<TailReport, Error> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} not in (0, 1)")));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let n = inst.n();
    let nf = n as f64;
    let max_decks = (1.0 - epsilon) * nf * nf.ln();
    if inst.m() as f64 > max_decks {
        return Err(Error::LotteryPrecondition {
            m: inst.m(),
            threshold: max_decks,
        });
    }
    let n_eps = nf.powf(epsilon);
    let size_threshold = (1.0 - epsilon) * n_eps;
    let missed_threshold = epsilon * epsilon * n_eps;

    let (small_hits, over_hits) = (0..trials)
        .into_par_iter()
        .fold(
            || (0u64, vec![0u64; n as usize]),
            |(mut small, mut over), t| {
                let out = inst.draw_seeded(seed, t);
                let mut collected = vec![false; n as usize + 1];
                let mut missed = vec![0u32; n as usize + 1];
                for (deck, &c) in inst.decks().iter().zip(&out.0) {
                    if c == 0 {
                        for &x in deck {
                            missed[x as usize] += 1;
                        }
                    } else {
                        collected[c as usize] = true;
                    }
                }
                let u_size = (1..=n as usize).filter(|&c| !collected[c]).count();
                if (u_size as f64) < size_threshold {
                    small += 1;
                }
                for c in 1..=n as usize {
                    if !collected[c] && missed[c] as f64 > missed_threshold {
                        over[c - 1] += 1;
                    }
                }
                (small, over)
            },
        )
        .reduce(
            || (0u64, vec![0u64; n as usize]),
            |(a, mut va), (b, vb)| {
                va.iter_mut().zip(vb).for_each(|(x, y)| *x += y);
                (a + b, va)
            },
        );

    let (worst_idx, &worst_hits) = over_hits
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("n >= 1");
    Ok(TailReport {
        n,
        m: inst.m(),
        epsilon,
        trials,
        seed,
        max_decks,
        size_threshold,
        missed_threshold,
        expected_uncollected: inst.uncollected_probability_closed_form().iter().sum(),
        expectation_lower_bound: nf * (-(inst.m() as f64) / nf).exp(),
        small_uncollected: TailCheck::new((-missed_threshold / 2.0).exp(), small_hits, trials),
        overmissed_worst: TailCheck::new((-missed_threshold / 6.0).exp(), worst_hits, trials),
        overmissed_worst_coupon: worst_idx as Coupon + 1,
        asserted: tail_bounds_asserted(n, epsilon),
    })
}

/// Per-coupon count of trials (out of `trials`) in which the coupon was
/// left uncollected.
pub fn monte_carlo_uncollected(inst: &LotteryInstance, trials: u64, seed: u64) -> Vec<u64> {
    let n = inst.n() as usize;
    (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; n],
            |mut acc, t| {
                let out = inst.draw_seeded(seed, t);
                let mut collected = vec![false; n + 1];
                for &c in &out.0 {
                    collected[c as usize] = true;
                }
                for c in 1..=n {
                    if !collected[c] {
                        acc[c - 1] += 1;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

fn check_chernoff(a: f64, mean: f64) -> Result<(), Error> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::InvalidParameter(format!("a = {a} not in (0, 1]")));
    }
    if !(mean >= 0.0) {
        return Err(Error::InvalidParameter(format!("E(X) = {mean} is negative")));
    }
    Ok(())
}

/// `exp(−a² E(X) / 3)`, bounding `Pr(X > (1+a) E(X))` for negatively
/// correlated indicators.
pub fn chernoff_upper(a: f64, mean: f64) -> Result<f64, Error> {
    check_chernoff(a, mean)?;
    Ok((-a * a * mean / 3.0).exp())
}

/// `exp(−a² E(X) / 2)`, bounding `Pr(X < (1−a) E(X))` when the complements
/// are negatively correlated.
pub fn chernoff_lower(a: f64, mean: f64) -> Result<f64, Error> {
    check_chernoff(a, mean)?;
    Ok((-a * a * mean / 2.0).exp())
}

/// The symmetric lopsided local lemma condition `p ≤ 1 / (e (D + 1))`.
pub fn lll_threshold(dependency: u64, p: f64) -> Result<bool, Error> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} not in [0, 1]")));
    }
    Ok(p <= 1.0 / (std::f64::consts::E * (dependency as f64 + 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n: u32, decks: &[&[Coupon]]) -> LotteryInstance {
        LotteryInstance::new(n, decks.iter().map(|d| d.to_vec()).collect()).unwrap()
    }

    #[test]
    fn rejects_bad_decks() {
        assert!(LotteryInstance::new(2, vec![vec![]]).is_err());
        assert!(LotteryInstance::new(2, vec![vec![3]]).is_err());
        assert!(LotteryInstance::new(2, vec![vec![0, 1]]).is_err());
        assert!(LotteryInstance::new(0, vec![]).is_err());
    }

    #[test]
    fn single_deck_draw_is_fair_coin() {
        let i = inst(1, &[&[1]]);
        let ones = (0..10_000).filter(|&t| i.draw_seeded(5, t).0[0] == 1).count();
        assert!((ones as f64 - 5000.0).abs() < 4.0 * 50.0);
        assert!((0..100).all(|t| matches!(i.draw_seeded(5, t).0[0], 0 | 1)));
        assert_eq!(i.draw_seeded(5, 17), i.draw_seeded(5, 17));
    }

    #[test]
    fn empty_lottery() {
        let i = LotteryInstance::full_decks(3, 0).unwrap();
        let out = i.draw_seeded(1, 0);
        assert!(out.0.is_empty());
        assert_eq!(i.uncollected(&out).unwrap(), vec![1, 2, 3]);
        assert_eq!(i.outcome_count(), 1);
    }

    #[test]
    fn uncollected_examples() {
        let i = inst(2, &[&[1, 2], &[1, 2]]);
        assert_eq!(i.uncollected(&LotteryOutcome(vec![0, 0])).unwrap(), vec![1, 2]);
        assert!(i.uncollected(&LotteryOutcome(vec![1, 2])).unwrap().is_empty());
        let j = inst(3, &[&[1], &[2]]);
        assert_eq!(j.uncollected(&LotteryOutcome(vec![1, 0])).unwrap(), vec![2, 3]);
        assert!(j.uncollected(&LotteryOutcome(vec![1])).is_err());
        assert!(j.uncollected(&LotteryOutcome(vec![2, 0])).is_err());
    }

    #[test]
    fn missed_examples() {
        let i = inst(2, &[&[1], &[1]]);
        assert_eq!(i.missed_containing(&LotteryOutcome(vec![0, 0]), 2).unwrap(), 0);
        assert_eq!(i.missed_containing(&LotteryOutcome(vec![0, 0]), 1).unwrap(), 2);
        let j = inst(2, &[&[1], &[1, 2]]);
        assert_eq!(j.missed_containing(&LotteryOutcome(vec![0, 2]), 1).unwrap(), 1);
        assert!(j.missed_containing(&LotteryOutcome(vec![0, 2]), 3).is_err());
    }

    /// Brute-force oracle: list every outcome and count directly.
    fn brute_force(i: &LotteryInstance) -> (u64, Vec<u64>, Vec<u64>) {
        let mut outcomes: Vec<Vec<Coupon>> = vec![vec![]];
        for deck in i.decks() {
            outcomes = outcomes
                .into_iter()
                .flat_map(|o| {
                    std::iter::once(0).chain(deck.iter().copied()).map(move |c| {
                        let mut o = o.clone();
                        o.push(c);
                        o
                    })
                })
                .collect();
        }
        let n = i.n() as usize;
        let mut per = vec![0u64; n];
        let mut sizes = vec![0u64; n + 1];
        for o in &outcomes {
            let u = i.uncollected(&LotteryOutcome(o.clone())).unwrap();
            sizes[u.len()] += 1;
            for c in u {
                per[c as usize - 1] += 1;
            }
        }
        (outcomes.len() as u64, per, sizes)
    }

    #[test]
    fn exact_two_full_decks() {
        let i = inst(2, &[&[1, 2], &[1, 2]]);
        let (total, per, sizes) = brute_force(&i);
        assert_eq!((total, per.clone(), sizes.clone()), (9, vec![4, 4], vec![2, 6, 1]));
        let s = i.exact_stats().unwrap();
        assert_eq!(s.outcomes, 9);
        assert_eq!(s.uncollected_counts, per);
        assert_eq!(s.size_counts, sizes);
        assert!((s.uncollected_probability[0] - 4.0 / 9.0).abs() < 1e-15);
        assert!((s.expected_uncollected - 8.0 / 9.0).abs() < 1e-15);
        assert!((s.expectation_bound - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
        assert!(s.expectation_bound_ok && s.product_formula_ok && s.sandwich_ok);
        assert!(s.negative_correlation.unwrap().ok);
    }

    #[test]
    fn exact_single_and_independent() {
        let s = inst(1, &[&[1]]).exact_stats().unwrap();
        assert_eq!(s.uncollected_probability, vec![0.5]);
        let s = inst(2, &[&[1], &[2]]).exact_stats().unwrap();
        let nc = s.negative_correlation.unwrap();
        assert!(nc.ok);
        assert_eq!(nc.subsets_checked, 4);
    }

    #[test]
    fn exact_matches_brute_force_on_mixed_decks() {
        let i = inst(4, &[&[1, 2], &[2, 3, 4], &[1], &[1, 4], &[3]]);
        let (total, per, sizes) = brute_force(&i);
        let s = i.exact_stats().unwrap();
        assert_eq!(s.outcomes, total);
        assert_eq!(s.uncollected_counts, per);
        assert_eq!(s.size_counts, sizes);
        assert!(s.product_formula_ok && s.sandwich_ok && s.expectation_bound_ok);
        assert!(s.negative_correlation.unwrap().ok);
    }

    #[test]
    fn exact_guard() {
        let big = LotteryInstance::full_decks(3, 13).unwrap(); // 4^13 = 2^26
        assert!(matches!(big.exact_stats(), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn tails_precondition_and_degenerate_case() {
        let over = LotteryInstance::full_decks(100, 300).unwrap();
        match monte_carlo_tails(&over, 0.5, 10, 1) {
            Err(Error::LotteryPrecondition { m: 300, threshold }) => {
                assert!((threshold - 0.5 * 100.0 * 100f64.ln()).abs() < 1e-9);
                assert!((threshold - 230.2585).abs() < 1e-3);
            }
            other => panic!("{other:?}"),
        }
        let none = LotteryInstance::full_decks(100, 0).unwrap();
        let r = monte_carlo_tails(&none, 0.5, 200, 1).unwrap();
        assert_eq!(r.small_uncollected.hits, 0);
        assert_eq!(r.overmissed_worst.hits, 0);
        assert!(r.passed());
    }

    #[test]
    fn tails_anchor_values() {
        let i = LotteryInstance::full_decks(100, 230).unwrap();
        let r = monte_carlo_tails(&i, 0.5, 2_000, 3).unwrap();
        assert!((r.small_uncollected.bound - (-1.25f64).exp()).abs() < 1e-12);
        assert!((r.small_uncollected.bound - 0.2865).abs() < 1e-4);
        let closed = 100.0 * (100.0f64 / 101.0).powi(230);
        assert!((r.expected_uncollected - closed).abs() < 1e-9);
        assert!((closed - 10.1).abs() < 0.05, "{closed}");
        assert!(r.expected_uncollected >= 10.0);
        assert!(r.asserted);
    }

    #[test]
    fn tails_are_deterministic_per_seed() {
        let i = LotteryInstance::full_decks(64, 100).unwrap();
        let a = monte_carlo_tails(&i, 0.3, 500, 11).unwrap();
        let b = monte_carlo_tails(&i, 0.3, 500, 11).unwrap();
        assert_eq!(a, b);
    }

    /// Exact binomial upper tail, summed from the top.
    fn binomial_upper_tail(n: u64, p: f64, threshold: u64) -> f64 {
        let mut total = 0.0;
        for k in threshold + 1..=n {
            let ln_choose: f64 = (1..=k).map(|j| ((n - k + j) as f64 / j as f64).ln()).sum();
            total += (ln_choose + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()).exp();
        }
        total
    }

    #[test]
    fn chernoff_examples() {
        let b = chernoff_upper(0.5, 50.0).unwrap();
        assert!((b - (-25.0f64 / 6.0).exp()).abs() < 1e-15);
        assert!((b - 0.01550).abs() < 1e-4);
        let exact = binomial_upper_tail(100, 0.5, 75);
        // Pr(X >= 76) for X ~ Bin(100, 1/2), summed exactly in rationals
        assert!((exact / 9.050013106514628e-8 - 1.0).abs() < 1e-9, "{exact}");
        assert!(exact <= b);
        assert!(chernoff_upper(1e-9, 50.0).unwrap() > 1.0 - 1e-12);
        assert!(chernoff_lower(1e-9, 50.0).unwrap() > 1.0 - 1e-12);
        assert!((chernoff_lower(0.5, 8.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        assert!(chernoff_upper(0.0, 1.0).is_err());
        assert!(chernoff_upper(1.5, 1.0).is_err());
        assert!(chernoff_lower(0.5, -1.0).is_err());
    }

    #[test]
    fn lll_examples() {
        assert!(lll_threshold(0, 0.3).unwrap());
        assert!(!lll_threshold(0, 0.37).unwrap());
        assert!(lll_threshold(9, 1.0 / (std::f64::consts::E * 10.0)).unwrap());
        assert!(lll_threshold(1, 1.5).is_err());
    }
}
