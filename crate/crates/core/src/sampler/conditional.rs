//! Exact checks that conditioning a uniform object on its restriction to a
//! sub-structure leaves the rest uniform over the matching residual family.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::index::{adjacency_masks, independent_masks, ColouringIndex, IndependentSetIndex};
use crate::cover::{Cover, CoverSet};
use crate::graph::Graph;
use crate::lists::{Colour, ListAssignment, PartialColouring};
use crate::Error;

/// Largest number of list entries / cover vertices an exhaustive sweep
/// will range over (one conditioning choice per subset).
pub const SWEEP_MAX_ELEMENTS: usize = 20;

/// Outcome of one conditional-uniformity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionalCheck {
    pub uniform: bool,
    /// Number of objects agreeing with the condition.
    pub conditioned: u64,
    /// Size of the residual family the outcomes should range over.
    pub expected_outcomes: u64,
    /// Residual family members never observed.
    pub missing: u64,
    /// Observed outcomes outside the residual family.
    pub unexpected: u64,
    /// Observed outcome → multiplicity.
    pub table: BTreeMap<String, u64>,
}

impl ConditionalCheck {
    fn from_counts<K: Ord + Clone>(counts: &BTreeMap<K, u64>, expected: &[K], label: impl Fn(&K) -> String) -> Self {
        let missing = expected.iter().filter(|k| !counts.contains_key(k)).count() as u64;
        let unexpected = counts.keys().filter(|k| expected.binary_search(k).is_err()).count() as u64;
        let first = counts.values().next().copied();
        let equal = counts.values().all(|&c| Some(c) == first);
        ConditionalCheck {
            uniform: missing == 0 && unexpected == 0 && equal,
            conditioned: counts.values().sum(),
            expected_outcomes: expected.len() as u64,
            missing,
            unexpected,
            table: counts.iter().map(|(k, &c)| (label(k), c)).collect(),
        }
    }
}

/// Summary of an exhaustive sweep over all conditioning choices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    /// Sub-structures swept (`L' ⊆ L` or `V(H') ⊆ V(H)`).
    pub substructures: u64,
    /// `(sub-structure, condition)` pairs checked.
    pub conditions: u64,
    pub violations: u64,
    /// Up to [`SweepSummary::EXAMPLES`] violating conditions, described.
    pub examples: Vec<String>,
}

impl SweepSummary {
    pub const EXAMPLES: usize = 5;

    fn merge(mut self, other: SweepSummary) -> SweepSummary {
        self.substructures += other.substructures;
        self.conditions += other.conditions;
        self.violations += other.violations;
        self.examples.extend(other.examples);
        self.examples.sort();
        self.examples.truncate(Self::EXAMPLES);
        self
    }

    fn violation(&mut self, description: impl FnOnce() -> String) {
        self.violations += 1;
        if self.examples.len() < Self::EXAMPLES {
            self.examples.push(description());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn colouring_label(w: &PartialColouring) -> String {
    w.colours().iter().map(Colour::to_string).collect::<Vec<_>>().join(",")
}

fn set_label(s: &[usize]) -> String {
    format!("{{{}}}", s.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
}

/// Conditions a uniform partial `L`-colouring `ω` on `ω|_{L'} = ω'` and
/// checks that `ω|_{L−L'}` is then uniform over the partial
/// `(L−L')^{ω'}`-colourings.
pub fn verify_conditional_uniformity_lists(
    g: &Graph,
    lists: &ListAssignment,
    sub: &ListAssignment,
    omega: &PartialColouring,
) -> Result<ConditionalCheck, Error> {
    let rest = lists.minus(sub)?;
    omega.check(g, sub)?;
    let everything = ColouringIndex::new(g, lists)?;
    let mut counts: BTreeMap<PartialColouring, u64> = BTreeMap::new();
    for w in everything.iter() {
        if &w.narrowed(sub)? == omega {
            *counts.entry(w.narrowed(&rest)?).or_default() += 1;
        }
    }
    let expected: Vec<PartialColouring> = ColouringIndex::new(g, &rest.residual_of(g, omega))?.iter().collect();
    Ok(ConditionalCheck::from_counts(&counts, &expected, colouring_label))
}

fn sub_from_mask(entries: &[(usize, Colour)], n: usize, mask: u64) -> ListAssignment {
    let mut lists = vec![Vec::new(); n];
    for (b, &(v, c)) in entries.iter().enumerate() {
        if mask >> b & 1 == 1 {
            lists[v].push(c);
        }
    }
    ListAssignment::new(lists).expect("entries come from a valid assignment")
}

/// [`verify_conditional_uniformity_lists`] for every `L' ⊆ L` and every
/// partial `L'`-colouring `ω'`. One pass over the partial `L`-colourings
/// per `L'` groups them by narrowing.
pub fn sweep_conditional_uniformity_lists(g: &Graph, lists: &ListAssignment) -> Result<SweepSummary, Error> {
    let entries: Vec<(usize, Colour)> = g
        .vertices()
        .flat_map(|v| lists.list(v).iter().map(move |&c| (v, c)))
        .collect();
    if entries.len() > SWEEP_MAX_ELEMENTS {
        return Err(Error::TooLarge {
            what: "list entries for a subassignment sweep",
            count: entries.len() as u128,
            limit: SWEEP_MAX_ELEMENTS as u128,
        });
    }
    let all: Vec<PartialColouring> = ColouringIndex::new(g, lists)?.iter().collect();
    let n = g.vertex_count();
    (0..1u64 << entries.len())
        .into_par_iter()
        .map(|mask| -> Result<SweepSummary, Error> {
            let sub = sub_from_mask(&entries, n, mask);
            let rest = lists.minus(&sub)?;
            let mut groups: HashMap<PartialColouring, Vec<PartialColouring>> = HashMap::new();
            for w in &all {
                groups.entry(w.narrowed(&sub)?).or_default().push(w.narrowed(&rest)?);
            }
            let mut summary = SweepSummary { substructures: 1, ..Default::default() };
            let conditions = ColouringIndex::new(g, &sub)?;
            if conditions.total() != groups.len() as u64 {
                summary.violation(|| format!("L' mask {mask:#x}: narrowings are not exactly the partial L'-colourings"));
            }
            for omega in conditions.iter() {
                summary.conditions += 1;
                let expected: Vec<PartialColouring> =
                    ColouringIndex::new(g, &rest.residual_of(g, &omega))?.iter().collect();
                let mut observed = groups.remove(&omega).unwrap_or_default();
                observed.sort();
                if observed != expected {
                    summary.violation(|| format!("L' mask {mask:#x}, ω' = ({})", colouring_label(&omega)));
                }
            }
            Ok(summary)
        })
        .try_reduce(SweepSummary::default, |a, b| Ok(a.merge(b)))
}

/// Conditions a uniform `I ∈ Ind(H)` on `I ∩ V(H') = I'` and checks that
/// `I ∖ V(H')` is then uniform over `Ind((H − H')^{I'})`.
pub fn verify_conditional_uniformity_cover(cov: &Cover, sub: &CoverSet, i_prime: &CoverSet) -> Result<ConditionalCheck, Error> {
    cov.check_independent(i_prime)?;
    if let Some(&v) = i_prime.iter().find(|v| !sub.contains(v)) {
        return Err(Error::NotIndependent(format!("{v} lies outside H'")));
    }
    if let Some(&v) = sub.iter().find(|&&v| v >= cov.vertex_count()) {
        return Err(Error::InvalidParameter(format!("{v} is not a cover vertex id")));
    }
    let everything = IndependentSetIndex::for_graph(cov.h())?;
    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for set in everything.iter() {
        let (inside, outside): (Vec<usize>, Vec<usize>) = set.into_iter().partition(|v| sub.contains(v));
        if inside.iter().copied().eq(i_prime.iter().copied()) {
            *counts.entry(outside).or_default() += 1;
        }
    }
    let blocked = cov.closed_neighbourhood(i_prime);
    let rest: CoverSet = (0..cov.vertex_count()).filter(|v| !sub.contains(v) && !blocked.contains(v)).collect();
    let mut expected: Vec<Vec<usize>> = IndependentSetIndex::new(&cov.h().induced(&rest)?)?.iter().collect();
    expected.sort();
    Ok(ConditionalCheck::from_counts(&counts, &expected, |s| set_label(s)))
}

/// [`verify_conditional_uniformity_cover`] for every vertex subset `V(H')`
/// and every `I' ∈ Ind(H')`, on bitmasks.
pub fn sweep_conditional_uniformity_cover(cov: &Cover) -> Result<SweepSummary, Error> {
    let size = cov.vertex_count();
    if size > SWEEP_MAX_ELEMENTS {
        return Err(Error::TooLarge {
            what: "cover vertices for a subcover sweep",
            count: size as u128,
            limit: SWEEP_MAX_ELEMENTS as u128,
        });
    }
    let adj = adjacency_masks(cov.h())?;
    let full = (1u64 << size) - 1;
    let all = independent_masks(&adj, full);
    if all.len() as u128 > crate::ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            what: "independent sets",
            count: all.len() as u128,
            limit: crate::ENUMERATION_LIMIT,
        });
    }
    let closed = |set: u64| {
        let mut out = set;
        let mut rest = set;
        while rest != 0 {
            out |= adj[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        out
    };
    let summary = (0..=full)
        .into_par_iter()
        .map(|s| {
            let mut groups: HashMap<u64, Vec<u64>> = HashMap::new();
            for &set in &all {
                groups.entry(set & s).or_default().push(set & !s);
            }
            let mut summary = SweepSummary { substructures: 1, ..Default::default() };
            let conditions = independent_masks(&adj, s);
            if conditions.len() != groups.len() {
                summary.violation(|| format!("H' mask {s:#x}: restrictions are not exactly Ind(H')"));
            }
            for i_prime in conditions {
                summary.conditions += 1;
                let expected = independent_masks(&adj, full & !s & !closed(i_prime));
                let mut observed = groups.remove(&i_prime).unwrap_or_default();
                observed.sort_unstable();
                if observed != expected {
                    summary.violation(|| format!("H' mask {s:#x}, I' mask {i_prime:#x}"));
                }
            }
            summary
        })
        .reduce(SweepSummary::default, SweepSummary::merge);
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_graph, GraphKind};
    use crate::instances::twisted_c4;

    fn la(lists: &[&[Colour]]) -> ListAssignment {
        ListAssignment::new(lists.iter().map(|l| l.to_vec())).unwrap()
    }

    fn k2() -> Graph {
        generate_graph(&GraphKind::Complete { n: 2 }, 0).unwrap()
    }

    #[test]
    fn full_condition_has_one_outcome() {
        let l = la(&[&[1, 2], &[1, 2]]);
        let check = verify_conditional_uniformity_lists(&k2(), &l, &l, &PartialColouring(vec![2, 1])).unwrap();
        assert!(check.uniform);
        assert_eq!(check.conditioned, 1);
        assert_eq!(check.table.keys().collect::<Vec<_>>(), vec!["0,0"]);
    }

    #[test]
    fn second_vertex_fixed() {
        let l = la(&[&[1, 2], &[1, 2]]);
        let sub = la(&[&[], &[1, 2]]);
        let check = verify_conditional_uniformity_lists(&k2(), &l, &sub, &PartialColouring(vec![0, 1])).unwrap();
        assert!(check.uniform);
        assert_eq!(check.table, [("0,0".to_string(), 1), ("2,0".to_string(), 1)].into_iter().collect());
        let bad = verify_conditional_uniformity_lists(&k2(), &l, &sub, &PartialColouring(vec![1, 0]));
        assert!(bad.is_err());
    }

    #[test]
    fn path_sweep() {
        let p3 = generate_graph(&GraphKind::Path { n: 3 }, 0).unwrap();
        let l = la(&[&[1, 2], &[1, 2], &[2, 3]]);
        let summary = sweep_conditional_uniformity_lists(&p3, &l).unwrap();
        assert!(summary.passed(), "{summary:?}");
        assert_eq!(summary.substructures, 64);
    }

    #[test]
    fn single_cover_checks() {
        let l = la(&[&[1], &[1]]);
        let cov = Cover::canonical(&k2(), &l).unwrap();
        let check = verify_conditional_uniformity_cover(&cov, &cov.v_set_ids(1), &CoverSet::new()).unwrap();
        assert!(check.uniform);
        assert_eq!(check.table, [("{}".to_string(), 1), ("{0}".to_string(), 1)].into_iter().collect());
        let all: CoverSet = (0..cov.vertex_count()).collect();
        let check = verify_conditional_uniformity_cover(&cov, &all, &[0].into_iter().collect()).unwrap();
        assert!(check.uniform);
        assert_eq!(check.conditioned, 1);
        assert!(verify_conditional_uniformity_cover(&cov, &all, &[0, 1].into_iter().collect()).is_err());
    }

    #[test]
    fn twisted_sweep() {
        let summary = sweep_conditional_uniformity_cover(&twisted_c4()).unwrap();
        assert!(summary.passed(), "{summary:?}");
        assert_eq!(summary.substructures, 256);
    }

    #[test]
    fn sweep_agrees_with_single_checks() {
        let cov = twisted_c4();
        let sub: CoverSet = [0, 1, 4].into_iter().collect();
        for i_prime in [CoverSet::new(), [0].into_iter().collect(), [0, 4].into_iter().collect()] {
            assert!(verify_conditional_uniformity_cover(&cov, &sub, &i_prime).unwrap().uniform);
        }
    }
}
