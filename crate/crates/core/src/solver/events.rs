//! Bad-event detectors for the list, DP and `K_r` resampling pipelines.

use serde::Serialize;

use crate::cover::{Cover, CoverResidual, CoverSet};
use crate::graph::{Graph, Vertex};
use crate::lists::{Colour, ListAssignment, PartialColouring, BLANK};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    /// Uncoloured vertex with a short residual list or a crowded colour.
    #[serde(rename = "A_u")]
    Au,
    /// Monochromatic edge `uv` in colour `c`.
    #[serde(rename = "A_uv_c")]
    AuvC,
    /// Cover form of `A_u`.
    #[serde(rename = "DP-A_u")]
    DpAu,
    /// Uncovered vertex with a short residual list.
    #[serde(rename = "B1_u")]
    B1u,
    /// High residual degree with all residual neighbours well supplied.
    #[serde(rename = "B2_u")]
    B2u,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BadEventReport {
    pub kind: EventKind,
    pub vertex: Vertex,
    /// Second endpoint for `A_uv_c`.
    pub other: Option<Vertex>,
    pub colour: Option<Colour>,
    pub holds: bool,
    /// `|L^ω(u)|` or `|L^I_u|`.
    pub residual_list: Option<usize>,
    /// `d_{G_I}(u)` for `B2_u`.
    pub residual_degree: Option<usize>,
    /// Availability of each residual colour (list form) or `H*`-degree of
    /// each residual cover vertex, by colour.
    pub availabilities: Vec<(Colour, usize)>,
    /// `|L^I_v|` for each `v ∈ N_{G_I}(u)` (`B2_u`).
    pub neighbour_lists: Vec<(Vertex, usize)>,
    /// Colours whose availability exceeds the threshold.
    pub violating: Vec<Colour>,
    pub list_threshold: Option<f64>,
    pub availability_threshold: Option<f64>,
}

impl BadEventReport {
    fn new(kind: EventKind, vertex: Vertex) -> Self {
        BadEventReport {
            kind,
            vertex,
            other: None,
            colour: None,
            holds: false,
            residual_list: None,
            residual_degree: None,
            availabilities: Vec::new(),
            neighbour_lists: Vec::new(),
            violating: Vec::new(),
            list_threshold: None,
            availability_threshold: None,
        }
    }
}

/// Thresholds `((1−ε)n^ε, ε²n^ε)` shared by both `A_u` forms.
pub fn a_u_thresholds(epsilon: f64, n: usize) -> Result<(f64, f64), Error> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("ε = {epsilon} outside (0, 1)")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let power = (n as f64).powf(epsilon);
    Ok(((1.0 - epsilon) * power, epsilon * epsilon * power))
}

fn residual_at(g: &Graph, lists: &ListAssignment, omega: &PartialColouring, v: Vertex) -> Vec<Colour> {
    if omega.colour(v) != BLANK {
        return Vec::new();
    }
    lists
        .list(v)
        .iter()
        .copied()
        .filter(|&c| g.neighbours(v).iter().all(|&w| omega.colour(w) != c))
        .collect()
}

/// `A_u` for a partial `L`-colouring `ω`. Depends only on `ω` within
/// distance 2 of `u`.
pub fn detect_a_u(
    g: &Graph,
    lists: &ListAssignment,
    omega: &PartialColouring,
    u: Vertex,
    epsilon: f64,
    n: usize,
) -> Result<BadEventReport, Error> {
    let (list_threshold, availability_threshold) = a_u_thresholds(epsilon, n)?;
    g.check_vertex(u)?;
    omega.check(g, lists)?;
    let mut report = BadEventReport::new(EventKind::Au, u);
    report.list_threshold = Some(list_threshold);
    report.availability_threshold = Some(availability_threshold);
    if omega.colour(u) != BLANK {
        return Ok(report);
    }
    let here = residual_at(g, lists, omega, u);
    let around: Vec<(Vertex, Vec<Colour>)> = g
        .neighbours(u)
        .iter()
        .map(|&v| (v, residual_at(g, lists, omega, v)))
        .collect();
    for &c in &here {
        let a = around.iter().filter(|(_, r)| r.binary_search(&c).is_ok()).count();
        report.availabilities.push((c, a));
        if a as f64 > availability_threshold {
            report.violating.push(c);
        }
    }
    report.residual_list = Some(here.len());
    report.holds = (here.len() as f64) < list_threshold || !report.violating.is_empty();
    Ok(report)
}

/// The lowest monochromatic edge `uv`, `u < v`, as an `A_uv_c` report.
pub fn detect_monochromatic_edge(g: &Graph, omega: &PartialColouring) -> Option<BadEventReport> {
    g.edges()
        .find(|&(u, v)| omega.colour(u) != BLANK && omega.colour(u) == omega.colour(v))
        .map(|(u, v)| {
            let mut report = BadEventReport::new(EventKind::AuvC, u);
            report.other = Some(v);
            report.colour = Some(omega.colour(u));
            report.holds = true;
            report
        })
}

/// Colour label of each cover vertex in `set`, ascending by id.
fn colours_of(cov: &Cover, set: &CoverSet) -> Vec<Colour> {
    set.iter().map(|&i| cov.cover_vertex(i).colour).collect()
}

/// `(B¹_u, B²_u)` for an independent set `I` of `H` at list threshold `l`.
pub fn detect_b_events(cov: &Cover, residual: &CoverResidual, u: Vertex, l: f64) -> Result<(BadEventReport, BadEventReport), Error> {
    cov.base().check_vertex(u)?;
    let mut b1 = BadEventReport::new(EventKind::B1u, u);
    let mut b2 = BadEventReport::new(EventKind::B2u, u);
    b1.list_threshold = Some(l);
    b2.list_threshold = Some(l);
    let uncovered = residual.uncovered.contains(&u);
    let size = residual.lists[u].len();
    b1.residual_list = Some(size);
    b1.holds = uncovered && (size as f64) < l;
    if uncovered {
        let nbrs = residual.base.neighbours(u);
        b2.residual_degree = Some(nbrs.len());
        b2.residual_list = Some(size);
        b2.neighbour_lists = nbrs.iter().map(|&v| (v, residual.lists[v].len())).collect();
        b2.holds = nbrs.len() as f64 >= l && nbrs.iter().all(|&v| residual.lists[v].len() as f64 >= l);
    }
    Ok((b1, b2))
}

/// Cover form of `A_u`: `I ∩ L_u = ∅` and either `|L^I_u|` is short or
/// some `u_c ∈ L^I_u` has too many neighbours in `(H^I)*`.
pub fn detect_dp_a_u(cov: &Cover, residual: &CoverResidual, u: Vertex, epsilon: f64, n: usize) -> Result<BadEventReport, Error> {
    let (list_threshold, availability_threshold) = a_u_thresholds(epsilon, n)?;
    cov.base().check_vertex(u)?;
    let mut report = BadEventReport::new(EventKind::DpAu, u);
    report.list_threshold = Some(list_threshold);
    report.availability_threshold = Some(availability_threshold);
    if !residual.uncovered.contains(&u) {
        return Ok(report);
    }
    let here = &residual.lists[u];
    let alive = &residual.conflict.vertices;
    for (&uc, c) in here.iter().zip(colours_of(cov, here)) {
        let a = cov.h_star().neighbours(uc).iter().filter(|w| alive.contains(w)).count();
        report.availabilities.push((c, a));
        if a as f64 > availability_threshold {
            report.violating.push(c);
        }
    }
    report.residual_list = Some(here.len());
    report.holds = (here.len() as f64) < list_threshold || !report.violating.is_empty();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_graph, GraphKind};

    fn la(lists: &[&[Colour]]) -> ListAssignment {
        ListAssignment::new(lists.iter().map(|l| l.to_vec())).unwrap()
    }

    #[test]
    fn coloured_vertex_never_bad() {
        let g = generate_graph(&GraphKind::Complete { n: 2 }, 0).unwrap();
        let l = la(&[&[1], &[2]]);
        let r = detect_a_u(&g, &l, &PartialColouring(vec![1, 0]), 0, 0.3, 4).unwrap();
        assert!(!r.holds);
    }

    #[test]
    fn empty_residual_is_bad() {
        let g = generate_graph(&GraphKind::Complete { n: 2 }, 0).unwrap();
        let l = la(&[&[1], &[1]]);
        let r = detect_a_u(&g, &l, &PartialColouring(vec![1, 0]), 1, 0.3, 4).unwrap();
        assert!(r.holds);
        assert_eq!(r.residual_list, Some(0));
    }

    #[test]
    fn availability_clause() {
        // u = 0 with neighbours 1, 2, 3, 4; vertex 1 holds colour 9, the
        // others are uncoloured and share colour 1 with u.
        let g = Graph::new(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let l = la(&[&[1, 2, 3], &[9], &[1], &[1], &[5]]);
        let omega = PartialColouring(vec![0, 9, 0, 0, 0]);
        let r = detect_a_u(&g, &l, &omega, 0, 0.5, 16).unwrap();
        assert_eq!(r.residual_list, Some(3));
        assert_eq!(r.list_threshold, Some(2.0));
        assert_eq!(r.availability_threshold, Some(1.0));
        assert_eq!(r.availabilities, vec![(1, 2), (2, 0), (3, 0)]);
        assert_eq!(r.violating, vec![1]);
        assert!(r.holds);
        assert!(detect_a_u(&g, &l, &omega, 0, 1.0, 16).is_err());
        assert!(detect_a_u(&g, &l, &omega, 0, 0.0, 16).is_err());
    }

    #[test]
    fn b_events() {
        let g = generate_graph(&GraphKind::Complete { n: 2 }, 0).unwrap();
        let cov = Cover::canonical(&g, &la(&[&[1], &[1]])).unwrap();
        let res = cov.residual(&CoverSet::new()).unwrap();
        let (b1, b2) = detect_b_events(&cov, &res, 0, 1.0).unwrap();
        assert!(!b1.holds);
        assert!(b2.holds);
        let covered = cov.residual(&[0].into_iter().collect()).unwrap();
        let (b1, b2) = detect_b_events(&cov, &covered, 0, 1.0).unwrap();
        assert!(!b1.holds && !b2.holds);
        assert!(!detect_dp_a_u(&cov, &covered, 0, 0.3, 1).unwrap().holds);

        let iso = Cover::canonical(&Graph::empty(1), &la(&[&[1, 2, 3]])).unwrap();
        let res = iso.residual(&CoverSet::new()).unwrap();
        assert!(detect_b_events(&iso, &res, 0, 5.0).unwrap().0.holds);
    }

    #[test]
    fn dp_a_u_matches_list_form_on_canonical_covers() {
        let g = generate_graph(&GraphKind::Cycle { n: 5 }, 0).unwrap();
        let l = la(&[&[1, 2], &[2, 3], &[1, 3], &[1, 2], &[2, 3]]);
        let cov = Cover::canonical(&g, &l).unwrap();
        let idx = crate::sampler::ColouringIndex::new(&g, &l).unwrap();
        for omega in idx.iter() {
            let set = cov.embed(&omega).unwrap();
            let res = cov.residual(&set).unwrap();
            for u in 0..5 {
                let a = detect_a_u(&g, &l, &omega, u, 0.3, 2).unwrap();
                let b = detect_dp_a_u(&cov, &res, u, 0.3, 2).unwrap();
                assert_eq!(a.holds, b.holds);
                assert_eq!(a.availabilities, b.availabilities);
            }
        }
    }
}
