//! End-to-end pipelines: uniform start, local resampling of bad events, and
//! a finishing step, with the result validated before it is returned.
//!
//! The resampling loop is a constructive stand-in for the local lemma: the
//! lowest-id vertex with a bad event has the choices within distance 2 of it
//! redrawn uniformly, conditioned on everything else.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::events::{a_u_thresholds, detect_a_u, detect_b_events, detect_dp_a_u, BadEventReport};
use super::finish::{greedy_complete, haxell_transversal, moser_tardos_reed, GreedyOutcome};
use crate::cover::{Cover, CoverSet};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::lists::{ListAssignment, PartialColouring, BLANK};
use crate::rng::{substream, Rng};
use crate::sampler::{ColouringIndex, IndependentSetIndex};
use crate::Error;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    /// Triangle-free list assignments: `A_u` events, Reed finish.
    List,
    /// Triangle-free covers: cover `A_u` events, transversal finish.
    Dp,
    /// `K_r`-free covers: `B¹_u`/`B²_u` events, greedy finish.
    Kr,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Instance {
    List { graph: Graph, lists: ListAssignment },
    Cover { cover: Cover },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub epsilon: f64,
    /// `n` in the `A_u` thresholds; defaults to the shortest list.
    pub n: Option<usize>,
    /// Finishing threshold (`List`, `Dp`) or event threshold (`Kr`);
    /// defaults to `(1−ε)n^ε` and `Δ^{1/2+1/(8r)}` respectively.
    pub l: Option<f64>,
    pub r: usize,
    pub seed: u64,
    /// Ball resamples allowed before giving up.
    pub budget: u64,
    /// Edge resamples allowed in the Reed finish.
    pub finish_budget: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            epsilon: 0.3,
            n: None,
            l: None,
            r: 4,
            seed: 0,
            budget: DEFAULT_BUDGET,
            finish_budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Sample,
    Resample,
    Finish,
    Validate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostic {
    pub stage: Stage,
    pub event: Option<BadEventReport>,
    pub resamples: u64,
    pub seed: u64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Solution {
    pub colouring: PartialColouring,
    /// The `H`-colouring, for cover pipelines.
    pub cover_set: Option<CoverSet>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub pipeline: Pipeline,
    /// Triangle-free (`List`, `Dp`) or `K_r`-free (`Kr`).
    pub clique_free: bool,
    pub initial_bad_events: usize,
    pub resamples: u64,
    pub finish_steps: u64,
    pub solution: Option<Solution>,
    pub diagnostic: Option<Diagnostic>,
}

impl PipelineReport {
    pub fn success(&self) -> bool {
        self.solution.is_some()
    }
}

fn check_epsilon(epsilon: f64) -> Result<(), Error> {
    if !(epsilon > 0.0 && epsilon < 1.0 / 3.0) {
        return Err(Error::InvalidParameter(format!("ε = {epsilon} outside (0, 1/3)")));
    }
    if epsilon * epsilon >= (1.0 - epsilon) / (2.0 * std::f64::consts::E) {
        return Err(Error::InvariantViolated(format!("ε² < (1−ε)/(2e) fails at ε = {epsilon}")));
    }
    Ok(())
}

pub fn solve_pipeline(instance: &Instance, pipeline: Pipeline, cfg: &PipelineConfig) -> Result<PipelineReport, Error> {
    match (instance, pipeline) {
        (Instance::List { graph, lists }, Pipeline::List) => solve_list(graph, lists, cfg),
        (Instance::List { graph, lists }, _) => solve_cover(&Cover::canonical(graph, lists)?, pipeline, cfg),
        (Instance::Cover { cover }, Pipeline::List) => {
            let canonical = Cover::canonical(cover.base(), cover.lists())?;
            if &canonical != cover {
                return Err(Error::InvalidParameter("the list pipeline needs a list instance or a canonical cover".into()));
            }
            solve_list(cover.base(), cover.lists(), cfg)
        }
        (Instance::Cover { cover }, _) => solve_cover(cover, pipeline, cfg),
    }
}

/// Redraws `ω` on `region` uniformly among partial colourings that agree
/// with `ω` elsewhere.
pub fn resample_region(
    g: &Graph,
    lists: &ListAssignment,
    omega: &PartialColouring,
    region: &VertexSet,
    rng: &mut Rng,
) -> Result<PartialColouring, Error> {
    let local = ListAssignment::new(g.vertices().map(|v| {
        if !region.contains(&v) {
            return Vec::new();
        }
        lists
            .list(v)
            .iter()
            .copied()
            .filter(|&c| g.neighbours(v).iter().all(|&w| region.contains(&w) || omega.colour(w) != c))
            .collect::<Vec<_>>()
    }))?;
    let fresh = ColouringIndex::new(g, &local)?.sample(rng);
    let mut out = omega.clone();
    for &v in region {
        out.0[v] = fresh.colour(v);
    }
    Ok(out)
}

/// Redraws `I` on the v-sets of `region` uniformly among independent sets
/// that agree with `I` elsewhere.
pub fn resample_cover_region(cov: &Cover, set: &CoverSet, region: &VertexSet, rng: &mut Rng) -> Result<CoverSet, Error> {
    let inside: CoverSet = region.iter().flat_map(|&v| cov.v_set(v)).collect();
    let kept: CoverSet = set.difference(&inside).copied().collect();
    let blocked = cov.closed_neighbourhood(&kept);
    let allowed: CoverSet = inside.difference(&blocked).copied().collect();
    let fresh = IndependentSetIndex::new(&cov.h().induced(&allowed)?)?.sample(rng);
    let mut out = kept;
    out.extend(fresh);
    Ok(out)
}

fn list_bad_event(g: &Graph, lists: &ListAssignment, omega: &PartialColouring, eps: f64, n: usize) -> Result<(Option<BadEventReport>, usize), Error> {
    let mut first = None;
    let mut count = 0;
    for u in g.vertices() {
        let report = detect_a_u(g, lists, omega, u, eps, n)?;
        if report.holds {
            count += 1;
            first.get_or_insert(report);
        }
    }
    Ok((first, count))
}

fn solve_list(g: &Graph, lists: &ListAssignment, cfg: &PipelineConfig) -> Result<PipelineReport, Error> {
    check_epsilon(cfg.epsilon)?;
    lists.check_graph(g)?;
    let mut report = PipelineReport {
        pipeline: Pipeline::List,
        clique_free: lists.is_clique_free(g, 3)?,
        initial_bad_events: 0,
        resamples: 0,
        finish_steps: 0,
        solution: None,
        diagnostic: None,
    };
    let diagnostic = |stage, event, resamples, detail: String| Diagnostic {
        stage,
        event,
        resamples,
        seed: cfg.seed,
        detail,
    };
    if let Some(v) = g.vertices().find(|&v| lists.list(v).is_empty()) {
        report.diagnostic = Some(diagnostic(Stage::Sample, None, 0, format!("vertex {v} has an empty list")));
        return Ok(report);
    }
    let n = cfg.n.unwrap_or_else(|| lists.min_list_size()).max(1);
    let mut rng = substream(cfg.seed, 1);
    let mut omega = ColouringIndex::new(g, lists)?.sample(&mut rng);
    let (mut bad, count) = list_bad_event(g, lists, &omega, cfg.epsilon, n)?;
    report.initial_bad_events = count;
    while let Some(event) = bad {
        if report.resamples == cfg.budget {
            report.diagnostic = Some(diagnostic(Stage::Resample, Some(event), report.resamples, "resampling budget exhausted".into()));
            return Ok(report);
        }
        report.resamples += 1;
        omega = resample_region(g, lists, &omega, &g.ball(event.vertex, 2)?, &mut rng)?;
        bad = list_bad_event(g, lists, &omega, cfg.epsilon, n)?.0;
    }

    // Reed finish on G[O_ω] with the residual lists, relabelled densely.
    let (l_default, _) = a_u_thresholds(cfg.epsilon, n)?;
    let l = cfg.l.unwrap_or(l_default);
    let residual = lists.residual(g, &omega)?;
    let open: Vec<Vertex> = omega.uncoloured().into_iter().collect();
    let local = |v: Vertex| open.binary_search(&v).expect("open vertex");
    let sub_graph = Graph::new(
        open.len(),
        g.edges()
            .filter(|(a, b)| omega.colour(*a) == BLANK && omega.colour(*b) == BLANK)
            .map(|(a, b)| (local(a), local(b))),
    )?;
    let sub_lists = ListAssignment::new(open.iter().map(|&v| residual.list(v).to_vec()))?;
    let finish = match moser_tardos_reed(&sub_graph, &sub_lists, l, cfg.seed, cfg.finish_budget) {
        Ok(f) => f,
        Err(Error::EmptyList(v)) => {
            report.diagnostic = Some(diagnostic(
                Stage::Finish,
                None,
                report.resamples,
                format!("vertex {} has an empty residual list", open[v]),
            ));
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.finish_steps = finish.resamples;
    let Some(rest) = finish.colouring else {
        report.diagnostic = Some(diagnostic(
            Stage::Finish,
            None,
            report.resamples,
            format!("Reed finish exhausted after {} resamples (condition held: {})", finish.resamples, finish.reed_condition),
        ));
        return Ok(report);
    };
    for (i, &v) in open.iter().enumerate() {
        omega.0[v] = rest.colour(i);
    }
    if !omega.is_full_colouring(g, lists) {
        report.diagnostic = Some(diagnostic(Stage::Validate, None, report.resamples, "result is not a proper list colouring".into()));
        return Ok(report);
    }
    report.solution = Some(Solution { colouring: omega, cover_set: None });
    Ok(report)
}

fn cover_bad_event(cov: &Cover, set: &CoverSet, pipeline: Pipeline, cfg: &PipelineConfig, n: usize, l: f64) -> Result<(Option<BadEventReport>, usize), Error> {
    let residual = cov.residual(set)?;
    let mut first = None;
    let mut count = 0;
    for u in cov.base().vertices() {
        let events = match pipeline {
            Pipeline::Dp => vec![detect_dp_a_u(cov, &residual, u, cfg.epsilon, n)?],
            _ => {
                let (b1, b2) = detect_b_events(cov, &residual, u, l)?;
                vec![b1, b2]
            }
        };
        for e in events.into_iter().filter(|e| e.holds) {
            count += 1;
            first.get_or_insert(e);
        }
    }
    Ok((first, count))
}

fn solve_cover(cov: &Cover, pipeline: Pipeline, cfg: &PipelineConfig) -> Result<PipelineReport, Error> {
    let (n, l) = match pipeline {
        Pipeline::Dp => {
            check_epsilon(cfg.epsilon)?;
            let n = cfg.n.unwrap_or_else(|| cov.lists().min_list_size()).max(1);
            (n, cfg.l.unwrap_or(a_u_thresholds(cfg.epsilon, n)?.0))
        }
        Pipeline::Kr => {
            if cfg.r < 3 {
                return Err(Error::InvalidParameter(format!("clique order {} < 3", cfg.r)));
            }
            let delta = cov.base().max_degree().max(1) as f64;
            (0, cfg.l.unwrap_or(delta.powf(0.5 + 1.0 / (8.0 * cfg.r as f64))))
        }
        Pipeline::List => unreachable!("handled by solve_list"),
    };
    let mut report = PipelineReport {
        pipeline,
        clique_free: cov.is_clique_free(if pipeline == Pipeline::Dp { 3 } else { cfg.r })?,
        initial_bad_events: 0,
        resamples: 0,
        finish_steps: 0,
        solution: None,
        diagnostic: None,
    };
    let diagnostic = |stage, event, resamples, detail: String| Diagnostic {
        stage,
        event,
        resamples,
        seed: cfg.seed,
        detail,
    };
    if let Some(v) = cov.base().vertices().find(|&v| cov.v_set(v).is_empty()) {
        report.diagnostic = Some(diagnostic(Stage::Sample, None, 0, format!("vertex {v} has an empty list")));
        return Ok(report);
    }
    let mut rng = substream(cfg.seed, 1);
    let mut set: CoverSet = IndependentSetIndex::for_graph(cov.h())?.sample(&mut rng).into_iter().collect();
    let (mut bad, count) = cover_bad_event(cov, &set, pipeline, cfg, n, l)?;
    report.initial_bad_events = count;
    while let Some(event) = bad {
        if report.resamples == cfg.budget {
            report.diagnostic = Some(diagnostic(Stage::Resample, Some(event), report.resamples, "resampling budget exhausted".into()));
            return Ok(report);
        }
        report.resamples += 1;
        set = resample_cover_region(cov, &set, &cov.base().ball(event.vertex, 2)?, &mut rng)?;
        bad = cover_bad_event(cov, &set, pipeline, cfg, n, l)?.0;
    }

    let full = match pipeline {
        Pipeline::Dp => {
            let residual = cov.residual(&set)?;
            let f = cov.residual_star(&residual)?;
            let parts: Vec<Vec<usize>> = residual.uncovered.iter().map(|&u| residual.lists[u].iter().copied().collect()).collect();
            let out = haxell_transversal(&f, &parts, l)?;
            report.finish_steps = out.nodes;
            match out.transversal {
                Some(t) => set.iter().copied().chain(t).collect(),
                None => {
                    report.diagnostic = Some(diagnostic(
                        Stage::Finish,
                        None,
                        report.resamples,
                        format!(
                            "no independent transversal (Δ = {}, smallest part {}, hypothesis l/2: {})",
                            out.max_degree, out.min_part, out.hypothesis_half
                        ),
                    ));
                    return Ok(report);
                }
            }
        }
        _ => match greedy_complete(cov, &set)? {
            GreedyOutcome::Complete { colouring } => {
                report.finish_steps = (colouring.len() - set.len()) as u64;
                colouring
            }
            GreedyOutcome::Stuck { vertex, .. } => {
                report.diagnostic = Some(diagnostic(
                    Stage::Finish,
                    None,
                    report.resamples,
                    format!("greedy completion stuck at vertex {vertex}"),
                ));
                return Ok(report);
            }
        },
    };
    if !cov.is_h_colouring(&full) {
        report.diagnostic = Some(diagnostic(Stage::Validate, None, report.resamples, "result is not an H-colouring".into()));
        return Ok(report);
    }
    report.solution = Some(Solution {
        colouring: cov.colouring_of(&full),
        cover_set: Some(full),
    });
    Ok(report)
}

/// A partial colouring that agrees with `omega` within distance 2 of `u`
/// and is redrawn elsewhere, for locality checks.
pub fn perturb_outside_ball(
    g: &Graph,
    lists: &ListAssignment,
    omega: &PartialColouring,
    u: Vertex,
    rng: &mut Rng,
) -> Result<PartialColouring, Error> {
    let ball = g.ball(u, 2)?;
    let outside: VertexSet = g.vertices().filter(|v| !ball.contains(v)).collect();
    let mut out = resample_region(g, lists, omega, &outside, rng)?;
    // occasionally blank a vertex outside as well
    if let Some(&v) = outside.iter().nth(rng.random_range(0..outside.len().max(1))) {
        if rng.random::<bool>() {
            out.0[v] = BLANK;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_graph, GraphKind};
    use crate::instances::twisted_c4;
    use crate::lists::Colour;
    use crate::solver::exhaustive_colourable;

    fn cfg(seed: u64, budget: u64) -> PipelineConfig {
        PipelineConfig { seed, budget, ..Default::default() }
    }

    #[test]
    fn edgeless_succeeds_without_resampling() {
        let g = Graph::empty(4);
        let l = ListAssignment::new(vec![vec![1, 2], vec![3], vec![1, 4], vec![2]]).unwrap();
        let out = solve_pipeline(&Instance::List { graph: g, lists: l }, Pipeline::List, &cfg(1, 10)).unwrap();
        assert!(out.success());
        assert_eq!(out.resamples, 0);
    }

    #[test]
    fn c5_all_pipelines() {
        let g = generate_graph(&GraphKind::Cycle { n: 5 }, 0).unwrap();
        let l = ListAssignment::uniform(5, &[1, 2, 3]).unwrap();
        let inst = Instance::List { graph: g.clone(), lists: l.clone() };
        for p in [Pipeline::List, Pipeline::Dp, Pipeline::Kr] {
            for seed in 0..5 {
                let out = solve_pipeline(&inst, p, &cfg(seed, 10_000)).unwrap();
                let w = out.solution.expect("C5 is 3-choosable").colouring;
                assert!(w.is_full_colouring(&g, &l), "{p:?}");
            }
        }
    }

    #[test]
    fn twisted_c4_reports_failure() {
        let cov = twisted_c4();
        assert!(!exhaustive_colourable(&cov).unwrap().colourable);
        for p in [Pipeline::Dp, Pipeline::Kr] {
            let out = solve_pipeline(&Instance::Cover { cover: cov.clone() }, p, &cfg(3, 200)).unwrap();
            assert!(!out.success());
            assert!(out.diagnostic.is_some());
        }
    }

    #[test]
    fn empty_list_is_immediate() {
        let g = Graph::empty(2);
        let l = ListAssignment::new(vec![vec![1], Vec::<Colour>::new()]).unwrap();
        let out = solve_pipeline(&Instance::List { graph: g, lists: l }, Pipeline::List, &cfg(0, 10)).unwrap();
        assert_eq!(out.diagnostic.unwrap().stage, Stage::Sample);
    }

    #[test]
    fn epsilon_range() {
        let inst = Instance::List { graph: Graph::empty(1), lists: ListAssignment::uniform(1, &[1]).unwrap() };
        let bad = PipelineConfig { epsilon: 0.5, ..Default::default() };
        assert!(solve_pipeline(&inst, Pipeline::List, &bad).is_err());
    }

    #[test]
    fn region_resampling_keeps_the_outside() {
        let g = generate_graph(&GraphKind::Path { n: 6 }, 0).unwrap();
        let l = ListAssignment::uniform(6, &[1, 2]).unwrap();
        let mut rng = substream(4, 0);
        let omega = ColouringIndex::new(&g, &l).unwrap().sample(&mut rng);
        let region: VertexSet = [2, 3].into_iter().collect();
        for _ in 0..50 {
            let next = resample_region(&g, &l, &omega, &region, &mut rng).unwrap();
            assert!(next.is_partial_colouring(&g, &l));
            for v in [0, 1, 4, 5] {
                assert_eq!(next.colour(v), omega.colour(v));
            }
        }
    }

    #[test]
    fn a_u_is_local() {
        let g = generate_graph(&GraphKind::RandomEdgeDensity { n: 9, p: 0.3 }, 5).unwrap();
        let l = crate::instances::random_lists(9, 2, 4, 5).unwrap();
        let idx = ColouringIndex::new(&g, &l).unwrap();
        let mut rng = substream(8, 0);
        for _ in 0..200 {
            let omega = idx.sample(&mut rng);
            let u = rng.random_range(0..9);
            let other = perturb_outside_ball(&g, &l, &omega, u, &mut rng).unwrap();
            let a = detect_a_u(&g, &l, &omega, u, 0.3, 2).unwrap();
            let b = detect_a_u(&g, &l, &other, u, 0.3, 2).unwrap();
            assert_eq!(a, b);
        }
    }
}
