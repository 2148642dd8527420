//! The acceptance criteria as reproducible reports. Each criterion derives
//! all of its randomness from one seed, so a rerun yields identical bytes.

use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use listcolour::cover::CoverSet;
use listcolour::graph::{generate_graph, GraphKind};
use listcolour::instances::{
    random_clique_free_cover, random_cover, random_lists, random_lottery, random_reed_instance,
    random_transversal_instance, twisted_c4,
};
use listcolour::lottery::{monte_carlo_tails, monte_carlo_uncollected, LotteryInstance};
use listcolour::rng::substream;
use listcolour::sampler::{
    chain_distribution, sweep_conditional_uniformity_cover, sweep_conditional_uniformity_lists, ChainParams,
    ChainSetup, ColouringIndex, IndependentSetIndex,
};
use listcolour::shearer::{profile, verify_shearer};
use listcolour::solver::{exhaustive_colourable, haxell_transversal, moser_tardos_reed, solve_pipeline, Instance, Pipeline, PipelineConfig};
use listcolour::{Cover, Graph, ListAssignment, Subgraph, Vertex};

use crate::args::{AcceptanceArgs, GlobalArgs};
use crate::commands::{config, derive_seed, instance_cover, mc_against_exact, shearer_rows};
use crate::report::Report;
use crate::HarnessError;

pub const CRITERIA: u8 = 9;

pub const LOTTERY_TRIALS: u64 = 100_000;

pub fn title(k: u8) -> &'static str {
    match k {
        1 => "lottery exactness",
        2 => "lottery tail bounds",
        3 => "negative correlation",
        4 => "conditional uniformity",
        5 => "resampling chain",
        6 => "independent-set bounds",
        7 => "solver soundness",
        8 => "Reed finishing",
        9 => "independent transversals",
        _ => "unknown",
    }
}

pub fn criterion(k: u8, seed: u64) -> Result<Report, HarnessError> {
    match k {
        1 => lottery_exactness(seed),
        2 => lottery_tails(seed),
        3 => negative_correlation(seed),
        4 => conditional_uniformity(seed),
        5 => resampling_chain(seed),
        6 => independent_set_bounds(seed),
        7 => solver_soundness(seed),
        8 => reed_finishing(seed),
        9 => transversals(seed),
        _ => Err(HarnessError::Config(format!("no acceptance criterion {k}"))),
    }
}

/// One criterion, or all of them folded into a single report.
pub fn acceptance(g: &GlobalArgs, a: &AcceptanceArgs) -> Result<Report, HarnessError> {
    if let Some(k) = a.criterion {
        return criterion(k, g.seed);
    }
    let mut rep = Report::new("acceptance", g.seed, &config(g, a));
    let mut all = serde_json::Map::new();
    for k in 1..=CRITERIA {
        let sub = criterion(k, g.seed)?;
        let failed: Vec<&str> = sub.assertions.iter().filter(|x| !x.passed).map(|x| x.name.as_str()).collect();
        rep.check(&format!("criterion-{k}"), sub.passed, format!("{}; failed: {failed:?}", title(k)));
        all.insert(format!("criterion-{k}"), serde_json::to_value(&sub).expect("serializes"));
    }
    rep.results(&all);
    Ok(rep)
}

fn new_report(k: u8, seed: u64, params: Value) -> Report {
    Report::new(&format!("acceptance-{k}"), seed, &params)
}

fn indices_where<T>(rows: &[T], bad: impl Fn(&T) -> bool) -> Vec<usize> {
    rows.iter().enumerate().filter(|(_, r)| bad(r)).map(|(i, _)| i).collect()
}

#[derive(Serialize)]
struct LotteryRow {
    n: u32,
    m: usize,
    outcomes: u64,
    sandwich_ok: bool,
    product_formula_ok: bool,
    worst_coupon: usize,
    worst_std_errors: f64,
}

fn lottery_exactness(seed: u64) -> Result<Report, HarnessError> {
    const INSTANCES: u64 = 50;
    let mut rep = new_report(1, seed, json!({ "instances": INSTANCES, "trials": LOTTERY_TRIALS, "tolerance_se": 4.0 }));
    let rows: Vec<LotteryRow> = (0..INSTANCES)
        .into_par_iter()
        .map(|j| {
            let mut rng = substream(seed, j);
            let n = rng.random_range(3..=12);
            let m = rng.random_range(2..=8);
            let max_deck = rng.random_range(2..=4);
            let inst = random_lottery(n, m, max_deck, rng.random())?;
            let exact = inst.exact_stats()?;
            let mc = monte_carlo_uncollected(&inst, LOTTERY_TRIALS, rng.random());
            let (c, dev) = mc_against_exact(&mc, &exact.uncollected_probability, LOTTERY_TRIALS);
            Ok(LotteryRow {
                n,
                m,
                outcomes: exact.outcomes,
                sandwich_ok: exact.sandwich_ok,
                product_formula_ok: exact.product_formula_ok,
                worst_coupon: c + 1,
                worst_std_errors: dev,
            })
        })
        .collect::<Result<_, listcolour::Error>>()?;
    let big = indices_where(&rows, |r| r.outcomes > 1 << 20);
    rep.check("outcomes-within-guard", big.is_empty(), format!("instances above 2^20 outcomes: {big:?}"));
    let max_outcomes = rows.iter().map(|r| r.outcomes).max().unwrap_or(0);
    let bad = indices_where(&rows, |r| !r.sandwich_ok);
    rep.check("sandwich", bad.is_empty(), format!("failing instances: {bad:?}"));
    let bad = indices_where(&rows, |r| !r.product_formula_ok);
    rep.check("product-formula", bad.is_empty(), format!("failing instances: {bad:?}"));
    let worst = rows.iter().map(|r| r.worst_std_errors).fold(0.0, f64::max);
    let bad = indices_where(&rows, |r| r.worst_std_errors > 4.0);
    rep.check(
        "mc-within-4-se",
        bad.is_empty(),
        format!("largest deviation {worst:.3} se; failing instances: {bad:?}"),
    );
    rep.results(&json!({ "max_outcomes": max_outcomes, "instances": rows }));
    Ok(rep)
}

fn lottery_tails(seed: u64) -> Result<Report, HarnessError> {
    let mut rep = new_report(2, seed, json!({ "n": [64, 100, 144], "epsilon": [0.3, 0.5], "trials": LOTTERY_TRIALS }));
    let configs: Vec<(u32, f64)> = [64, 100, 144].into_iter().flat_map(|n| [(n, 0.3), (n, 0.5)]).collect();
    let mut reports = Vec::new();
    for (j, &(n, eps)) in configs.iter().enumerate() {
        let nf = n as f64;
        let m = ((1.0 - eps) * nf * nf.ln()).floor() as usize;
        let inst = LotteryInstance::full_decks(n, m)?;
        let tails = monte_carlo_tails(&inst, eps, LOTTERY_TRIALS, derive_seed(seed, j as u64))?;
        rep.check(
            &format!("n{n}-eps{eps}"),
            tails.asserted && tails.passed(),
            format!(
                "m = {m}: small |U| {:.5} vs {:.5}, overmissed {:.5} vs {:.5}",
                tails.small_uncollected.frequency,
                tails.small_uncollected.bound,
                tails.overmissed_worst.frequency,
                tails.overmissed_worst.bound
            ),
        );
        if n == 100 && eps == 0.5 {
            let closed = 100.0 * (100.0f64 / 101.0).powi(230);
            let ok = m == 230
                && (tails.small_uncollected.bound - (-1.25f64).exp()).abs() < 1e-12
                && (tails.expected_uncollected - closed).abs() < 1e-9 * closed;
            rep.check(
                "anchor-n100",
                ok,
                format!(
                    "small |U| bound {:.4}, E|U| {:.4}",
                    tails.small_uncollected.bound, tails.expected_uncollected
                ),
            );
        }
        reports.push(tails);
    }
    rep.results(&reports);
    Ok(rep)
}

fn negative_correlation(seed: u64) -> Result<Report, HarnessError> {
    const INSTANCES: u64 = 100;
    let mut rep = new_report(3, seed, json!({ "instances": INSTANCES, "max_outcomes": 1 << 16 }));
    let rows: Vec<Value> = (0..INSTANCES)
        .into_par_iter()
        .map(|j| {
            let mut rng = substream(seed, j);
            let n = rng.random_range(2..=10);
            let m = rng.random_range(1..=6);
            let max_deck = rng.random_range(1..=3);
            let inst = random_lottery(n, m, max_deck, rng.random())?;
            let exact = inst.exact_stats()?;
            Ok(json!({
                "n": n,
                "m": m,
                "outcomes": exact.outcomes,
                "negative_correlation": exact.negative_correlation,
            }))
        })
        .collect::<Result<_, listcolour::Error>>()?;
    let big = indices_where(&rows, |r| r["outcomes"].as_u64().unwrap_or(u64::MAX) > 1 << 16);
    rep.check("outcomes-within-guard", big.is_empty(), format!("instances above 2^16 outcomes: {big:?}"));
    let bad = indices_where(&rows, |r| r["negative_correlation"]["ok"] != json!(true));
    let subsets: u64 = rows.iter().filter_map(|r| r["negative_correlation"]["subsets_checked"].as_u64()).sum();
    rep.check("zero-violations", bad.is_empty(), format!("{subsets} subsets checked; failing instances: {bad:?}"));
    rep.results(&rows);
    Ok(rep)
}

/// Fixture families for the conditional-uniformity sweep.
fn sweep_fixtures(seed: u64) -> Result<Vec<(String, Instance)>, HarnessError> {
    let mut out = Vec::new();
    let p3 = generate_graph(&GraphKind::Path { n: 3 }, 0)?;
    out.push((
        "path3".to_string(),
        Instance::List {
            graph: p3.clone(),
            lists: ListAssignment::new(vec![vec![1, 2], vec![1, 2], vec![2, 3]])?,
        },
    ));
    out.push(("twisted-c4".to_string(), Instance::Cover { cover: twisted_c4() }));
    let k13 = Graph::new(4, [(0, 1), (0, 2), (0, 3)])?;
    out.push((
        "star".to_string(),
        Instance::Cover {
            cover: Cover::canonical(&k13, &ListAssignment::uniform(4, &[1, 2])?)?,
        },
    ));
    let mut j = 0;
    while out.len() < 24 {
        let mut rng = substream(seed, j);
        j += 1;
        let n = rng.random_range(3..=5);
        let base = generate_graph(&GraphKind::RandomEdgeDensity { n, p: 0.6 }, rng.random())?;
        let size = rng.random_range(1..=2);
        let s = rng.random();
        if out.len() % 2 == 0 {
            let lists = random_lists(n, size, 3, s)?;
            out.push((format!("lists-{j}"), Instance::List { graph: base, lists }));
        } else {
            let cover = random_cover(&base, size + 1, 3, 0.8, s)?;
            out.push((format!("cover-{j}"), Instance::Cover { cover }));
        }
    }
    Ok(out)
}

fn conditional_uniformity(seed: u64) -> Result<Report, HarnessError> {
    let fixtures = sweep_fixtures(seed)?;
    let mut rep = new_report(4, seed, json!({ "fixtures": fixtures.len(), "max_outcomes": 1 << 14 }));
    let rows: Vec<Value> = fixtures
        .par_iter()
        .map(|(name, inst)| {
            let cover = instance_cover(inst)?;
            let (outcomes, list_sweep) = match inst {
                Instance::List { graph, lists } => (
                    ColouringIndex::new(graph, lists)?.total(),
                    Some(sweep_conditional_uniformity_lists(graph, lists)?),
                ),
                Instance::Cover { .. } => (IndependentSetIndex::for_graph(cover.h())?.total(), None),
            };
            let cover_sweep = sweep_conditional_uniformity_cover(&cover)?;
            Ok(json!({
                "name": name,
                "outcomes": outcomes,
                "list_sweep": list_sweep,
                "cover_sweep": cover_sweep,
            }))
        })
        .collect::<Result<_, listcolour::Error>>()?;
    let big = indices_where(&rows, |r| r["outcomes"].as_u64().unwrap_or(u64::MAX) > 1 << 14);
    rep.check("outcomes-within-guard", big.is_empty(), format!("fixtures above 2^14 outcomes: {big:?}"));
    rep.check("fixture-count", rows.len() >= 20, format!("{} fixtures", rows.len()));
    let violations = |key: &str| -> (u64, u64) {
        rows.iter()
            .filter_map(|r| r[key].as_object())
            .fold((0, 0), |(c, v), s| {
                (c + s["conditions"].as_u64().unwrap_or(0), v + s["violations"].as_u64().unwrap_or(1))
            })
    };
    let (lc, lv) = violations("list_sweep");
    rep.check("list-subassignments", lv == 0, format!("{lc} (L', w') conditions, {lv} violations"));
    let (cc, cv) = violations("cover_sweep");
    rep.check("cover-subgraphs", cv == 0, format!("{cc} (H', I') conditions, {cv} violations"));
    rep.results(&rows);
    Ok(rep)
}

struct ChainFixture {
    name: String,
    cover: Cover,
    u: Vertex,
    fixed: CoverSet,
    r: usize,
}

/// Lowest cover vertex whose owner is at distance at least 2 from `u`.
fn far_cover_vertex(cover: &Cover, u: Vertex) -> Option<usize> {
    let dist = cover.base().bfs_distances(u).ok()?;
    (0..cover.vertex_count()).find(|&x| dist[cover.owner(x)].is_none_or(|d| d >= 2))
}

fn chain_fixtures(seed: u64) -> Result<Vec<ChainFixture>, HarnessError> {
    let mut out = vec![ChainFixture {
        name: "twisted-c4".into(),
        cover: twisted_c4(),
        u: 0,
        fixed: CoverSet::new(),
        r: 3,
    }];
    let k13 = Graph::new(4, [(0, 1), (0, 2), (0, 3)])?;
    out.push(ChainFixture {
        name: "star".into(),
        cover: Cover::canonical(&k13, &ListAssignment::uniform(4, &[1, 2])?)?,
        u: 0,
        fixed: CoverSet::new(),
        r: 3,
    });
    for j in 0..14u64 {
        let mut rng = substream(seed, j);
        let n = rng.random_range(4..=6);
        let r = if j % 2 == 0 { 3 } else { 4 };
        let base = generate_graph(&GraphKind::RandomEdgeDensity { n, p: 0.5 }, rng.random())?;
        let cover = random_clique_free_cover(&base, rng.random_range(2..=3), 3, 0.8, r, rng.random())?;
        let u = base.vertices().max_by_key(|&v| (base.degree(v), std::cmp::Reverse(v))).unwrap_or(0);
        out.push(ChainFixture {
            name: format!("k{r}-free-{j}"),
            cover: cover.clone(),
            u,
            fixed: CoverSet::new(),
            r,
        });
        if let Some(x) = far_cover_vertex(&cover, u) {
            out.push(ChainFixture {
                name: format!("k{r}-free-{j}-fixed"),
                cover,
                u,
                fixed: [x].into_iter().collect(),
                r,
            });
        }
    }
    Ok(out)
}

pub const CHAIN_MAX_LEAVES: u128 = 1 << 12;

fn resampling_chain(seed: u64) -> Result<Report, HarnessError> {
    let fixtures = chain_fixtures(seed)?;
    let deltas = [1.0, 16.0, 1e4];
    let mut rep = new_report(5, seed, json!({ "fixtures": fixtures.len(), "predrawn_deltas": deltas, "max_leaves": 1 << 12 }));
    let rows: Vec<Value> = fixtures
        .par_iter()
        .map(|fx| {
            let setup = ChainSetup::new(&fx.cover, fx.u, &fx.fixed, fx.r)?;
            let mut params = vec![ChainParams::direct(fx.r)];
            params.extend(deltas.iter().map(|&d| ChainParams::predrawn(d, fx.r)));
            let runs: Vec<Value> = params
                .iter()
                .map(|&p| {
                    let d = match chain_distribution(&fx.cover, fx.u, &fx.fixed, p) {
                        Ok(d) => d,
                        Err(listcolour::Error::TooLarge { .. }) => return Ok(json!({ "mode": p.mode, "leaves": null })),
                        Err(e) => return Err(e),
                    };
                    Ok(json!({
                        "mode": p.mode,
                        "delta": p.delta,
                        "uniform": d.uniform,
                        "leaves": d.leaves,
                        "target_size": d.target_size,
                        "clique_checks": d.clique_checks,
                        "max_deviation": d.max_deviation,
                    }))
                })
                .collect::<Result<_, listcolour::Error>>()?;
            Ok(json!({
                "name": fx.name,
                "r": fx.r,
                "clique_free": setup.clique_free,
                "runs": runs,
            }))
        })
        .collect::<Result<_, listcolour::Error>>()?;
    // fixtures are drawn at random; only those within the leaf guard count
    let (rows, excluded): (Vec<Value>, Vec<Value>) = rows.into_iter().partition(|r| {
        r["runs"]
            .as_array()
            .into_iter()
            .flatten()
            .all(|x| x["leaves"].as_u64().is_some_and(|l| l as u128 <= CHAIN_MAX_LEAVES))
    });
    let excluded: Vec<&str> = excluded.iter().filter_map(|r| r["name"].as_str()).collect();
    rep.check(
        "fixtures-within-guard",
        rows.len() >= 10,
        format!("{} fixtures with at most 2^12 leaves; excluded {excluded:?}", rows.len()),
    );
    let runs = || rows.iter().flat_map(|r| r["runs"].as_array().into_iter().flatten());
    let bad: Vec<String> = rows
        .iter()
        .flat_map(|r| {
            r["runs"].as_array().into_iter().flatten().filter(|x| x["uniform"] != json!(true)).map(move |x| {
                format!("{} {} {}", r["name"], x["mode"], x["delta"])
            })
        })
        .collect();
    rep.check("uniform-both-modes", bad.is_empty(), format!("{} runs; non-uniform: {bad:?}", runs().count()));
    let free: Vec<&Value> = rows.iter().filter(|r| r["clique_free"] == json!(true)).collect();
    let checks: u64 = free
        .iter()
        .flat_map(|r| r["runs"].as_array().into_iter().flatten())
        .filter_map(|x| x["clique_checks"].as_u64())
        .sum();
    rep.check(
        "intermediate-clique-free",
        !free.is_empty() && checks > 0,
        format!("{checks} intermediate graphs checked on {} K_r-free fixtures", free.len()),
    );
    rep.results(&rows);
    Ok(rep)
}

fn independent_set_bounds(seed: u64) -> Result<Report, HarnessError> {
    let mut rep = new_report(6, seed, json!({ "graphs": 500, "max_n": 22, "r": [3, 4, 5] }));
    let rows = shearer_rows(seed, 500, 22, &[3, 4, 5], None)?;
    let bad: Vec<usize> = rows.iter().filter(|r| !r.ok).map(|r| r.index).collect();
    rep.check("sandwich", bad.is_empty(), format!("{} graphs, violations {bad:?}", rows.len()));
    let c5 = profile(&generate_graph(&GraphKind::Cycle { n: 5 }, 0)?, 3)?;
    let check = verify_shearer(&c5);
    rep.check(
        "c5-anchor",
        c5.ind == 11 && (check.lower - 2.355).abs() < 1e-3 && check.ok,
        format!("ind(C5) = {} >= {:.4}", c5.ind, check.lower),
    );
    rep.results(&rows);
    Ok(rep)
}

pub const SOLVER_BUDGET: u64 = 2_000;

fn random_solver_instance(seed: u64, j: u64) -> Result<(Instance, Pipeline), HarnessError> {
    let mut rng = substream(seed, j);
    let n = rng.random_range(3..=7);
    let p = rng.random_range(0.3..=0.7);
    let base = generate_graph(&GraphKind::RandomEdgeDensity { n, p }, rng.random())?;
    let size = rng.random_range(1..=3);
    let palette = rng.random_range(size.max(2)..=4) as u32;
    let s = rng.random();
    Ok(match j % 4 {
        0 => (Instance::List { graph: base, lists: random_lists(n, size, palette, s)? }, Pipeline::List),
        1 => {
            let lists = random_lists(n, size, palette, s)?;
            (Instance::Cover { cover: Cover::canonical(&base, &lists)? }, Pipeline::Dp)
        }
        2 => (Instance::Cover { cover: random_cover(&base, size, palette, 1.0, s)? }, Pipeline::Dp),
        _ => (Instance::Cover { cover: random_cover(&base, size, palette, 1.0, s)? }, Pipeline::Kr),
    })
}

fn solver_soundness(seed: u64) -> Result<Report, HarnessError> {
    const INSTANCES: u64 = 200;
    let mut rep = new_report(7, seed, json!({ "instances": INSTANCES, "budget": SOLVER_BUDGET }));
    let cfg = |s: u64| PipelineConfig {
        r: 3,
        seed: s,
        budget: SOLVER_BUDGET,
        finish_budget: 10 * SOLVER_BUDGET,
        ..PipelineConfig::default()
    };
    let rows: Vec<Value> = (0..INSTANCES)
        .into_par_iter()
        .map(|j| {
            let (inst, pipeline) = random_solver_instance(seed, j)?;
            let cover = instance_cover(&inst)?;
            let oracle = exhaustive_colourable(&cover)?;
            let report = solve_pipeline(&inst, pipeline, &cfg(derive_seed(seed, j)))?;
            let valid = match &report.solution {
                Some(sol) => match &sol.cover_set {
                    Some(set) => cover.is_h_colouring(set),
                    None => cover.is_h_colouring(&cover.embed(&sol.colouring)?),
                },
                None => true,
            };
            Ok(json!({
                "index": j,
                "pipeline": pipeline,
                "success": report.success(),
                "valid": valid,
                "colourable": oracle.colourable,
                "resamples": report.resamples,
            }))
        })
        .collect::<Result<_, HarnessError>>()?;
    let contradict = indices_where(&rows, |r| r["success"] == json!(true) && r["colourable"] == json!(false));
    rep.check("no-contradiction", contradict.is_empty(), format!("successes on infeasible instances: {contradict:?}"));
    let invalid = indices_where(&rows, |r| r["valid"] != json!(true));
    let successes = rows.iter().filter(|r| r["success"] == json!(true)).count();
    let feasible = rows.iter().filter(|r| r["colourable"] == json!(true)).count();
    rep.check(
        "successes-validate",
        invalid.is_empty(),
        format!("{successes} successes, {feasible} feasible of {}; invalid: {invalid:?}", rows.len()),
    );
    let twisted = Instance::Cover { cover: twisted_c4() };
    let oracle = exhaustive_colourable(&twisted_c4())?;
    let mut verdicts = Vec::new();
    for pipeline in [Pipeline::Dp, Pipeline::Kr] {
        let report = solve_pipeline(&twisted, pipeline, &cfg(seed))?;
        verdicts.push(json!({ "pipeline": pipeline, "success": report.success(), "diagnostic": report.diagnostic }));
    }
    let infeasible = !oracle.colourable && verdicts.iter().all(|v| v["success"] == json!(false));
    rep.check("twisted-c4-infeasible", infeasible, "oracle and both cover pipelines report no H-colouring");
    rep.results(&json!({ "instances": rows, "twisted_c4": { "oracle": oracle, "pipelines": verdicts } }));
    Ok(rep)
}

pub const REED_BUDGET: u64 = 1_000_000;

fn reed_finishing(seed: u64) -> Result<Report, HarnessError> {
    const INSTANCES: u64 = 100;
    let mut rep = new_report(8, seed, json!({ "instances": INSTANCES, "budget": REED_BUDGET }));
    let rows: Vec<Value> = (0..INSTANCES)
        .into_par_iter()
        .map(|j| {
            let mut rng = substream(seed, j);
            let n = rng.random_range(8..=40);
            let p = rng.random_range(0.05..=0.5);
            let l = rng.random_range(8..=14) as f64;
            let (g, lists) = random_reed_instance(n, p, l, rng.random())?;
            let condition = lists.reed_condition(&g, l)?.is_none();
            let out = moser_tardos_reed(&g, &lists, l, rng.random(), REED_BUDGET)?;
            let valid = out.colouring.as_ref().is_some_and(|c| c.is_full_colouring(&g, &lists));
            Ok(json!({
                "n": n,
                "edges": g.edge_count(),
                "l": l,
                "reed_condition": condition,
                "success": out.colouring.is_some(),
                "valid": valid,
                "resamples": out.resamples,
            }))
        })
        .collect::<Result<_, listcolour::Error>>()?;
    let bad = indices_where(&rows, |r| r["reed_condition"] != json!(true));
    rep.check("instances-satisfy-condition", bad.is_empty(), format!("failing instances: {bad:?}"));
    let bad = indices_where(&rows, |r| r["success"] != json!(true) || r["valid"] != json!(true));
    let most = rows.iter().filter_map(|r| r["resamples"].as_u64()).max().unwrap_or(0);
    rep.check("all-succeed-and-validate", bad.is_empty(), format!("at most {most} resamples; failing: {bad:?}"));
    rep.results(&rows);
    Ok(rep)
}

fn transversals(seed: u64) -> Result<Report, HarnessError> {
    const INSTANCES: u64 = 100;
    let mut rep = new_report(9, seed, json!({ "instances": INSTANCES }));
    let rows: Vec<Value> = (0..INSTANCES)
        .into_par_iter()
        .map(|j| {
            let mut rng = substream(seed, j);
            let parts = rng.random_range(2..=7);
            let l = 2 * rng.random_range(1..=3);
            let (f, partition) = random_transversal_instance(parts, l, l / 2, 1.0, rng.random())?;
            let out = haxell_transversal(&Subgraph::full(&f), &partition, l as f64)?;
            let valid = out.transversal.as_ref().is_some_and(|t| {
                t.len() == parts
                    && t.iter().zip(&partition).all(|(v, part)| part.contains(v))
                    && t.iter().enumerate().all(|(i, &a)| t[i + 1..].iter().all(|&b| !f.has_edge(a, b)))
            });
            Ok(json!({
                "parts": parts,
                "l": l,
                "edges": f.edge_count(),
                "max_degree": out.max_degree,
                "hypothesis": out.hypothesis_half,
                "found": out.transversal.is_some(),
                "valid": valid,
                "nodes": out.nodes,
            }))
        })
        .collect::<Result<_, listcolour::Error>>()?;
    let bad = indices_where(&rows, |r| r["hypothesis"] != json!(true));
    rep.check("instances-satisfy-hypothesis", bad.is_empty(), format!("failing instances: {bad:?}"));
    let bad = indices_where(&rows, |r| r["found"] != json!(true) || r["valid"] != json!(true));
    rep.check("transversal-found-and-valid", bad.is_empty(), format!("failing instances: {bad:?}"));
    rep.results(&rows);
    Ok(rep)
}
