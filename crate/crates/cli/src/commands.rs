use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use listcolour::cover::CoverSet;
use listcolour::graph::{generate_graph, GraphKind};
use listcolour::instances::{
    random_clique_free_cover, random_clique_free_graph, random_cover, random_lists, random_lottery,
    random_reed_instance, twisted_c4,
};
use listcolour::lottery::{monte_carlo_tails, monte_carlo_uncollected, LotteryInstance};
use listcolour::rng::substream;
use listcolour::sampler::{
    chain_distribution, chi_square_uniform, resampling_chain, sweep_conditional_uniformity_cover,
    sweep_conditional_uniformity_lists, tally, ChainMode, ChainParams, ChainSetup, ColouringIndex,
    IndependentSetIndex, SweepSummary, SWEEP_MAX_ELEMENTS,
};
use listcolour::shearer::{profile, small_set_fraction, verify_shearer};
use listcolour::solver::{exhaustive_colourable, solve_pipeline, Instance, Pipeline, PipelineConfig, Solution};
use listcolour::{Cover, Graph, ListAssignment};

use crate::args::*;
use crate::io;
use crate::report::{Report, Table};
use crate::HarnessError;

/// Largest outcome count for which `lottery` enumerates exactly.
pub const LOTTERY_EXACT_LIMIT: u128 = 1 << 20;

/// Chi-square tests are asserted only when every outcome expects at least
/// this many hits.
pub const MIN_EXPECTED_COUNT: f64 = 5.0;

pub const CHI_SQUARE_LEVEL: f64 = 0.999;

/// What a subcommand writes: a report, or a generated instance file.
pub enum Output {
    Report(Report),
    Artifact(String),
}

pub fn config(global: &GlobalArgs, args: &impl Serialize) -> Value {
    json!({ "global": global, "args": args })
}

/// A seed for item `index` of a sweep, independent across items.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    substream(seed, index).random()
}

/// Records a chi-square uniformity check of `counts`, asserting it only when
/// the expected count per outcome is large enough for the approximation.
pub fn check_chi_square(rep: &mut Report, name: &str, counts: &[u64]) -> Value {
    let draws: u64 = counts.iter().sum();
    let k = counts.len();
    if k <= 1 {
        rep.check(name, true, format!("{k} outcome(s); nothing to test"));
        return json!({ "outcomes": k, "draws": draws });
    }
    let stat = chi_square_uniform(counts);
    let quantile = ChiSquared::new((k - 1) as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(CHI_SQUARE_LEVEL);
    let expected = draws as f64 / k as f64;
    let asserted = expected >= MIN_EXPECTED_COUNT;
    let ok = stat <= quantile;
    let detail = format!(
        "chi2 = {stat:.4} vs {CHI_SQUARE_LEVEL} quantile {quantile:.4} on {} df{}",
        k - 1,
        if asserted { "" } else { " (reported only: expected count below 5)" }
    );
    rep.check(name, ok || !asserted, detail);
    json!({
        "outcomes": k,
        "draws": draws,
        "statistic": stat,
        "quantile": quantile,
        "asserted": asserted,
        "ok": ok,
    })
}

pub fn run(cli: &Cli) -> Result<Output, HarnessError> {
    let g = &cli.global;
    Ok(match &cli.command {
        Command::Lottery(a) => Output::Report(lottery(g, a)?),
        Command::Sample(a) => Output::Report(sample(g, a)?),
        Command::Chain(a) => Output::Report(chain(g, a)?),
        Command::Solve(a) => Output::Report(solve(g, "solve", &a.pipeline, Pipeline::List, config(g, a))?),
        Command::DpSolve(a) => {
            let pipeline = match a.kind {
                CoverPipelineArg::Dp => Pipeline::Dp,
                CoverPipelineArg::Kr => Pipeline::Kr,
            };
            Output::Report(solve(g, "dp-solve", &a.pipeline, pipeline, config(g, a))?)
        }
        Command::VerifyCover(a) => Output::Report(verify_cover(g, a)?),
        Command::Shearer(a) => Output::Report(shearer(g, a)?),
        Command::Gen(a) => Output::Artifact(io::pretty(&generate(g.seed, a)?)),
        Command::Acceptance(a) => Output::Report(crate::suite::acceptance(g, a)?),
    })
}

pub fn lottery(g: &GlobalArgs, a: &LotteryArgs) -> Result<Report, HarnessError> {
    if !(a.epsilon > 0.0 && a.epsilon < 1.0) {
        return Err(HarnessError::Config(format!("--epsilon {} not in (0, 1)", a.epsilon)));
    }
    let inst: LotteryInstance = match &a.input {
        Some(path) => io::read_json(path)?,
        None => {
            let n = a.n as f64;
            let m = a.m.unwrap_or(((1.0 - a.epsilon) * n * n.ln()).floor() as usize);
            LotteryInstance::full_decks(a.n, m)?
        }
    };
    let mut rep = Report::new("lottery", g.seed, &config(g, a));
    let mut results = serde_json::Map::new();
    results.insert("n".into(), json!(inst.n()));
    results.insert("m".into(), json!(inst.m()));
    let mut table = Table::new(["row", "bound_or_exact", "hits", "trials", "frequency", "std_error"]);

    let n = inst.n() as f64;
    let max_decks = (1.0 - a.epsilon) * n * n.ln();
    if inst.m() as f64 <= max_decks {
        let tails = monte_carlo_tails(&inst, a.epsilon, a.trials, g.seed)?;
        for (name, check) in [
            ("tail-small-uncollected", &tails.small_uncollected),
            ("tail-overmissed", &tails.overmissed_worst),
        ] {
            let detail = format!(
                "frequency {:.6} vs bound {:.6} + 3 se {:.6}{}",
                check.frequency,
                check.bound,
                check.std_error,
                if tails.asserted { "" } else { " (reported only)" }
            );
            rep.check(name, !tails.asserted || !check.violated, detail);
            table.push([
                name.to_string(),
                check.bound.to_string(),
                check.hits.to_string(),
                a.trials.to_string(),
                check.frequency.to_string(),
                check.std_error.to_string(),
            ]);
        }
        results.insert("tails".into(), serde_json::to_value(&tails).expect("serializes"));
    } else {
        results.insert(
            "tails".into(),
            json!({ "skipped": format!("m = {} exceeds (1 - eps) n ln n = {max_decks:.4}", inst.m()) }),
        );
    }

    let outcomes = inst.outcome_count();
    if g.no_oracle {
        results.insert("exact".into(), json!({ "skipped": "--no-oracle" }));
    } else if outcomes > LOTTERY_EXACT_LIMIT {
        results.insert(
            "exact".into(),
            json!({ "skipped": format!("{outcomes} outcomes exceed {LOTTERY_EXACT_LIMIT}") }),
        );
    } else {
        let exact = inst.exact_stats()?;
        rep.check("product-formula", exact.product_formula_ok, "enumerated Pr(c in U) equals the product formula");
        rep.check("sandwich", exact.sandwich_ok, "exp(-sum 1/|L|) <= Pr(c in U) <= exp(-sum 1/(|L|+1))");
        rep.check(
            "expectation-bound",
            exact.expectation_bound_ok,
            format!("E|U| = {:.6} >= n exp(-m/n) = {:.6}", exact.expected_uncollected, exact.expectation_bound),
        );
        if let Some(nc) = &exact.negative_correlation {
            rep.check("negative-correlation", nc.ok, format!("{} subsets checked", nc.subsets_checked));
        }
        let mc = monte_carlo_uncollected(&inst, a.trials, g.seed);
        let worst = mc_against_exact(&mc, &exact.uncollected_probability, a.trials);
        rep.check(
            "mc-matches-exact",
            worst.1 <= 4.0,
            format!("largest deviation {:.3} standard errors (coupon {})", worst.1, worst.0 + 1),
        );
        for (c, (&hits, &p)) in mc.iter().zip(&exact.uncollected_probability).enumerate() {
            let se = (p * (1.0 - p) / a.trials as f64).sqrt();
            table.push([
                format!("coupon-{}", c + 1),
                p.to_string(),
                hits.to_string(),
                a.trials.to_string(),
                (hits as f64 / a.trials as f64).to_string(),
                se.to_string(),
            ]);
        }
        results.insert("exact".into(), serde_json::to_value(&exact).expect("serializes"));
        results.insert("monte_carlo_uncollected".into(), json!(mc));
    }
    rep.results(&results);
    rep.table = Some(table);
    Ok(rep)
}

/// `(coupon index, deviation in standard errors)` for the worst coupon.
/// A coupon with `p ∈ {0, 1}` must match exactly.
pub fn mc_against_exact(hits: &[u64], exact: &[f64], trials: u64) -> (usize, f64) {
    hits.iter()
        .zip(exact)
        .map(|(&h, &p)| {
            let f = h as f64 / trials as f64;
            let se = (p * (1.0 - p) / trials as f64).sqrt();
            if se == 0.0 {
                if (f - p).abs() == 0.0 { 0.0 } else { f64::INFINITY }
            } else {
                (f - p).abs() / se
            }
        })
        .enumerate()
        .fold((0, 0.0), |best, (i, d)| if d > best.1 { (i, d) } else { best })
}

fn default_sample_instance() -> Instance {
    let graph = generate_graph(&GraphKind::Path { n: 3 }, 0).expect("path");
    let lists = ListAssignment::new(vec![vec![1, 2], vec![1, 2], vec![2, 3]]).expect("lists");
    Instance::List { graph, lists }
}

fn sweep_value(rep: &mut Report, name: &str, sweep: Result<SweepSummary, listcolour::Error>) -> Result<Value, HarnessError> {
    match sweep {
        Ok(s) => {
            rep.check(
                name,
                s.passed(),
                format!("{} conditions over {} substructures, {} violations", s.conditions, s.substructures, s.violations),
            );
            Ok(serde_json::to_value(&s).expect("serializes"))
        }
        Err(listcolour::Error::TooLarge { what, count, limit }) => {
            Ok(json!({ "skipped": format!("{what}: {count} exceeds {limit}") }))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn sample(g: &GlobalArgs, a: &SampleArgs) -> Result<Report, HarnessError> {
    let inst = match &a.input {
        Some(path) => io::load_instance(path)?,
        None => default_sample_instance(),
    };
    let mut rep = Report::new("sample", g.seed, &config(g, a));
    let mut results = serde_json::Map::new();
    let counts = match &inst {
        Instance::List { graph, lists } => {
            let idx = ColouringIndex::new(graph, lists)?;
            tally(idx.total(), a.trials, g.seed, |rng| idx.rank(&idx.sample(rng)).expect("sampled colourings rank"))
        }
        Instance::Cover { cover } => {
            let idx = IndependentSetIndex::for_graph(cover.h())?;
            tally(idx.total(), a.trials, g.seed, |rng| idx.rank(&idx.sample(rng)).expect("sampled sets rank"))
        }
    };
    results.insert("uniformity".into(), check_chi_square(&mut rep, "sampler-uniform", &counts));
    let mut table = Table::new(["rank", "count", "expected"]);
    let expected = a.trials as f64 / counts.len() as f64;
    for (rank, c) in counts.iter().enumerate() {
        table.push([rank.to_string(), c.to_string(), expected.to_string()]);
    }

    if g.no_oracle {
        results.insert("sweeps".into(), json!({ "skipped": "--no-oracle" }));
    } else {
        let cover = match &inst {
            Instance::List { graph, lists } => {
                let s = if lists.entry_count() <= SWEEP_MAX_ELEMENTS {
                    sweep_conditional_uniformity_lists(graph, lists)
                } else {
                    Err(too_many(lists.entry_count()))
                };
                results.insert("list_sweep".into(), sweep_value(&mut rep, "conditional-uniformity-lists", s)?);
                Cover::canonical(graph, lists)?
            }
            Instance::Cover { cover } => cover.clone(),
        };
        let s = if cover.vertex_count() <= SWEEP_MAX_ELEMENTS {
            sweep_conditional_uniformity_cover(&cover)
        } else {
            Err(too_many(cover.vertex_count()))
        };
        results.insert("cover_sweep".into(), sweep_value(&mut rep, "conditional-uniformity-cover", s)?);
    }
    rep.results(&results);
    rep.table = Some(table);
    Ok(rep)
}

fn too_many(count: usize) -> listcolour::Error {
    listcolour::Error::TooLarge {
        what: "sweep elements",
        count: count as u128,
        limit: SWEEP_MAX_ELEMENTS as u128,
    }
}

fn mode_name(mode: ChainMode) -> &'static str {
    match mode {
        ChainMode::Direct => "direct",
        ChainMode::Predrawn => "predrawn",
    }
}

pub fn chain(g: &GlobalArgs, a: &ChainArgs) -> Result<Report, HarnessError> {
    let cov = match &a.input {
        Some(path) => io::load_cover(path)?,
        None => twisted_c4(),
    };
    let fixed: CoverSet = a.fixed.iter().copied().collect();
    let delta = a.delta.unwrap_or(cov.base().max_degree().max(1) as f64);
    let modes: &[ChainMode] = match a.mode {
        ModeArg::Direct => &[ChainMode::Direct],
        ModeArg::Predrawn => &[ChainMode::Predrawn],
        ModeArg::Both => &[ChainMode::Direct, ChainMode::Predrawn],
    };
    let mut rep = Report::new("chain", g.seed, &config(g, a));
    let setup = ChainSetup::new(&cov, a.u, &fixed, a.r)?;
    let target = setup.target(&cov)?;
    let mut results = serde_json::Map::new();
    results.insert("target_size".into(), json!(target.total()));
    results.insert("clique_free".into(), json!(setup.clique_free));
    let mut table = Table::new(["mode", "outcome", "count", "expected"]);
    for &mode in modes {
        let params = ChainParams { mode, delta, r: a.r };
        let name = mode_name(mode);
        let mut entry = serde_json::Map::new();
        if !g.no_oracle {
            let dist = chain_distribution(&cov, a.u, &fixed, params)?;
            rep.check(
                &format!("exact-uniform-{name}"),
                dist.uniform,
                format!(
                    "{} outcomes over target {}, {} leaves, max deviation {:e}",
                    dist.outcomes.len(),
                    dist.target_size,
                    dist.leaves,
                    dist.max_deviation
                ),
            );
            if setup.clique_free {
                rep.check(
                    &format!("clique-checks-{name}"),
                    true,
                    format!("{} intermediate H_i are K_{}-free", dist.clique_checks, a.r - 1),
                );
            }
            entry.insert("exact".into(), serde_json::to_value(&dist).expect("serializes"));
        }
        let outcomes: Vec<Option<u64>> = (0..a.trials)
            .into_par_iter()
            .map(|t| {
                let run = resampling_chain(&cov, a.u, &fixed, params, &mut substream(g.seed, t))?;
                let set: Vec<usize> = run.result.into_iter().collect();
                Ok(target.rank(&set).ok())
            })
            .collect::<Result<_, listcolour::Error>>()?;
        let mut counts = vec![0u64; target.total() as usize];
        let mut off_support = 0u64;
        for o in outcomes {
            match o {
                Some(k) => counts[k as usize] += 1,
                None => off_support += 1,
            }
        }
        rep.check(
            &format!("support-{name}"),
            off_support == 0,
            format!("{off_support} runs ended outside Ind(H0^I')"),
        );
        let chi = check_chi_square(&mut rep, &format!("empirical-uniform-{name}"), &counts);
        let expected = a.trials as f64 / counts.len() as f64;
        for (k, c) in counts.iter().enumerate() {
            let label = format!("{:?}", target.unrank(k as u64)?);
            table.push([name.to_string(), label, c.to_string(), expected.to_string()]);
        }
        entry.insert("empirical".into(), chi);
        entry.insert("counts".into(), json!(counts));
        results.insert(name.into(), Value::Object(entry));
    }
    rep.results(&results);
    rep.table = Some(table);
    Ok(rep)
}

fn solution_validates(inst: &Instance, sol: &Solution) -> Result<bool, HarnessError> {
    let (graph, lists) = match inst {
        Instance::List { graph, lists } => (graph, lists),
        Instance::Cover { cover } => (cover.base(), cover.lists()),
    };
    Ok(match &sol.cover_set {
        Some(set) => {
            let cover = match inst {
                Instance::Cover { cover } => cover.clone(),
                Instance::List { .. } => Cover::canonical(graph, lists)?,
            };
            cover.is_h_colouring(set) && cover.colouring_of(set) == sol.colouring
        }
        None => sol.colouring.is_full_colouring(graph, lists),
    })
}

pub fn instance_cover(inst: &Instance) -> Result<Cover, listcolour::Error> {
    match inst {
        Instance::List { graph, lists } => Cover::canonical(graph, lists),
        Instance::Cover { cover } => Ok(cover.clone()),
    }
}

pub fn solve(g: &GlobalArgs, command: &str, a: &PipelineArgs, pipeline: Pipeline, config: Value) -> Result<Report, HarnessError> {
    let inst = io::load_instance(&a.input)?;
    let cfg = PipelineConfig {
        epsilon: a.epsilon,
        n: a.n,
        l: a.l,
        r: a.r,
        seed: g.seed,
        budget: a.budget,
        finish_budget: a.finish_budget,
    };
    // run the oracle first so a guard failure is reported before any search
    let oracle = if g.no_oracle {
        None
    } else {
        Some(exhaustive_colourable(&instance_cover(&inst)?)?)
    };
    let report = solve_pipeline(&inst, pipeline, &cfg)?;
    let mut rep = Report::new(command, g.seed, &config);
    let valid = match &report.solution {
        Some(sol) => solution_validates(&inst, sol)?,
        None => true,
    };
    rep.check(
        "solution-validates",
        valid,
        if report.solution.is_some() { "returned colouring checked" } else { "no solution returned" },
    );
    let verdict = oracle.as_ref().map(|o| if o.colourable { "feasible" } else { "infeasible" });
    if let Some(o) = &oracle {
        rep.check(
            "oracle-agreement",
            !report.success() || o.colourable,
            format!("solver success {}, oracle {}", report.success(), verdict.unwrap_or_default()),
        );
    }
    rep.results(&json!({ "success": report.success(), "pipeline": report, "oracle": oracle, "verdict": verdict }));
    Ok(rep)
}

pub fn verify_cover(g: &GlobalArgs, a: &VerifyCoverArgs) -> Result<Report, HarnessError> {
    let mut value = io::read_value(&a.input)?;
    if value.get("type").and_then(Value::as_str) == Some("cover") {
        value = value["cover"].take();
    }
    let raw: listcolour::cover::RawCover = serde_json::from_value(value).map_err(|e| HarnessError::Json {
        path: a.input.clone(),
        message: e.to_string(),
    })?;
    let mut rep = Report::new("verify-cover", g.seed, &config(g, a));
    let violations = raw.validate();
    let ok = rep.check("structure", violations.is_empty(), format!("{} violations", violations.len()));
    let mut results = serde_json::Map::new();
    results.insert("structure".into(), json!(if ok { "ok" } else { "invalid" }));
    results.insert("violations".into(), serde_json::to_value(&violations).expect("serializes"));
    if ok {
        let cover = raw.into_cover()?;
        let lists = cover.lists();
        results.insert("vertices".into(), json!(cover.base().vertex_count()));
        results.insert("cover_vertices".into(), json!(cover.vertex_count()));
        results.insert("list_sizes".into(), json!([lists.min_list_size(), lists.max_list_size()]));
        results.insert(format!("k{}_free", a.r), json!(cover.is_clique_free(a.r)?));
        if g.no_oracle {
            results.insert("oracle".into(), json!({ "skipped": "--no-oracle" }));
        } else {
            let o = exhaustive_colourable(&cover)?;
            results.insert("verdict".into(), json!(if o.colourable { "feasible" } else { "infeasible" }));
            results.insert("oracle".into(), serde_json::to_value(&o).expect("serializes"));
        }
    }
    rep.results(&results);
    Ok(rep)
}

#[derive(Clone, Debug, Serialize)]
pub struct ShearerRow {
    pub index: usize,
    pub n: usize,
    pub r: usize,
    pub p: f64,
    pub graph_seed: u64,
    pub edges: usize,
    pub ind: u64,
    pub lower: f64,
    pub upper: f64,
    pub ok: bool,
    /// `None` when the small-set statement is not asserted at this size.
    pub small_sets_ok: Option<bool>,
}

pub fn shearer_rows(seed: u64, graphs: usize, max_n: usize, rs: &[usize], p: Option<f64>) -> Result<Vec<ShearerRow>, HarnessError> {
    if rs.is_empty() || rs.iter().any(|&r| r < 2) {
        return Err(HarnessError::Config("--r needs clique orders of at least 2".into()));
    }
    if max_n == 0 {
        return Err(HarnessError::Config("--max-n must be positive".into()));
    }
    Ok((0..graphs)
        .into_par_iter()
        .map(|j| {
            let mut rng = substream(seed, j as u64);
            let r = rs[j % rs.len()];
            let n = rng.random_range(1..=max_n);
            let p = p.unwrap_or_else(|| rng.random_range(0.2..=0.9));
            let graph_seed: u64 = rng.random();
            let f = random_clique_free_graph(n, p, r, graph_seed)?;
            let prof = profile(&f, r)?;
            let check = verify_shearer(&prof);
            Ok(ShearerRow {
                index: j,
                n,
                r,
                p,
                graph_seed,
                edges: f.edge_count(),
                ind: prof.ind,
                lower: check.lower,
                upper: check.upper,
                ok: check.ok,
                small_sets_ok: small_set_fraction(&prof).and_then(|s| s.claims_ok()),
            })
        })
        .collect::<Result<_, listcolour::Error>>()?)
}

pub fn shearer(g: &GlobalArgs, a: &ShearerArgs) -> Result<Report, HarnessError> {
    let rows = shearer_rows(g.seed, a.graphs, a.max_n, &a.r, a.p)?;
    let mut rep = Report::new("shearer", g.seed, &config(g, a));
    let bad: Vec<usize> = rows.iter().filter(|r| !r.ok).map(|r| r.index).collect();
    rep.check("sandwich", bad.is_empty(), format!("{} of {} graphs violate, {bad:?}", bad.len(), rows.len()));
    let asserted: Vec<&ShearerRow> = rows.iter().filter(|r| r.small_sets_ok.is_some()).collect();
    let small_bad = asserted.iter().filter(|r| r.small_sets_ok == Some(false)).count();
    rep.check(
        "small-set-fraction",
        small_bad == 0,
        format!("{small_bad} violations among {} graphs where asserted", asserted.len()),
    );
    let c5 = profile(&generate_graph(&GraphKind::Cycle { n: 5 }, 0)?, 3)?;
    let c5_check = verify_shearer(&c5);
    rep.check(
        "c5-anchor",
        c5.ind == 11 && c5_check.ok,
        format!("ind(C5) = {} >= {:.4}", c5.ind, c5_check.lower),
    );
    let mut table = Table::new(["index", "n", "r", "edges", "ind", "lower", "upper", "ok"]);
    for r in &rows {
        table.push([
            r.index.to_string(),
            r.n.to_string(),
            r.r.to_string(),
            r.edges.to_string(),
            r.ind.to_string(),
            r.lower.to_string(),
            r.upper.to_string(),
            r.ok.to_string(),
        ]);
    }
    rep.results(&json!({ "graphs": rows, "c5": { "profile": c5, "check": c5_check } }));
    rep.table = Some(table);
    Ok(rep)
}

fn random_base(a: &GenArgs, seed: u64) -> Result<Graph, listcolour::Error> {
    generate_graph(&GraphKind::RandomEdgeDensity { n: a.n, p: a.p }, seed)
}

pub fn generate(seed: u64, a: &GenArgs) -> Result<Value, HarnessError> {
    let graph = |kind: GraphKind| -> Result<Value, HarnessError> {
        Ok(serde_json::to_value(generate_graph(&kind, seed)?).expect("serializes"))
    };
    let n = a.n;
    match a.kind {
        GenKind::Complete => graph(GraphKind::Complete { n }),
        GenKind::Cycle => graph(GraphKind::Cycle { n }),
        GenKind::Path => graph(GraphKind::Path { n }),
        GenKind::RandomEdgeDensity => graph(GraphKind::RandomEdgeDensity { n, p: a.p }),
        GenKind::RandomTriangleFree => graph(GraphKind::RandomTriangleFree { n, p: a.p }),
        GenKind::CliqueFree => Ok(serde_json::to_value(random_clique_free_graph(n, a.p, a.r, seed)?).expect("serializes")),
        GenKind::Lists => Ok(io::instance_value(&Instance::List {
            graph: random_base(a, seed)?,
            lists: random_lists(n, a.size, a.palette, seed)?,
        })),
        GenKind::Cover => Ok(io::instance_value(&Instance::Cover {
            cover: random_cover(&random_base(a, seed)?, a.size, a.palette, a.density, seed)?,
        })),
        GenKind::CliqueFreeCover => Ok(io::instance_value(&Instance::Cover {
            cover: random_clique_free_cover(&random_base(a, seed)?, a.size, a.palette, a.density, a.r, seed)?,
        })),
        GenKind::Reed => {
            let (graph, lists) = random_reed_instance(n, a.p, a.l, seed)?;
            Ok(io::instance_value(&Instance::List { graph, lists }))
        }
        GenKind::Lottery => {
            let n = u32::try_from(n).map_err(|_| HarnessError::Config(format!("--n {n} too large for a lottery")))?;
            Ok(serde_json::to_value(random_lottery(n, a.m, a.max_deck, seed)?).expect("serializes"))
        }
        GenKind::TwistedC4 => Ok(io::instance_value(&Instance::Cover { cover: twisted_c4() })),
    }
}
