//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//! Run with `cargo test -p listcolour-cli --test acceptance`.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use listcolour_cli::suite::{criterion, title, CRITERIA};
use listcolour_cli::Report;

const SEED: u64 = 20_240_917;

/// Wall-clock limits for the criteria that state one.
fn time_limit(k: u8) -> Option<Duration> {
    match k {
        1 => Some(Duration::from_secs(60)),
        4 => Some(Duration::from_secs(120)),
        _ => None,
    }
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_listcolour"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

/// Commands rerun by the determinism criterion, with their expected status.
fn cli_runs() -> Vec<(Vec<String>, i32)> {
    let twisted = fixture("twisted-c4.json");
    let path = fixture("path-lists.json");
    let runs: Vec<(Vec<&str>, i32)> = vec![
        (vec!["lottery", "--n", "100", "--epsilon", "0.5", "--trials", "20000", "--seed", "42"], 0),
        (vec!["lottery", "--n", "6", "--m", "3", "--epsilon", "0.5", "--trials", "20000", "--format", "csv"], 0),
        (vec!["sample", "--input", &path, "--trials", "20000", "--seed", "9"], 0),
        (vec!["chain", "--input", &twisted, "--trials", "4000", "--seed", "3"], 0),
        (vec!["solve", "--input", &path, "--seed", "1"], 0),
        (vec!["dp-solve", "--input", &twisted, "--budget", "300", "--seed", "1"], 0),
        (vec!["dp-solve", "--input", &twisted, "--pipeline", "kr", "--r", "3", "--budget", "300"], 0),
        (vec!["verify-cover", &twisted], 0),
        (vec!["shearer", "--graphs", "60", "--seed", "5"], 0),
        (vec!["gen", "--kind", "clique-free-cover", "--n", "6", "--seed", "11"], 0),
        (vec!["acceptance", "--criterion", "3", "--seed", "2"], 0),
    ];
    runs.into_iter()
        .map(|(a, code)| (a.into_iter().map(String::from).collect(), code))
        .collect()
}

fn determinism(first: &[(u8, Report)]) -> Result<String, String> {
    for (k, rep) in first {
        let again = criterion(*k, SEED).map_err(|e| format!("criterion {k} rerun failed: {e}"))?;
        if again.to_json() != rep.to_json() {
            return Err(format!("criterion {k} report differs between runs"));
        }
    }
    let runs = cli_runs();
    for (args, expected) in &runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code_a, out_a) = cli(&args);
        let (code_b, out_b) = cli(&args);
        if code_a != Some(*expected) {
            return Err(format!("`{}` exited {code_a:?}, expected {expected}", args.join(" ")));
        }
        if code_a != code_b || out_a != out_b {
            return Err(format!("`{}` is not byte-identical across runs", args.join(" ")));
        }
    }
    Ok(format!("{} criterion reports and {} CLI commands reproduced byte for byte", first.len(), runs.len()))
}

fn main() -> ExitCode {
    // `cargo test` passes harness flags such as `--nocapture`; only a
    // request to list tests needs an answer.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let mut failed = 0;
    let mut reports = Vec::new();
    for k in 1..=CRITERIA {
        let start = Instant::now();
        let outcome = criterion(k, SEED);
        let elapsed = start.elapsed();
        let within = time_limit(k).is_none_or(|limit| elapsed <= limit);
        match outcome {
            Ok(rep) => {
                let ok = rep.passed && within;
                failed += usize::from(!ok);
                println!(
                    "criterion {k:>2} ({}): {} in {:.1}s",
                    title(k),
                    if ok { "PASS" } else { "FAIL" },
                    elapsed.as_secs_f64()
                );
                for a in &rep.assertions {
                    println!("    [{}] {}: {}", if a.passed { "ok" } else { "FAILED" }, a.name, a.detail);
                }
                if !within {
                    println!("    [FAILED] time limit {:?} exceeded", time_limit(k).unwrap_or_default());
                }
                reports.push((k, rep));
            }
            Err(e) => {
                failed += 1;
                println!("criterion {k:>2} ({}): FAIL, error: {e}", title(k));
            }
        }
    }
    let start = Instant::now();
    let det = determinism(&reports);
    let ok = det.is_ok() && reports.len() == CRITERIA as usize;
    failed += usize::from(!ok);
    println!(
        "criterion 10 (determinism): {} in {:.1}s",
        if ok { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    println!("    {}", det.unwrap_or_else(|e| e));
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
