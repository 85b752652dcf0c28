//! The `walkocc` command line.
//!
//! Exit codes: 0 success, 1 input error, 2 non-convergence, 3 the target
//! or graph lies outside the exactly solvable territory.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::io::{self, Instance, RunManifest};
use crate::occupation::{expected_occupation_fixed_point, expected_occupation_green, OccupationVector};
use crate::reconstruct::{self, GradientMode, ReconstructionConfig, Status, StepRule};
use crate::solvability::{self, default_cap};
use crate::spectral::SpectralData;
use crate::walk::{empirical_occupation, sample_walks, MonteCarloConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NO_CONVERGENCE: i32 = 2;
pub const EXIT_STRUCTURAL: i32 = 3;

/// Gradient-check pass threshold on the maximum relative error.
pub const GRADCHECK_TOL: f64 = 1e-5;

#[derive(Debug, Parser)]
#[command(name = "walkocc", version, about = "Occupation times of absorbing random walks on vertex-weighted graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Graph instance JSON.
    #[arg(long)]
    pub instance: PathBuf,
    /// Output path (`.csv` for CSV where supported); prints JSON to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Method {
    Green,
    Fixedpoint,
    Montecarlo,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Family {
    Auto,
    Path,
    Complete,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StepKind {
    Backtracking,
    Fixed,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GradientKind {
    Analytic,
    Fd,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample proper walks and write their vertex sequences.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        seed: u64,
        /// Number of walks.
        #[arg(long = "N", default_value_t = 1)]
        n_walks: u64,
        /// Worker threads; results do not depend on it.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Expected (or Monte Carlo) occupation vector.
    Expect {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Method::Fixedpoint)]
        method: Method,
        /// Walks for the Monte Carlo method.
        #[arg(long = "N")]
        n_walks: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for Monte Carlo; results do not depend on it.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Fit weights to a target occupation vector by steepest descent.
    Reconstruct {
        #[command(flatten)]
        common: Common,
        /// Target occupation vector (JSON array, `{"tau": [...]}` or CSV).
        #[arg(long)]
        tau: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        max_iters: usize,
        #[arg(long, default_value_t = 1e-12)]
        cost_tol: f64,
        #[arg(long, value_enum, default_value_t = StepKind::Backtracking)]
        step: StepKind,
        /// Fixed step, or first trial step for backtracking.
        #[arg(long, default_value_t = 0.1)]
        eta: f64,
        #[arg(long, value_enum, default_value_t = GradientKind::Analytic)]
        gradient: GradientKind,
        /// Iteration log CSV; defaults to `<out>.iterations.csv`.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Solve exactly for weights realising `r`.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        r: PathBuf,
        #[arg(long, value_enum, default_value_t = Family::Auto)]
        family: Family,
    },
    /// Hull dimension, bipartiteness and (optionally) relative-interior membership of `r`.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        r: Option<PathBuf>,
        /// Walk-length cap; defaults to 4n.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Compare the analytic gradient with finite differences at random weights.
    Gradcheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        seed: u64,
    },
}

/// Maps an error to its exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        _ if e.is_structural() => EXIT_STRUCTURAL,
        Error::NoDescent { .. } | Error::BracketFailure { .. } | Error::RoundTrip(_) | Error::StepLimitExceeded(_) => {
            EXIT_NO_CONVERGENCE
        }
        _ => EXIT_INPUT,
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn load(common: &Common) -> Result<Instance> {
    io::load_instance(&common.instance)
}

fn emit_json(out: Option<&Path>, value: &serde_json::Value) -> Result<()> {
    let bytes = io::to_json_bytes(value);
    match out {
        Some(p) => io::write_atomic(p, &bytes),
        None => {
            print!("{}", String::from_utf8_lossy(&bytes));
            Ok(())
        }
    }
}

fn is_csv(p: Option<&Path>) -> bool {
    p.is_some_and(|p| p.extension().is_some_and(|e| e == "csv"))
}

pub fn execute(cmd: &Command) -> Result<i32> {
    match cmd {
        Command::Simulate {
            common,
            seed,
            n_walks,
            workers,
        } => simulate(common, *seed, *n_walks, *workers),
        Command::Expect {
            common,
            method,
            n_walks,
            seed,
            workers,
        } => expect(common, *method, *n_walks, *seed, *workers),
        Command::Reconstruct {
            common,
            tau,
            max_iters,
            cost_tol,
            step,
            eta,
            gradient,
            log,
        } => {
            let cfg = ReconstructionConfig {
                max_iters: *max_iters,
                cost_tol: *cost_tol,
                step_rule: match step {
                    StepKind::Fixed => StepRule::Fixed { eta: *eta },
                    StepKind::Backtracking => StepRule::Backtracking {
                        eta0: *eta,
                        shrink: 0.5,
                        armijo_c: 1e-4,
                    },
                },
                gradient_mode: match gradient {
                    GradientKind::Analytic => GradientMode::Analytic,
                    GradientKind::Fd => GradientMode::FiniteDifference,
                },
                ..Default::default()
            };
            reconstruct_cmd(common, tau, &cfg, log.as_deref())
        }
        Command::Solve { common, r, family } => solve(common, r, *family),
        Command::Check { common, r, cap } => check(common, r.as_deref(), *cap),
        Command::Gradcheck { common, seed } => gradcheck(common, *seed),
    }
}

fn simulate(common: &Common, seed: u64, n_walks: u64, workers: Option<usize>) -> Result<i32> {
    let inst = load(common)?;
    let w = inst.require_weights()?;
    let manifest = RunManifest::new("simulate", &common.instance, &inst, common.out.as_deref())
        .seed(seed)
        .flag("N", n_walks);
    let walks = sample_walks(&inst.graph, w, seed, n_walks, workers)?;
    if is_csv(common.out.as_deref()) {
        let mut csv = String::from("walk,step,vertex\n");
        for (k, walk) in walks.iter().enumerate() {
            for (s, v) in walk.vertices.iter().enumerate() {
                csv.push_str(&format!("{k},{s},{v}\n"));
            }
        }
        io::write_csv_with_manifest(common.out.as_deref().unwrap(), &csv, &manifest)?;
    } else {
        let value = json!({
            "walks": walks.iter().map(|w| &w.vertices).collect::<Vec<_>>(),
            "traces": walks.iter().map(|w| &w.trace).collect::<Vec<_>>(),
            "manifest": manifest.to_value(),
        });
        emit_json(common.out.as_deref(), &value)?;
    }
    eprintln!("simulated {n_walks} walk(s)");
    Ok(EXIT_OK)
}

fn expect(common: &Common, method: Method, n_walks: Option<u64>, seed: Option<u64>, workers: Option<usize>) -> Result<i32> {
    let inst = load(common)?;
    let g = &inst.graph;
    let w = inst.require_weights()?;
    let mut manifest = RunManifest::new("expect", &common.instance, &inst, common.out.as_deref());
    let (tau, std_err) = match method {
        Method::Fixedpoint => {
            manifest = manifest.flag("method", "fixedpoint");
            (expected_occupation_fixed_point(g, w)?.values, None)
        }
        Method::Green => {
            manifest = manifest.flag("method", "green");
            let spec = SpectralData::compute(g, w)?;
            (expected_occupation_green(g, w, &spec).values, None)
        }
        Method::Montecarlo => {
            let n = n_walks.ok_or_else(|| Error::Format("--N is required for --method montecarlo".into()))?;
            let seed = seed.ok_or_else(|| Error::Format("--seed is required for --method montecarlo".into()))?;
            manifest = manifest.flag("method", "montecarlo").flag("N", n).seed(seed);
            let mut cfg = MonteCarloConfig::new(n, seed);
            cfg.workers = workers;
            let e = empirical_occupation(g, w, &cfg)?;
            (e.mean.values, Some(e.std_err))
        }
    };
    if is_csv(common.out.as_deref()) {
        let csv = io::occupation_csv(&tau, std_err.as_deref());
        io::write_csv_with_manifest(common.out.as_deref().unwrap(), &csv, &manifest)?;
    } else {
        emit_json(common.out.as_deref(), &io::occupation_json(&tau, std_err.as_deref(), &manifest))?;
    }
    Ok(EXIT_OK)
}

fn default_log_path(out: Option<&Path>) -> Option<PathBuf> {
    out.map(|p| {
        let mut s = p.as_os_str().to_owned();
        s.push(".iterations.csv");
        PathBuf::from(s)
    })
}

fn reconstruct_cmd(common: &Common, tau_path: &Path, cfg: &ReconstructionConfig, log: Option<&Path>) -> Result<i32> {
    let inst = load(common)?;
    let g = &inst.graph;
    let tau_hat = OccupationVector::empirical(io::load_vector(tau_path, &["tau", "r"])?);
    let mut manifest = RunManifest::new("reconstruct", &common.instance, &inst, common.out.as_deref())
        .flag("tau", tau_path.display())
        .flag("tau_sha256", io::sha256_hex(&std::fs::read(tau_path)?))
        .flag("max_iters", cfg.max_iters)
        .flag("cost_tol", format!("{:e}", cfg.cost_tol));
    manifest = match cfg.step_rule {
        StepRule::Fixed { eta } => manifest.flag("step", "fixed").flag("eta", eta),
        StepRule::Backtracking { eta0, .. } => manifest.flag("step", "backtracking").flag("eta", eta0),
    };
    manifest = manifest.flag(
        "gradient",
        match cfg.gradient_mode {
            GradientMode::Analytic => "analytic",
            GradientMode::FiniteDifference => "fd",
        },
    );
    let result = reconstruct::reconstruct_weights(g, &tau_hat, cfg)?;
    // weights off the support are reported as null
    let rho = result.full_rho(g.n());
    let status = match result.status {
        Status::Converged => "converged",
        Status::MaxIters => "max_iters",
    };
    let value = json!({
        "rho": rho,
        "status": status,
        "cost": result.cost,
        "iterations": result.log.len() - 1,
        "floor_hits": result.floor_hits,
        "manifest": manifest.to_value(),
    });
    emit_json(common.out.as_deref(), &value)?;
    if let Some(log_path) = log.map(Path::to_path_buf).or_else(|| default_log_path(common.out.as_deref())) {
        io::write_csv_with_manifest(&log_path, &io::iteration_csv(&result.log), &manifest)?;
    }
    eprintln!(
        "{status} after {} iterations, cost {:e}",
        result.log.len() - 1,
        result.cost
    );
    Ok(match result.status {
        Status::Converged => EXIT_OK,
        Status::MaxIters => EXIT_NO_CONVERGENCE,
    })
}

fn solve(common: &Common, r_path: &Path, family: Family) -> Result<i32> {
    let inst = load(common)?;
    let g = &inst.graph;
    let r = OccupationVector::expected(io::load_vector(r_path, &["r", "tau"])?);
    let (w, family_name) = match family {
        Family::Path => (solvability::solve_path(g, &r)?, "path"),
        Family::Complete => (solvability::solve_complete(g, &r)?, "complete"),
        Family::Auto => (solvability::solve_reducible(g, &r)?, "auto"),
    };
    let manifest = RunManifest::new("solve", &common.instance, &inst, common.out.as_deref())
        .flag("family", family_name)
        .flag("r", r_path.display())
        .flag("r_sha256", io::sha256_hex(&std::fs::read(r_path)?));
    emit_json(common.out.as_deref(), &io::weights_json(w.rho(), &manifest))?;
    Ok(EXIT_OK)
}

fn check(common: &Common, r_path: Option<&Path>, cap: Option<usize>) -> Result<i32> {
    let inst = load(common)?;
    let g = &inst.graph;
    let cap = cap.unwrap_or_else(|| default_cap(g));
    let hull_dim = solvability::hull_dimension(g, cap)?;
    let mut manifest = RunManifest::new("check", &common.instance, &inst, common.out.as_deref()).flag("cap", cap);
    let (relint, cap_used) = match r_path {
        Some(p) => {
            manifest = manifest
                .flag("r", p.display())
                .flag("r_sha256", io::sha256_hex(&std::fs::read(p)?));
            let r = OccupationVector::expected(io::load_vector(p, &["r", "tau"])?);
            let rep = solvability::relint_membership(g, &r, cap)?;
            (Some(rep.is_member()), rep.cap_used)
        }
        None => (None, cap),
    };
    let value = json!({
        "hull_dim": hull_dim,
        "bipartite": g.is_bipartite(),
        "relint": relint,
        "cap_used": cap_used,
        "manifest": manifest.to_value(),
    });
    emit_json(common.out.as_deref(), &value)?;
    Ok(EXIT_OK)
}

fn gradcheck(common: &Common, seed: u64) -> Result<i32> {
    let inst = load(common)?;
    let rep = reconstruct::gradcheck(&inst.graph, seed)?;
    let pass = rep.max_rel_error <= GRADCHECK_TOL;
    println!(
        "max relative error {:e} ({})",
        rep.max_rel_error,
        if pass { "pass" } else { "FAIL" }
    );
    if let Some(out) = common.out.as_deref() {
        let manifest = RunManifest::new("gradcheck", &common.instance, &inst, Some(out)).seed(seed);
        let value = json!({
            "max_rel_error": rep.max_rel_error,
            "pass": pass,
            "rho": rep.rho,
            "tau_hat": rep.tau_hat,
            "analytic": rep.analytic,
            "numeric": rep.numeric,
            "manifest": manifest.to_value(),
        });
        emit_json(Some(out), &value)?;
    }
    Ok(if pass { EXIT_OK } else { EXIT_NO_CONVERGENCE })
}
