//! Command-line front end. Every command prints one JSON report on stdout
//! and a short summary on stderr.
//!
//! Exit status: 0 on success, 2 for rejected input (bad flags, files or
//! values), 3 when `certify` finds a violation, 1 for numerical failures.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cases::{self, CaseOptions};
use crate::ensembles::{builtin_ensemble, load_ensemble_with, Ensemble, EnsembleFile, EnsembleName};
use crate::error::{Error, Result};
use crate::global::{check_global_optimality, solve_min_error_with, SolverOptions};
use crate::io::matrix_to_json;
use crate::operator::Tolerances;
use crate::report::{ConditionReport, RunReport};
use crate::sequential::{
    certify_with, check_necessary_a, check_necessary_b, load_strategy, p_corr_sequential, seesaw_optimize_with,
    simulate_game, CertifyOptions, SeesawOptions, SequentialStrategy,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_REJECTED: i32 = 2;
pub const EXIT_CERTIFICATE_FAIL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "seqdisc", version, about = "Global and sequential minimum-error state discrimination")]
struct Cli {
    /// PSD tolerance used by every check.
    #[arg(long, global = true)]
    tol_psd: Option<f64>,
    /// Eigenvalue tolerance.
    #[arg(long, global = true)]
    tol_eig: Option<f64>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Suppress the stderr summary.
    #[arg(long, global = true)]
    quiet: bool,
    /// Record wall-clock time in the report (breaks byte determinism).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List or print the builtin ensembles.
    Ensembles {
        #[command(subcommand)]
        action: EnsemblesAction,
    },
    /// Optimal joint measurement.
    SolveGlobal {
        /// File path or builtin:<name>.
        #[arg(long)]
        ensemble: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 2000)]
        max_iters: usize,
    },
    /// See-saw search for the best sequential strategy.
    SolveSeq {
        #[arg(long)]
        ensemble: String,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = 300)]
        max_rounds: usize,
        /// Number of A-outcomes (default: hypotheses + 1).
        #[arg(long)]
        outcomes: Option<usize>,
        /// Also write the best strategy to this file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Necessary conditions on both measurement steps.
    Check {
        #[arg(long)]
        ensemble: String,
        #[arg(long)]
        strategy: PathBuf,
    },
    /// Search for a direction that proves the strategy suboptimal.
    Certify {
        #[arg(long)]
        ensemble: String,
        #[arg(long)]
        strategy: PathBuf,
        #[arg(long, default_value_t = 2048)]
        budget: usize,
    },
    /// Run one of the worked examples.
    CaseStudy {
        name: CaseName,
        /// Random directions for certificates.
        #[arg(long, default_value_t = 2048)]
        budget: usize,
        /// Grid points per parameter (trine-bound, domino-sweep).
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Monte Carlo play of the three-party game.
    Game {
        #[arg(long)]
        ensemble: String,
        #[arg(long)]
        strategy: PathBuf,
        /// Payout multiplier; must equal the number of A-outcomes.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
    },
}

#[derive(Subcommand, Debug)]
enum EnsemblesAction {
    List,
    /// Print an ensemble in the file format.
    Show { name: String },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CaseName {
    DoubleTrineOpt,
    DoubleTrineGlobal,
    DoubleTrineOverlap,
    DoubleTrineNonopt,
    TrineBound,
    Bell3,
    Domino,
    DominoSweep,
}

struct Outcome {
    report: RunReport,
    summary: Vec<String>,
    exit: i32,
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// As [`run`], writing to the given streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_REJECTED
                }
            };
        }
    };
    let start = Instant::now();
    match execute(&cli) {
        Ok(mut o) => {
            if cli.timing {
                o.report.elapsed_ms = start.elapsed().as_millis() as u64;
            }
            let _ = out.write_all(o.report.to_json_string().as_bytes());
            if !cli.quiet {
                for line in &o.summary {
                    let _ = writeln!(err, "{line}");
                }
            }
            o.exit
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_rejected_input() {
                EXIT_REJECTED
            } else {
                EXIT_FAILURE
            }
        }
    }
}

fn tolerances(cli: &Cli) -> Result<Tolerances> {
    let mut tol = Tolerances::default();
    for (name, v, slot) in [("--tol-psd", cli.tol_psd, &mut tol.psd), ("--tol-eig", cli.tol_eig, &mut tol.eig)] {
        if let Some(v) = v {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be a positive number, got {v}")));
            }
            *slot = v;
        }
    }
    Ok(tol)
}

/// `builtin:<name>` or a path to an ensemble file.
fn resolve_ensemble(spec: &str, tol: &Tolerances) -> Result<Ensemble> {
    match spec.strip_prefix("builtin:") {
        Some(name) => Ok(builtin_ensemble(EnsembleName::from_str(name)?)),
        None => load_ensemble_with(spec, tol),
    }
}

fn strategy_for(ens: &Ensemble, path: &PathBuf, tol: &Tolerances) -> Result<SequentialStrategy> {
    let s = load_strategy(path, tol)?;
    s.check_compatible(ens)?;
    Ok(s)
}

fn tol_json(tol: &Tolerances) -> Value {
    json!({ "herm": tol.herm, "eig": tol.eig, "psd": tol.psd })
}

fn verdict_line(name: &str, r: &ConditionReport) -> String {
    format!(
        "{name}: {} (worst margin {:.3e})",
        if r.passed() { "PASS" } else { "FAIL" },
        r.worst_margin()
    )
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let tol = tolerances(cli)?;
    let seed = cli.seed;
    let base = |extra: Value| {
        let mut v = json!({ "seed": seed, "tolerances": tol_json(&tol) });
        if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
            m.extend(e);
        }
        v
    };
    let ok = |command: &str, inputs: Value, results: Value, summary: Vec<String>| Outcome {
        report: RunReport::new(command, inputs, results),
        summary,
        exit: EXIT_OK,
    };

    Ok(match &cli.command {
        Command::Ensembles { action } => match action {
            EnsemblesAction::List => {
                let list: Vec<Value> = EnsembleName::ALL
                    .iter()
                    .map(|n| {
                        let e = builtin_ensemble(*n);
                        json!({
                            "name": n.to_string(),
                            "states": e.len(),
                            "dim": e.dim(),
                            "bipartite_dims": e.bipartite_dims(),
                        })
                    })
                    .collect();
                let summary = EnsembleName::ALL.iter().map(|n| n.to_string()).collect();
                ok("ensembles list", base(json!({})), json!({ "ensembles": list }), summary)
            }
            EnsemblesAction::Show { name } => {
                let spec = if name.contains(':') || name.contains('/') || name.ends_with(".json") {
                    name.clone()
                } else {
                    format!("builtin:{name}")
                };
                let e = resolve_ensemble(&spec, &tol)?;
                let file = serde_json::to_value(EnsembleFile::from_ensemble(&e)).map_err(|x| Error::Parse(x.to_string()))?;
                let summary = vec![format!("{name}: {} states of dimension {}", e.len(), e.dim())];
                ok("ensembles show", base(json!({ "name": name })), json!({ "ensemble": file }), summary)
            }
        },

        Command::SolveGlobal { ensemble, tol: gap, max_iters } => {
            let ens = resolve_ensemble(ensemble, &tol)?;
            let sol = solve_min_error_with(
                &ens,
                &SolverOptions {
                    max_iters: *max_iters,
                    tol: *gap,
                    seed: None,
                },
            )?;
            let check = check_global_optimality(&ens, &sol.povm, &tol)?;
            let summary = vec![
                format!("p_corr = {:.10} (dual bound {:.10})", sol.p_corr, sol.dual_bound),
                verdict_line("optimality", &check),
            ];
            let results = json!({
                "p_corr": sol.p_corr,
                "dual_bound": sol.dual_bound,
                "iterations": sol.iterations,
                "converged": sol.converged,
                "povm": sol.povm.elements().iter().map(|e| matrix_to_json(e.matrix())).collect::<Vec<_>>(),
                "optimality": check.to_json(),
            });
            let inputs = base(json!({ "ensemble": ensemble, "solver_tol": gap, "max_iters": max_iters }));
            ok("solve-global", inputs, results, summary)
        }

        Command::SolveSeq {
            ensemble,
            restarts,
            max_rounds,
            outcomes,
            output,
        } => {
            let ens = resolve_ensemble(ensemble, &tol)?;
            let res = seesaw_optimize_with(
                &ens,
                &SeesawOptions {
                    restarts: *restarts,
                    seed,
                    max_rounds: *max_rounds,
                    a_outcomes: *outcomes,
                    ..SeesawOptions::default()
                },
            )?;
            if let Some(path) = output {
                res.best.strategy.save(path)?;
            }
            let max_decrease = res.runs.iter().map(|r| r.max_decrease()).fold(0.0, f64::max);
            let results = json!({
                "p_corr": res.best.p_corr,
                "best_restart": res.best_restart,
                "rounds": res.best.rounds,
                "restart_p_corr": res.runs.iter().map(|r| r.p_corr).collect::<Vec<_>>(),
                "max_decrease": max_decrease,
                "strategy": serde_json::to_value(res.best.strategy.to_file()).map_err(|x| Error::Parse(x.to_string()))?,
            });
            let summary = vec![format!(
                "best p_corr = {:.10} from restart {} of {restarts}",
                res.best.p_corr, res.best_restart
            )];
            let inputs = base(json!({
                "ensemble": ensemble,
                "restarts": restarts,
                "max_rounds": max_rounds,
                "outcomes": outcomes,
            }));
            ok("solve-seq", inputs, results, summary)
        }

        Command::Check { ensemble, strategy } => {
            let ens = resolve_ensemble(ensemble, &tol)?;
            let strat = strategy_for(&ens, strategy, &tol)?;
            let b = check_necessary_b(&ens, &strat, &tol)?;
            let a = check_necessary_a(&ens, &strat, &tol)?;
            let p = p_corr_sequential(&ens, &strat)?;
            let summary = vec![
                format!("p_corr = {p:.10}"),
                verdict_line("second step", &b),
                verdict_line("first step", &a),
            ];
            let results = json!({ "p_corr": p, "necessary_b": b.to_json(), "necessary_a": a.to_json() });
            let inputs = base(json!({ "ensemble": ensemble, "strategy": strategy }));
            ok("check", inputs, results, summary)
        }

        Command::Certify {
            ensemble,
            strategy,
            budget,
        } => {
            let ens = resolve_ensemble(ensemble, &tol)?;
            let strat = strategy_for(&ens, strategy, &tol)?;
            let opts = CertifyOptions {
                search_budget: *budget,
                seed,
                ..CertifyOptions::default()
            };
            let cert = certify_with(&ens, &strat, &opts, &tol)?;
            let p = p_corr_sequential(&ens, &strat)?;
            let passed = cert.report.passed();
            let summary = vec![format!("p_corr = {p:.10}"), verdict_line("certificate", &cert.report)];
            let results = json!({ "p_corr": p, "certificate": cert.report.to_json() });
            let inputs = base(json!({ "ensemble": ensemble, "strategy": strategy, "budget": budget }));
            let mut o = ok("certify", inputs, results, summary);
            if !passed {
                o.exit = EXIT_CERTIFICATE_FAIL;
            }
            o
        }

        Command::CaseStudy { name, budget, grid } => {
            let opts = CaseOptions {
                tol,
                certify: CertifyOptions {
                    search_budget: *budget,
                    seed,
                    ..CertifyOptions::default()
                },
            };
            let label = name.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
            let inputs = base(json!({ "name": label, "budget": budget, "grid": grid }));
            let (results, summary) = match name {
                CaseName::DominoSweep => {
                    let rep = cases::domino_certificate_sweep_with(&cases::DominoSweepOptions {
                        line_points: grid.unwrap_or(128),
                        plane_points: grid.unwrap_or(64),
                        seed,
                        ..Default::default()
                    })?;
                    let line = verdict_line("domino sweep", &rep);
                    (json!({ "name": "domino_certificate_sweep", "report": rep.to_json() }), vec![line])
                }
                _ => {
                    let res = match name {
                        CaseName::DoubleTrineOpt => cases::double_trine_optimal_with(&opts)?,
                        CaseName::DoubleTrineGlobal => cases::double_trine_global()?,
                        CaseName::DoubleTrineOverlap => cases::double_trine_overlap_analysis()?,
                        CaseName::DoubleTrineNonopt => cases::double_trine_nonoptimal_with(&opts)?,
                        CaseName::TrineBound => cases::trine_bound_appendix_a_with(grid.unwrap_or(64), 100, seed)?,
                        CaseName::Bell3 => cases::bell3_strategy_with(&opts)?,
                        CaseName::Domino => cases::domino_strategy_with(&opts)?,
                        CaseName::DominoSweep => unreachable!(),
                    };
                    let mut summary = vec![format!("{}: p_corr = {:.10}", res.name, res.p_corr)];
                    summary.extend(res.reports.iter().map(|(k, r)| verdict_line(k, r)));
                    (res.to_json(), summary)
                }
            };
            ok("case-study", inputs, results, summary)
        }

        Command::Game {
            ensemble,
            strategy,
            n,
            trials,
        } => {
            let ens = resolve_ensemble(ensemble, &tol)?;
            let strat = strategy_for(&ens, strategy, &tol)?;
            let g = simulate_game(&ens, &strat, *n, *trials, seed)?;
            let summary = vec![format!(
                "payout {:.6} ± {:.6} over {} trials (exact {:.10})",
                g.expected_payout, g.std_error, g.trials, g.exact_payout
            )];
            let results = json!({
                "n_payout": g.n_payout,
                "trials": g.trials,
                "wins": g.wins,
                "win_rate": g.win_rate,
                "expected_payout": g.expected_payout,
                "std_error": g.std_error,
                "exact_payout": g.exact_payout,
            });
            let inputs = base(json!({ "ensemble": ensemble, "strategy": strategy, "n": n, "trials": trials }));
            ok("game", inputs, results, summary)
        }
    })
}
