//! One line per acceptance criterion. Runs without the libtest harness so
//! every criterion is reported even when an earlier one fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqdisc::cases::*;
use seqdisc::ensembles::{builtin_ensemble, Ensemble, EnsembleName};
use seqdisc::global::{check_global_optimality, helstrom_two_state, solve_min_error, LABEL_PAIRWISE};
use seqdisc::operator::{c64, hermitian_eigen, ComplexMatrix, HermitianOperator, Tolerances, C64};
use seqdisc::sequential::*;

struct Check {
    ok: bool,
    detail: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check { ok: true, detail: Vec::new() }
    }

    fn near(&mut self, label: &str, got: f64, want: f64, tol: f64) {
        let ok = (got - want).abs() <= tol;
        self.ok &= ok;
        self.detail.push(format!("{label}={got:.10} (want {want:.10} ±{tol:e}){}", mark(ok)));
    }

    fn at_most(&mut self, label: &str, got: f64, limit: f64) {
        let ok = got <= limit;
        self.ok &= ok;
        self.detail.push(format!("{label}={got:.3e} (≤ {limit:e}){}", mark(ok)));
    }

    fn at_least(&mut self, label: &str, got: f64, limit: f64) {
        let ok = got >= limit;
        self.ok &= ok;
        self.detail.push(format!("{label}={got:.3e} (≥ {limit:e}){}", mark(ok)));
    }

    fn holds(&mut self, label: &str, ok: bool) {
        self.ok &= ok;
        self.detail.push(format!("{label}={ok}{}", mark(ok)));
    }

    fn within(&mut self, elapsed: Duration, limit: Duration) {
        let ok = elapsed <= limit;
        self.ok &= ok;
        self.detail.push(format!("time={elapsed:.2?} (≤ {limit:?}){}", mark(ok)));
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        ""
    } else {
        " <-- FAIL"
    }
}

type Criterion = fn(&mut Check) -> seqdisc::Result<()>;

fn double_trine_sequential(c: &mut Check) -> seqdisc::Result<()> {
    let t = Instant::now();
    let ens = builtin_ensemble(EnsembleName::DoubleTrine);
    let p = p_corr_sequential(&ens, &double_trine_optimal_strategy())?;
    c.near("p_corr", p, (2.0 + 3f64.sqrt()) / 4.0, 1e-9);
    c.within(t.elapsed(), Duration::from_secs(1));
    Ok(())
}

fn double_trine_global_srm(c: &mut Check) -> seqdisc::Result<()> {
    let t = Instant::now();
    let r = double_trine_global()?;
    let want = 0.5 + 2f64.sqrt() / 3.0;
    c.near("p_srm", r.get_extra("p_corr_square_root").unwrap(), want, 1e-9);
    c.near("p_solver", r.get_extra("p_corr_solver").unwrap(), want, 1e-6);
    c.at_least("ratio", r.get_extra("sequential_ratio").unwrap(), 0.96);
    c.within(t.elapsed(), Duration::from_secs(5));
    Ok(())
}

fn overlaps(c: &mut Check) -> seqdisc::Result<()> {
    let t = Instant::now();
    let r = double_trine_overlap_analysis()?;
    c.near("|<a0|F0>|^2", r.get_extra("alpha0_phi0_overlap_sq").unwrap(), 0.9997, 1e-4);
    c.near("<F0|pi0|F0>", r.get_extra("phi0_pi0_expectation").unwrap(), 0.9551, 1e-4);
    c.within(t.elapsed(), Duration::from_secs(1));
    Ok(())
}

fn nonoptimal_trine(c: &mut Check) -> seqdisc::Result<()> {
    let t = Instant::now();
    let r = double_trine_nonoptimal()?;
    c.at_most("gamma_dev", r.get_extra("gamma_a_deviation").unwrap(), 1e-10);
    c.near("p_corr", r.p_corr, 0.8, 1e-12);
    c.at_most("table_dev", r.get_extra("success_table_deviation").unwrap(), 1e-10);
    c.holds("necessary_b_pass", r.get_report("necessary_b").unwrap().passed());
    c.holds("necessary_a_pass", r.get_report("necessary_a").unwrap().passed());
    c.holds("certificate_fails", !r.get_report("certificate").unwrap().passed());
    let gain = r.get_extra("witness_improvement").unwrap_or(f64::NAN);
    c.holds("witness_improves", gain > 0.0);
    c.detail.push(format!("improvement={gain:.3e}"));
    c.within(t.elapsed(), Duration::from_secs(30));
    Ok(())
}

fn certificate_optimal(c: &mut Check) -> seqdisc::Result<()> {
    let t = Instant::now();
    let r = double_trine_optimal()?;
    let cert = r.get_report("certificate").unwrap();
    c.holds("certificate_pass", cert.passed());
    c.at_least("min_margin", cert.worst_margin(), -1e-7);
    c.near(
        "inner/weight",
        r.get_extra("binding_inner_value_normalized").unwrap(),
        0.5 * (1.0 + 3f64.sqrt() / 2.0),
        1e-6,
    );
    c.at_most("prior_distance", r.get_extra("binding_prior_distance").unwrap(), 1e-4);
    c.within(t.elapsed(), Duration::from_secs(60));
    Ok(())
}

fn bell_trio(c: &mut Check) -> seqdisc::Result<()> {
    let t = Instant::now();
    let r = bell3_strategy()?;
    c.near("p_corr", r.p_corr, 2.0 / 3.0, 1e-12);
    let red = r.get_report("identity_reduction").unwrap();
    c.at_least("reduction_margin", red.worst_margin(), -1e-9);
    c.holds("certificate_pass", r.get_report("certificate").unwrap().passed());
    c.within(t.elapsed(), Duration::from_secs(5));
    Ok(())
}

fn domino(c: &mut Check) -> seqdisc::Result<()> {
    let t = Instant::now();
    let r = domino_strategy()?;
    c.near("p", r.get_extra("p").unwrap(), 0.293804, 1e-5);
    c.near("q", r.get_extra("q").unwrap(), 0.248132, 1e-5);
    c.near("p_corr", r.p_corr, 0.835741, 1e-4);
    c.at_most("completeness", r.get_extra("completeness_deviation").unwrap(), 1e-8);
    c.near("p_global", r.get_extra("p_corr_global").unwrap(), 1.0, 1e-8);
    let sweep = domino_certificate_sweep(128)?;
    c.at_least("sweep_min_margin", sweep.worst_margin(), -1e-9);
    c.holds("sweep_pass", sweep.passed());
    c.within(t.elapsed(), Duration::from_secs(300));
    Ok(())
}

fn seesaw(c: &mut Check) -> seqdisc::Result<()> {
    let t = Instant::now();
    let dt = builtin_ensemble(EnsembleName::DoubleTrine);
    let best = seesaw_optimize_with(&dt, &SeesawOptions::default())?;
    c.near("double_trine_best", best.best.p_corr, (2.0 + 3f64.sqrt()) / 4.0, 1e-4);
    let trine = seesaw_from(&dt, trine_measurement(), 300, 1e-12)?;
    c.near("trine_start", trine.p_corr, 0.8, 1e-6);
    let b3 = builtin_ensemble(EnsembleName::Bell3);
    let bell = seesaw_optimize_with(&b3, &SeesawOptions::default())?;
    c.near("bell3_best", bell.best.p_corr, 2.0 / 3.0, 1e-6);
    let worst = best
        .runs
        .iter()
        .chain(&bell.runs)
        .chain(std::iter::once(&trine))
        .map(|r| r.max_decrease())
        .fold(0.0, f64::max);
    c.at_most("max_decrease", worst, 1e-10);
    c.within(t.elapsed(), Duration::from_secs(120));
    Ok(())
}

fn random_qubit(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let v: Vec<C64> = (0..2).map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    ComplexMatrix::ket(&v).normalized()
}

fn oracles(c: &mut Check) -> seqdisc::Result<()> {
    let t = Instant::now();
    let tol = Tolerances::default();
    let mut helstrom_gap: f64 = 0.0;
    let mut residual: f64 = 0.0;
    let mut pairwise = |e: &Ensemble, povm: &seqdisc::global::Povm| -> seqdisc::Result<()> {
        let r = check_global_optimality(e, povm, &tol)?;
        residual = residual.max(-r.verdict(LABEL_PAIRWISE).unwrap().margin);
        Ok(())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let (a, b) = (random_qubit(&mut rng), random_qubit(&mut rng));
        let p: f64 = rng.gen_range(0.05..0.95);
        let e = Ensemble::from_kets(&[a, b], vec![p, 1.0 - p], None)?;
        let h = helstrom_two_state(p, e.state(0), 1.0 - p, e.state(1))?;
        let s = solve_min_error(&e, 2000, 1e-10)?;
        helstrom_gap = helstrom_gap.max((h.p_corr - s.p_corr).abs());
        pairwise(&e, &s.povm)?;
    }
    for name in [EnsembleName::DoubleTrine, EnsembleName::Bell3, EnsembleName::Domino] {
        let e = builtin_ensemble(name);
        pairwise(&e, &solve_min_error(&e, 2000, 1e-10)?.povm)?;
    }
    c.at_most("helstrom_gap", helstrom_gap, 1e-6);

    let trines: Vec<HermitianOperator> = (0..3)
        .map(|k| HermitianOperator::pure_state(&seqdisc::ensembles::trine_ket(k)))
        .collect();
    let mut lambda_gap: f64 = 0.0;
    for _ in 0..100 {
        let s: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
        let op = HermitianOperator::sum(2, &trines.iter().zip(s).map(|(r, w)| r.scale(w)).collect::<Vec<_>>());
        let eig = hermitian_eigen(&op)?;
        let (lm, lp) = lambda_pm_formula(s);
        lambda_gap = lambda_gap.max((eig.values[0] - lm).abs()).max((eig.values[1] - lp).abs());
    }
    c.at_most("lambda_gap", lambda_gap, 1e-10);
    c.at_most("pairwise_residual", residual, 1e-8);
    c.within(t.elapsed(), Duration::from_secs(60));
    Ok(())
}

fn game(c: &mut Check) -> seqdisc::Result<()> {
    let t = Instant::now();
    let ens = builtin_ensemble(EnsembleName::DoubleTrine);
    let g = simulate_game(&ens, &double_trine_optimal_strategy(), 3, 1_000_000, 11)?;
    let want = (2.0 + 3f64.sqrt()) / 4.0;
    c.at_most("|payout - p|/se", (g.expected_payout - want).abs() / g.std_error, 3.0);
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/double_trine_optimal.json");
    let report = || {
        let mut out = Vec::new();
        let argv = ["seqdisc", "--seed", "5", "game", "--ensemble", "builtin:double_trine", "--strategy", path, "--n", "3"];
        let code = seqdisc::cli::run_with(argv, &mut out, &mut std::io::sink());
        (code, out)
    };
    let (c1, r1) = report();
    let (c2, r2) = report();
    c.holds("cli_exit_ok", c1 == 0 && c2 == 0);
    c.holds("identical_bytes", !r1.is_empty() && r1 == r2);
    c.within(t.elapsed(), Duration::from_secs(60));
    Ok(())
}

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("double trine optimal sequential", double_trine_sequential),
        ("double trine global", double_trine_global_srm),
        ("overlap extras", overlaps),
        ("non-optimal trine scheme", nonoptimal_trine),
        ("certificate on double trine optimal", certificate_optimal),
        ("Bell trio", bell_trio),
        ("domino", domino),
        ("see-saw", seesaw),
        ("oracle equivalences", oracles),
        ("game simulator", game),
    ];
    let mut failures = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let mut c = Check::new();
        if let Err(e) = f(&mut c) {
            c.ok = false;
            c.detail.push(format!("error: {e}"));
        }
        if !c.ok {
            failures += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {}",
            if c.ok { "PASS" } else { "FAIL" },
            k + 1,
            c.detail.join(", ")
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
