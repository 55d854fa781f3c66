use seqdisc::cli::{run_with, EXIT_CERTIFICATE_FAIL, EXIT_OK, EXIT_REJECTED};
use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("seqdisc").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).expect("stdout is one JSON document")
}

#[test]
fn report_has_the_common_fields() {
    let (code, out, _) = run(&["solve-global", "--ensemble", "builtin:double_trine"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    for key in ["command", "inputs", "results", "version", "elapsed_ms"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["command"], "solve-global");
    assert_eq!(v["inputs"]["seed"], 0);
    let p = v["results"]["p_corr"].as_f64().unwrap();
    assert!((p - (0.5 + 2f64.sqrt() / 3.0)).abs() < 1e-6);
}

#[test]
fn reports_are_byte_identical_for_a_seed() {
    let args = ["--seed", "3", "solve-seq", "--ensemble", "builtin:bell3", "--restarts", "4"];
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    assert_eq!(a, b);
}

#[test]
fn ensemble_files_load_like_builtins() {
    let (_, from_file, _) = run(&["solve-global", "--ensemble", &data("double_trine_ensemble.json")]);
    let (_, builtin, _) = run(&["solve-global", "--ensemble", "builtin:double_trine"]);
    let a = json(&from_file)["results"]["p_corr"].as_f64().unwrap();
    let b = json(&builtin)["results"]["p_corr"].as_f64().unwrap();
    assert!((a - b).abs() < 1e-9);
}

#[test]
fn check_passes_the_optimal_strategy() {
    let (code, out, _) = run(&[
        "check",
        "--ensemble",
        "builtin:double_trine",
        "--strategy",
        &data("double_trine_optimal.json"),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(json(&out)["results"].is_object());
}

#[test]
fn certify_exit_codes() {
    let opt = run(&[
        "certify",
        "--ensemble",
        "builtin:double_trine",
        "--strategy",
        &data("double_trine_optimal.json"),
        "--budget",
        "256",
    ]);
    assert_eq!(opt.0, EXIT_OK, "{}", opt.2);
    let nonopt = run(&[
        "certify",
        "--ensemble",
        "builtin:double_trine",
        "--strategy",
        &data("double_trine_nonoptimal.json"),
        "--budget",
        "256",
    ]);
    assert_eq!(nonopt.0, EXIT_CERTIFICATE_FAIL);
    // the report is still written
    assert!(json(&nonopt.1)["results"].is_object());
}

#[test]
fn bad_input_is_rejected() {
    assert_eq!(run(&["no-such-command"]).0, EXIT_REJECTED);
    assert_eq!(run(&["solve-global", "--ensemble", "builtin:nope"]).0, EXIT_REJECTED);
    assert_eq!(run(&["solve-global", "--ensemble", "/nonexistent/file.json"]).0, EXIT_REJECTED);
    // payout must match the number of A-outcomes
    let (code, _, _) = run(&[
        "game",
        "--ensemble",
        "builtin:double_trine",
        "--strategy",
        &data("double_trine_optimal.json"),
        "--n",
        "2",
    ]);
    assert_eq!(code, EXIT_REJECTED);
    // strategy for the wrong ensemble
    let (code, _, _) = run(&["check", "--ensemble", "builtin:domino", "--strategy", &data("bell3.json")]);
    assert_eq!(code, EXIT_REJECTED);
}

#[test]
fn game_reports_payout() {
    let (code, out, _) = run(&[
        "game",
        "--ensemble",
        "builtin:bell3",
        "--strategy",
        &data("bell3.json"),
        "--n",
        "2",
        "--trials",
        "20000",
    ]);
    assert_eq!(code, EXIT_OK);
    let r = &json(&out)["results"];
    let payout = r["expected_payout"].as_f64().unwrap();
    let se = r["std_error"].as_f64().unwrap();
    assert!((payout - 2.0 / 3.0).abs() < 4.0 * se);
}

#[test]
fn ensembles_list_and_show() {
    let (code, out, _) = run(&["ensembles", "list"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("domino"));
    let (code, out, _) = run(&["ensembles", "show", "trine"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("priors"));
}

#[test]
fn case_study_runs() {
    let (code, out, _) = run(&["case-study", "double-trine-overlap"]);
    assert_eq!(code, EXIT_OK);
    assert!(json(&out)["results"].is_object());
}

#[test]
fn solve_seq_writes_a_loadable_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("best.json");
    let p = path.to_str().unwrap();
    let (code, _, _) = run(&["solve-seq", "--ensemble", "builtin:bell3", "--restarts", "3", "--output", p]);
    assert_eq!(code, EXIT_OK);
    let (code, _, _) = run(&["check", "--ensemble", "builtin:bell3", "--strategy", p]);
    assert!(code == EXIT_OK || code == seqdisc::cli::EXIT_FAILURE);
}
