//! Round trip of ensembles and strategies through their JSON files.

use seqdisc::cases::double_trine_optimal_strategy;
use seqdisc::ensembles::{builtin_ensemble, load_ensemble, parse_ensemble, EnsembleFile, EnsembleName};
use seqdisc::operator::Tolerances;
use seqdisc::sequential::{load_strategy, p_corr_sequential};

fn main() -> seqdisc::Result<()> {
    let dir = std::env::temp_dir().join("seqdisc-files-example");
    std::fs::create_dir_all(&dir)?;

    let e = builtin_ensemble(EnsembleName::DoubleTrine);
    let path = dir.join("double_trine.json");
    let text = serde_json::to_string_pretty(&EnsembleFile::from_ensemble(&e)).expect("serializable");
    std::fs::write(&path, &text)?;
    let back = load_ensemble(&path)?;
    println!("ensemble written to {} (max difference {:.1e})", path.display(), e.max_abs_diff(&back));

    // priors may be given as fractions
    let small = r#"{"dim": 2, "priors": ["1/4", "3/4"],
                    "kets": [[[1, 0], [0, 0]], [[0.6, 0], [0, 0.8]]]}"#;
    let pair = parse_ensemble(small, &Tolerances::default())?;
    println!("parsed ensemble priors {:?}", pair.priors());

    let s = double_trine_optimal_strategy();
    let spath = dir.join("strategy.json");
    s.save(&spath)?;
    let loaded = load_strategy(&spath, &Tolerances::default())?;
    println!("strategy reloaded: p_corr = {:.10}", p_corr_sequential(&back, &loaded)?);
    Ok(())
}
