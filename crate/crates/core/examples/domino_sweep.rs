//! The domino strategy's certificate reduced to finitely many families of
//! B-measurements, each scanned on a grid.

use seqdisc::cases::domino_certificate_sweep;

fn main() -> seqdisc::Result<()> {
    let grid = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(64);
    let rep = domino_certificate_sweep(grid)?;
    for v in &rep.verdicts {
        println!("{:<16} margin {:>10.3e}  {}", v.label, v.margin, if v.pass { "ok" } else { "VIOLATED" });
    }
    for (name, value) in &rep.scalars {
        println!("{name:<26} {value:.3e}");
    }
    Ok(())
}
