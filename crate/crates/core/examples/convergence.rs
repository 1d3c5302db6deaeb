//! Runs the perturbed wedge at decreasing eps and fits the rate at which
//! consecutive solutions approach each other in L1.

use wedge_tracking::tracking::RunConfig;
use wedge_tracking::validation::convergence::convergence_study;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = RunConfig::perturbed_wedge(11, 1e-2);
    cfg.x_max = 0.6;
    let table = convergence_study(&cfg, &[3e-2, 1e-2, 3e-3, 1e-3], 0.55, -1.0)?;
    let next = table.consecutive();
    println!(
        "{:>8} {:>8} {:>7} {:>9} {:>14}",
        "eps", "events", "fronts", "seconds", "L1 to next"
    );
    for (row, d) in table
        .rows
        .iter()
        .zip(next.iter().map(Some).chain(std::iter::repeat(None)))
    {
        let d = d
            .copied()
            .flatten()
            .map(|d| format!("{d:.6e}"))
            .unwrap_or_default();
        println!(
            "{:>8.0e} {:>8} {:>7} {:>9.3} {:>14}",
            row.eps, row.events, row.fronts, row.seconds, d
        );
    }
    match table.slope {
        Some(s) => println!("log-log slope {s:.3}"),
        None => println!("not enough completed runs for a slope"),
    }
    Ok(())
}
