//! Closed-path flux integrals of a computed solution on a few rectangles: the
//! residual is at roundoff wherever only physical fronts cross.

use wedge_tracking::tracking::{run, RunConfig};
use wedge_tracking::validation::residual::{conservation_residual, snap_between_events, Rect};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = RunConfig::perturbed_wedge(3, 1e-2);
    cfg.x_max = 0.8;
    let r = run(&cfg)?;
    let h = &r.history;
    println!(
        "{:>24} {:>11} {:>11} {:>11} {:>11} {:>5}",
        "rectangle", "max rel", "entropy", "NP", "rarefied", "wall"
    );
    for (x0, x1, y0, y1) in [
        (0.01, 0.06, -0.03, 0.005),
        (0.1, 0.2, -0.5, -0.3),
        (0.2, 0.5, -0.3, 0.0),
        (0.05, 0.7, -1.0, 0.1),
        (0.5, 0.75, -0.2, 0.05),
    ] {
        let rect = Rect {
            x0: snap_between_events(h, x0),
            x1: snap_between_events(h, x1),
            y0,
            y1,
        };
        let rep = conservation_residual(h, rect, &cfg.gas)?;
        println!(
            "[{:.2},{:.2}]x[{:+.2},{:+.2}] {:>11.3e} {:>11.3e} {:>11.3e} {:>11.3e} {:>5}",
            rect.x0,
            rect.x1,
            y0,
            y1,
            rep.max_relative(),
            rep.entropy,
            rep.nonphysical,
            rep.rarefaction,
            rep.wall
        );
    }
    Ok(())
}
