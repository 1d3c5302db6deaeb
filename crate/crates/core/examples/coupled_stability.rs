//! Two solutions from nearby inflows: the weighted functional Phi between them and
//! the plain L1 distance, station by station.

use wedge_tracking::functionals::lyapunov::{boundary_estimate, lyapunov, LyapunovWeights};
use wedge_tracking::tracking::{run, InflowProfile, InflowRow, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut u_cfg = RunConfig::perturbed_wedge(5, 1e-2);
    u_cfg.x_max = 1.0;
    let mut v_cfg = u_cfg.clone();
    let rows = u_cfg
        .inflow
        .rows
        .iter()
        .map(|r| {
            let mut s = r.state;
            s.p *= 1.0 + 2e-3;
            s.rho *= 1.0 + 2e-3;
            InflowRow { y: r.y, state: s }
        })
        .collect();
    v_cfg.inflow = InflowProfile::step(rows);
    let (u, v) = (run(&u_cfg)?, run(&v_cfg)?);

    let weights = LyapunovWeights::default();
    let x_end = u.history.x_end.min(v.history.x_end);
    println!(
        "{:>6} {:>14} {:>14} {:>10} {:>10}",
        "x", "Phi", "L1", "|p4|/|p1|", "contact"
    );
    for i in 0..=10 {
        let x = x_end * i as f64 / 10.0;
        let (a, b) = (u.history.front_set_at(x), v.history.front_set_at(x));
        let phi = lyapunov(
            &a,
            &b,
            &u_cfg.boundary,
            &weights,
            &u_cfg.constants,
            &u_cfg.gas,
            u_cfg.sampling.y_min,
        );
        let wall = boundary_estimate(&a, &b, &u_cfg.boundary, &u_cfg.gas)?;
        let (refl, contact) = wall
            .map(|w| (w.reflection_ratio, w.contact_ratio))
            .unwrap_or((f64::NAN, f64::NAN));
        println!(
            "{x:>6.3} {:>14.6e} {:>14.6e} {refl:>10.4} {contact:>10.4}",
            phi.phi, phi.l1
        );
    }
    Ok(())
}
