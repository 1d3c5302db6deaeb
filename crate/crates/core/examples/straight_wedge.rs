//! Uniform Mach 3 flow onto a 10 degree wedge: one attached shock, compared with
//! the classical oblique-shock relation.

use wedge_tracking::gasdyn::GasModel;
use wedge_tracking::tracking::{run, RunConfig};
use wedge_tracking::validation::oracle::oblique_shock;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gas = GasModel::new(1.4)?;
    let theta = 10f64.to_radians();
    let cfg = RunConfig::straight_wedge(3.0, theta, gas, 1e-2);
    let r = run(&cfg)?;
    let shock = r.final_set.strong().ok_or("no strong shock")?;
    let beta = theta - shock.sigma.atan();
    let oracle = oblique_shock(3.0, theta, &gas);
    let weak = oracle.weak.ok_or("detached")?;
    println!(
        "fronts: {}, events: {}",
        r.final_set.fronts.len(),
        r.history.events.len()
    );
    println!(
        "shock angle  tracker {:.10} deg  oracle {:.10} deg",
        beta.to_degrees(),
        weak.beta.to_degrees()
    );
    println!(
        "p2/p1        tracker {:.10}      oracle {:.10}",
        shock.above.p / shock.below.p,
        weak.pressure_ratio
    );
    println!(
        "wall flow angle behind the shock: {:.3e} rad",
        shock.above.angle()
    );
    Ok(())
}
