//! The accurate solver on a random small jump, the strong-shock solver on a
//! perturbed vertex shock, and a Prandtl-Meyer check of a discretized fan.

use wedge_tracking::gasdyn::{GasModel, State};
use wedge_tracking::riemann::{
    lateral_riemann, solve_accurate, solve_boundary_vertex, solve_strong_discretized,
    BoundaryRiemannInput,
};
use wedge_tracking::validation::oracle::prandtl_meyer;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gas = GasModel::new(1.4)?;
    let below = State::from_mach(3.0, 0.17, 1.0, &gas);
    let above = State::new(
        below.u * 1.004,
        below.v - 0.01,
        below.p * 0.99,
        below.rho * 1.02,
    );
    let fan = solve_accurate(&below, &above, &gas, 1e-3)?;
    println!(
        "accurate fan: {} waves, composition residual {:.2e}",
        fan.waves.len(),
        fan.residual
    );
    for w in &fan.waves {
        println!(
            "  family {} strength {:+.6e} slope {:+.6}",
            w.family.index(),
            w.strength,
            w.speed
        );
    }

    let vertex = lateral_riemann(&below, 0.0, &gas)?;
    let nudged = State {
        p: vertex.above.p * 1.003,
        ..vertex.above
    };
    let fan = solve_strong_discretized(&vertex.below, &nudged, &gas, 1e-3)?;
    let s = fan.strong.ok_or("no strong shock")?;
    println!(
        "strong shock slope {:.8} -> {:.8}, {} outgoing weak waves",
        vertex.sigma,
        s.sigma,
        fan.waves.len() - 1
    );

    let turn = 0.05;
    let input = BoundaryRiemannInput {
        state: vertex.above,
        omega: turn,
        normal_next: [-turn.sin(), turn.cos()],
    };
    let fan = solve_boundary_vertex(&input, &gas, 1e-2)?;
    let end = fan.waves.last().ok_or("empty fan")?.above;
    let dnu = prandtl_meyer(end.mach(&gas), &gas) - prandtl_meyer(vertex.above.mach(&gas), &gas);
    println!(
        "expansion by {turn} rad in {} pieces: Prandtl-Meyer change {dnu:.10}",
        fan.waves.len()
    );
    Ok(())
}
