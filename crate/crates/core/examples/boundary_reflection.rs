//! Uniform flow under a wall that first turns away from the flow and then into it:
//! the expansion corner emits a split rarefaction, the compression corner a 1-shock,
//! and both later run into the attached shock.

use std::collections::BTreeMap;

use wedge_tracking::gasdyn::{GasModel, State};
use wedge_tracking::tracking::{run, InflowProfile, RunConfig, SolverPath, WedgeBoundary};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gas = GasModel::new(1.4)?;
    let inflow = State::from_mach(3.0, 10f64.to_radians(), 1.0, &gas);
    let wall = WedgeBoundary::from_face_angles(&[0.3, 0.8], &[0.02, -0.01])?;
    let mut cfg = RunConfig::new(gas, InflowProfile::uniform(inflow), wall, 1e-2);
    cfg.x_max = 1.5;
    let r = run(&cfg)?;

    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for e in &r.history.events {
        let seen = counts.entry(format!("{:?}", e.solver)).or_insert(0);
        *seen += 1;
        if *seen > 3 {
            continue;
        }
        match e.solver {
            Some(SolverPath::Vertex) => println!(
                "x = {:.4}: corner of {:+.4} rad emits {} fronts, strengths {:?}",
                e.x,
                e.omega,
                e.created.len(),
                e.strengths_out
                    .iter()
                    .map(|s| format!("{s:+.3e}"))
                    .collect::<Vec<_>>()
            ),
            Some(SolverPath::Reflection) => {
                println!(
                    "x = {:.4}: wall reflection, in {:+.3e}",
                    e.x, e.strengths_in[0]
                )
            }
            Some(SolverPath::StrongAccurate) | Some(SolverPath::StrongSimplified) => println!(
                "x = {:.4}: front of strength {:+.3e} meets the shock at y = {:.4}",
                e.x, e.strengths_in[0], e.y
            ),
            _ => {}
        }
    }
    for (solver, n) in &counts {
        println!("{solver:<28} {n:>8}");
    }
    let shock = r.final_set.strong().ok_or("no strong shock")?;
    println!(
        "{} events; final shock slope {:.6} (initially {:.6}); wall state angle {:.6} rad",
        r.history.events.len(),
        shock.sigma,
        r.background.map(|b| b.sigma).unwrap_or(f64::NAN),
        r.final_set.top_state().angle()
    );
    Ok(())
}
