//! Calibrates the functional constants at the vertex state, runs a perturbed
//! wedge and reports the realized decrease of F and Q per interaction case.

use std::collections::BTreeMap;

use wedge_tracking::functionals::glimm::monitor_event;
use wedge_tracking::functionals::probe::{calibrate, Background};
use wedge_tracking::tracking::{run, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = RunConfig::perturbed_wedge(11, 3e-3);
    cfg.x_max = 0.6;
    let gas = cfg.gas;
    let vertex = cfg.inflow.vertex_state();
    let bg = Background::straight_wedge(vertex.mach(&gas), vertex.angle(), &gas)?;
    let cal = calibrate(&bg, &gas, 0.05, 200, 3)?;
    println!("constants: {:?}", cal.constants);
    println!("case margins all positive: {}", cal.margins.all_hold());
    cfg.constants = cal.constants;

    let r = run(&cfg)?;
    let mut cases: BTreeMap<String, (usize, usize, f64)> = BTreeMap::new();
    for (k, e) in r.history.events.iter().enumerate() {
        let v = monitor_event(
            &r.reports[k],
            &r.reports[k + 1],
            e.measure_kind,
            e.measure,
            0.0,
        );
        let entry = cases
            .entry(format!("{:?}", e.solver))
            .or_insert((0, 0, f64::INFINITY));
        entry.0 += 1;
        entry.1 += usize::from(v.f_ok);
        if e.measure > 0.0 {
            entry.2 = entry.2.min(v.rate);
        }
    }
    println!(
        "{:<28} {:>7} {:>7} {:>12}",
        "solver", "events", "dF<=0", "min rate"
    );
    for (name, (n, ok, rate)) in cases {
        println!("{name:<28} {n:>7} {ok:>7} {rate:>12.4e}");
    }
    let last = r.reports.last().ok_or("no reports")?;
    println!("F: {:.6e} -> {:.6e}", r.reports[0].f, last.f);
    Ok(())
}
