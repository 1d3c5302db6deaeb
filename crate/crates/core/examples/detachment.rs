//! Largest inflow angle with an attached vertex shock, against the classical
//! maximum deflection, for a few Mach numbers.

use wedge_tracking::gasdyn::GasModel;
use wedge_tracking::validation::detachment::detachment_scan;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gas = GasModel::new(1.4)?;
    println!("{:>5} {:>12} {:>12}", "M", "solver deg", "theta_max");
    for m in [1.5, 2.0, 3.0, 4.0, 5.0] {
        let s = detachment_scan(m, &gas);
        println!(
            "{m:>5.1} {:>12.4} {:>12.4}",
            s.omega_crit.to_degrees(),
            s.max_deflection.to_degrees()
        );
    }
    Ok(())
}
