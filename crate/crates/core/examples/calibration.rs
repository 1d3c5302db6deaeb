//! Probes the interaction coefficients at the Mach 3, 10 degree background and
//! prints the constants chosen for the Glimm functional.

use wedge_tracking::functionals::probe::{calibrate, Background};
use wedge_tracking::gasdyn::GasModel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gas = GasModel::new(1.4)?;
    let bg = Background::straight_wedge(3.0, 10f64.to_radians(), &gas)?;
    let cal = calibrate(&bg, &gas, 0.05, 400, 1)?;
    let t = &cal.table;
    println!(
        "K_b4 {:.6}  K_b0 {:.6}  K_s4 {:.6}  key ratio {:.6}",
        t.k_b4, t.k_b0, t.k_s[3], t.key_ratio
    );
    println!("{:#?}", cal.constants);
    println!("{:#?}", cal.margins);
    Ok(())
}
