use serde::Serialize;

use crate::gasdyn::{GasModel, State};
use crate::riemann::lateral_riemann;

use super::oracle::oblique_shock;

/// Measured largest vertex angle the tracker can start from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetachmentScan {
    pub mach: f64,
    pub gamma: f64,
    /// Largest inflow angle (radians) for which the vertex shock solve succeeds.
    pub omega_crit: f64,
    /// Classical maximum deflection; the solver needs a supersonic downstream state
    /// and so stops somewhat earlier.
    pub max_deflection: f64,
}

const STEP_DEG: f64 = 0.1;
const REFINE_DEG: f64 = 1e-4;

/// Scans the inflow angle in steps of 0.1 degree until the vertex shock fails, then
/// bisects to 1e-4 degree.
pub fn detachment_scan(mach: f64, gas: &GasModel) -> DetachmentScan {
    let ok = |deg: f64| {
        let up = State::from_mach(mach, deg.to_radians(), 1.0, gas);
        lateral_riemann(&up, 0.0, gas).is_ok()
    };
    let mut lo = 0.0;
    let mut hi = STEP_DEG;
    while hi < 90.0 && ok(hi) {
        lo = hi;
        hi += STEP_DEG;
    }
    while hi - lo > REFINE_DEG {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    DetachmentScan {
        mach,
        gamma: gas.gamma,
        omega_crit: lo.to_radians(),
        max_deflection: oblique_shock(mach, 0.0, gas).max_deflection,
    }
}
