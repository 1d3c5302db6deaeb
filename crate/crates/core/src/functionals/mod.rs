//! Bookkeeping functionals of an approximate solution: weighted strengths, the
//! interaction potential, the Glimm functional and its per-event monitor, the
//! Lyapunov functional between two solutions, and coefficient calibration.

pub mod glimm;
pub mod lyapunov;
pub mod probe;

use serde::{Deserialize, Serialize};

/// Weights of the Glimm functional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalConstants {
    /// Weight of approaching weak pairs.
    pub c_star: f64,
    /// Weight of waves approaching the strong shock.
    pub k_star: f64,
    /// Weight of the remaining wall turning.
    pub k_b0_tilde: f64,
    /// Weight of weak waves upstream of the strong shock.
    pub k_minus: f64,
    /// Weight of nonphysical fronts.
    pub k_np: f64,
    /// Weight of the potential in the functional.
    pub kappa: f64,
}

impl Default for FunctionalConstants {
    fn default() -> Self {
        Self {
            c_star: 1.0,
            k_star: 1.0,
            k_b0_tilde: 4.0,
            k_minus: 4.0,
            k_np: 1.0,
            kappa: 4.0,
        }
    }
}
