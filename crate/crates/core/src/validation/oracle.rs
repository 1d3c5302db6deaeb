//! Classical closed-form gas dynamics used as independent references: the
//! oblique-shock theta-beta-Mach relation and the Prandtl-Meyer function.

use serde::Serialize;

use crate::gasdyn::GasModel;

/// Downstream data of one oblique-shock branch, relative to the upstream state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObliqueBranch {
    /// Shock angle measured from the upstream flow direction (radians).
    pub beta: f64,
    pub pressure_ratio: f64,
    pub density_ratio: f64,
    pub downstream_mach: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObliqueShockSolution {
    pub weak: Option<ObliqueBranch>,
    pub strong: Option<ObliqueBranch>,
    pub detached: bool,
    /// Largest deflection for which an attached shock exists at this Mach number.
    pub max_deflection: f64,
}

impl ObliqueShockSolution {
    pub fn beta_weak(&self) -> Option<f64> {
        self.weak.map(|b| b.beta)
    }

    pub fn beta_strong(&self) -> Option<f64> {
        self.strong.map(|b| b.beta)
    }
}

/// Deflection produced by a shock at angle `beta`.
pub fn deflection(mach: f64, beta: f64, gas: &GasModel) -> f64 {
    let g = gas.gamma;
    let m2 = mach * mach;
    let s = beta.sin();
    let num = 2.0 * (m2 * s * s - 1.0) / beta.tan();
    let den = m2 * (g + (2.0 * beta).cos()) + 2.0;
    (num / den).atan()
}

/// Residual of the theta-beta-Mach identity.
pub fn theta_beta_mach_residual(mach: f64, theta: f64, beta: f64, gas: &GasModel) -> f64 {
    let g = gas.gamma;
    let m2 = mach * mach;
    let s = beta.sin();
    theta.tan() - 2.0 * (m2 * s * s - 1.0) / beta.tan() / (m2 * (g + (2.0 * beta).cos()) + 2.0)
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn branch(mach: f64, theta: f64, beta: f64, gas: &GasModel) -> ObliqueBranch {
    let g = gas.gamma;
    let mn1 = mach * beta.sin();
    let mn1_2 = mn1 * mn1;
    let pressure_ratio = 1.0 + 2.0 * g / (g + 1.0) * (mn1_2 - 1.0);
    let density_ratio = (g + 1.0) * mn1_2 / ((g - 1.0) * mn1_2 + 2.0);
    let mn2_2 = (1.0 + 0.5 * (g - 1.0) * mn1_2) / (g * mn1_2 - 0.5 * (g - 1.0));
    let downstream_mach = mn2_2.sqrt() / (beta - theta).sin();
    ObliqueBranch {
        beta,
        pressure_ratio,
        density_ratio,
        downstream_mach,
    }
}

/// Both roots of the theta-beta-Mach relation for deflection `theta >= 0`.
pub fn oblique_shock(mach: f64, theta: f64, gas: &GasModel) -> ObliqueShockSolution {
    let mu = (1.0 / mach).asin();
    let half_pi = std::f64::consts::FRAC_PI_2;
    // golden-section search for the angle of maximum deflection
    let (mut a, mut b) = (mu, half_pi);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if deflection(mach, c, gas) > deflection(mach, d, gas) {
            b = d;
        } else {
            a = c;
        }
    }
    let beta_max = 0.5 * (a + b);
    let max_deflection = deflection(mach, beta_max, gas);
    if theta > max_deflection {
        return ObliqueShockSolution {
            weak: None,
            strong: None,
            detached: true,
            max_deflection,
        };
    }
    if theta == 0.0 {
        return ObliqueShockSolution {
            weak: Some(branch(mach, 0.0, mu, gas)),
            strong: Some(branch(mach, 0.0, half_pi, gas)),
            detached: false,
            max_deflection,
        };
    }
    let f = |beta: f64| deflection(mach, beta, gas) - theta;
    let weak = bisect(mu, beta_max, f);
    let strong = bisect(beta_max, half_pi, f);
    ObliqueShockSolution {
        weak: Some(branch(mach, theta, weak, gas)),
        strong: Some(branch(mach, theta, strong, gas)),
        detached: false,
        max_deflection,
    }
}

/// Prandtl-Meyer angle `nu(M)` in radians, `M >= 1`.
pub fn prandtl_meyer(mach: f64, gas: &GasModel) -> f64 {
    let g = gas.gamma;
    let k = ((g + 1.0) / (g - 1.0)).sqrt();
    let m = (mach * mach - 1.0).max(0.0).sqrt();
    k * (m / k).atan() - m.atan()
}

/// Inverse of [`prandtl_meyer`] by bisection on `M in [1, 100]`.
pub fn prandtl_meyer_inverse(nu: f64, gas: &GasModel) -> f64 {
    bisect(1.0, 100.0, |m| prandtl_meyer(m, gas) - nu)
}
