//! Polytropic gas thermodynamics, the steady fluxes `W(U)`, `H(U)` and the
//! eigensystem of `W(U)_x + H(U)_y = 0` in primitive variables `U = (u, v, p, rho)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative margin by which `u` must exceed `c` before the eigen-decomposition is trusted.
pub const SUPERSONIC_MARGIN: f64 = 1e-10;

/// Polytropic ideal gas with `p = kappa * rho^gamma * exp(S / cv)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasModel {
    pub gamma: f64,
    pub kappa: f64,
    pub cv: f64,
}

impl GasModel {
    /// Nondimensional gas with `kappa = cv = 1`.
    pub fn new(gamma: f64) -> Result<Self> {
        Self::with_normalization(gamma, 1.0, 1.0)
    }

    pub fn with_normalization(gamma: f64, kappa: f64, cv: f64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(Error::Invalid(format!(
                "adiabatic exponent must exceed 1, got {gamma}"
            )));
        }
        if !(kappa > 0.0) || !(cv > 0.0) {
            return Err(Error::Invalid("kappa and cv must be positive".into()));
        }
        Ok(Self { gamma, kappa, cv })
    }

    /// Upper bound of the density ratio across any shock, `(gamma+1)/(gamma-1)`.
    pub fn max_compression(&self) -> f64 {
        (self.gamma + 1.0) / (self.gamma - 1.0)
    }
}

impl Default for GasModel {
    fn default() -> Self {
        Self {
            gamma: 1.4,
            kappa: 1.0,
            cv: 1.0,
        }
    }
}

/// Primitive state `(u, v, p, rho)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub u: f64,
    pub v: f64,
    pub p: f64,
    pub rho: f64,
}

impl State {
    pub const fn new(u: f64, v: f64, p: f64, rho: f64) -> Self {
        Self { u, v, p, rho }
    }

    /// State of Mach number `mach` flowing at angle `angle` (radians) with the given
    /// density and a pressure chosen so that `c = 1`.
    pub fn from_mach(mach: f64, angle: f64, rho: f64, gas: &GasModel) -> Self {
        let p = rho / gas.gamma;
        Self::new(mach * angle.cos(), mach * angle.sin(), p, rho)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.u, self.v, self.p, self.rho]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn is_valid(&self) -> bool {
        self.p > 0.0 && self.rho > 0.0 && self.to_array().iter().all(|x| x.is_finite())
    }

    pub fn speed(&self) -> f64 {
        self.u.hypot(self.v)
    }

    /// Flow angle `atan2(v, u)`.
    pub fn angle(&self) -> f64 {
        self.v.atan2(self.u)
    }

    pub fn mach(&self, gas: &GasModel) -> f64 {
        self.speed() / sound_speed(self, gas)
    }

    pub fn is_supersonic(&self, gas: &GasModel) -> bool {
        self.speed() > sound_speed(self, gas)
    }

    pub fn is_x_supersonic(&self, gas: &GasModel) -> bool {
        let c = sound_speed(self, gas);
        self.u - c > SUPERSONIC_MARGIN * c
    }

    /// Euclidean distance in `(u, v, p, rho)`.
    pub fn distance(&self, other: &State) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Sum of absolute componentwise differences.
    pub fn l1_norm_diff(&self, other: &State) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(a, b)| (a - b).abs())
            .sum()
    }
}

/// The x- and y-flux vectors of the steady system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxPair {
    pub w: [f64; 4],
    pub h: [f64; 4],
}

pub fn sound_speed(s: &State, gas: &GasModel) -> f64 {
    (gas.gamma * s.p / s.rho).sqrt()
}

/// Specific enthalpy `gamma p / ((gamma - 1) rho)`.
pub fn enthalpy(s: &State, gas: &GasModel) -> f64 {
    gas.gamma * s.p / ((gas.gamma - 1.0) * s.rho)
}

pub fn fluxes(s: &State, gas: &GasModel) -> FluxPair {
    let State { u, v, p, rho } = *s;
    let total = enthalpy(s, gas) + 0.5 * (u * u + v * v);
    FluxPair {
        w: [rho * u, rho * u * u + p, rho * u * v, rho * u * total],
        h: [rho * v, rho * u * v, rho * v * v + p, rho * v * total],
    }
}

/// Entropy `S = cv ln(p / (kappa rho^gamma))`.
pub fn entropy_scalar(s: &State, gas: &GasModel) -> f64 {
    gas.cv * (s.p / (gas.kappa * s.rho.powf(gas.gamma))).ln()
}

/// Root of `(u^2 - c^2) s^2 - 2 u v s + (v^2 - c^2) = 0` selected by `sign`
/// (`-1` for the first family, `+1` for the fourth). Evaluated in whichever of the
/// two algebraically equivalent forms has the better conditioned denominator, so the
/// expression stays regular when `u` passes through `c`.
pub(crate) fn characteristic_root(u: f64, v: f64, c2: f64, sign: f64) -> Option<f64> {
    let disc = u * u + v * v - c2;
    if disc < 0.0 || !disc.is_finite() {
        return None;
    }
    let cr = c2.sqrt() * disc.sqrt();
    let den_a = u * u - c2;
    let den_b = u * v - sign * cr;
    if den_a.abs() >= den_b.abs() {
        if den_a == 0.0 {
            return None;
        }
        Some((u * v + sign * cr) / den_a)
    } else {
        Some((v * v - c2) / den_b)
    }
}

fn require_x_supersonic(s: &State, gas: &GasModel) -> Result<()> {
    if !s.is_valid() {
        return Err(Error::Regime(format!("non-physical state {s:?}")));
    }
    if !s.is_x_supersonic(gas) {
        return Err(Error::Regime(format!(
            "state is not x-supersonic (u = {}, c = {})",
            s.u,
            sound_speed(s, gas)
        )));
    }
    Ok(())
}

/// Characteristic speed of family `j` in `1..=4`, without regime checks.
pub fn lambda(s: &State, gas: &GasModel, j: usize) -> f64 {
    match j {
        2 | 3 => s.v / s.u,
        1 | 4 => {
            let c2 = gas.gamma * s.p / s.rho;
            let sign = if j == 1 { -1.0 } else { 1.0 };
            characteristic_root(s.u, s.v, c2, sign).unwrap_or(f64::NAN)
        }
        _ => f64::NAN,
    }
}

/// Ordered eigenvalues `(lambda_1, lambda_2, lambda_3, lambda_4)`.
pub fn eigenvalues(s: &State, gas: &GasModel) -> Result<[f64; 4]> {
    require_x_supersonic(s, gas)?;
    let l1 = lambda(s, gas, 1);
    let l4 = lambda(s, gas, 4);
    let l23 = s.v / s.u;
    Ok([l1, l23, l23, l4])
}

/// Fourth-order central-difference gradient of `lambda_j` in `(u, v, p, rho)`.
pub fn grad_lambda(s: &State, gas: &GasModel, j: usize) -> [f64; 4] {
    let base = s.to_array();
    let mut g = [0.0; 4];
    for k in 0..4 {
        let h = 1e-4 * base[k].abs().max(1e-3);
        let eval = |d: f64| {
            let mut a = base;
            a[k] += d;
            lambda(&State::from_array(a), gas, j)
        };
        g[k] = (-eval(2.0 * h) + 8.0 * eval(h) - 8.0 * eval(-h) + eval(-2.0 * h)) / (12.0 * h);
    }
    g
}

/// Right eigenvectors `r_1 .. r_4`. The genuinely nonlinear ones are scaled so that
/// `r_j . grad lambda_j = 1`; the gradient is evaluated numerically.
pub fn eigenvectors(s: &State, gas: &GasModel) -> Result<[[f64; 4]; 4]> {
    let lam = eigenvalues(s, gas)?;
    let c2 = gas.gamma * s.p / s.rho;
    let mut out = [[0.0; 4]; 4];
    for (slot, j) in [(0usize, 1usize), (3, 4)] {
        let l = lam[slot];
        let m = s.rho * (l * s.u - s.v);
        let raw = [-l, 1.0, m, m / c2];
        let g = grad_lambda(s, gas, j);
        let dot: f64 = raw.iter().zip(g).map(|(a, b)| a * b).sum();
        if dot == 0.0 || !dot.is_finite() {
            return Err(Error::Regime("genuine nonlinearity degenerates".into()));
        }
        out[slot] = raw.map(|x| x / dot);
    }
    out[1] = [s.u, s.v, 0.0, 0.0];
    out[2] = [0.0, 0.0, 0.0, s.rho];
    Ok(out)
}
