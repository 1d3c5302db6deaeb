//! Elementary wave curves of the steady system: vortex sheets (families 2 and 3),
//! rarefaction curves and Hugoniot shock curves (families 1 and 4), the strong
//! shock parameterized by its slope, and the Lax/entropy admissibility test.
//!
//! Conventions. Fronts are lines `y = y0 + s (x - x0)` and states are named by
//! their side in `y`: `below` and `above`. The flow crosses a 1-wave from below
//! to above and a 4-wave from above to below, so the upstream ("front") state of
//! a 1-wave is `below` and that of a 4-wave is `above`.
//!
//! Strengths are signed arc lengths in `(u, v, p, rho)`: positive for
//! rarefactions, negative for shocks. A shock's arc length is measured along the
//! Hugoniot curve of its upstream state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gasdyn::{characteristic_root, lambda, GasModel, State};

/// Minimum number of RK4 steps across one rarefaction curve.
pub const MIN_FAN_STEPS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WaveFamily {
    One,
    Two,
    Three,
    Four,
    NonPhysical,
}

impl WaveFamily {
    /// Family index; nonphysical fronts are ranked 5 (faster than every family).
    pub fn index(self) -> usize {
        match self {
            WaveFamily::One => 1,
            WaveFamily::Two => 2,
            WaveFamily::Three => 3,
            WaveFamily::Four => 4,
            WaveFamily::NonPhysical => 5,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        match i {
            1 => Some(WaveFamily::One),
            2 => Some(WaveFamily::Two),
            3 => Some(WaveFamily::Three),
            4 => Some(WaveFamily::Four),
            5 => Some(WaveFamily::NonPhysical),
            _ => None,
        }
    }

    pub fn is_genuinely_nonlinear(self) -> bool {
        matches!(self, WaveFamily::One | WaveFamily::Four)
    }

    pub fn is_contact(self) -> bool {
        matches!(self, WaveFamily::Two | WaveFamily::Three)
    }
}

/// One elementary wave: a jump between `below` and `above` travelling with slope `speed`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveDescriptor {
    pub family: WaveFamily,
    pub strength: f64,
    pub below: State,
    pub above: State,
    pub speed: f64,
}

impl WaveDescriptor {
    pub fn is_shock(&self) -> bool {
        self.family.is_genuinely_nonlinear() && self.strength < 0.0
    }

    pub fn is_rarefaction(&self) -> bool {
        self.family.is_genuinely_nonlinear() && self.strength > 0.0
    }

    /// Upstream state (the side the flow comes from).
    pub fn front(&self) -> State {
        match self.family {
            WaveFamily::Four => self.above,
            _ => self.below,
        }
    }

    /// Downstream state.
    pub fn back(&self) -> State {
        match self.family {
            WaveFamily::Four => self.below,
            _ => self.above,
        }
    }
}

/// The large 1-shock attached to the wedge vertex: `below` lies in the upstream
/// region, `above` in the region adjacent to the wall.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrongShock {
    pub sigma: f64,
    pub below: State,
    pub above: State,
}

impl StrongShock {
    pub fn from_states(below: State, above: State, gas: &GasModel) -> Result<Self> {
        let (_, sigma) = hugoniot_branch(&below, WaveFamily::One, above.rho, gas)?;
        Ok(Self {
            sigma,
            below,
            above,
        })
    }

    /// Strength used for monitoring: distance of the slope from the reference slope.
    pub fn strength_measure(&self, sigma0: f64) -> f64 {
        (self.sigma - sigma0).abs()
    }

    pub fn descriptor(&self) -> WaveDescriptor {
        WaveDescriptor {
            family: WaveFamily::One,
            strength: -(self.below.distance(&self.above)),
            below: self.below,
            above: self.above,
            speed: self.sigma,
        }
    }
}

fn gnl_sign(family: WaveFamily) -> Result<f64> {
    match family {
        WaveFamily::One => Ok(-1.0),
        WaveFamily::Four => Ok(1.0),
        f => Err(Error::Invalid(format!(
            "family {f:?} is not genuinely nonlinear"
        ))),
    }
}

/// State on the `family` Hugoniot locus of `u0` at density `rho` (either side of
/// `u0.rho`), together with the jump slope. No admissibility is implied.
pub(crate) fn hugoniot_branch(
    u0: &State,
    family: WaveFamily,
    rho: f64,
    gas: &GasModel,
) -> Result<(State, f64)> {
    let sign = gnl_sign(family)?;
    if rho == u0.rho {
        return Ok((*u0, lambda(u0, gas, family.index())));
    }
    let g = gas.gamma;
    let r = rho / u0.rho;
    let b0 = 0.5 * (g + 1.0) - 0.5 * (g - 1.0) * r;
    if !(b0 > 0.0) || !(rho > 0.0) {
        return Err(Error::Invalid(format!(
            "density ratio {r} outside the Hugoniot range (0, {})",
            gas.max_compression()
        )));
    }
    let c0_2 = g * u0.p / u0.rho;
    let cbar_2 = c0_2 * r / b0;
    let s = characteristic_root(u0.u, u0.v, c0_2 / b0 * r, sign).ok_or_else(|| {
        Error::Regime(format!(
            "no real shock slope (cbar^2 = {cbar_2}) at density ratio {r}"
        ))
    })?;
    let dp = c0_2 / b0 * (rho - u0.rho);
    let m = u0.rho * (s * u0.u - u0.v);
    if m == 0.0 {
        return Err(Error::Regime(
            "vanishing mass flux through the shock".into(),
        ));
    }
    let dv = dp / m;
    let du = -s * dv;
    Ok((State::new(u0.u + du, u0.v + dv, u0.p + dp, rho), s))
}

fn require_x_supersonic(s: &State, gas: &GasModel) -> Result<()> {
    if !s.is_valid() || !s.is_x_supersonic(gas) {
        return Err(Error::Regime(format!("state {s:?} is not x-supersonic")));
    }
    Ok(())
}

/// Shock state behind `u0` (taken as the upstream state) at density `rho > u0.rho`,
/// with the shock slope.
pub fn hugoniot_state(
    u0: &State,
    family: WaveFamily,
    rho: f64,
    gas: &GasModel,
) -> Result<(State, f64)> {
    require_x_supersonic(u0, gas)?;
    let max = u0.rho * gas.max_compression();
    if !(rho > u0.rho && rho < max) {
        return Err(Error::Invalid(format!(
            "downstream density {rho} outside ({}, {max})",
            u0.rho
        )));
    }
    hugoniot_branch(u0, family, rho, gas)
}

/// `dU/drho` along the Hugoniot locus (fourth-order central differences).
fn hugoniot_derivative(
    u0: &State,
    family: WaveFamily,
    rho: f64,
    gas: &GasModel,
) -> Result<[f64; 4]> {
    let h = 1e-4 * u0.rho;
    let at = |d: f64| hugoniot_branch(u0, family, rho + d, gas).map(|(s, _)| s.to_array());
    let (a, b, c, d) = (at(2.0 * h)?, at(h)?, at(-h)?, at(-2.0 * h)?);
    let mut out = [0.0; 4];
    for k in 0..4 {
        out[k] = (-a[k] + 8.0 * b[k] - 8.0 * c[k] + d[k]) / (12.0 * h);
    }
    Ok(out)
}

fn norm4(a: &[f64; 4]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

const GL8: [(f64, f64); 4] = [
    (0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_3),
];

/// Arc length of the Hugoniot locus of `u0` between `u0.rho` and `rho`.
pub fn hugoniot_arclength(u0: &State, family: WaveFamily, rho: f64, gas: &GasModel) -> Result<f64> {
    if rho == u0.rho {
        return Ok(0.0);
    }
    let span = (rho / u0.rho).ln().abs();
    let panels = ((span / 0.05).ceil() as usize).max(1);
    let (a, b) = (u0.rho.min(rho), u0.rho.max(rho));
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * width;
        let half = 0.5 * width;
        for (x, w) in GL8 {
            for sx in [x, -x] {
                let d = hugoniot_derivative(u0, family, mid + half * sx, gas)?;
                total += w * half * norm4(&d);
            }
        }
    }
    Ok(total)
}

/// Density on the Hugoniot locus of `u0` at arc length `arc` from `u0`, moving
/// toward larger density when `increasing`.
fn hugoniot_density_at_arclength(
    u0: &State,
    family: WaveFamily,
    arc: f64,
    increasing: bool,
    gas: &GasModel,
) -> Result<f64> {
    if arc == 0.0 {
        return Ok(u0.rho);
    }
    let dir = if increasing { 1.0 } else { -1.0 };
    let slope0 = norm4(&hugoniot_derivative(u0, family, u0.rho, gas)?);
    let mut rho = u0.rho + dir * arc / slope0;
    for it in 0..60 {
        let f = hugoniot_arclength(u0, family, rho, gas)? - arc;
        if f.abs() <= 1e-12 * arc + 1e-15 {
            return Ok(rho);
        }
        let df = norm4(&hugoniot_derivative(u0, family, rho, gas)?);
        let next = rho - dir * f / df;
        if (next - rho).abs() <= 1e-14 * rho {
            return Ok(next);
        }
        if !(next > 0.0) || it == 59 {
            return Err(Error::Newton {
                context: "hugoniot arc-length inversion".into(),
                residual: f.abs(),
                iterations: it,
            });
        }
        rho = next;
    }
    Ok(rho)
}

/// Upstream state of a 4-shock whose downstream state is `below`, with the strength
/// measured along the Hugoniot locus of the upstream state. `rho` is the first guess
/// taken from the locus of `below`, which agrees to third order.
fn four_shock_upstream(below: &State, arc: f64, mut rho: f64, gas: &GasModel) -> Result<State> {
    let fam = WaveFamily::Four;
    let slope = norm4(&hugoniot_derivative(below, fam, rho, gas)?);
    for _ in 0..4 {
        let above = hugoniot_branch(below, fam, rho, gas)?.0;
        let f = hugoniot_arclength(&above, fam, below.rho, gas)? - arc;
        if f.abs() <= 1e-14 * arc + 1e-16 {
            break;
        }
        // the arc grows as the upstream density drops
        rho += f / slope;
    }
    Ok(hugoniot_branch(below, fam, rho, gas)?.0)
}

/// Tangent of the rarefaction (integral) curve, `dU/drho`.
fn rarefaction_tangent(s: &State, family: WaveFamily, gas: &GasModel) -> Result<[f64; 4]> {
    let lam = lambda(s, gas, family.index());
    let c2 = gas.gamma * s.p / s.rho;
    let denom = s.rho * (lam * s.u - s.v);
    if !lam.is_finite() || denom == 0.0 || !s.is_valid() {
        return Err(Error::Regime(format!(
            "rarefaction curve left the hyperbolic region at {s:?}"
        )));
    }
    let dv = c2 / denom;
    Ok([-lam * dv, dv, c2, 1.0])
}

fn add_scaled(a: &[f64; 4], k: &[f64; 4], h: f64) -> [f64; 4] {
    [
        a[0] + h * k[0],
        a[1] + h * k[1],
        a[2] + h * k[2],
        a[3] + h * k[3],
    ]
}

/// Integrates the rarefaction curve from `start` over `log_ratio = ln(rho_end / rho0)`,
/// split into `pieces` equal sub-intervals in `ln rho`. Returns `pieces + 1` states with
/// their cumulative arc length. Every piece uses the same number of RK4 steps, with at
/// least [`MIN_FAN_STEPS`] steps in total.
pub(crate) fn rarefaction_path(
    start: &State,
    family: WaveFamily,
    log_ratio: f64,
    pieces: usize,
    gas: &GasModel,
) -> Result<Vec<(State, f64)>> {
    gnl_sign(family)?;
    let pieces = pieces.max(1);
    let steps = MIN_FAN_STEPS.div_ceil(pieces).max(2);
    let h = log_ratio / (pieces * steps) as f64;
    // augmented state (u, v, p, rho, arc) as a function of ln rho
    let rhs = |y: &[f64; 5]| -> Result<[f64; 5]> {
        let s = State::new(y[0], y[1], y[2], y[3]);
        let t = rarefaction_tangent(&s, family, gas)?;
        let d = [t[0] * s.rho, t[1] * s.rho, t[2] * s.rho, s.rho];
        Ok([d[0], d[1], d[2], d[3], norm4(&d) * h.signum()])
    };
    let mut y = [start.u, start.v, start.p, start.rho, 0.0];
    let mut out = Vec::with_capacity(pieces + 1);
    out.push((*start, 0.0));
    for _ in 0..pieces {
        for _ in 0..steps {
            let k1 = rhs(&y)?;
            let y2: [f64; 5] = std::array::from_fn(|i| y[i] + 0.5 * h * k1[i]);
            let k2 = rhs(&y2)?;
            let y3: [f64; 5] = std::array::from_fn(|i| y[i] + 0.5 * h * k2[i]);
            let k3 = rhs(&y3)?;
            let y4: [f64; 5] = std::array::from_fn(|i| y[i] + h * k3[i]);
            let k4 = rhs(&y4)?;
            y = std::array::from_fn(|i| {
                y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            });
        }
        let s = State::new(y[0], y[1], y[2], y[3]);
        if !s.is_x_supersonic(gas) {
            return Err(Error::Regime(format!(
                "rarefaction left the x-supersonic region at {s:?}"
            )));
        }
        out.push((s, y[4]));
    }
    Ok(out)
}

/// Follows the rarefaction curve of `family` through `start` for arc length `arc`,
/// toward larger density when `increasing`.
fn integral_curve_by_arclength(
    start: &State,
    family: WaveFamily,
    arc: f64,
    increasing: bool,
    gas: &GasModel,
) -> Result<State> {
    if arc == 0.0 {
        return Ok(*start);
    }
    let dir = if increasing { 1.0 } else { -1.0 };
    let steps = MIN_FAN_STEPS.max((arc / 2e-3).ceil() as usize);
    let h = arc / steps as f64;
    let rhs = |y: &[f64; 4]| -> Result<[f64; 4]> {
        let t = rarefaction_tangent(&State::from_array(*y), family, gas)?;
        let n = norm4(&t);
        Ok(t.map(|x| dir * x / n))
    };
    let mut y = start.to_array();
    for _ in 0..steps {
        let k1 = rhs(&y)?;
        let k2 = rhs(&add_scaled(&y, &k1, 0.5 * h))?;
        let k3 = rhs(&add_scaled(&y, &k2, 0.5 * h))?;
        let k4 = rhs(&add_scaled(&y, &k3, h))?;
        y = std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        if !State::from_array(y).is_x_supersonic(gas) {
            return Err(Error::Regime(format!(
                "rarefaction left the x-supersonic region at {y:?}"
            )));
        }
    }
    Ok(State::from_array(y))
}

/// Downstream state of a rarefaction of arc length `alpha >= 0` whose upstream state
/// is `u0`; density decreases along it.
pub fn rarefaction_state(
    u0: &State,
    family: WaveFamily,
    alpha: f64,
    gas: &GasModel,
) -> Result<State> {
    gnl_sign(family)?;
    if !(alpha >= 0.0) {
        return Err(Error::Invalid(format!(
            "rarefaction strength must be non-negative, got {alpha}"
        )));
    }
    require_x_supersonic(u0, gas)?;
    integral_curve_by_arclength(u0, family, alpha, false, gas)
}

/// Moves `u0` along the vortex-sheet curves: speed scaled by `exp(t_w)` and
/// density by `exp(t_rho)`; pressure and flow angle are untouched.
pub fn contact_state(u0: &State, t_w: f64, t_rho: f64) -> State {
    let k = t_w.exp();
    State::new(u0.u * k, u0.v * k, u0.p, u0.rho * t_rho.exp())
}

/// The wave curve `psi_family(strength)` leaving `below` upward in `y`.
pub fn wave_curve(
    below: &State,
    family: WaveFamily,
    strength: f64,
    gas: &GasModel,
) -> Result<State> {
    match family {
        WaveFamily::One | WaveFamily::Four => {
            // rarefactions: 1-waves lower the density upward, 4-waves raise it
            let rare_increasing = family == WaveFamily::Four;
            if strength >= 0.0 {
                integral_curve_by_arclength(below, family, strength, rare_increasing, gas)
            } else {
                let rho =
                    hugoniot_density_at_arclength(below, family, -strength, !rare_increasing, gas)?;
                if family == WaveFamily::One {
                    return Ok(hugoniot_branch(below, family, rho, gas)?.0);
                }
                four_shock_upstream(below, -strength, rho, gas)
            }
        }
        WaveFamily::Two => {
            let q = below.speed();
            if q + strength <= 0.0 {
                return Err(Error::Regime("vortex sheet would reverse the flow".into()));
            }
            Ok(contact_state(below, ((q + strength) / q).ln(), 0.0))
        }
        WaveFamily::Three => {
            if below.rho + strength <= 0.0 {
                return Err(Error::Regime(
                    "vortex sheet would produce non-positive density".into(),
                ));
            }
            Ok(State {
                rho: below.rho + strength,
                ..*below
            })
        }
        WaveFamily::NonPhysical => Err(Error::Invalid(
            "nonphysical fronts have no wave curve".into(),
        )),
    }
}

/// Whether a jump of a genuinely nonlinear family from `below` to `above` is compressive.
pub fn is_compressive(family: WaveFamily, below: &State, above: &State) -> bool {
    match family {
        WaveFamily::One => above.rho > below.rho,
        WaveFamily::Four => above.rho < below.rho,
        _ => false,
    }
}

/// Signed strength of the wave of `family` joining `below` and `above`.
pub fn strength_of(
    family: WaveFamily,
    below: &State,
    above: &State,
    gas: &GasModel,
) -> Result<f64> {
    match family {
        WaveFamily::Two => Ok(above.speed() - below.speed()),
        WaveFamily::Three => Ok(above.rho - below.rho),
        WaveFamily::NonPhysical => Ok(below.distance(above)),
        WaveFamily::One | WaveFamily::Four => {
            if below.rho == above.rho {
                return Ok(0.0);
            }
            if is_compressive(family, below, above) {
                let (front, back) = if family == WaveFamily::One {
                    (below, above)
                } else {
                    (above, below)
                };
                Ok(-hugoniot_arclength(front, family, back.rho, gas)?)
            } else {
                let path = rarefaction_path(below, family, (above.rho / below.rho).ln(), 1, gas)?;
                Ok(path[1].1.abs())
            }
        }
    }
}

/// Slope of the front carrying a wave of `family` between `below` and `above`:
/// the Rankine-Hugoniot slope for shocks, the downstream characteristic slope for
/// rarefaction pieces, `v/u` for vortex sheets.
pub fn front_speed(
    family: WaveFamily,
    below: &State,
    above: &State,
    gas: &GasModel,
) -> Result<f64> {
    match family {
        WaveFamily::Two | WaveFamily::Three => Ok(below.v / below.u),
        WaveFamily::One | WaveFamily::Four => {
            let (front, back) = if family == WaveFamily::One {
                (below, above)
            } else {
                (above, below)
            };
            if is_compressive(family, below, above) {
                Ok(hugoniot_branch(front, family, back.rho, gas)?.1)
            } else {
                Ok(lambda(back, gas, family.index()))
            }
        }
        WaveFamily::NonPhysical => {
            Err(Error::Invalid("nonphysical speed is a run constant".into()))
        }
    }
}

/// The downstream state `G(u0, sigma)` of the 1-shock leaving `u0` with slope `sigma`.
pub fn strong_shock_from_speed(u0: &State, sigma: f64, gas: &GasModel) -> Result<State> {
    require_x_supersonic(u0, gas)?;
    let l1 = lambda(u0, gas, 1);
    if (sigma - l1).abs() <= 1e-14 * (1.0 + l1.abs()) {
        return Ok(*u0);
    }
    if sigma > l1 {
        return Err(Error::Invalid(format!(
            "slope {sigma} exceeds the characteristic slope {l1}: no compressive 1-shock"
        )));
    }
    let g = gas.gamma;
    let q2 = u0.u * u0.u + u0.v * u0.v;
    let c2 = g * u0.p / u0.rho;
    // normal-shock density ratio, where the slope becomes perpendicular to the flow
    let r_normal = q2 * 0.5 * (g + 1.0) / (c2 + 0.5 * (g - 1.0) * q2);
    let f =
        |rho: f64| -> Result<f64> { Ok(hugoniot_branch(u0, WaveFamily::One, rho, gas)?.1 - sigma) };
    let mut lo = u0.rho;
    let mut hi = u0.rho * r_normal * (1.0 - 1e-12);
    let mut f_lo = l1 - sigma;
    let f_hi = f(hi)?;
    if f_hi > 0.0 {
        return Err(Error::Newton {
            context: "strong shock from slope: no admissible downstream density".into(),
            residual: f_hi,
            iterations: 0,
        });
    }
    let mut f_hi = f_hi;
    // Illinois false position
    let mut side = 0i8;
    for it in 0..200 {
        let mut rho = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if !(rho > lo && rho < hi) {
            rho = 0.5 * (lo + hi);
        }
        let fr = f(rho)?;
        if fr.abs() <= 1e-15 * (1.0 + sigma.abs()) || (hi - lo) <= 1e-15 * hi {
            return Ok(hugoniot_branch(u0, WaveFamily::One, rho, gas)?.0);
        }
        if fr > 0.0 {
            lo = rho;
            f_lo = fr;
            if side == 1 {
                f_hi *= 0.5;
            }
            side = 1;
        } else {
            hi = rho;
            f_hi = fr;
            if side == -1 {
                f_lo *= 0.5;
            }
            side = -1;
        }
        if it == 199 {
            return Err(Error::Newton {
                context: "strong shock from slope".into(),
                residual: fr.abs(),
                iterations: it,
            });
        }
    }
    unreachable!()
}

/// Outcome of the entropy/Lax test on a shock.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Admissibility {
    Admissible,
    /// Zero-strength limit: the strict inequalities hold only as equalities.
    Degenerate(String),
    Violated(String),
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible)
    }
}

/// Checks the density increase and the Lax inequalities on a 1- or 4-shock.
pub fn admissible(w: &WaveDescriptor, gas: &GasModel) -> Result<Admissibility> {
    if !w.family.is_genuinely_nonlinear() || w.strength > 0.0 {
        return Err(Error::Invalid(format!(
            "admissibility applies to shocks only (family {:?}, strength {})",
            w.family, w.strength
        )));
    }
    let front = w.front();
    let back = w.back();
    let j = w.family.index();
    let tol = 1e-12;
    if (back.rho - front.rho).abs() <= tol * front.rho {
        return Ok(Admissibility::Degenerate("zero-strength shock".into()));
    }
    if front.rho >= back.rho {
        return Ok(Admissibility::Violated(
            "density decreases across the shock".into(),
        ));
    }
    if !back.is_x_supersonic(gas) || !front.is_x_supersonic(gas) {
        return Ok(Admissibility::Violated(
            "a side state is not x-supersonic".into(),
        ));
    }
    let s = w.speed;
    // characteristics enter the shock from both sides: lambda(below) > s > lambda(above)
    let (lb, la) = (lambda(&w.below, gas, j), lambda(&w.above, gas, j));
    if !(s < lb) {
        return Ok(Admissibility::Violated(format!(
            "Lax: s_{j} = {s} >= lambda_{j}(below) = {lb}"
        )));
    }
    if !(la < s) {
        return Ok(Admissibility::Violated(format!(
            "Lax: lambda_{j}(above) = {la} >= s_{j} = {s}"
        )));
    }
    if j == 1 {
        let l23 = back.v / back.u;
        if !(s < l23) {
            return Ok(Admissibility::Violated(format!(
                "Lax: s_1 = {s} >= lambda_23(back) = {l23}"
            )));
        }
    } else {
        let l23 = front.v / front.u;
        if !(l23 < s) {
            return Ok(Admissibility::Violated(format!(
                "Lax: lambda_23(front) = {l23} >= s_4 = {s}"
            )));
        }
    }
    Ok(Admissibility::Admissible)
}

/// Descriptor of the wave of `family` joining `below` and `above`.
pub fn describe(
    family: WaveFamily,
    below: State,
    above: State,
    gas: &GasModel,
) -> Result<WaveDescriptor> {
    Ok(WaveDescriptor {
        family,
        strength: strength_of(family, &below, &above, gas)?,
        below,
        above,
        speed: front_speed(family, &below, &above, gas)?,
    })
}
