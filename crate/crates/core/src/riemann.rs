//! Riemann solvers: the accurate four-wave solver, the strong-shock solver, the
//! wall solvers (reflection off a face and turning at a vertex) and the simplified
//! solvers that close the interaction with a nonphysical front.

use nalgebra::{Matrix4, Vector4};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gasdyn::{lambda, GasModel, State};
use crate::waves::{
    contact_state, front_speed, hugoniot_arclength, hugoniot_branch, rarefaction_path,
    strong_shock_from_speed, wave_curve, StrongShock, WaveDescriptor, WaveFamily,
};

/// Waves below this strength are dropped from a fan.
pub const DROP_STRENGTH: f64 = 1e-13;
const NEWTON_TOL: f64 = 1e-13;
const NEWTON_MAX_ITER: usize = 50;

/// Solution of one Riemann problem, waves listed from bottom to top.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveFan {
    pub waves: Vec<WaveDescriptor>,
    pub middle_states: Vec<State>,
    pub contains_strong: bool,
    /// The strong shock, when the fan contains it (it is then `waves[0]`).
    pub strong: Option<StrongShock>,
    pub nonphysical_strength: f64,
    /// Max-norm mismatch between the composed fan and the requested above-state
    /// before the last state was snapped onto it.
    pub residual: f64,
}

impl WaveFan {
    pub fn empty() -> Self {
        Self {
            waves: Vec::new(),
            middle_states: Vec::new(),
            contains_strong: false,
            strong: None,
            nonphysical_strength: 0.0,
            residual: 0.0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.waves.is_empty()
    }

    /// Strength of the fan's waves of `family`, summed over rarefaction pieces.
    pub fn strength(&self, family: WaveFamily) -> f64 {
        self.waves
            .iter()
            .filter(|w| w.family == family)
            .map(|w| w.strength)
            .sum()
    }

    /// Checks that consecutive waves share states and that the chain runs from
    /// `below` to `above`; returns the largest mismatch.
    pub fn chain_gap(&self, below: &State, above: &State) -> f64 {
        let mut cur = *below;
        let mut gap = 0.0f64;
        for w in &self.waves {
            gap = gap.max(max_abs_diff(&cur, &w.below));
            cur = w.above;
        }
        gap.max(max_abs_diff(&cur, above))
    }

    fn from_chain(waves: Vec<WaveDescriptor>, residual: f64) -> Self {
        let middle_states = waves.iter().skip(1).map(|w| w.below).collect();
        let nonphysical_strength = waves
            .iter()
            .filter(|w| w.family == WaveFamily::NonPhysical)
            .map(|w| w.strength)
            .sum();
        Self {
            waves,
            middle_states,
            contains_strong: false,
            strong: None,
            nonphysical_strength,
            residual,
        }
    }
}

pub(crate) fn max_abs_diff(a: &State, b: &State) -> f64 {
    let (x, y) = (a.to_array(), b.to_array());
    (0..4).map(|i| (x[i] - y[i]).abs()).fold(0.0, f64::max)
}

pub(crate) fn newton4<F>(f: F, x0: [f64; 4], context: &str) -> Result<[f64; 4]>
where
    F: Fn(&[f64; 4]) -> Result<[f64; 4]>,
{
    let norm = |r: &[f64; 4]| r.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut x = x0;
    let mut r = f(&x)?;
    let mut rn = norm(&r);
    for it in 0..NEWTON_MAX_ITER {
        if rn < NEWTON_TOL {
            return Ok(x);
        }
        let mut jac = Matrix4::<f64>::zeros();
        for k in 0..4 {
            let h = 1e-7 * (1.0 + x[k].abs());
            let mut xp = x;
            let mut xm = x;
            xp[k] += h;
            xm[k] -= h;
            let (fp, fm) = (f(&xp)?, f(&xm)?);
            for i in 0..4 {
                jac[(i, k)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let dx = jac
            .lu()
            .solve(&Vector4::from(r))
            .ok_or_else(|| Error::Newton {
                context: format!("{context}: singular Jacobian"),
                residual: rn,
                iterations: it,
            })?;
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial: [f64; 4] = std::array::from_fn(|i| x[i] - t * dx[i]);
            if let Ok(rt) = f(&trial) {
                let rtn = norm(&rt);
                if rtn < rn || rtn < NEWTON_TOL {
                    x = trial;
                    r = rt;
                    rn = rtn;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            return Err(Error::Newton {
                context: context.to_string(),
                residual: rn,
                iterations: it,
            });
        }
    }
    if rn < NEWTON_TOL {
        Ok(x)
    } else {
        Err(Error::Newton {
            context: context.to_string(),
            residual: rn,
            iterations: NEWTON_MAX_ITER,
        })
    }
}

fn is_shock_param(family: WaveFamily, tau: f64) -> bool {
    match family {
        WaveFamily::One => tau > 0.0,
        _ => tau < 0.0,
    }
}

/// End state of a genuinely nonlinear wave leaving `start` with `tau = ln(rho_end / rho_start)`.
fn gnl_end(
    start: &State,
    family: WaveFamily,
    tau: f64,
    pieces: usize,
    gas: &GasModel,
) -> Result<State> {
    if tau == 0.0 {
        return Ok(*start);
    }
    if is_shock_param(family, tau) {
        Ok(hugoniot_branch(start, family, start.rho * tau.exp(), gas)?.0)
    } else {
        Ok(rarefaction_path(start, family, tau, pieces, gas)?
            .last()
            .unwrap()
            .0)
    }
}

fn residual4(a: &State, b: &State) -> [f64; 4] {
    let (x, y) = (a.to_array(), b.to_array());
    std::array::from_fn(|i| x[i] - y[i])
}

/// Pieces needed so that every piece of a rarefaction with parameter `tau` is at most `delta` long.
fn pieces_for(
    start: &State,
    family: WaveFamily,
    tau: f64,
    delta: f64,
    gas: &GasModel,
) -> Result<usize> {
    if tau == 0.0 || is_shock_param(family, tau) || !delta.is_finite() {
        return Ok(1);
    }
    let total = rarefaction_path(start, family, tau, 1, gas)?[1].1.abs();
    let mut n = ((total / delta).ceil() as usize).max(1);
    loop {
        let path = rarefaction_path(start, family, tau, n, gas)?;
        let longest = path
            .windows(2)
            .map(|w| (w[1].1 - w[0].1).abs())
            .fold(0.0, f64::max);
        if longest <= delta {
            return Ok(n);
        }
        n += 1;
    }
}

/// Descriptors for a genuinely nonlinear wave from `start` to `end` (`end` lies on the
/// wave curve with parameter `tau`); rarefactions become `pieces` fronts.
fn gnl_descriptors(
    start: &State,
    end: &State,
    family: WaveFamily,
    tau: f64,
    pieces: usize,
    gas: &GasModel,
) -> Result<Vec<WaveDescriptor>> {
    if tau == 0.0 {
        return Ok(Vec::new());
    }
    if is_shock_param(family, tau) {
        let (front, back) = if family == WaveFamily::One {
            (start, end)
        } else {
            (end, start)
        };
        let (_, speed) = hugoniot_branch(start, family, end.rho, gas)?;
        let strength = -hugoniot_arclength(front, family, back.rho, gas)?;
        return Ok(vec![WaveDescriptor {
            family,
            strength,
            below: *start,
            above: *end,
            speed,
        }]);
    }
    let path = rarefaction_path(start, family, tau, pieces, gas)?;
    let mut out = Vec::with_capacity(pieces);
    for (k, w) in path.windows(2).enumerate() {
        let below = if k == 0 { *start } else { w[0].0 };
        let above = if k + 1 == pieces { *end } else { w[1].0 };
        // each piece travels with the characteristic slope of its downstream side
        let back = if family == WaveFamily::One {
            &above
        } else {
            &below
        };
        out.push(WaveDescriptor {
            family,
            strength: (w[1].1 - w[0].1).abs(),
            below,
            above,
            speed: lambda(back, gas, family.index()),
        });
    }
    Ok(out)
}

fn contact_descriptor(
    family: WaveFamily,
    below: State,
    above: State,
    speed: f64,
) -> WaveDescriptor {
    let strength = match family {
        WaveFamily::Two => above.speed() - below.speed(),
        _ => above.rho - below.rho,
    };
    WaveDescriptor {
        family,
        strength,
        below,
        above,
        speed,
    }
}

/// Removes negligible waves and stitches the chain so that it runs exactly from
/// `below` to `above`.
fn finalize_chain(
    mut waves: Vec<WaveDescriptor>,
    below: &State,
    above: &State,
) -> Vec<WaveDescriptor> {
    if below == above {
        return Vec::new();
    }
    let keep_one = waves
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.strength.abs().total_cmp(&b.1.strength.abs()))
        .map(|(i, _)| i);
    let mut kept: Vec<WaveDescriptor> = waves
        .drain(..)
        .enumerate()
        .filter(|(i, w)| w.strength.abs() >= DROP_STRENGTH || Some(*i) == keep_one)
        .map(|(_, w)| w)
        .collect();
    let mut cur = *below;
    for w in kept.iter_mut() {
        w.below = cur;
        cur = w.above;
    }
    if let Some(last) = kept.last_mut() {
        last.above = *above;
    }
    kept
}

/// Accurate solution of the Riemann problem with `below` under `above`: the
/// wave curves of families 1..4 are composed and a four-parameter Newton solve
/// matches `above`. Rarefactions are split into pieces no longer than `delta_eps`.
pub fn solve_accurate(
    below: &State,
    above: &State,
    gas: &GasModel,
    delta_eps: f64,
) -> Result<WaveFan> {
    if below == above {
        return Ok(WaveFan::empty());
    }
    let chain = |x: &[f64; 4], n1: usize, n4: usize| -> Result<[State; 4]> {
        let u1 = gnl_end(below, WaveFamily::One, x[0], n1, gas)?;
        let u2 = contact_state(&u1, x[1], 0.0);
        let u3 = contact_state(&u2, 0.0, x[2]);
        let u4 = gnl_end(&u3, WaveFamily::Four, x[3], n4, gas)?;
        Ok([u1, u2, u3, u4])
    };
    let solve = |n1: usize, n4: usize, x0: [f64; 4]| {
        newton4(
            |x| Ok(residual4(&chain(x, n1, n4)?[3], above)),
            x0,
            "accurate Riemann solver",
        )
    };
    let x0 = [0.0, (above.speed() / below.speed()).ln(), 0.0, 0.0];
    let mut x = solve(1, 1, x0)?;
    let (mut n1, mut n4) = (1, 1);
    for _ in 0..8 {
        let u3 = chain(&x, n1, n4)?[2];
        let m1 = pieces_for(below, WaveFamily::One, x[0], delta_eps, gas)?;
        let m4 = pieces_for(&u3, WaveFamily::Four, x[3], delta_eps, gas)?;
        if (m1, m4) == (n1, n4) {
            break;
        }
        n1 = m1;
        n4 = m4;
        x = solve(n1, n4, x)?;
    }
    let [u1, u2, u3, u4] = chain(&x, n1, n4)?;
    let mut waves = gnl_descriptors(below, &u1, WaveFamily::One, x[0], n1, gas)?;
    if x[1] != 0.0 {
        waves.push(contact_descriptor(WaveFamily::Two, u1, u2, u1.v / u1.u));
    }
    if x[2] != 0.0 {
        waves.push(contact_descriptor(WaveFamily::Three, u2, u3, u1.v / u1.u));
    }
    waves.extend(gnl_descriptors(&u3, &u4, WaveFamily::Four, x[3], n4, gas)?);
    let residual = max_abs_diff(&u4, above);
    Ok(WaveFan::from_chain(
        finalize_chain(waves, below, above),
        residual,
    ))
}

/// Strong-shock Riemann problem: `below` near the upstream state, `above` near the
/// state behind the strong shock. The fan is the strong 1-shock followed by weak
/// waves of families 2, 3 and 4; rarefactions are not split.
pub fn solve_strong(below: &State, above: &State, gas: &GasModel) -> Result<WaveFan> {
    solve_strong_discretized(below, above, gas, f64::INFINITY)
}

/// [`solve_strong`] with the outgoing 4-rarefaction split into pieces of length at most `delta_eps`.
pub fn solve_strong_discretized(
    below: &State,
    above: &State,
    gas: &GasModel,
    delta_eps: f64,
) -> Result<WaveFan> {
    let chain = |x: &[f64; 4], n4: usize| -> Result<([State; 4], f64)> {
        let (u1, sigma) = hugoniot_branch(below, WaveFamily::One, below.rho * x[0].exp(), gas)?;
        let u2 = contact_state(&u1, x[1], 0.0);
        let u3 = contact_state(&u2, 0.0, x[2]);
        let u4 = gnl_end(&u3, WaveFamily::Four, x[3], n4, gas)?;
        Ok(([u1, u2, u3, u4], sigma))
    };
    let structural = |e: Error| match e {
        Error::Newton { residual, .. } => Error::Structural(format!(
            "no admissible strong-shock slope (Newton residual {residual:e})"
        )),
        other => other,
    };
    let solve = |n4: usize, x0: [f64; 4]| {
        newton4(
            |x| Ok(residual4(&chain(x, n4)?.0[3], above)),
            x0,
            "strong-shock Riemann solver",
        )
        .map_err(structural)
    };
    let r1 = (above.rho / below.rho).ln();
    let (u1_guess, _) = hugoniot_branch(below, WaveFamily::One, above.rho, gas)?;
    let x0 = [r1, (above.speed() / u1_guess.speed()).ln(), 0.0, 0.0];
    let mut x = solve(1, x0)?;
    let mut n4 = 1;
    for _ in 0..8 {
        let u3 = chain(&x, n4)?.0[2];
        let m4 = pieces_for(&u3, WaveFamily::Four, x[3], delta_eps, gas)?;
        if m4 == n4 {
            break;
        }
        n4 = m4;
        x = solve(n4, x)?;
    }
    let ([u1, u2, u3, u4], sigma) = chain(&x, n4)?;
    if !(x[0] > 0.0) || !u1.is_x_supersonic(gas) {
        return Err(Error::Structural(format!(
            "strong shock lost admissibility (density ratio {}, downstream {u1:?})",
            x[0].exp()
        )));
    }
    let mut strong = StrongShock {
        sigma,
        below: *below,
        above: u1,
    };
    let mut waves = vec![strong.descriptor()];
    if x[1] != 0.0 {
        waves.push(contact_descriptor(WaveFamily::Two, u1, u2, u1.v / u1.u));
    }
    if x[2] != 0.0 {
        waves.push(contact_descriptor(WaveFamily::Three, u2, u3, u1.v / u1.u));
    }
    waves.extend(gnl_descriptors(&u3, &u4, WaveFamily::Four, x[3], n4, gas)?);
    let residual = max_abs_diff(&u4, above);
    // the strong shock is never dropped; weak waves after it may be
    let mut weak = finalize_chain(waves.split_off(1), &u1, above);
    if weak.is_empty() {
        strong.above = *above;
        waves[0] = strong.descriptor();
    }
    waves.append(&mut weak);
    let mut fan = WaveFan::from_chain(waves, residual);
    fan.contains_strong = true;
    fan.strong = Some(strong);
    Ok(fan)
}

/// Illinois false-position root of `f` on `[lo, hi]` where `f(lo)` and `f(hi)` differ in sign.
pub(crate) fn illinois<F>(f: F, mut lo: f64, mut hi: f64, context: &str) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Newton {
            context: format!("{context}: root not bracketed"),
            residual: f_lo.abs().min(f_hi.abs()),
            iterations: 0,
        });
    }
    let mut side = 0i8;
    for _ in 0..300 {
        let mut x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if !(x > lo.min(hi) && x < lo.max(hi)) {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x)?;
        if fx == 0.0 || (hi - lo).abs() <= 2e-16 * x.abs().max(1e-300) {
            return Ok(x);
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
            if side == 1 {
                f_hi *= 0.5;
            }
            side = 1;
        } else {
            hi = x;
            f_hi = fx;
            if side == -1 {
                f_lo *= 0.5;
            }
            side = -1;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn golden_min<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64) -> Result<f64> {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..120 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if f(c)? < f(d)? {
            b = d;
        } else {
            a = c;
        }
    }
    Ok(0.5 * (a + b))
}

/// Weak-branch 1-shock turning `state` clockwise to flow angle `target`; returns the
/// downstream state and the shock slope.
pub fn shock_turn(state: &State, target: f64, gas: &GasModel) -> Result<(State, f64)> {
    let g = gas.gamma;
    let q2 = state.u * state.u + state.v * state.v;
    let c2 = g * state.p / state.rho;
    let r_normal = q2 * 0.5 * (g + 1.0) / (c2 + 0.5 * (g - 1.0) * q2);
    let hi = state.rho * r_normal * (1.0 - 1e-12);
    let angle = |rho: f64| -> Result<f64> {
        Ok(hugoniot_branch(state, WaveFamily::One, rho, gas)?.0.angle())
    };
    let rho_star = golden_min(angle, state.rho, hi)?;
    let min_angle = angle(rho_star)?;
    if target < min_angle {
        return Err(Error::Structural(format!(
            "turning by {:.6} rad exceeds the maximum deflection {:.6} rad: detached shock",
            state.angle() - target,
            state.angle() - min_angle
        )));
    }
    let rho = illinois(
        |r| Ok(angle(r)? - target),
        state.rho,
        rho_star,
        "shock turning angle",
    )?;
    let (out, s) = hugoniot_branch(state, WaveFamily::One, rho, gas)?;
    if !out.is_x_supersonic(gas) {
        return Err(Error::Structural(format!(
            "flow behind the turning shock is not x-supersonic: {out:?}"
        )));
    }
    Ok((out, s))
}

/// One 1-wave fan from `state` (below) to a state with flow angle `target`.
pub(crate) fn turn_to_angle(
    state: &State,
    target: f64,
    gas: &GasModel,
    delta_eps: f64,
) -> Result<WaveFan> {
    let turn = target - state.angle();
    if turn.abs() <= 1e-15 {
        return Ok(WaveFan::empty());
    }
    if turn < 0.0 {
        let (out, _) = shock_turn(state, target, gas)?;
        let tau = (out.rho / state.rho).ln();
        let waves = gnl_descriptors(state, &out, WaveFamily::One, tau, 1, gas)?;
        return Ok(WaveFan::from_chain(waves, 0.0));
    }
    let expansion = |tau: f64, n: usize| -> Result<f64> {
        Ok(gnl_end(state, WaveFamily::One, tau, n, gas)?.angle() - target)
    };
    let to_structural = |e: Error| match e {
        Error::Regime(m) => {
            Error::Structural(format!("expansion by {turn:.6} rad is not attainable: {m}"))
        }
        other => other,
    };
    // bracket: the flow angle grows as the density drops
    let mut lo = -1e-3;
    while expansion(lo, 1).map_err(to_structural)? < 0.0 {
        lo *= 2.0;
        if lo < -20.0 {
            return Err(Error::Structural(format!(
                "expansion by {turn:.6} rad is not attainable"
            )));
        }
    }
    let mut tau =
        illinois(|t| expansion(t, 1), lo, 0.0, "expansion angle").map_err(to_structural)?;
    let mut n = 1;
    for _ in 0..8 {
        let m = pieces_for(state, WaveFamily::One, tau, delta_eps, gas)?;
        if m == n {
            break;
        }
        n = m;
        tau = illinois(|t| expansion(t, n), lo, 0.0, "expansion angle").map_err(to_structural)?;
    }
    let out = gnl_end(state, WaveFamily::One, tau, n, gas)?;
    Ok(WaveFan::from_chain(
        gnl_descriptors(state, &out, WaveFamily::One, tau, n, gas)?,
        0.0,
    ))
}

/// Wall data at a vertex: `state` is tangent to the incoming face, `omega` is the
/// counterclockwise turning angle and `normal_next` the outer unit normal of the next face.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryRiemannInput {
    pub state: State,
    pub omega: f64,
    pub normal_next: [f64; 2],
}

/// Flow angle of a face with outer unit normal `n = (-sin t, cos t)`.
pub fn face_angle(n: &[f64; 2]) -> f64 {
    (-n[0]).atan2(n[1])
}

pub(crate) const TANGENCY_TOL: f64 = 1e-10;

/// Reflection of the waves that reached a wall face: `below` is the state the
/// incoming waves left next to the wall, `wall_state` the tangent state they
/// replaced. The outgoing 1-wave restores tangency.
pub fn solve_boundary_reflection(
    below: &State,
    wall_state: &State,
    normal: &[f64; 2],
    gas: &GasModel,
    delta_eps: f64,
) -> Result<WaveFan> {
    let flux = wall_state.u * normal[0] + wall_state.v * normal[1];
    if flux.abs() > TANGENCY_TOL * wall_state.speed() {
        return Err(Error::Invalid(format!(
            "wall state is not tangent to the face (normal flux {flux:e})"
        )));
    }
    turn_to_angle(below, face_angle(normal), gas, delta_eps)
}

/// Turning of a wall-tangent flow at a boundary vertex.
pub fn solve_boundary_vertex(
    input: &BoundaryRiemannInput,
    gas: &GasModel,
    delta_eps: f64,
) -> Result<WaveFan> {
    let next = face_angle(&input.normal_next);
    let incoming = next - input.omega;
    let mismatch = input.state.angle() - incoming;
    if mismatch.abs() > TANGENCY_TOL {
        return Err(Error::Invalid(format!(
            "state is not tangent to the incoming face (angle error {mismatch:e})"
        )));
    }
    if input.omega == 0.0 {
        return Ok(WaveFan::empty());
    }
    turn_to_angle(&input.state, next, gas, delta_eps)
}

/// The lateral problem at the wedge vertex: the upstream flow is turned onto a face
/// of angle `face` by the vertex shock.
pub fn lateral_riemann(upstream: &State, face: f64, gas: &GasModel) -> Result<StrongShock> {
    if face > upstream.angle() {
        return Err(Error::Invalid(
            "the first face must turn the flow clockwise".into(),
        ));
    }
    let (above, sigma) = shock_turn(upstream, face, gas)?;
    Ok(StrongShock {
        sigma,
        below: *upstream,
        above,
    })
}

fn nonphysical(below: State, above: State, lambda_hat: f64) -> WaveDescriptor {
    WaveDescriptor {
        family: WaveFamily::NonPhysical,
        strength: below.distance(&above),
        below,
        above,
        speed: lambda_hat,
    }
}

fn physical(
    family: WaveFamily,
    below: State,
    strength: f64,
    gas: &GasModel,
) -> Result<WaveDescriptor> {
    let above = wave_curve(&below, family, strength, gas)?;
    Ok(WaveDescriptor {
        family,
        strength,
        below,
        above,
        speed: front_speed(family, &below, &above, gas)?,
    })
}

/// Simplified interaction of `alpha` (lower front) and `beta` (upper front): the
/// incoming strengths are re-emitted in family order and a nonphysical front of
/// slope `lambda_hat` closes the gap to the upper state.
pub fn solve_simplified_weak(
    alpha: &WaveDescriptor,
    beta: &WaveDescriptor,
    lambda_hat: f64,
    gas: &GasModel,
) -> WaveFan {
    solve_simplified_multi(&[*alpha], &[*beta], lambda_hat, gas)
}

/// [`solve_simplified_weak`] for fronts carrying several waves (vortex sheets).
pub fn solve_simplified_multi(
    lower: &[WaveDescriptor],
    upper: &[WaveDescriptor],
    lambda_hat: f64,
    gas: &GasModel,
) -> WaveFan {
    let ul = lower[0].below;
    let ur = upper[upper.len() - 1].above;
    let inert = |ws: &[WaveDescriptor]| {
        ws.iter()
            .all(|w| w.family != WaveFamily::NonPhysical && w.strength == 0.0)
    };
    let pass = |ws: &[WaveDescriptor]| {
        let mut ws = ws.to_vec();
        ws[0].below = ul;
        for k in 1..ws.len() {
            ws[k].below = ws[k - 1].above;
        }
        ws.last_mut().unwrap().above = ur;
        WaveFan::from_chain(ws, 0.0)
    };
    if inert(lower) {
        return pass(upper);
    }
    if inert(upper) {
        return pass(lower);
    }
    if ul == ur {
        return WaveFan::empty();
    }
    let mut plan: Vec<(WaveFamily, f64)> = Vec::new();
    for w in lower.iter().chain(upper) {
        if w.family == WaveFamily::NonPhysical {
            continue;
        }
        match plan.iter_mut().find(|p| p.0 == w.family) {
            Some(p) => p.1 += w.strength,
            None => plan.push((w.family, w.strength)),
        }
    }
    plan.sort_by_key(|p| p.0);
    let mut waves = Vec::new();
    let mut cur = ul;
    for (family, strength) in plan {
        if strength == 0.0 {
            continue;
        }
        match physical(family, cur, strength, gas) {
            Ok(w) => {
                cur = w.above;
                waves.push(w);
            }
            Err(_) => {
                waves.clear();
                cur = ul;
                break;
            }
        }
    }
    // vortex sheets created together share one slope
    for k in 1..waves.len() {
        if waves[k - 1].family == WaveFamily::Two && waves[k].family == WaveFamily::Three {
            waves[k].speed = waves[k - 1].speed;
        }
    }
    if cur != ur {
        waves.push(nonphysical(cur, ur, lambda_hat));
    }
    WaveFan::from_chain(waves, 0.0)
}

/// Which side of the strong shock the weak front arrives from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StrongSide {
    Below,
    Above,
}

/// Simplified interaction of a weak front with the strong shock: the shock keeps its
/// slope and a nonphysical front of slope `lambda_hat` carries the discrepancy.
pub fn solve_simplified_strong(
    weak: &WaveDescriptor,
    strong: &StrongShock,
    side: StrongSide,
    lambda_hat: f64,
    gas: &GasModel,
) -> WaveFan {
    let finish = |shock: StrongShock, top: State| {
        let mut waves = vec![shock.descriptor()];
        if shock.above != top {
            waves.push(nonphysical(shock.above, top, lambda_hat));
        }
        let mut fan = WaveFan::from_chain(waves, 0.0);
        fan.contains_strong = true;
        fan.strong = Some(shock);
        fan
    };
    let physical_zero = weak.family != WaveFamily::NonPhysical && weak.strength == 0.0;
    match side {
        StrongSide::Below => {
            if physical_zero {
                return finish(
                    StrongShock {
                        below: weak.below,
                        ..*strong
                    },
                    strong.above,
                );
            }
            let ul = weak.below;
            let u1 = strong_shock_from_speed(&ul, strong.sigma, gas).unwrap_or(strong.above);
            finish(
                StrongShock {
                    sigma: strong.sigma,
                    below: ul,
                    above: u1,
                },
                strong.above,
            )
        }
        StrongSide::Above => finish(*strong, weak.above),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validation::oracle::{oblique_shock, prandtl_meyer, prandtl_meyer_inverse};
    use crate::waves::{admissible, hugoniot_state, Admissibility};
    use proptest::prelude::*;

    fn gas() -> GasModel {
        GasModel::new(1.4).unwrap()
    }

    fn background() -> (State, StrongShock) {
        let g = gas();
        let upstream = State::from_mach(3.0, 10f64.to_radians(), 1.0, &g);
        let strong = lateral_riemann(&upstream, 0.0, &g).unwrap();
        (upstream, strong)
    }

    fn check_fan(fan: &WaveFan, below: &State, above: &State, g: &GasModel) {
        assert_eq!(fan.chain_gap(below, above), 0.0);
        for w in fan.waves.windows(2) {
            if w[0].family.is_contact() && w[1].family.is_contact() {
                assert_eq!(w[0].speed, w[1].speed);
                continue;
            }
            assert!(
                w[0].speed < w[1].speed,
                "speeds out of order: {} {}",
                w[0].speed,
                w[1].speed
            );
        }
        for w in fan.waves.iter().filter(|w| w.is_shock()) {
            assert!(
                !matches!(admissible(w, g).unwrap(), Admissibility::Violated(_)),
                "{w:?}"
            );
        }
    }

    #[test]
    fn identity_problem_is_empty() {
        let g = gas();
        let s = State::from_mach(2.5, 0.1, 1.0, &g);
        let fan = solve_accurate(&s, &s, &g, 0.01).unwrap();
        assert!(fan.is_empty());
    }

    #[test]
    fn single_four_shock_recovered() {
        let g = gas();
        let above = State::from_mach(2.5, 0.05, 1.0, &g);
        let (below, speed) = hugoniot_state(&above, WaveFamily::Four, 1.05, &g).unwrap();
        let fan = solve_accurate(&below, &above, &g, 0.01).unwrap();
        assert_eq!(fan.waves.len(), 1);
        let w = fan.waves[0];
        assert_eq!(w.family, WaveFamily::Four);
        let expect = -hugoniot_arclength(&above, WaveFamily::Four, below.rho, &g).unwrap();
        assert!((w.strength - expect).abs() < 1e-10);
        assert!((w.speed - speed).abs() < 1e-10);
        check_fan(&fan, &below, &above, &g);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn nearby_states_compose(d in prop::array::uniform4(-1.0f64..1.0), delta in 1e-3f64..2e-2) {
            let g = gas();
            let base = State::from_mach(2.6, 0.05, 1.0, &g);
            let n = d.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-9);
            let above = State::new(base.u + 1e-3 * d[0] / n, base.v + 1e-3 * d[1] / n,
                base.p + 1e-3 * d[2] / n, base.rho + 1e-3 * d[3] / n);
            let fan = solve_accurate(&base, &above, &g, delta).unwrap();
            prop_assert!(fan.residual < 1e-11);
            check_fan(&fan, &base, &above, &g);
            for w in fan.waves.iter().filter(|w| w.is_rarefaction()) {
                prop_assert!(w.strength <= delta * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn large_rarefaction_is_split() {
        let g = gas();
        let below = State::from_mach(2.5, 0.0, 1.0, &g);
        let above = crate::waves::rarefaction_state(&below, WaveFamily::One, 0.05, &g);
        // the upstream-based rarefaction has density decreasing, i.e. a 1-rarefaction from below
        let above = above.unwrap();
        let fan = solve_accurate(&below, &above, &g, 0.004).unwrap();
        let pieces: Vec<_> = fan
            .waves
            .iter()
            .filter(|w| w.family == WaveFamily::One)
            .collect();
        assert!(pieces.len() >= 13, "{}", pieces.len());
        assert!((fan.strength(WaveFamily::One) - 0.05).abs() < 1e-6);
        check_fan(&fan, &below, &above, &g);
    }

    #[test]
    fn strong_background_is_a_single_shock() {
        let g = gas();
        let (upstream, strong) = background();
        let fan = solve_strong(&upstream, &strong.above, &g).unwrap();
        assert!(fan.contains_strong);
        assert_eq!(fan.waves.len(), 1);
        assert!((fan.strong.unwrap().sigma - strong.sigma).abs() < 1e-12);
        let beta = 10f64.to_radians() - strong.sigma.atan();
        let oracle = oblique_shock(3.0, 10f64.to_radians(), &g)
            .beta_weak()
            .unwrap();
        assert!((beta - oracle).abs() < 1e-10);
    }

    #[test]
    fn strong_shock_reflection_ratio_below_one() {
        let g = gas();
        let (upstream, strong) = background();
        // a weak 1-wave arriving from the wall side
        for b in [1e-3, -1e-3, 1e-4, -1e-4] {
            let above = wave_curve(&strong.above, WaveFamily::One, b, &g).unwrap();
            let fan = solve_strong(&upstream, &above, &g).unwrap();
            let d4 = fan.strength(WaveFamily::Four);
            assert!((d4 / b).abs() < 1.0, "{b}: {}", d4 / b);
            assert!(fan.residual < 1e-11);
            assert!(fan.strong.unwrap().sigma != strong.sigma);
        }
    }

    #[test]
    fn strong_absorbs_contact_from_above() {
        let g = gas();
        let (upstream, strong) = background();
        let above = wave_curve(&strong.above, WaveFamily::Three, 1e-3, &g).unwrap();
        let fan = solve_strong(&upstream, &above, &g).unwrap();
        let shift = (fan.strong.unwrap().sigma - strong.sigma).abs();
        assert!(shift < 1e-10, "{shift}");
        assert!((fan.strength(WaveFamily::Three) - 1e-3).abs() < 1e-10);
    }

    #[test]
    fn wall_reflection_coefficients() {
        let g = gas();
        let (_, strong) = background();
        let wall = strong.above;
        let n = [0.0, 1.0];
        assert!(solve_boundary_reflection(&wall, &wall, &n, &g, 0.01)
            .unwrap()
            .is_empty());
        for a in [1e-3, -1e-3] {
            // the 4-wave arrives from below: the wall state is its upstream state
            let below = if a > 0.0 {
                // downstream side of a 4-rarefaction with the wall state upstream
                crate::waves::rarefaction_state(&wall, WaveFamily::Four, a, &g).unwrap()
            } else {
                let rho = wall.rho * (1.0 + 1e-3);
                hugoniot_state(&wall, WaveFamily::Four, rho, &g).unwrap().0
            };
            let a4 = crate::waves::strength_of(WaveFamily::Four, &below, &wall, &g).unwrap();
            let fan = solve_boundary_reflection(&below, &wall, &n, &g, f64::INFINITY).unwrap();
            let d1 = fan.strength(WaveFamily::One);
            assert!((d1 / a4 - 1.0).abs() < 0.1, "ratio {}", d1 / a4);
            assert!(fan.waves.last().unwrap().above.v.abs() < 1e-12);
        }
        let below = wave_curve(&wall, WaveFamily::Two, -1e-3, &g).unwrap();
        let fan = solve_boundary_reflection(&below, &wall, &n, &g, 0.01).unwrap();
        assert!(fan.strength(WaveFamily::One).abs() < 1e-12);
    }

    #[test]
    fn compressive_vertex_matches_oblique_shock() {
        let g = gas();
        let s = State::from_mach(3.0, 0.0, 1.0, &g);
        let t = 10f64.to_radians();
        let input = BoundaryRiemannInput {
            state: s,
            omega: -t,
            normal_next: [t.sin(), t.cos()],
        };
        let fan = solve_boundary_vertex(&input, &g, 0.01).unwrap();
        assert_eq!(fan.waves.len(), 1);
        let w = fan.waves[0];
        assert!(w.is_shock());
        let oracle = oblique_shock(3.0, t, &g).weak.unwrap();
        assert!((w.above.p / s.p - oracle.pressure_ratio).abs() < 1e-9);
        assert!((w.above.p / s.p - 2.05).abs() < 0.01);
        assert!((-w.speed.atan() - oracle.beta).abs() < 1e-9);
        assert!((w.above.angle() + t).abs() < 1e-12);
    }

    #[test]
    fn expansive_vertex_matches_prandtl_meyer() {
        let g = gas();
        let s = State::from_mach(2.0, 0.0, 1.0, &g);
        let t = 10f64.to_radians();
        let input = BoundaryRiemannInput {
            state: s,
            omega: t,
            normal_next: [-t.sin(), t.cos()],
        };
        let fan = solve_boundary_vertex(&input, &g, 0.01).unwrap();
        assert!(fan.waves.len() > 1);
        assert!(fan
            .waves
            .iter()
            .all(|w| w.is_rarefaction() && w.strength <= 0.01 + 1e-12));
        let out = fan.waves.last().unwrap().above;
        assert!((out.angle() - t).abs() < 1e-12);
        let expect = prandtl_meyer_inverse(prandtl_meyer(2.0, &g) + t, &g);
        assert!((out.mach(&g) - expect).abs() < 1e-7);
        assert!((out.mach(&g) - 2.38).abs() < 0.01);
        let zero = BoundaryRiemannInput {
            omega: 0.0,
            normal_next: [0.0, 1.0],
            ..input
        };
        assert!(solve_boundary_vertex(&zero, &g, 0.01).unwrap().is_empty());
    }

    #[test]
    fn detachment_is_structural() {
        let g = gas();
        let s = State::from_mach(1.5, 0.0, 1.0, &g);
        let t = 20f64.to_radians();
        let input = BoundaryRiemannInput {
            state: s,
            omega: -t,
            normal_next: [t.sin(), t.cos()],
        };
        assert!(matches!(
            solve_boundary_vertex(&input, &g, 0.01),
            Err(Error::Structural(_))
        ));
    }

    fn wave(family: WaveFamily, below: State, strength: f64, g: &GasModel) -> WaveDescriptor {
        physical(family, below, strength, g).unwrap()
    }

    #[test]
    fn simplified_weak_cases() {
        let g = gas();
        let lam = 5.0;
        let s = State::from_mach(2.5, 0.02, 1.0, &g);
        let a = wave(WaveFamily::Four, s, -2e-3, &g);
        let b = wave(WaveFamily::One, a.above, 1e-3, &g);
        let fan = solve_simplified_weak(&a, &b, lam, &g);
        assert_eq!(fan.chain_gap(&a.below, &b.above), 0.0);
        let fams: Vec<_> = fan.waves.iter().map(|w| w.family).collect();
        assert_eq!(
            fams,
            vec![WaveFamily::One, WaveFamily::Four, WaveFamily::NonPhysical]
        );
        assert!((fan.waves[0].strength - 1e-3).abs() < 1e-15);
        assert!((fan.waves[1].strength + 2e-3).abs() < 1e-15);
        assert!(fan.nonphysical_strength < 10.0 * 2e-6);
        assert_eq!(fan.waves[2].speed, lam);

        let zero = WaveDescriptor {
            strength: 0.0,
            above: s,
            ..a
        };
        let b0 = wave(WaveFamily::One, s, 1e-3, &g);
        let fan = solve_simplified_weak(&zero, &b0, lam, &g);
        assert_eq!(fan.waves.len(), 1);
        assert_eq!(fan.nonphysical_strength, 0.0);

        let np = nonphysical(s, State { p: s.p + 1e-6, ..s }, lam);
        let c = wave(WaveFamily::Three, np.above, 1e-3, &g);
        let fan = solve_simplified_weak(&np, &c, lam, &g);
        assert_eq!(fan.waves[0].family, WaveFamily::Three);
        assert_eq!(fan.waves[1].family, WaveFamily::NonPhysical);
        assert!((fan.nonphysical_strength - 1e-6).abs() < 1e-8);
        assert_eq!(fan.chain_gap(&np.below, &c.above), 0.0);
    }

    #[test]
    fn simplified_strong_layouts() {
        let g = gas();
        let lam = 5.0;
        let (upstream, strong) = background();
        let zero = WaveDescriptor {
            family: WaveFamily::Four,
            strength: 0.0,
            below: upstream,
            above: upstream,
            speed: 0.0,
        };
        let fan = solve_simplified_strong(&zero, &strong, StrongSide::Below, lam, &g);
        assert_eq!(fan.waves.len(), 1);
        assert_eq!(fan.strong.unwrap(), strong);

        let below = wave_curve(&upstream, WaveFamily::Four, 1e-4, &g).unwrap();
        let hit = WaveDescriptor {
            family: WaveFamily::Four,
            strength: 1e-4,
            below,
            above: upstream,
            speed: 0.0,
        };
        let fan = solve_simplified_strong(&hit, &strong, StrongSide::Below, lam, &g);
        assert_eq!(fan.waves.len(), 2);
        assert_eq!(fan.waves[0].speed, strong.sigma);
        assert_eq!(fan.waves[1].family, WaveFamily::NonPhysical);
        assert!(fan.waves[1].speed > fan.waves[0].speed);
        assert_eq!(fan.chain_gap(&below, &strong.above), 0.0);

        let above = wave_curve(&strong.above, WaveFamily::One, 1e-4, &g).unwrap();
        let hit = WaveDescriptor {
            family: WaveFamily::One,
            strength: 1e-4,
            below: strong.above,
            above,
            speed: 0.0,
        };
        let fan = solve_simplified_strong(&hit, &strong, StrongSide::Above, lam, &g);
        assert_eq!(fan.strong.unwrap(), strong);
        assert_eq!(fan.waves[1].family, WaveFamily::NonPhysical);
        assert_eq!(fan.chain_gap(&upstream, &above), 0.0);
    }
}
