use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gasdyn::{lambda, GasModel, State};
use crate::riemann::{
    lateral_riemann, newton4, solve_accurate, solve_simplified_strong, solve_simplified_weak,
    solve_strong, turn_to_angle, StrongSide, WaveFan,
};
use crate::waves::{
    describe, strong_shock_from_speed, wave_curve, StrongShock, WaveDescriptor, WaveFamily,
};

use super::lyapunov::LyapunovWeights;
use super::FunctionalConstants;

const FAMILIES: [WaveFamily; 4] = [
    WaveFamily::One,
    WaveFamily::Two,
    WaveFamily::Three,
    WaveFamily::Four,
];

/// The unperturbed strong shock at the wedge vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Background {
    pub minus: State,
    pub plus: State,
    pub sigma: f64,
}

impl Background {
    pub fn from_shock(s: &StrongShock) -> Self {
        Self {
            minus: s.below,
            plus: s.above,
            sigma: s.sigma,
        }
    }

    /// Uniform flow of Mach `mach` at angle `theta` turned onto a horizontal face.
    pub fn straight_wedge(mach: f64, theta: f64, gas: &GasModel) -> Result<Self> {
        let up = State::from_mach(mach, theta, 1.0, gas);
        Ok(Self::from_shock(&lateral_riemann(&up, 0.0, gas)?))
    }
}

/// Finite-difference estimates of the linear interaction coefficients at a background.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientTable {
    /// Reflected 1-wave per incoming 4-, 3-, 2-wave at the wall.
    pub k_b4: f64,
    pub k_b3: f64,
    pub k_b2: f64,
    /// Reflected 1-wave per radian of wall turning.
    pub k_b0: f64,
    /// Vertex shock slope change per radian of turning at the vertex.
    pub k_bs: f64,
    /// Weak 1-wave hitting the strong shock from above: `[d sigma, delta_2, delta_3, delta_4]` per unit strength.
    pub k_s: [f64; 4],
    /// `|dU*/d beta|` for the same interaction.
    pub k_s_state: f64,
    /// `k_ij[j][i]`: outgoing `j` per incoming `i`-wave from below, with row 0 the slope change.
    pub k_ij: [[f64; 4]; 4],
    /// `|dU*/d alpha_i|` for incoming waves from below.
    pub k_ij_state: [f64; 4],
    /// `|K_s4| |lambda_4+ - sigma| / |lambda_1+ - sigma|`, below 1 in the stable regime.
    pub key_ratio: f64,
    pub s4_margin: f64,
}

fn central<F: Fn(f64) -> Result<f64>>(f: F, h: f64) -> Result<f64> {
    Ok((f(h)? - f(-h)?) / (2.0 * h))
}

fn central_state<F: Fn(f64) -> Result<State>>(f: F, h: f64) -> Result<f64> {
    let (a, b) = (f(h)?, f(-h)?);
    Ok(a.distance(&b) / (2.0 * h))
}

/// The state below an `family`-wave of strength `a` whose upper state is `above`.
fn below_of(above: &State, family: WaveFamily, a: f64, gas: &GasModel) -> Result<State> {
    let x = newton4(
        |x| {
            let top = wave_curve(&State::from_array(*x), family, a, gas)?;
            Ok(std::array::from_fn(|k| {
                top.to_array()[k] - above.to_array()[k]
            }))
        },
        above.to_array(),
        "wave inversion",
    )?;
    Ok(State::from_array(x))
}

fn one_strength(fan: &WaveFan) -> f64 {
    fan.strength(WaveFamily::One)
}

fn strong_of(fan: &WaveFan) -> Result<StrongShock> {
    fan.strong
        .ok_or_else(|| Error::Structural("strong solver returned no strong shock".into()))
}

const H: f64 = 1e-5;

/// Largest nonphysical strength per unit incoming strength left by the simplified
/// strong solver, for a weak front from below and a 1-front from above.
fn simplified_strong_amplification(bg: &Background, gas: &GasModel) -> Result<(f64, f64)> {
    let shock = StrongShock {
        sigma: bg.sigma,
        below: bg.minus,
        above: bg.plus,
    };
    let np = |fan: &WaveFan| {
        fan.waves
            .iter()
            .filter(|w| w.family == WaveFamily::NonPhysical)
            .map(|w| w.strength)
            .sum::<f64>()
    };
    let mut below: f64 = 0.0;
    let mut above: f64 = 0.0;
    for a in [-1e-4, 1e-4] {
        for fam in FAMILIES {
            let ul = below_of(&bg.minus, fam, a, gas)?;
            let weak = WaveDescriptor {
                family: fam,
                strength: a,
                below: ul,
                above: bg.minus,
                speed: 0.0,
            };
            below = below.max(
                np(&solve_simplified_strong(
                    &weak,
                    &shock,
                    StrongSide::Below,
                    0.0,
                    gas,
                )) / a.abs(),
            );
        }
        let top = wave_curve(&bg.plus, WaveFamily::One, a, gas)?;
        let weak = WaveDescriptor {
            family: WaveFamily::One,
            strength: a,
            below: bg.plus,
            above: top,
            speed: 0.0,
        };
        above = above.max(
            np(&solve_simplified_strong(
                &weak,
                &shock,
                StrongSide::Above,
                0.0,
                gas,
            )) / a.abs(),
        );
    }
    Ok((below, above))
}

/// Largest ratio of outgoing to incoming nonphysical strength when a nonphysical front
/// crosses the strong shock from below, over random small jumps.
fn nonphysical_crossing(bg: &Background, gas: &GasModel, samples: usize, seed: u64) -> f64 {
    let shock = StrongShock {
        sigma: bg.sigma,
        below: bg.minus,
        above: bg.plus,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = bg.minus.to_array();
    let mut worst: f64 = 0.0;
    for _ in 0..samples.max(1) {
        let ul = State::from_array(std::array::from_fn(|k| {
            base[k] * (1.0 + 1e-5 * rng.gen_range(-1.0..1.0))
        }));
        let weak = WaveDescriptor {
            family: WaveFamily::NonPhysical,
            strength: ul.distance(&bg.minus),
            below: ul,
            above: bg.minus,
            speed: 0.0,
        };
        let fan = solve_simplified_strong(&weak, &shock, StrongSide::Below, 0.0, gas);
        let out: f64 = fan
            .waves
            .iter()
            .filter(|w| w.family == WaveFamily::NonPhysical)
            .map(|w| w.strength)
            .sum();
        worst = worst.max(out / weak.strength);
    }
    worst
}

pub fn probe_coefficients(bg: &Background, gas: &GasModel) -> Result<CoefficientTable> {
    let face = bg.plus.angle();
    let reflect = |fam: WaveFamily| {
        central(
            |a| {
                Ok(one_strength(&turn_to_angle(
                    &below_of(&bg.plus, fam, a, gas)?,
                    face,
                    gas,
                    f64::INFINITY,
                )?))
            },
            H,
        )
    };
    let k_b4 = reflect(WaveFamily::Four)?;
    let k_b3 = reflect(WaveFamily::Three)?;
    let k_b2 = reflect(WaveFamily::Two)?;
    let k_b0 = central(
        |w| {
            Ok(one_strength(&turn_to_angle(
                &bg.plus,
                face + w,
                gas,
                f64::INFINITY,
            )?))
        },
        H,
    )?;
    let vertex = bg.minus.angle() - face;
    let k_bs = central(
        |w| Ok(lateral_riemann(&bg.minus, bg.minus.angle() - vertex + w, gas)?.sigma),
        H,
    )?;

    // weak 1-wave from above
    let from_above = |b: f64| {
        solve_strong(
            &bg.minus,
            &wave_curve(&bg.plus, WaveFamily::One, b, gas)?,
            gas,
        )
    };
    let mut k_s = [0.0; 4];
    k_s[0] = central(|b| Ok(strong_of(&from_above(b)?)?.sigma), H)?;
    for j in 1..4 {
        k_s[j] = central(|b| Ok(from_above(b)?.strength(FAMILIES[j])), H)?;
    }
    let k_s_state = central_state(|b| Ok(strong_of(&from_above(b)?)?.above), H)?;

    // weak i-wave from below: U- -> U_m by the i-wave, then the unchanged shock slope
    let mut k_ij = [[0.0; 4]; 4];
    let mut k_ij_state = [0.0; 4];
    for (i, &fam) in FAMILIES.iter().enumerate() {
        let from_below = |a: f64| {
            let mid = wave_curve(&bg.minus, fam, a, gas)?;
            solve_strong(
                &bg.minus,
                &strong_shock_from_speed(&mid, bg.sigma, gas)?,
                gas,
            )
        };
        k_ij[0][i] = central(|a| Ok(strong_of(&from_below(a)?)?.sigma), H)?;
        for j in 1..4 {
            k_ij[j][i] = central(|a| Ok(from_below(a)?.strength(FAMILIES[j])), H)?;
        }
        k_ij_state[i] = central_state(|a| Ok(strong_of(&from_below(a)?)?.above), H)?;
    }

    let l1 = lambda(&bg.plus, gas, 1);
    let l4 = lambda(&bg.plus, gas, 4);
    let key_ratio = k_s[3].abs() * (l4 - bg.sigma).abs() / (l1 - bg.sigma).abs();
    let table = CoefficientTable {
        k_b4,
        k_b3,
        k_b2,
        k_b0,
        k_bs,
        k_s,
        k_s_state,
        k_ij,
        k_ij_state,
        key_ratio,
        s4_margin: 1.0 - k_s[3].abs(),
    };
    if table.s4_margin <= 0.0 {
        return Err(Error::Structural(format!(
            "|K_s4| = {} is not below 1 at this background",
            k_s[3].abs()
        )));
    }
    Ok(table)
}

/// Largest growth of the total strength and of the boundary-bound strengths per unit
/// interaction `|alpha beta|`, over random approaching weak pairs at one base state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
pub struct InteractionBounds {
    /// Growth of `V`.
    pub m1: f64,
    /// Growth of the strengths entering the strong-shock and boundary terms.
    pub m0: f64,
    /// Nonphysical strength emitted by the simplified solver per `|alpha beta|`.
    pub m_np: f64,
    pub samples: usize,
}

pub fn interaction_bounds(
    base: &State,
    gas: &GasModel,
    samples: usize,
    seed: u64,
) -> Result<InteractionBounds> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = InteractionBounds::default();
    let lambda_hat = 1.2
        * (0..4)
            .map(|k| lambda(base, gas, k + 1).abs())
            .fold(0.0, f64::max);
    while out.samples < samples {
        let (i, j) = (rng.gen_range(0..4), rng.gen_range(0..4));
        let mag = |r: &mut ChaCha8Rng| {
            let m = 10f64.powf(r.gen_range(-4.0..-2.0));
            if r.gen_bool(0.5) {
                m
            } else {
                -m
            }
        };
        let (a, b) = (mag(&mut rng), mag(&mut rng));
        let (fa, fb) = (FAMILIES[i], FAMILIES[j]);
        // lower wave of a faster family, or the same nonlinear family with a shock
        let approaching = i > j || (i == j && !fa.is_contact() && (a < 0.0 || b < 0.0));
        if !approaching {
            continue;
        }
        let mid = wave_curve(base, fa, a, gas)?;
        let top = wave_curve(&mid, fb, b, gas)?;
        let (wa, wb) = (describe(fa, *base, mid, gas)?, describe(fb, mid, top, gas)?);
        let ab = (a * b).abs();
        let fan = solve_accurate(base, &top, gas, f64::INFINITY)?;
        let sum = |f: &WaveFan, pick: &dyn Fn(WaveFamily) -> bool| -> f64 {
            f.waves
                .iter()
                .filter(|w| pick(w.family))
                .map(|w| w.strength.abs())
                .sum()
        };
        let bound = |fam: WaveFamily| matches!(fam, WaveFamily::One | WaveFamily::Four);
        let inputs_bound: f64 = [(fa, a), (fb, b)]
            .iter()
            .filter(|(f, _)| bound(*f))
            .map(|(_, s)| s.abs())
            .sum();
        out.m1 = out.m1.max((sum(&fan, &|_| true) - a.abs() - b.abs()) / ab);
        out.m0 = out.m0.max((sum(&fan, &bound) - inputs_bound) / ab);
        let simple = solve_simplified_weak(&wa, &wb, lambda_hat, gas);
        out.m_np = out.m_np.max(simple.nonphysical_strength / ab);
        out.samples += 1;
    }
    Ok(out)
}

/// Slack of each potential-decrease case at the chosen constants; nonnegative means
/// the case inequality holds for every admissible strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CaseMargins {
    pub weak_pair: f64,
    pub boundary_reflection: f64,
    pub boundary_vertex: f64,
    pub strong_from_below: f64,
    pub strong_from_above: f64,
    /// Worst of the two sides for the simplified strong solver.
    pub simplified_strong: f64,
}

impl CaseMargins {
    pub fn all_hold(&self) -> bool {
        [
            self.weak_pair,
            self.boundary_reflection,
            self.boundary_vertex,
            self.strong_from_below,
            self.strong_from_above,
            self.simplified_strong,
        ]
        .iter()
        .all(|m| *m >= 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    pub background: Background,
    pub table: CoefficientTable,
    pub bounds: InteractionBounds,
    /// Assumed bound on `V` along the run.
    pub v_bound: f64,
    pub constants: FunctionalConstants,
    pub weights: LyapunovWeights,
    pub margins: CaseMargins,
}

/// Chooses `k_minus`, `C*`, `K*`, `K~_b0` and `kappa` so that each case of the
/// functional-decrease argument closes at the probed coefficients, and Lyapunov
/// weights with `c_1^a / c_4^a` between the key ratio and 1.
pub fn calibrate(
    bg: &Background,
    gas: &GasModel,
    v_bound: f64,
    samples: usize,
    seed: u64,
) -> Result<Calibration> {
    let t = probe_coefficients(bg, gas)?;
    let mut bounds = interaction_bounds(&bg.plus, gas, samples, seed)?;
    let minus = interaction_bounds(&bg.minus, gas, samples, seed.wrapping_add(1))?;
    bounds.m1 = bounds.m1.max(minus.m1);
    bounds.m0 = bounds.m0.max(minus.m0);
    bounds.m_np = bounds.m_np.max(minus.m_np);
    bounds.samples += minus.samples;
    let v = v_bound;

    let max_kij = (0..4)
        .flat_map(|i| (1..4).map(move |j| (i, j)))
        .map(|(i, j)| t.k_ij[j][i].abs())
        .fold(0.0, f64::max);
    let np_cross = nonphysical_crossing(bg, gas, samples, seed.wrapping_add(2));
    let mut k_minus = (2.0 * max_kij).max(1.0);
    let s_sum: f64 = t.k_s[1..].iter().map(|k| k.abs()).sum();
    let (np_below, np_above) = simplified_strong_amplification(bg, gas)?;
    // K* must beat the 1-wave case from above and the transmitted 4-waves from below;
    // k_np is then cut until a simplified strong interaction still lowers Q by half
    let mut k_np = 1.0;
    let (mut m0, mut m1, mut c_star, mut k_star) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..8 {
        // nonphysical fronts count like boundary-bound waves in the potential
        m0 = bounds.m0 + k_np * bounds.m_np;
        m1 = bounds.m1 + k_np * bounds.m_np;
        c_star = 1.0 + 2.0 * m0 / (1.0 - v);
        let from_below_lo = (0..4)
            .map(|i| {
                let out: f64 = (1..4).map(|j| t.k_ij[j][i].abs()).sum();
                (t.k_ij[3][i].abs() + c_star * v * out) / k_minus
            })
            .fold(0.0, f64::max);
        let lo = (t.k_s[3].abs() + c_star * v * s_sum).max(from_below_lo);
        let hi = (1.0 / t.k_b4.abs() - c_star * v).min(1.0);
        k_star = 0.5 * (lo + hi);
        // a nonphysical front crossing from below must leave Q lower too
        let k_minus_np = 2.0 * np_cross * (1.0 + c_star * v) / k_star;
        let cap = 0.5
            * (k_star * k_minus / np_below.max(1e-300)).min(k_star / np_above.max(1e-300))
            / (1.0 + c_star * v);
        if k_np <= cap && k_minus >= k_minus_np {
            break;
        }
        k_np = cap.min(1.0);
        k_minus = k_minus.max(k_minus_np);
    }

    let mut kappa: f64 = 1.0;
    let mut need = |num: f64, den: f64| {
        if num > 0.0 && den > 0.0 {
            kappa = kappa.max(num / den);
        }
    };
    need(m1, c_star * (1.0 - v) - m0);
    need(
        t.k_b4.abs() - 1.0,
        1.0 - k_star * t.k_b4.abs() - c_star * t.k_b4.abs() * v,
    );
    need(
        s_sum + t.k_s_state - 1.0,
        k_star - t.k_s[3].abs() - c_star * v * s_sum,
    );
    for i in 0..4 {
        let out: f64 = (1..4).map(|j| t.k_ij[j][i].abs()).sum();
        need(
            out + t.k_ij_state[i] + 1.0 - k_minus,
            k_star * k_minus - t.k_ij[3][i].abs() - c_star * v * out,
        );
    }
    let kappa = 1.1 * kappa;
    let k_b0_tilde = 1.05
        * (k_star * t.k_b0.abs() + c_star * t.k_b0.abs() * v + t.k_b0.abs() / kappa)
            .max(t.k_b0.abs())
        + 1e-12;

    // per-unit-strength changes of F in each case
    let margins = CaseMargins {
        weak_pair: -(m1 + kappa * (-c_star * (1.0 - v) + m0)),
        boundary_reflection: -(t.k_b4.abs() - 1.0
            + kappa * (c_star * t.k_b4.abs() * v + k_star * t.k_b4.abs() - 1.0)),
        boundary_vertex: -(t.k_b0.abs()
            + kappa * (c_star * t.k_b0.abs() * v + k_star * t.k_b0.abs() - k_b0_tilde)),
        strong_from_below: (0..4)
            .map(|i| {
                let out: f64 = (1..4).map(|j| t.k_ij[j][i].abs()).sum();
                -(out + t.k_ij_state[i] + 1.0 - k_minus
                    + kappa * (c_star * out * v - k_star * k_minus + t.k_ij[3][i].abs()))
            })
            .fold(f64::INFINITY, f64::min),
        strong_from_above: -(s_sum + t.k_s_state - 1.0
            + kappa * (c_star * s_sum * v - k_star + t.k_s[3].abs())),
        simplified_strong: -(k_np * np_below - k_minus
            + kappa * (k_np * np_below * (1.0 + c_star * v) - k_star * k_minus))
            .max(k_np * np_above - 1.0 + kappa * (k_np * np_above * (1.0 + c_star * v) - k_star))
            .max(
                k_np * (np_cross - k_minus)
                    + kappa * k_np * (np_cross * (1.0 + c_star * v) - k_star * k_minus),
            ),
    };

    let ratio = if t.key_ratio < 1.0 {
        0.5 * (1.0 + t.key_ratio)
    } else {
        0.5
    };
    // kappa2 (Q(U) + Q(V)) must outweigh kappa1 times the approaching strength each case
    // creates: new waves per unit measure over the decrease of Q per unit measure
    let kappa1 = 4.0;
    let kb0 = t.k_b0.abs();
    let kb4 = t.k_b4.abs();
    let cases = [
        (kb0, k_b0_tilde - k_star * kb0 - c_star * kb0 * v),
        (m1, c_star * (1.0 - v) - m0),
        (kb4, 1.0 - k_star * kb4 - c_star * kb4 * v),
        (s_sum, k_star - t.k_s[3].abs() - c_star * v * s_sum),
    ];
    let worst = cases
        .iter()
        .filter(|c| c.1 > 0.0)
        .map(|c| c.0 / c.1)
        .fold(0.0, f64::max);
    let weights = LyapunovWeights {
        c_a: [ratio, 1.0, 1.0, 1.0],
        c_m: [2.0; 4],
        c_b: [8.0; 4],
        kappa1,
        kappa2: (2.0 * kappa1 * worst).max(1.0),
    };
    Ok(Calibration {
        background: *bg,
        table: t,
        bounds,
        v_bound,
        constants: FunctionalConstants {
            c_star,
            k_star,
            k_b0_tilde,
            k_minus,
            k_np,
            kappa,
        },
        weights,
        margins,
    })
}
