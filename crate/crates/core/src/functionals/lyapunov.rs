use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gasdyn::{GasModel, State};
use crate::riemann::newton4;
use crate::tracking::{FrontSet, Region, WedgeBoundary};
use crate::waves::{contact_state, hugoniot_arclength, hugoniot_branch, WaveFamily};

use super::glimm::potential;
use super::FunctionalConstants;

/// Weights of the L1-type functional: `c_b`, `c_m`, `c_a` scale the connection
/// strengths when both states lie below the strong shock, on different sides, or
/// both above it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovWeights {
    pub c_b: [f64; 4],
    pub c_m: [f64; 4],
    pub c_a: [f64; 4],
    pub kappa1: f64,
    pub kappa2: f64,
}

impl Default for LyapunovWeights {
    fn default() -> Self {
        Self {
            c_b: [1.0; 4],
            c_m: [1.0; 4],
            c_a: [0.5, 1.0, 1.0, 1.0],
            kappa1: 1.0,
            kappa2: 1.0,
        }
    }
}

/// Where the two compared states sit relative to their strong shocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Pairing {
    BothMinus,
    Mixed,
    BothPlus,
}

/// Connection `start -> end` along the Hugoniot curves S1, C2, C3, S4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HugoniotConnection {
    /// Signed strengths, same conventions as wave strengths: arc length along the
    /// Hugoniot locus for families 1 and 4 (negative on the compressive side),
    /// `d|q|` and `d rho` for the contacts.
    pub p: [f64; 4],
    /// `start`, the three middle states, `end`.
    pub states: [State; 5],
}

fn chain(start: &State, x: &[f64; 4], gas: &GasModel) -> Result<[State; 5]> {
    let m1 = hugoniot_branch(start, WaveFamily::One, start.rho * x[0].exp(), gas)?.0;
    let m2 = contact_state(&m1, x[1], 0.0);
    let m3 = contact_state(&m2, 0.0, x[2]);
    let end = hugoniot_branch(&m3, WaveFamily::Four, m3.rho * x[3].exp(), gas)?.0;
    Ok([*start, m1, m2, m3, end])
}

/// Solves for the Hugoniot connection between two states. Differences across the
/// strong shock need `large = true` to start Newton on the strong branch.
pub fn hugoniot_connection(
    start: &State,
    end: &State,
    gas: &GasModel,
    large: bool,
) -> Result<HugoniotConnection> {
    let guess = if large {
        [(end.rho / start.rho).ln(), 0.0, 0.0, 0.0]
    } else {
        [0.0; 4]
    };
    let x = newton4(
        |x| {
            let e = chain(start, x, gas)?[4];
            Ok([e.u - end.u, e.v - end.v, e.p - end.p, e.rho - end.rho])
        },
        guess,
        "hugoniot connection",
    )?;
    let mut states = chain(start, &x, gas)?;
    states[4] = *end;
    let signed = |arc: f64, compressive: bool| if compressive { -arc } else { arc };
    let p1 = signed(
        hugoniot_arclength(&states[0], WaveFamily::One, states[1].rho, gas)?,
        x[0] > 0.0,
    );
    let p4 = signed(
        hugoniot_arclength(&states[3], WaveFamily::Four, states[4].rho, gas)?,
        x[3] < 0.0,
    );
    Ok(HugoniotConnection {
        p: [
            p1,
            states[2].speed() - states[1].speed(),
            states[3].rho - states[2].rho,
            p4,
        ],
        states,
    })
}

/// One interval of the overlay of two front sets, on which both solutions are constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LyapunovSegment {
    pub y0: f64,
    pub y1: f64,
    pub pairing: Pairing,
    pub p: [f64; 4],
    pub q: [f64; 4],
    pub w: [f64; 4],
    /// Set when the Hugoniot connection failed; the segment then contributes nothing.
    pub failed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LyapunovReport {
    pub x: f64,
    pub phi: f64,
    /// `int |q_i| W_i dy` per family.
    pub components: [f64; 4],
    /// `sum_i int |q_i| dy`.
    pub unweighted: f64,
    pub l1: f64,
    pub q_u: f64,
    pub q_v: f64,
    pub segments: Vec<LyapunovSegment>,
    /// Some segment could not be connected.
    pub partial: bool,
}

/// One weak wave of either solution as seen by the weights.
struct Wave {
    y: f64,
    rank: usize,
    size: f64,
    from_u: bool,
    region: Region,
}

fn weak_waves(fs: &FrontSet, from_u: bool, out: &mut Vec<Wave>) {
    let s = fs.strong_index();
    for (i, f) in fs.fronts.iter().enumerate() {
        if f.is_strong() {
            continue;
        }
        let region = if s.is_some_and(|s| i < s) {
            Region::Minus
        } else {
            Region::Plus
        };
        for w in &f.waves {
            out.push(Wave {
                y: f.y_at(fs.x),
                rank: w.family.index(),
                size: w.strength.abs(),
                from_u,
                region,
            });
        }
    }
}

fn region_at(fs: &FrontSet, y: f64) -> Region {
    match fs.strong_index() {
        Some(s) if y < fs.fronts[s].y_at(fs.x) => Region::Minus,
        _ => Region::Plus,
    }
}

/// Integration range: from the lowest front (below it both solutions equal their
/// common bottom state) or from `y_floor` when the bottom states differ, up to the wall.
fn overlay(u: &FrontSet, v: &FrontSet, boundary: &WedgeBoundary, y_floor: f64) -> Vec<f64> {
    let top = boundary.g(u.x);
    let mut ys: Vec<f64> = u
        .fronts
        .iter()
        .chain(&v.fronts)
        .map(|f| f.y_at(u.x))
        .filter(|y| *y < top)
        .collect();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    let lowest = ys.first().copied().unwrap_or(top);
    let bottom = if u.bottom == v.bottom {
        lowest
    } else {
        y_floor.min(lowest)
    };
    let mut cuts = vec![bottom];
    cuts.extend(ys.into_iter().filter(|y| *y > bottom));
    cuts.push(top);
    cuts.dedup();
    cuts
}

/// `int |U - V| dy` over the common domain, with `|.|` the Euclidean norm of `(u, v, p, rho)`.
pub fn l1_distance(u: &FrontSet, v: &FrontSet, boundary: &WedgeBoundary, y_floor: f64) -> f64 {
    overlay(u, v, boundary, y_floor)
        .windows(2)
        .map(|c| {
            let y = 0.5 * (c[0] + c[1]);
            (c[1] - c[0]) * u.state_at(y).distance(&v.state_at(y))
        })
        .sum()
}

/// Strong-shock strength used where the weight table marks the large wave.
fn large_strength(fs: &FrontSet) -> f64 {
    fs.strong_index()
        .map(|s| fs.fronts[s].strength_abs())
        .unwrap_or(0.0)
}

/// The weighted L1 functional between two front sets at the same station.
pub fn lyapunov(
    u: &FrontSet,
    v: &FrontSet,
    boundary: &WedgeBoundary,
    weights: &LyapunovWeights,
    consts: &FunctionalConstants,
    gas: &GasModel,
    y_floor: f64,
) -> LyapunovReport {
    let q_u = potential(u, boundary, consts).total;
    let q_v = potential(v, boundary, consts).total;
    let mut waves = Vec::new();
    weak_waves(u, true, &mut waves);
    weak_waves(v, false, &mut waves);
    let large = 0.5 * (large_strength(u) + large_strength(v));
    let mut report = LyapunovReport {
        x: u.x,
        phi: 0.0,
        components: [0.0; 4],
        unweighted: 0.0,
        l1: 0.0,
        q_u,
        q_v,
        segments: Vec::new(),
        partial: false,
    };
    for c in overlay(u, v, boundary, y_floor).windows(2) {
        let (y0, y1) = (c[0], c[1]);
        let y = 0.5 * (y0 + y1);
        let (su, sv) = (u.state_at(y), v.state_at(y));
        report.l1 += (y1 - y0) * su.distance(&sv);
        if su == sv {
            continue;
        }
        let (ru, rv) = (region_at(u, y), region_at(v, y));
        let pairing = match (ru, rv) {
            (Region::Minus, Region::Minus) => Pairing::BothMinus,
            (Region::Plus, Region::Plus) => Pairing::BothPlus,
            _ => Pairing::Mixed,
        };
        // start from U unless U is above the strong shock and V below it
        let (start, end) = if ru == Region::Plus && rv == Region::Minus {
            (sv, su)
        } else {
            (su, sv)
        };
        let mut seg = LyapunovSegment {
            y0,
            y1,
            pairing,
            p: [0.0; 4],
            q: [0.0; 4],
            w: [0.0; 4],
            failed: false,
        };
        match hugoniot_connection(&start, &end, gas, pairing == Pairing::Mixed) {
            Ok(conn) => seg.p = conn.p,
            Err(_) => {
                seg.failed = true;
                report.partial = true;
                report.segments.push(seg);
                continue;
            }
        }
        let c = match pairing {
            Pairing::BothMinus => &weights.c_b,
            Pairing::Mixed => &weights.c_m,
            Pairing::BothPlus => &weights.c_a,
        };
        for i in 0..4 {
            let fam = i + 1;
            seg.q[i] = c[i] * seg.p[i];
            let mut a = 0.0;
            for w in &waves {
                let below = w.y < y;
                // B: faster families below, slower families above
                if (below && w.rank > fam) || (!below && w.rank < fam) {
                    a += w.size;
                }
                if w.rank == fam {
                    if pairing != Pairing::Mixed {
                        // C: same-family waves that approach a small connection
                        let toward = if seg.q[i] < 0.0 {
                            w.from_u == below
                        } else {
                            w.from_u != below
                        };
                        if seg.q[i] != 0.0 && toward {
                            a += w.size;
                        }
                    } else if fam == 1 {
                        // F: 1-waves below in the upstream region or above behind the shock
                        let side = if below { Region::Minus } else { Region::Plus };
                        if w.region == side {
                            a += w.size;
                        }
                    }
                }
            }
            let d = match (fam, pairing) {
                (1, Pairing::Mixed) | (2 | 3, Pairing::BothPlus) => 0.0,
                _ => large,
            };
            a += d;
            seg.w[i] = 1.0 + weights.kappa1 * a + weights.kappa2 * (q_u + q_v);
            let piece = (y1 - y0) * seg.q[i].abs();
            report.components[i] += piece * seg.w[i];
            report.unweighted += piece;
        }
        report.segments.push(seg);
    }
    report.phi = report.components.iter().sum();
    report
}

/// Connection between the wall-adjacent states of two solutions at one station.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryEstimate {
    pub x: f64,
    pub p: [f64; 4],
    /// `|p_4| / |p_1|`.
    pub reflection_ratio: f64,
    /// `|v/u - g'| / |p_1|` on the contact states of the connection.
    pub contact_ratio: f64,
}

/// Measures how far the connection between the two wall states is from a pure
/// 1-wave: both states are tangent to the same face, so `p_4` and the contact
/// slope mismatch should scale with `p_1`. `None` when the wall states agree.
pub fn boundary_estimate(
    u: &FrontSet,
    v: &FrontSet,
    boundary: &WedgeBoundary,
    gas: &GasModel,
) -> Result<Option<BoundaryEstimate>> {
    let (a, b) = (u.top_state(), v.top_state());
    if a == b {
        return Ok(None);
    }
    let conn = hugoniot_connection(&a, &b, gas, false)?;
    let slope = boundary.face_slope(boundary.face_index(u.x));
    let p1 = conn.p[0].abs().max(f64::MIN_POSITIVE);
    let mid = conn.states[2];
    Ok(Some(BoundaryEstimate {
        x: u.x,
        p: conn.p,
        reflection_ratio: conn.p[3].abs() / p1,
        contact_ratio: (mid.v / mid.u - slope).abs() / p1,
    }))
}
