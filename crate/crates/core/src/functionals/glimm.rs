use serde::Serialize;

use crate::error::{Error, Result};
use crate::gasdyn::State;
use crate::tracking::{Front, FrontSet, Region, WedgeBoundary};
use crate::waves::StrongShock;

use super::FunctionalConstants;

/// Terms of the interaction potential.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct PotentialBreakdown {
    pub q_approach: f64,
    pub q_strong: f64,
    pub q_boundary: f64,
    pub q_wedge: f64,
    pub total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GlimmReport {
    pub x: f64,
    pub v: f64,
    pub q: PotentialBreakdown,
    pub f: f64,
    /// State above the strong shock.
    pub u_star: Option<State>,
    /// State below the strong shock.
    pub u_sub: Option<State>,
    pub nonphysical: f64,
    pub fronts: usize,
}

/// Weighted strength `|b|` of a weak front: unit weight behind the strong shock,
/// `k_minus` ahead of it, with nonphysical fronts further scaled by `k_np`.
pub fn weighted_strength(front: &Front, region: Region, c: &FunctionalConstants) -> Result<f64> {
    if front.is_strong() {
        return Err(Error::Invalid(
            "the strong shock has no weighted strength".into(),
        ));
    }
    let region_weight = match region {
        Region::Plus => 1.0,
        Region::Minus => c.k_minus,
    };
    let kind_weight = if front.is_nonphysical() { c.k_np } else { 1.0 };
    Ok(region_weight * kind_weight * front.strength_abs())
}

/// Running `sum |b_a b_b|` over approaching pairs, fed from the top down: `a` below
/// `b` approach when `rank_a > rank_b`, or in the same genuinely nonlinear family
/// when at least one is a shock. Nonphysical waves have rank 5.
#[derive(Default)]
struct Approach {
    above: [f64; 6],
    shocks_above: [f64; 6],
    total: f64,
}

impl Approach {
    fn push(&mut self, rank: usize, b: f64, shock: bool) {
        let slower: f64 = self.above[1..rank].iter().sum();
        let same = match rank {
            1 | 4 if shock => self.above[rank],
            1 | 4 => self.shocks_above[rank],
            _ => 0.0,
        };
        self.total += b * (slower + same);
        self.above[rank] += b;
        if shock {
            self.shocks_above[rank] += b;
        }
    }
}

/// Weighted strength of every weak front and the potential terms in one sweep.
struct Sweep {
    v: f64,
    approach: f64,
    strong: f64,
    boundary: f64,
}

fn sweep(fs: &FrontSet, c: &FunctionalConstants) -> Sweep {
    let s = fs.strong_index();
    let mut out = Sweep {
        v: 0.0,
        approach: 0.0,
        strong: 0.0,
        boundary: 0.0,
    };
    let mut acc = Approach::default();
    for (i, f) in fs.fronts.iter().enumerate().rev() {
        if Some(i) == s {
            out.approach += acc.total;
            acc = Approach::default();
            continue;
        }
        let minus = s.is_some_and(|s| i < s);
        let region_weight = if minus { c.k_minus } else { 1.0 };
        let kind_weight = if f.is_nonphysical() { c.k_np } else { 1.0 };
        let weight = region_weight * kind_weight;
        for w in f.waves.iter().rev() {
            let b = weight * w.strength.abs();
            let rank = w.family.index();
            out.v += b;
            acc.push(rank, b, w.is_shock());
            if s.is_some() && (minus || rank == 1) {
                out.strong += b;
            }
            if !minus && (rank == 4 || rank == 5) {
                out.boundary += b;
            }
        }
    }
    out.approach += acc.total;
    out
}

fn breakdown(
    sw: &Sweep,
    fs: &FrontSet,
    boundary: &WedgeBoundary,
    c: &FunctionalConstants,
) -> PotentialBreakdown {
    let q_approach = c.c_star * sw.approach;
    let q_strong = c.k_star * sw.strong;
    let q_boundary = sw.boundary;
    let q_wedge = c.k_b0_tilde * boundary.remaining_turn(fs.x);
    PotentialBreakdown {
        q_approach,
        q_strong,
        q_boundary,
        q_wedge,
        total: q_approach + q_strong + q_boundary + q_wedge,
    }
}

/// Interaction potential of the front set at its station.
pub fn potential(
    fs: &FrontSet,
    boundary: &WedgeBoundary,
    c: &FunctionalConstants,
) -> PotentialBreakdown {
    breakdown(&sweep(fs, c), fs, boundary, c)
}

/// Glimm functional `F = V + kappa Q + |U* - U0+| + |U_* - U0-|`, with `background`
/// the strong shock at the vertex.
pub fn glimm(
    fs: &FrontSet,
    boundary: &WedgeBoundary,
    c: &FunctionalConstants,
    background: Option<&StrongShock>,
) -> GlimmReport {
    let sw = sweep(fs, c);
    let v = sw.v;
    let q = breakdown(&sw, fs, boundary, c);
    let strong = fs.strong();
    let drift = match (strong, background) {
        (Some(s), Some(b)) => s.above.distance(&b.above) + s.below.distance(&b.below),
        _ => 0.0,
    };
    GlimmReport {
        x: fs.x,
        v,
        q,
        f: v + c.kappa * q.total + drift,
        u_star: strong.map(|s| s.above),
        u_sub: strong.map(|s| s.below),
        nonphysical: fs.nonphysical_strength(),
        fronts: fs.fronts.len(),
    }
}

/// Which of the three potential-decrease estimates an event falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MeasureKind {
    /// Two weak waves: measure `|b_a b_b|`.
    Pair,
    /// A weak wave hitting the strong shock or the wall: measure `|b_a|`.
    Single,
    /// A wall vertex: measure `|omega_k|`.
    Turn,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub kind: MeasureKind,
    pub d_f: f64,
    pub d_q: f64,
    pub measure: f64,
    /// `-dQ / measure`, the locally realized decrease rate.
    pub rate: f64,
    pub f_ok: bool,
    pub q_ok: bool,
}

/// Roundoff allowance on `dF <= 0` and `dQ <= -c m`.
pub fn monitor_tolerance(before: &GlimmReport) -> f64 {
    1e-13 * (1.0 + before.f)
}

/// Checks `dF <= 0` and `dQ <= -c * measure` across one event.
pub fn monitor_event(
    before: &GlimmReport,
    after: &GlimmReport,
    kind: MeasureKind,
    measure: f64,
    c: f64,
) -> Verdict {
    let d_f = after.f - before.f;
    let d_q = after.q.total - before.q.total;
    let tol = monitor_tolerance(before);
    let rate = if measure > 0.0 { -d_q / measure } else { 0.0 };
    Verdict {
        kind,
        d_f,
        d_q,
        measure,
        rate,
        f_ok: d_f <= tol,
        q_ok: d_q <= -c * measure + tol,
    }
}
