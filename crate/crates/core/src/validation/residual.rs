use serde::Serialize;

use crate::error::{Error, Result};
use crate::gasdyn::{entropy_scalar, fluxes, GasModel, State};
use crate::tracking::{FrontKind, History};

/// Axis-aligned control rectangle; the part above the wall is cut off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub rect: Rect,
    /// `oint (W dy - H dx)` for mass, both momenta and energy.
    pub residual: [f64; 4],
    /// Each component divided by the integral of its absolute flux around the path.
    pub relative: [f64; 4],
    /// `oint rho S (u dy - v dx)`; nonnegative for an entropy solution.
    pub entropy: f64,
    pub entropy_scale: f64,
    /// Total strength of nonphysical fronts crossing the rectangle.
    pub nonphysical: f64,
    /// Total strength of rarefaction pieces crossing the rectangle.
    pub rarefaction: f64,
    /// Whether part of the path runs along the wall.
    pub wall: bool,
}

impl ResidualReport {
    pub fn max_relative(&self) -> f64 {
        self.relative.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

/// Conservation fluxes with the entropy flux appended.
fn flux5(s: &State, gas: &GasModel) -> ([f64; 5], [f64; 5]) {
    let f = fluxes(s, gas);
    let e = s.rho * entropy_scalar(s, gas);
    let w = [f.w[0], f.w[1], f.w[2], f.w[3], e * s.u];
    let h = [f.h[0], f.h[1], f.h[2], f.h[3], e * s.v];
    (w, h)
}

struct Acc {
    sum: [f64; 5],
    abs: [f64; 5],
}

impl Acc {
    fn add(&mut self, w: &[f64; 5], h: &[f64; 5], dx: f64, dy: f64) {
        for k in 0..5 {
            let c = w[k] * dy - h[k] * dx;
            self.sum[k] += c;
            self.abs[k] += w[k].abs() * dy.abs() + h[k].abs() * dx.abs();
        }
    }
}

/// Moves `x` off an event station onto the midpoint with the next one, so vertical
/// edges see a single front set.
pub fn snap_between_events(history: &History, x: f64) -> f64 {
    let stations = history.event_stations();
    match stations.iter().position(|s| *s == x) {
        None => x,
        Some(k) => match stations[k + 1..].iter().find(|s| **s > x) {
            Some(next) => 0.5 * (x + next),
            None => x + 0.5 * (history.x_end - x).max(1e-9),
        },
    }
}

/// Abscissas in `(a, b)` where the line `y = c` meets a front, the wall, or an event.
fn horizontal_cuts(history: &History, c: f64, a: f64, b: f64, wall: bool) -> Vec<f64> {
    let mut cuts = vec![a, b];
    cuts.extend(
        history
            .event_stations()
            .into_iter()
            .filter(|x| *x > a && *x < b),
    );
    for r in &history.fronts {
        if r.slope != 0.0 {
            let x = r.x0 + (c - r.y0) / r.slope;
            if x > a && x < b && r.is_alive_at(x) {
                cuts.push(x);
            }
        }
    }
    if wall {
        let bd = &history.boundary;
        for v in &bd.vertices {
            if v[0] > a && v[0] < b {
                cuts.push(v[0]);
            }
        }
        for k in 0..bd.face_count() {
            let s = bd.face_slope(k);
            if s != 0.0 {
                let x = bd.vertices[k][0] + (c - bd.vertices[k][1]) / s;
                if x > a && x < b && bd.face_index(x) == k {
                    cuts.push(x);
                }
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts
}

/// `oint (W dy - H dx)` counterclockwise around `rect` clipped to the domain, exact on
/// the piecewise-constant solution. Along the wall only the pressure flux remains.
pub fn conservation_residual(
    history: &History,
    rect: Rect,
    gas: &GasModel,
) -> Result<ResidualReport> {
    let Rect { x0, x1, y0, y1 } = rect;
    if !(x1 > x0 && y1 > y0) || x0 < 0.0 || x1 > history.x_end {
        return Err(Error::Invalid(format!(
            "rectangle {rect:?} is empty or outside the computed range"
        )));
    }
    let bd = &history.boundary;
    if y0 >= bd.g(x0).min(bd.g(x1)) {
        return Err(Error::Invalid(
            "rectangle bottom lies above the wall".into(),
        ));
    }
    let mut acc = Acc {
        sum: [0.0; 5],
        abs: [0.0; 5],
    };
    let mut wall = false;

    // bottom, left to right
    let cuts = horizontal_cuts(history, y0, x0, x1, false);
    for c in cuts.windows(2) {
        let s = history.front_set_at(0.5 * (c[0] + c[1])).state_at(y0);
        let (w, h) = flux5(&s, gas);
        acc.add(&w, &h, c[1] - c[0], 0.0);
    }
    // vertical edges
    for (x, up) in [(x1, true), (x0, false)] {
        let fs = history.front_set_at(x);
        let top = y1.min(bd.g(x));
        let mut ys = vec![y0, top];
        ys.extend(
            fs.fronts
                .iter()
                .map(|f| f.y_at(x))
                .filter(|y| *y > y0 && *y < top),
        );
        ys.sort_by(f64::total_cmp);
        for c in ys.windows(2) {
            let s = fs.state_at(0.5 * (c[0] + c[1]));
            let (w, h) = flux5(&s, gas);
            let dy = if up { c[1] - c[0] } else { c[0] - c[1] };
            acc.add(&w, &h, 0.0, dy);
        }
    }
    // top, right to left, along y1 or the wall where the wall is lower
    let cuts = horizontal_cuts(history, y1, x0, x1, true);
    for c in cuts.windows(2).rev() {
        let (a, b) = (c[0], c[1]);
        let m = 0.5 * (a + b);
        let fs = history.front_set_at(m);
        if bd.g(m) < y1 {
            wall = true;
            let p = fs.top_state().p;
            let (dx, dy) = (a - b, bd.g(a) - bd.g(b));
            let w = [0.0, p, 0.0, 0.0, 0.0];
            let h = [0.0, 0.0, p, 0.0, 0.0];
            acc.add(&w, &h, dx, dy);
        } else {
            let (w, h) = flux5(&fs.state_at(y1), gas);
            acc.add(&w, &h, a - b, 0.0);
        }
    }

    let (mut nonphysical, mut rarefaction) = (0.0, 0.0);
    for r in &history.fronts {
        let lo = r.birth.max(x0);
        let hi = r.death.unwrap_or(history.x_end).min(x1);
        if hi <= lo {
            continue;
        }
        let (ya, yb) = (r.y_at(lo), r.y_at(hi));
        if ya.max(yb) <= y0 || ya.min(yb) >= y1 {
            continue;
        }
        match r.kind {
            FrontKind::NonPhysical => {
                nonphysical += r.waves.iter().map(|w| w.strength.abs()).sum::<f64>()
            }
            FrontKind::Weak => {
                rarefaction += r
                    .waves
                    .iter()
                    .filter(|w| w.is_rarefaction())
                    .map(|w| w.strength.abs())
                    .sum::<f64>()
            }
            FrontKind::Strong => {}
        }
    }
    let rel = |k: usize| {
        if acc.abs[k] > 0.0 {
            acc.sum[k] / acc.abs[k]
        } else {
            0.0
        }
    };
    Ok(ResidualReport {
        rect,
        residual: [acc.sum[0], acc.sum[1], acc.sum[2], acc.sum[3]],
        relative: [rel(0), rel(1), rel(2), rel(3)],
        entropy: acc.sum[4],
        entropy_scale: acc.abs[4],
        nonphysical,
        rarefaction,
        wall,
    })
}
