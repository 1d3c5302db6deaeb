use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::lyapunov::l1_distance;
use crate::tracking::{run, FrontSet, RunConfig, Termination};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub eps: f64,
    pub events: usize,
    pub fronts: usize,
    /// How far the run got; distances need it to reach the station.
    pub x_end: f64,
    pub completed: bool,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub station: f64,
    pub y_floor: f64,
    pub rows: Vec<ConvergenceRow>,
    /// `distances[i][j]`: L1 distance at the station between the runs at `eps[i]` and
    /// `eps[j]`; `None` when either run stopped before the station.
    pub distances: Vec<Vec<Option<f64>>>,
    /// Least-squares slope of `log d(eps_k, eps_{k+1})` against `log eps_k`.
    pub slope: Option<f64>,
}

impl ConvergenceTable {
    /// Distances between consecutive runs.
    pub fn consecutive(&self) -> Vec<Option<f64>> {
        (1..self.rows.len())
            .map(|k| self.distances[k - 1][k])
            .collect()
    }

    /// Whether consecutive distances shrink along the list.
    pub fn monotone(&self) -> bool {
        let d = self.consecutive();
        d.windows(2)
            .all(|w| matches!((w[0], w[1]), (Some(a), Some(b)) if b <= a))
    }
}

/// Least-squares slope of `y` against `x`; `None` with fewer than two points.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Runs `cfg` at each of the decreasing `eps_list` in parallel and tabulates the L1
/// distances of the solutions at `station`, integrated from `y_floor` to the wall.
pub fn convergence_study(
    cfg: &RunConfig,
    eps_list: &[f64],
    station: f64,
    y_floor: f64,
) -> Result<ConvergenceTable> {
    if eps_list.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::Invalid("eps list must be non-increasing".into()));
    }
    if !(station > 0.0 && station <= cfg.x_max) {
        return Err(Error::Invalid(format!(
            "station {station} outside (0, x_max]"
        )));
    }
    let runs: Vec<(ConvergenceRow, Option<FrontSet>)> = eps_list
        .par_iter()
        .map(|&eps| -> Result<_> {
            let mut c = cfg.clone();
            c.eps = eps;
            let t = Instant::now();
            let r = run(&c)?;
            let reached = r.history.x_end >= station;
            let row = ConvergenceRow {
                eps,
                events: r.history.events.len(),
                fronts: r.final_set.fronts.len(),
                x_end: r.history.x_end,
                completed: r.termination == Termination::Completed,
                seconds: t.elapsed().as_secs_f64(),
            };
            Ok((row, reached.then(|| r.history.front_set_at(station))))
        })
        .collect::<Result<_>>()?;
    let n = runs.len();
    let mut distances = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            if let (Some(u), Some(v)) = (&runs[i].1, &runs[j].1) {
                distances[i][j] = Some(if i == j {
                    0.0
                } else {
                    l1_distance(u, v, &cfg.boundary, y_floor)
                });
            }
        }
    }
    let pts: Vec<(f64, f64)> = (1..n)
        .filter_map(|k| distances[k - 1][k].map(|d| (eps_list[k - 1], d)))
        .collect();
    Ok(ConvergenceTable {
        station,
        y_floor,
        rows: runs.into_iter().map(|r| r.0).collect(),
        distances,
        slope: loglog_slope(&pts),
    })
}
