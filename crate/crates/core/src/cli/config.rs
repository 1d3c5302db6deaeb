//! Flat `key = value` configuration. Blank lines and `#` comments are ignored;
//! `inflow.row`, `boundary.vertex` and `couple.row` may repeat.
//!
//! ```text
//! gas.gamma = 1.4
//! inflow.interpolation = step
//! inflow.row = -inf, 2.954, 0.521, 0.714, 1   # y, u, v, p, rho
//! boundary.vertex = 0.5, 0.005                # a_k, b_k
//! tracking.eps = 0.01
//! tracking.x_max = 2
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::functionals::lyapunov::LyapunovWeights;
use crate::gasdyn::{GasModel, State};
use crate::tracking::{InflowProfile, InflowRow, Interpolation, RunConfig, WedgeBoundary};

/// A run configuration together with the settings of the other subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub run: RunConfig,
    pub weights: LyapunovWeights,
    /// Tolerated `dQ <= -c * measure` rate in the event verdicts.
    pub monitor_c: f64,
    /// Inflow of the second solution; empty means `couple.density_shift`.
    pub couple_rows: Vec<InflowRow>,
    /// Relative scaling of `p` and `rho` that produces the second inflow.
    pub couple_shift: f64,
    /// Stations at which the coupled functional is evaluated.
    pub couple_stations: usize,
    pub calibrate_v_bound: f64,
    pub calibrate_samples: usize,
    pub converge_eps: Vec<f64>,
    /// Defaults to `0.8 x_max`.
    pub converge_station: Option<f64>,
}

impl CliConfig {
    pub fn new(run: RunConfig) -> Self {
        Self {
            run,
            weights: LyapunovWeights::default(),
            monitor_c: 0.0,
            couple_rows: Vec::new(),
            couple_shift: 1e-3,
            couple_stations: 21,
            calibrate_v_bound: 0.05,
            calibrate_samples: 200,
            converge_eps: vec![1e-2, 1e-3, 1e-4],
            converge_station: None,
        }
    }

    /// Inflow of the second solution in a coupled run.
    pub fn couple_inflow(&self) -> InflowProfile {
        let rows = if self.couple_rows.is_empty() {
            let k = 1.0 + self.couple_shift;
            self.run
                .inflow
                .rows
                .iter()
                .map(|r| InflowRow {
                    y: r.y,
                    state: State {
                        rho: r.state.rho * k,
                        p: r.state.p * k,
                        ..r.state
                    },
                })
                .collect()
        } else {
            self.couple_rows.clone()
        };
        InflowProfile {
            rows,
            interpolation: self.run.inflow.interpolation,
        }
    }
}

fn syntax(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::config("syntax", format!("line {line}: {msg}"))
}

fn num(line: usize, key: &str, s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| {
        syntax(
            line,
            format!("`{key}` expects a number, found `{}`", s.trim()),
        )
    })?;
    if v.is_nan() {
        return Err(syntax(line, format!("`{key}` is NaN")));
    }
    Ok(v)
}

fn finite(line: usize, key: &str, s: &str) -> Result<f64> {
    let v = num(line, key, s)?;
    if !v.is_finite() {
        return Err(syntax(line, format!("`{key}` must be finite")));
    }
    Ok(v)
}

fn list(line: usize, key: &str, s: &str, n: usize) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(',').collect();
    if n > 0 && parts.len() != n {
        return Err(syntax(
            line,
            format!(
                "`{key}` expects {n} comma-separated numbers, found {}",
                parts.len()
            ),
        ));
    }
    parts.iter().map(|p| num(line, key, p)).collect()
}

fn count(line: usize, key: &str, s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| syntax(line, format!("`{key}` expects a non-negative integer")))
}

fn row(line: usize, key: &str, s: &str) -> Result<InflowRow> {
    let v = list(line, key, s, 5)?;
    if v[1..].iter().any(|x| !x.is_finite()) || v[0] == f64::INFINITY {
        return Err(syntax(line, format!("`{key}` has a non-finite state")));
    }
    Ok(InflowRow {
        y: v[0],
        state: State {
            u: v[1],
            v: v[2],
            p: v[3],
            rho: v[4],
        },
    })
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<CliConfig> {
    let (mut gamma, mut kappa, mut cv) = (1.4, 1.0, 1.0);
    let mut rows = Vec::new();
    let mut interpolation = Interpolation::Step;
    let mut vertices = vec![[0.0, 0.0]];
    let placeholder = RunConfig::new(
        GasModel::new(1.4)?,
        InflowProfile::step(Vec::new()),
        WedgeBoundary::straight(),
        1e-2,
    );
    let mut c = CliConfig::new(placeholder);
    let r = &mut c.run;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, val) = body
            .split_once('=')
            .ok_or_else(|| syntax(line, "expected `key = value`"))?;
        let (key, val) = (key.trim(), val.trim());
        match key {
            "gas.gamma" => gamma = finite(line, key, val)?,
            "gas.kappa" => kappa = finite(line, key, val)?,
            "gas.cv" => cv = finite(line, key, val)?,
            "inflow.row" => rows.push(row(line, key, val)?),
            "inflow.interpolation" => {
                interpolation = match val {
                    "step" => Interpolation::Step,
                    "linear" => Interpolation::Linear,
                    _ => return Err(syntax(line, "`inflow.interpolation` is `step` or `linear`")),
                }
            }
            "boundary.vertex" => {
                let v = list(line, key, val, 2)?;
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(syntax(line, "`boundary.vertex` must be finite"));
                }
                if v != [0.0, 0.0] || vertices.len() > 1 {
                    vertices.push([v[0], v[1]]);
                }
            }
            "tracking.eps" => r.eps = finite(line, key, val)?,
            "tracking.mu" => r.mu = Some(finite(line, key, val)?),
            "tracking.delta" => r.delta = Some(finite(line, key, val)?),
            "tracking.lambda_hat" => r.lambda_hat = Some(finite(line, key, val)?),
            "tracking.x_max" => r.x_max = finite(line, key, val)?,
            "tracking.seed" => {
                r.seed = val
                    .parse()
                    .map_err(|_| syntax(line, "`tracking.seed` expects an integer"))?
            }
            "tracking.max_events" => r.max_events = count(line, key, val)?,
            "sampling.nx" => r.sampling.nx = count(line, key, val)?,
            "sampling.ny" => r.sampling.ny = count(line, key, val)?,
            "sampling.y_min" => r.sampling.y_min = finite(line, key, val)?,
            "constants.c_star" => r.constants.c_star = finite(line, key, val)?,
            "constants.k_star" => r.constants.k_star = finite(line, key, val)?,
            "constants.k_b0_tilde" => r.constants.k_b0_tilde = finite(line, key, val)?,
            "constants.k_minus" => r.constants.k_minus = finite(line, key, val)?,
            "constants.k_np" => r.constants.k_np = finite(line, key, val)?,
            "constants.kappa" => r.constants.kappa = finite(line, key, val)?,
            "limits.tv_bound" => r.tv_bound = finite(line, key, val)?,
            "limits.monitor_c" => c.monitor_c = finite(line, key, val)?,
            "weights.c_b" => c.weights.c_b = list(line, key, val, 4)?.try_into().unwrap(),
            "weights.c_m" => c.weights.c_m = list(line, key, val, 4)?.try_into().unwrap(),
            "weights.c_a" => c.weights.c_a = list(line, key, val, 4)?.try_into().unwrap(),
            "weights.kappa1" => c.weights.kappa1 = finite(line, key, val)?,
            "weights.kappa2" => c.weights.kappa2 = finite(line, key, val)?,
            "couple.row" => c.couple_rows.push(row(line, key, val)?),
            "couple.density_shift" => c.couple_shift = finite(line, key, val)?,
            "couple.stations" => c.couple_stations = count(line, key, val)?,
            "calibrate.v_bound" => c.calibrate_v_bound = finite(line, key, val)?,
            "calibrate.samples" => c.calibrate_samples = count(line, key, val)?,
            "converge.eps" => c.converge_eps = list(line, key, val, 0)?,
            "converge.station" => c.converge_station = Some(finite(line, key, val)?),
            _ => return Err(syntax(line, format!("unknown key `{key}`"))),
        }
    }
    c.run.gas = GasModel::with_normalization(gamma, kappa, cv)?;
    c.run.inflow = InflowProfile {
        rows,
        interpolation,
    };
    c.run.boundary = WedgeBoundary::new(vertices)?;
    validate(&c)?;
    Ok(c)
}

fn validate(c: &CliConfig) -> Result<()> {
    c.run.validate()?;
    let r = &c.run;
    if r.sampling.nx < 2 || r.sampling.ny < 2 {
        return Err(Error::config(
            "sampling",
            "sampling.nx and sampling.ny must be at least 2",
        ));
    }
    if r.sampling.y_min >= 0.0 {
        return Err(Error::config(
            "sampling",
            "sampling.y_min must lie below the wedge vertex",
        ));
    }
    if r.max_events == 0 {
        return Err(Error::config(
            "tracking",
            "tracking.max_events must be positive",
        ));
    }
    if !c.couple_rows.is_empty() {
        InflowProfile {
            rows: c.couple_rows.clone(),
            interpolation: r.inflow.interpolation,
        }
        .validate(&r.gas)?;
    }
    if c.converge_eps.is_empty() || c.converge_eps.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::config(
            "converge",
            "converge.eps must list positive values",
        ));
    }
    Ok(())
}

fn fmt_list(v: &[f64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn fmt_row(r: &InflowRow) -> String {
    fmt_list(&[r.y, r.state.u, r.state.v, r.state.p, r.state.rho])
}

/// Writes `c` back in the format read by [`parse_config`]; numbers round-trip exactly.
pub fn serialize_config(c: &CliConfig) -> String {
    let r = &c.run;
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    kv("gas.gamma", r.gas.gamma.to_string());
    kv("gas.kappa", r.gas.kappa.to_string());
    kv("gas.cv", r.gas.cv.to_string());
    let interp = match r.inflow.interpolation {
        Interpolation::Step => "step",
        Interpolation::Linear => "linear",
    };
    kv("inflow.interpolation", interp.into());
    for row in &r.inflow.rows {
        kv("inflow.row", fmt_row(row));
    }
    for v in &r.boundary.vertices[1..] {
        kv("boundary.vertex", fmt_list(v));
    }
    kv("tracking.eps", r.eps.to_string());
    if let Some(m) = r.mu {
        kv("tracking.mu", m.to_string());
    }
    if let Some(d) = r.delta {
        kv("tracking.delta", d.to_string());
    }
    if let Some(l) = r.lambda_hat {
        kv("tracking.lambda_hat", l.to_string());
    }
    kv("tracking.x_max", r.x_max.to_string());
    kv("tracking.seed", r.seed.to_string());
    kv("tracking.max_events", r.max_events.to_string());
    kv("sampling.nx", r.sampling.nx.to_string());
    kv("sampling.ny", r.sampling.ny.to_string());
    kv("sampling.y_min", r.sampling.y_min.to_string());
    let k = &r.constants;
    kv("constants.c_star", k.c_star.to_string());
    kv("constants.k_star", k.k_star.to_string());
    kv("constants.k_b0_tilde", k.k_b0_tilde.to_string());
    kv("constants.k_minus", k.k_minus.to_string());
    kv("constants.k_np", k.k_np.to_string());
    kv("constants.kappa", k.kappa.to_string());
    kv("limits.tv_bound", r.tv_bound.to_string());
    kv("limits.monitor_c", c.monitor_c.to_string());
    let w = &c.weights;
    kv("weights.c_b", fmt_list(&w.c_b));
    kv("weights.c_m", fmt_list(&w.c_m));
    kv("weights.c_a", fmt_list(&w.c_a));
    kv("weights.kappa1", w.kappa1.to_string());
    kv("weights.kappa2", w.kappa2.to_string());
    for row in &c.couple_rows {
        kv("couple.row", fmt_row(row));
    }
    kv("couple.density_shift", c.couple_shift.to_string());
    kv("couple.stations", c.couple_stations.to_string());
    kv("calibrate.v_bound", c.calibrate_v_bound.to_string());
    kv("calibrate.samples", c.calibrate_samples.to_string());
    kv("converge.eps", fmt_list(&c.converge_eps));
    if let Some(x) = c.converge_station {
        kv("converge.station", x.to_string());
    }
    s
}
