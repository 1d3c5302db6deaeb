use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::FunctionalConstants;
use crate::gasdyn::{GasModel, State};
use crate::riemann::lateral_riemann;

use super::boundary::WedgeBoundary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Interpolation {
    /// Rows are constant cells `[y_k, y_{k+1})`.
    Step,
    /// Rows are nodes of a piecewise-linear profile, constant outside the nodes.
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InflowRow {
    pub y: f64,
    pub state: State,
}

/// Incoming flow `U(0, y)` for `y < 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InflowProfile {
    pub rows: Vec<InflowRow>,
    pub interpolation: Interpolation,
}

/// Piecewise-constant approximation of the inflow: `cells[k]` holds from its `y`
/// up to the next cell (the last one up to the wall).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discretization {
    pub cells: Vec<InflowRow>,
    pub l1_error: f64,
    pub jump_count: usize,
}

impl InflowProfile {
    pub fn uniform(state: State) -> Self {
        Self {
            rows: vec![InflowRow {
                y: f64::NEG_INFINITY,
                state,
            }],
            interpolation: Interpolation::Step,
        }
    }

    pub fn step(rows: Vec<InflowRow>) -> Self {
        Self {
            rows,
            interpolation: Interpolation::Step,
        }
    }

    /// The state at the wedge vertex.
    pub fn vertex_state(&self) -> State {
        self.rows.last().expect("non-empty inflow").state
    }

    pub fn state_at(&self, y: f64) -> State {
        let k = self.rows.partition_point(|r| r.y <= y);
        match self.interpolation {
            Interpolation::Step => self.rows[k.saturating_sub(1)].state,
            Interpolation::Linear => {
                if k == 0 {
                    return self.rows[0].state;
                }
                if k == self.rows.len() {
                    return self.vertex_state();
                }
                let (a, b) = (&self.rows[k - 1], &self.rows[k]);
                let t = (y - a.y) / (b.y - a.y);
                let (sa, sb) = (a.state.to_array(), b.state.to_array());
                State::from_array(std::array::from_fn(|i| sa[i] + t * (sb[i] - sa[i])))
            }
        }
    }

    /// Total variation, measured in the Euclidean norm of `(u, v, p, rho)`.
    pub fn total_variation(&self) -> f64 {
        self.rows
            .windows(2)
            .map(|w| w[0].state.distance(&w[1].state))
            .sum()
    }

    pub fn validate(&self, gas: &GasModel) -> Result<()> {
        if self.rows.is_empty() {
            return Err(Error::config(
                "inflow",
                "at least one inflow row is required",
            ));
        }
        for w in self.rows.windows(2) {
            if !(w[1].y > w[0].y) {
                return Err(Error::config(
                    "inflow",
                    "inflow rows must have strictly increasing y",
                ));
            }
        }
        if self.rows.last().unwrap().y >= 0.0 {
            return Err(Error::config(
                "inflow",
                "inflow rows must lie below the wedge vertex (y < 0)",
            ));
        }
        if self.interpolation == Interpolation::Linear && !self.rows[0].y.is_finite() {
            return Err(Error::config(
                "inflow",
                "linear inflow nodes must have finite y",
            ));
        }
        for r in &self.rows {
            let s = r.state;
            if !s.is_valid() {
                return Err(Error::config(
                    "positivity",
                    format!("inflow state at y = {} has non-positive p or rho", r.y),
                ));
            }
            if !s.is_supersonic(gas) || !s.is_x_supersonic(gas) {
                return Err(Error::config(
                    "supersonic",
                    format!(
                        "inflow at y = {} violates u^2 + v^2 > c^2 with u > c (Mach {:.4})",
                        r.y,
                        s.mach(gas)
                    ),
                ));
            }
            let angle = s.angle();
            if !(angle > 0.0) {
                return Err(Error::config(
                    "inflow angle",
                    format!(
                        "inflow at y = {} must satisfy 0 < arctan(v/u), found {angle:e}",
                        r.y
                    ),
                ));
            }
        }
        Ok(())
    }

    /// Piecewise-constant approximation with jumps of size at most `eps` inside
    /// linear segments; step profiles are reproduced exactly.
    pub fn discretize(&self, eps: f64) -> Discretization {
        match self.interpolation {
            Interpolation::Step => Discretization {
                cells: self.rows.clone(),
                l1_error: 0.0,
                jump_count: self.rows.len() - 1,
            },
            Interpolation::Linear => {
                let mut cells = vec![InflowRow {
                    y: f64::NEG_INFINITY,
                    state: self.rows[0].state,
                }];
                let mut l1_error = 0.0;
                for w in self.rows.windows(2) {
                    let (a, b) = (&w[0], &w[1]);
                    let jump = a.state.distance(&b.state);
                    let n = ((jump / eps).ceil() as usize).max(1);
                    let h = (b.y - a.y) / n as f64;
                    for k in 0..n {
                        let y = a.y + k as f64 * h;
                        cells.push(InflowRow {
                            y,
                            state: self.state_at(y + 0.5 * h),
                        });
                    }
                    // |U - mean| integrates to h^2 |U'|_1 / 4 on each cell
                    let slope_l1 = a.state.l1_norm_diff(&b.state) / (b.y - a.y);
                    l1_error += n as f64 * 0.25 * h * h * slope_l1;
                }
                cells.push(InflowRow {
                    y: self.rows.last().unwrap().y,
                    state: self.vertex_state(),
                });
                cells.dedup_by(|next, prev| next.state == prev.state);
                let jump_count = cells.len() - 1;
                Discretization {
                    cells,
                    l1_error,
                    jump_count,
                }
            }
        }
    }
}

/// Sampling grid for `solution.csv`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sampling {
    pub nx: usize,
    pub ny: usize,
    /// Lower end of the sampled (and integrated) `y` range.
    pub y_min: f64,
}

impl Default for Sampling {
    fn default() -> Self {
        Self {
            nx: 21,
            ny: 41,
            y_min: -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub gas: GasModel,
    pub inflow: InflowProfile,
    pub boundary: WedgeBoundary,
    pub eps: f64,
    pub mu: Option<f64>,
    pub delta: Option<f64>,
    pub lambda_hat: Option<f64>,
    pub x_max: f64,
    pub seed: u64,
    pub sampling: Sampling,
    pub constants: FunctionalConstants,
    /// Bound on `TV(inflow) + TV(g')`.
    pub tv_bound: f64,
    pub max_events: usize,
}

impl RunConfig {
    pub fn new(gas: GasModel, inflow: InflowProfile, boundary: WedgeBoundary, eps: f64) -> Self {
        Self {
            gas,
            inflow,
            boundary,
            eps,
            mu: None,
            delta: None,
            lambda_hat: None,
            x_max: 2.0,
            seed: 0,
            sampling: Sampling::default(),
            constants: FunctionalConstants::default(),
            tv_bound: 0.2,
            max_events: 2_000_000,
        }
    }

    /// Uniform flow of Mach number `mach` inclined by `theta` onto a straight wall.
    pub fn straight_wedge(mach: f64, theta: f64, gas: GasModel, eps: f64) -> Self {
        let state = State::from_mach(mach, theta, 1.0, &gas);
        Self::new(
            gas,
            InflowProfile::uniform(state),
            WedgeBoundary::straight(),
            eps,
        )
    }

    /// Four-row step inflow near Mach 3 at 10 degrees, randomly perturbed by `seed`,
    /// onto a wall with three small corners; `x_max = 1.5`.
    pub fn perturbed_wedge(seed: u64, eps: f64) -> Self {
        use rand::{Rng, SeedableRng};
        let gas = GasModel::new(1.4).expect("valid gamma");
        let theta = 10f64.to_radians();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        let mut y = f64::NEG_INFINITY;
        for k in 0..4 {
            let m = 3.0 + rng.gen_range(-0.01..0.01);
            let a = theta + rng.gen_range(-0.003..0.003);
            let rho = 1.0 + rng.gen_range(-0.01..0.01);
            rows.push(InflowRow {
                y,
                state: State::from_mach(m, a, rho, &gas),
            });
            y = -0.8 + 0.25 * k as f64;
        }
        let boundary = WedgeBoundary::from_face_angles(&[0.3, 0.7, 1.1], &[0.01, -0.005, 0.004])
            .expect("valid wall");
        let mut cfg = Self::new(gas, InflowProfile::step(rows), boundary, eps);
        cfg.x_max = 1.5;
        cfg.seed = seed;
        cfg
    }

    /// Interaction threshold of the simplified solver, `eps^2` unless overridden.
    pub fn mu_eps(&self) -> f64 {
        self.mu.unwrap_or(self.eps * self.eps)
    }

    /// Largest rarefaction piece, `eps` unless overridden.
    pub fn delta_eps(&self) -> f64 {
        self.delta.unwrap_or(self.eps)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) || !self.eps.is_finite() {
            return Err(Error::config("tracking", "eps must be positive"));
        }
        if !(self.x_max > 0.0) {
            return Err(Error::config("tracking", "x_max must be positive"));
        }
        self.inflow.validate(&self.gas)?;
        let tv = self.inflow.total_variation() + self.boundary.total_turn();
        if tv > self.tv_bound {
            return Err(Error::config(
                "small total variation",
                format!(
                    "TV(inflow) + TV(g') = {tv:.6} exceeds the bound {}",
                    self.tv_bound
                ),
            ));
        }
        lateral_riemann(&self.inflow.vertex_state(), 0.0, &self.gas).map_err(|e| {
            Error::config(
                "vertex angle below the critical angle",
                format!("no attached shock at the wedge vertex: {e}"),
            )
        })?;
        Ok(())
    }
}
