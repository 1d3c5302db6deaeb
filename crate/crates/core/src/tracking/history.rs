use serde::Serialize;

use crate::error::Error;
use crate::functionals::glimm::{GlimmReport, MeasureKind};
use crate::gasdyn::State;
use crate::waves::{StrongShock, WaveDescriptor};

use super::boundary::WedgeBoundary;
use super::config::Discretization;
use super::engine::EventKind;
use super::front::{Front, FrontKind, FrontSet};

/// Lifetime of one front: it exists on `birth <= x < death`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontRecord {
    pub id: u64,
    pub kind: FrontKind,
    pub waves: Vec<WaveDescriptor>,
    pub x0: f64,
    pub y0: f64,
    pub slope: f64,
    pub generation: u32,
    pub birth: f64,
    pub death: Option<f64>,
}

impl FrontRecord {
    pub fn from_front(f: &Front, birth: f64) -> Self {
        Self {
            id: f.id,
            kind: f.kind,
            waves: f.waves.clone(),
            x0: f.x0,
            y0: f.y0,
            slope: f.slope,
            generation: f.generation,
            birth,
            death: None,
        }
    }

    pub fn is_alive_at(&self, x: f64) -> bool {
        self.birth <= x && self.death.is_none_or(|d| x < d)
    }

    pub fn to_front(&self) -> Front {
        Front {
            id: self.id,
            kind: self.kind,
            waves: self.waves.clone(),
            x0: self.x0,
            y0: self.y0,
            slope: self.slope,
            generation: self.generation,
        }
    }

    pub fn y_at(&self, x: f64) -> f64 {
        self.y0 + self.slope * (x - self.x0)
    }
}

/// Which solver resolved an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SolverPath {
    Accurate,
    Simplified,
    /// The accurate solver failed and the simplified one was used instead.
    AccurateFallback,
    StrongAccurate,
    StrongSimplified,
    Reflection,
    /// A nonphysical front left through the wall.
    Absorbed,
    Vertex,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventRecord {
    pub index: usize,
    pub x: f64,
    pub y: f64,
    pub kind: EventKind,
    pub solver: Option<SolverPath>,
    pub participants: Vec<u64>,
    pub created: Vec<u64>,
    pub strengths_in: Vec<f64>,
    pub strengths_out: Vec<f64>,
    pub nonphysical_out: f64,
    pub omega: f64,
    pub measure_kind: MeasureKind,
    pub measure: f64,
    pub d_f: f64,
    pub d_q: f64,
}

/// Everything needed to rebuild the approximate solution at any station.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct History {
    pub boundary: WedgeBoundary,
    pub bottom: State,
    pub fronts: Vec<FrontRecord>,
    pub events: Vec<EventRecord>,
    pub x_end: f64,
}

impl History {
    /// The front set at station `x` (fronts born at `x` included, those dying at `x` excluded).
    pub fn front_set_at(&self, x: f64) -> FrontSet {
        let mut fronts: Vec<Front> = self
            .fronts
            .iter()
            .filter(|r| r.is_alive_at(x))
            .map(|r| r.to_front())
            .collect();
        fronts.sort_by(|a, b| {
            a.y_at(x)
                .total_cmp(&b.y_at(x))
                .then(a.slope.total_cmp(&b.slope))
        });
        FrontSet {
            x,
            fronts,
            bottom: self.bottom,
            face: self.boundary.face_index(x),
        }
    }

    /// States at `(x, y)` for each `y`; `None` above the wall.
    pub fn sample(&self, x: f64, ys: &[f64]) -> Vec<Option<State>> {
        let fs = self.front_set_at(x);
        let wall = self.boundary.g(x);
        ys.iter()
            .map(|&y| (y <= wall).then(|| fs.state_at(y)))
            .collect()
    }

    /// Abscissas of all events.
    pub fn event_stations(&self) -> Vec<f64> {
        self.events.iter().map(|e| e.x).collect()
    }
}

/// How a run ended.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Termination {
    /// No event before `x_max`.
    Completed,
    EventCap,
    Failed(Error),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub history: History,
    pub final_set: FrontSet,
    /// Report at `x = 0+` followed by one report after each event.
    pub reports: Vec<GlimmReport>,
    pub background: Option<StrongShock>,
    pub discretization: Discretization,
    pub lambda_hat: f64,
    pub mu: f64,
    pub delta: f64,
    pub termination: Termination,
}

impl RunResult {
    pub fn failure(&self) -> Option<&Error> {
        match &self.termination {
            Termination::Failed(e) => Some(e),
            _ => None,
        }
    }

    /// Largest total nonphysical strength over the run.
    pub fn max_nonphysical(&self) -> f64 {
        self.reports
            .iter()
            .map(|r| r.nonphysical)
            .fold(0.0, f64::max)
    }
}
