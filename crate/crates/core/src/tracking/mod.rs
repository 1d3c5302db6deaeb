//! Front tracking: the wall geometry, the front set at a station, the event
//! scan and dispatch, and the recorded history of a run.

pub mod boundary;
pub mod config;
pub mod engine;
pub mod front;
pub mod history;

pub use boundary::WedgeBoundary;
pub use config::{Discretization, InflowProfile, InflowRow, Interpolation, RunConfig, Sampling};
pub use engine::{discretize_initial, next_event, run, step, Event, EventKind, Tracker};
pub use front::{Front, FrontKind, FrontSet, Region};
pub use history::{EventRecord, FrontRecord, History, RunResult, SolverPath, Termination};
