use serde::Serialize;

use crate::gasdyn::State;
use crate::riemann::max_abs_diff;
use crate::waves::{StrongShock, WaveDescriptor, WaveFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FrontKind {
    Weak,
    Strong,
    NonPhysical,
}

/// Side of the strong shock.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    /// Upstream of the strong shock.
    Minus,
    /// Between the strong shock and the wall.
    Plus,
}

/// A straight discontinuity `y = y0 + slope (x - x0)`. Vortex sheets carry the
/// 2- and 3-contacts produced together as two waves of one front.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Front {
    pub id: u64,
    pub kind: FrontKind,
    pub waves: Vec<WaveDescriptor>,
    pub x0: f64,
    pub y0: f64,
    pub slope: f64,
    pub generation: u32,
}

impl Front {
    pub fn y_at(&self, x: f64) -> f64 {
        self.y0 + self.slope * (x - self.x0)
    }

    pub fn below(&self) -> State {
        self.waves[0].below
    }

    pub fn above(&self) -> State {
        self.waves[self.waves.len() - 1].above
    }

    pub fn family(&self) -> WaveFamily {
        self.waves[0].family
    }

    pub fn is_strong(&self) -> bool {
        self.kind == FrontKind::Strong
    }

    pub fn is_nonphysical(&self) -> bool {
        self.kind == FrontKind::NonPhysical
    }

    pub fn is_contact(&self) -> bool {
        self.kind == FrontKind::Weak && self.family().is_contact()
    }

    /// Sum of `|alpha|` over the waves carried.
    pub fn strength_abs(&self) -> f64 {
        self.waves.iter().map(|w| w.strength.abs()).sum()
    }

    /// One descriptor spanning the whole front.
    pub fn descriptor(&self) -> WaveDescriptor {
        if self.waves.len() == 1 {
            return self.waves[0];
        }
        WaveDescriptor {
            family: self.family(),
            strength: self.waves.iter().map(|w| w.strength).sum(),
            below: self.below(),
            above: self.above(),
            speed: self.waves[0].speed,
        }
    }

    pub fn strong_shock(&self) -> Option<StrongShock> {
        self.is_strong().then(|| StrongShock {
            sigma: self.waves[0].speed,
            below: self.below(),
            above: self.above(),
        })
    }
}

/// The fronts crossing the station `x`, ordered by ascending `y`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontSet {
    pub x: f64,
    pub fronts: Vec<Front>,
    /// State below every front (constant for the whole run).
    pub bottom: State,
    /// Index of the wall face at `x`.
    pub face: usize,
}

impl FrontSet {
    /// State adjacent to the wall.
    pub fn top_state(&self) -> State {
        self.fronts.last().map(|f| f.above()).unwrap_or(self.bottom)
    }

    pub fn strong_index(&self) -> Option<usize> {
        self.fronts.iter().position(|f| f.is_strong())
    }

    pub fn strong(&self) -> Option<StrongShock> {
        self.strong_index()
            .and_then(|i| self.fronts[i].strong_shock())
    }

    pub fn region_of(&self, i: usize) -> Region {
        match self.strong_index() {
            Some(s) if i < s => Region::Minus,
            _ => Region::Plus,
        }
    }

    pub fn index_of(&self, id: u64) -> Option<usize> {
        self.fronts.iter().position(|f| f.id == id)
    }

    /// Largest mismatch between the above-state of each front and the below-state of the next.
    pub fn chain_gap(&self) -> f64 {
        let mut cur = self.bottom;
        let mut gap = 0.0f64;
        for f in &self.fronts {
            gap = gap.max(max_abs_diff(&cur, &f.below()));
            for w in f.waves.windows(2) {
                gap = gap.max(max_abs_diff(&w[0].above, &w[1].below));
            }
            cur = f.above();
        }
        gap
    }

    /// Whether the fronts are ordered by height at the station.
    pub fn is_ordered(&self, tol: f64) -> bool {
        self.fronts
            .windows(2)
            .all(|w| w[0].y_at(self.x) <= w[1].y_at(self.x) + tol)
    }

    /// State at height `y` on the station.
    pub fn state_at(&self, y: f64) -> State {
        let k = self.fronts.partition_point(|f| f.y_at(self.x) < y);
        if k == 0 {
            self.bottom
        } else {
            self.fronts[k - 1].above()
        }
    }

    pub fn nonphysical_strength(&self) -> f64 {
        self.fronts
            .iter()
            .filter(|f| f.is_nonphysical())
            .map(|f| f.strength_abs())
            .sum()
    }
}
