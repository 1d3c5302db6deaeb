use serde::Serialize;

use crate::error::{Error, Result};

/// Piecewise-linear upper wall `y = g(x)` starting at the vertex `(0, 0)` with a
/// horizontal first face. Face `k` runs from vertex `k` to vertex `k + 1`; the
/// last face continues the last segment to `x = +inf`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WedgeBoundary {
    pub vertices: Vec<[f64; 2]>,
    pub face_angles: Vec<f64>,
    /// `turn_angles[k] = face_angles[k] - face_angles[k - 1]`, zero at the wedge vertex.
    pub turn_angles: Vec<f64>,
    pub normals: Vec<[f64; 2]>,
}

impl WedgeBoundary {
    /// A straight horizontal wall.
    pub fn straight() -> Self {
        Self::new(vec![[0.0, 0.0]]).expect("valid straight wall")
    }

    pub fn new(vertices: Vec<[f64; 2]>) -> Result<Self> {
        if vertices.first() != Some(&[0.0, 0.0]) {
            return Err(Error::config(
                "wall",
                "the first wall vertex must be (0, 0)",
            ));
        }
        for w in vertices.windows(2) {
            if !(w[1][0] > w[0][0]) || !w[1][1].is_finite() {
                return Err(Error::config(
                    "wall",
                    "vertex abscissas must be finite and strictly increasing",
                ));
            }
        }
        let mut face_angles: Vec<f64> = vertices
            .windows(2)
            .map(|w| (w[1][1] - w[0][1]).atan2(w[1][0] - w[0][0]))
            .collect();
        match face_angles.first() {
            Some(a) if a.abs() > 1e-14 => {
                return Err(Error::config(
                    "wall",
                    format!("the first face must be horizontal, found angle {a:e}"),
                ));
            }
            Some(_) => face_angles[0] = 0.0,
            None => face_angles.push(0.0),
        }
        if face_angles.len() < vertices.len() {
            face_angles.push(*face_angles.last().unwrap());
        }
        for a in &face_angles {
            if a.abs() >= std::f64::consts::FRAC_PI_2 {
                return Err(Error::config("wall", "faces must not be vertical"));
            }
        }
        let mut turn_angles = vec![0.0];
        turn_angles.extend(face_angles.windows(2).map(|w| w[1] - w[0]));
        let normals = face_angles.iter().map(|t| [-t.sin(), t.cos()]).collect();
        Ok(Self {
            vertices,
            face_angles,
            turn_angles,
            normals,
        })
    }

    /// Wall with vertices at abscissas `a_1 < a_2 < ...` and face angles `angles[k]` after vertex `k + 1`.
    pub fn from_face_angles(abscissas: &[f64], angles: &[f64]) -> Result<Self> {
        if abscissas.len() != angles.len() {
            return Err(Error::Invalid(
                "one face angle per vertex is required".into(),
            ));
        }
        let mut vertices = vec![[0.0, 0.0]];
        let mut prev_angle = 0.0f64;
        for (&a, &t) in abscissas.iter().zip(angles) {
            let [x0, y0] = *vertices.last().unwrap();
            vertices.push([a, y0 + prev_angle.tan() * (a - x0)]);
            prev_angle = t;
        }
        // one more vertex fixes the direction of the final face
        if let Some(&[x0, y0]) = vertices.last() {
            if !abscissas.is_empty() {
                vertices.push([x0 + 1.0, y0 + prev_angle.tan()]);
            }
        }
        Self::new(vertices)
    }

    pub fn face_count(&self) -> usize {
        self.face_angles.len()
    }

    /// Index of the face containing abscissa `x` (faces are closed on the left).
    pub fn face_index(&self, x: f64) -> usize {
        let k = self.vertices.partition_point(|v| v[0] <= x);
        k.saturating_sub(1).min(self.face_count() - 1)
    }

    pub fn face_slope(&self, k: usize) -> f64 {
        self.face_angles[k].tan()
    }

    /// `g` evaluated on the line of face `k`.
    pub fn face_height(&self, k: usize, x: f64) -> f64 {
        let [a, b] = self.vertices[k];
        b + self.face_slope(k) * (x - a)
    }

    pub fn g(&self, x: f64) -> f64 {
        self.face_height(self.face_index(x), x)
    }

    /// Abscissa of the vertex ending face `k`, if any.
    pub fn next_vertex(&self, k: usize) -> Option<f64> {
        // the last stored vertex only orients the final face when it does not turn it
        self.vertices.get(k + 1).map(|v| v[0])
    }

    /// Total turning `sum |omega_k|`.
    pub fn total_turn(&self) -> f64 {
        self.turn_angles.iter().map(|w| w.abs()).sum()
    }

    /// Turning at vertices strictly to the right of `x`.
    pub fn remaining_turn(&self, x: f64) -> f64 {
        self.vertices
            .iter()
            .zip(&self.turn_angles)
            .filter(|(v, _)| v[0] > x)
            .map(|(_, w)| w.abs())
            .sum()
    }
}
