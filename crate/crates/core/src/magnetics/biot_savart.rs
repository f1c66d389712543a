use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::WirePath;
use crate::vec3::Vec3;
use crate::MU0_OVER_4PI;

/// Flux density at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub position: Vec3,
    /// Tesla.
    #[serde(rename = "B")]
    pub b: Vec3,
}

/// Per-segment data precomputed once for repeated field evaluation.
#[derive(Debug, Clone)]
pub struct FieldSource {
    starts: Vec<Vec3>,
    ends: Vec<Vec3>,
    deltas: Vec<Vec3>,
    inv_len2: Vec<f64>,
    wire_radius: f64,
}

impl FieldSource {
    pub fn new(path: &WirePath) -> Self {
        let (starts, ends): (Vec<_>, Vec<_>) = path.segments().unzip();
        let deltas: Vec<Vec3> = starts.iter().zip(&ends).map(|(&a, &b)| b - a).collect();
        let inv_len2 = deltas.iter().map(|d| 1.0 / d.norm_squared()).collect();
        FieldSource {
            starts,
            ends,
            deltas,
            inv_len2,
            wire_radius: path.wire_radius(),
        }
    }

    /// Flux density for `current` amperes; `point_index` only labels errors.
    ///
    /// Sums the closed-form field of each straight finite segment in segment
    /// order, so the result does not depend on how callers parallelize.
    pub fn field(&self, current: f64, point: Vec3, point_index: usize) -> Result<Vec3> {
        let r2_min = self.wire_radius * self.wire_radius;
        let mut acc = Vec3::ZERO;
        for k in 0..self.starts.len() {
            let r1 = point - self.starts[k];
            let r2 = point - self.ends[k];

            let t = (r1.dot(self.deltas[k]) * self.inv_len2[k]).clamp(0.0, 1.0);
            let dist2 = (r1 - self.deltas[k] * t).norm_squared();
            if dist2 <= r2_min {
                return Err(Error::Proximity {
                    point_index,
                    segment: k,
                    distance: dist2.sqrt(),
                    radius: self.wire_radius,
                });
            }

            let n1 = r1.norm();
            let n2 = r2.norm();
            let n12 = n1 * n2;
            let denom = n12 * (n12 + r1.dot(r2));
            acc += r1.cross(r2) * ((n1 + n2) / denom);
        }
        Ok(acc * (MU0_OVER_4PI * current))
    }
}

/// Biot–Savart flux density of `path` carrying `current` at `point`.
pub fn b_field_at(path: &WirePath, current: f64, point: Vec3) -> Result<Vec3> {
    FieldSource::new(path).field(current, point, 0)
}
