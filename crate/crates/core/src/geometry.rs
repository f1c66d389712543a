//! Coil centerline construction, refinement and deformation.
//!
//! Every generator returns a [`WirePath`]: an ordered polyline in meters with
//! a round-wire radius. Planar generators place the coil in the `z = 0`
//! plane, centered on the origin.

use std::f64::consts::PI;

use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// Tolerance used when checking that a path lies in the `z = 0` plane.
pub const PLANAR_TOLERANCE: f64 = 1e-9;

/// Discretized conductor centerline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WirePath {
    vertices: Vec<Vec3>,
    wire_radius: f64,
    closed: bool,
}

impl WirePath {
    pub fn new(vertices: Vec<Vec3>, wire_radius: f64, closed: bool) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::Geometry(format!(
                "a wire path needs at least 2 vertices, got {}",
                vertices.len()
            )));
        }
        if closed && vertices.len() < 3 {
            return Err(Error::Geometry(
                "a closed wire path needs at least 3 vertices".into(),
            ));
        }
        if !(wire_radius > 0.0 && wire_radius.is_finite()) {
            return Err(Error::param("wire_radius", format!("must be positive and finite, got {wire_radius}")));
        }
        if let Some(i) = vertices.iter().position(|v| !v.is_finite()) {
            return Err(Error::Geometry(format!("vertex {i} is not finite")));
        }
        let path = WirePath {
            vertices,
            wire_radius,
            closed,
        };
        if let Some(k) = path.segments().position(|(a, b)| a == b) {
            return Err(Error::Geometry(format!(
                "segment {k} has zero length (repeated vertex)"
            )));
        }
        Ok(path)
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn wire_radius(&self) -> f64 {
        self.wire_radius
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.vertices.len()
        } else {
            self.vertices.len() - 1
        }
    }

    /// Segment `k` as (start, end); the closing segment of a closed path is last.
    #[inline]
    pub fn segment(&self, k: usize) -> (Vec3, Vec3) {
        let n = self.vertices.len();
        (self.vertices[k], self.vertices[(k + 1) % n])
    }

    pub fn segments(&self) -> impl Iterator<Item = (Vec3, Vec3)> + '_ {
        (0..self.segment_count()).map(move |k| self.segment(k))
    }

    pub fn length(&self) -> f64 {
        path_length(self)
    }

    /// Axis-aligned bounding box of the centerline vertices.
    pub fn bounding_box(&self) -> (Vec3, Vec3) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices[1..] {
            lo = Vec3::new(lo.x.min(v.x), lo.y.min(v.y), lo.z.min(v.z));
            hi = Vec3::new(hi.x.max(v.x), hi.y.max(v.y), hi.z.max(v.z));
        }
        (lo, hi)
    }

    /// Center of the bounding box, used as the coil's areal centroid.
    pub fn areal_centroid(&self) -> Vec3 {
        let (lo, hi) = self.bounding_box();
        (lo + hi) * 0.5
    }

    /// Unit normal of the best-fit plane through the vertices (direction of
    /// least spread), oriented so its dominant component is positive.
    pub fn plane_normal(&self) -> Vec3 {
        let n = self.vertices.len() as f64;
        let mean = self.vertices.iter().fold(Vec3::ZERO, |acc, &v| acc + v) / n;
        let mut cov = Matrix3::<f64>::zeros();
        for &v in &self.vertices {
            let d = v - mean;
            let d = nalgebra::Vector3::new(d.x, d.y, d.z);
            cov += d * d.transpose();
        }
        let eig = SymmetricEigen::new(cov);
        let imin = eig.eigenvalues.imin();
        let col = eig.eigenvectors.column(imin);
        let mut normal = Vec3::new(col[0], col[1], col[2]);
        let dominant = [normal.x, normal.y, normal.z]
            .into_iter()
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(1.0);
        if dominant < 0.0 {
            normal = -normal;
        }
        normal.normalized().unwrap_or(Vec3::Z)
    }

    /// Extent of the footprint seen along `normal`: the largest bounding-box
    /// side among the two in-plane directions, including the wire radius.
    pub fn footprint_diameter(&self, normal: Vec3) -> f64 {
        let e1 = normal.any_perpendicular();
        let e2 = normal.cross(e1);
        let span = |axis: Vec3| {
            let (lo, hi) = self
                .vertices
                .iter()
                .map(|v| v.dot(axis))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
                    (lo.min(s), hi.max(s))
                });
            hi - lo
        };
        // the perpendicular basis is arbitrary; take the widest of a few
        // in-plane directions so the measure does not depend on it
        let widest = (0..8)
            .map(|k| {
                let a = PI * k as f64 / 8.0;
                span(e1 * a.cos() + e2 * a.sin())
            })
            .fold(0.0, f64::max);
        widest + 2.0 * self.wire_radius
    }

    pub fn translated(&self, offset: Vec3) -> WirePath {
        WirePath {
            vertices: self.vertices.iter().map(|&v| v + offset).collect(),
            ..self.clone()
        }
    }

    /// Rigid rotation by `angle` about the unit `axis` through `pivot`.
    pub fn rotated(&self, axis: Vec3, angle: f64, pivot: Vec3) -> WirePath {
        WirePath {
            vertices: self
                .vertices
                .iter()
                .map(|&v| pivot + (v - pivot).rotated(axis, angle))
                .collect(),
            ..self.clone()
        }
    }

    /// Uniform scaling of coordinates and wire radius about the origin.
    pub fn scaled(&self, factor: f64) -> WirePath {
        WirePath {
            vertices: self.vertices.iter().map(|&v| v * factor).collect(),
            wire_radius: self.wire_radius * factor,
            closed: self.closed,
        }
    }

    pub fn reversed(&self) -> WirePath {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        WirePath {
            vertices,
            ..self.clone()
        }
    }

    pub fn with_wire_radius(&self, wire_radius: f64) -> Result<WirePath> {
        WirePath::new(self.vertices.clone(), wire_radius, self.closed)
    }

    /// CSV export with header `x,y,z`, one row per vertex.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,z\n");
        for v in &self.vertices {
            out.push_str(&format!("{},{},{}\n", v.x, v.y, v.z));
        }
        out
    }
}

/// Planar serpentine: parallel long runs along x, progressing along y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeanderSpec {
    /// Length of each long run, m.
    pub footprint_x: f64,
    /// Extent over which runs are stacked, m.
    pub footprint_y: f64,
    /// Center-to-center spacing of adjacent runs, m.
    pub pitch: f64,
    pub wire_radius: f64,
    /// Segments per 180° turnaround.
    #[serde(default = "default_corner_samples")]
    pub corner_samples: usize,
}

fn default_corner_samples() -> usize {
    16
}

impl MeanderSpec {
    pub fn run_count(&self) -> usize {
        (self.footprint_y / self.pitch + 1e-9).floor() as usize + 1
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("footprint_x", self.footprint_x),
            ("footprint_y", self.footprint_y),
            ("pitch", self.pitch),
            ("wire_radius", self.wire_radius),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(name, format!("must be positive and finite, got {v}")));
            }
        }
        if self.pitch <= 2.0 * self.wire_radius {
            return Err(Error::param(
                "pitch",
                format!(
                    "pitch > 2*wire_radius violated: pitch {} <= 2*{}",
                    self.pitch, self.wire_radius
                ),
            ));
        }
        if self.footprint_y < 2.0 * self.pitch * (1.0 - 1e-12) {
            return Err(Error::param(
                "footprint_y",
                format!(
                    "footprint_y >= 2*pitch violated: {} < 2*{}",
                    self.footprint_y, self.pitch
                ),
            ));
        }
        if self.footprint_x <= self.pitch {
            return Err(Error::param(
                "footprint_x",
                format!(
                    "footprint_x > pitch violated: {} <= {}",
                    self.footprint_x, self.pitch
                ),
            ));
        }
        if self.corner_samples < 4 {
            return Err(Error::param(
                "corner_samples",
                format!("need at least 4 segments per turnaround, got {}", self.corner_samples),
            ));
        }
        Ok(())
    }
}

/// Helical winding around `axis`, starting on the plane through the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HelixSpec {
    pub radius: f64,
    pub turns: f64,
    /// Axial advance per turn, m.
    pub pitch_per_turn: f64,
    #[serde(default = "default_axis")]
    pub axis: Vec3,
    #[serde(default = "default_samples_per_turn")]
    pub samples_per_turn: usize,
    pub wire_radius: f64,
}

fn default_axis() -> Vec3 {
    Vec3::Z
}

fn default_samples_per_turn() -> usize {
    64
}

/// Regular polygon inscribed in a circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopSpec {
    pub radius: f64,
    #[serde(default)]
    pub center: Vec3,
    #[serde(default = "default_axis")]
    pub normal: Vec3,
    pub segments: usize,
    pub wire_radius: f64,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be positive and finite, got {v}")))
    }
}

/// Orthonormal pair spanning the plane perpendicular to `axis`. For the z
/// axis this is (x, y).
fn plane_basis(axis: Vec3) -> (Vec3, Vec3) {
    let mut e1 = Vec3::X - axis * axis.dot(Vec3::X);
    if e1.norm() < 1e-6 {
        e1 = Vec3::Y - axis * axis.dot(Vec3::Y);
    }
    let e1 = e1.normalized().expect("non-degenerate basis");
    (e1, axis.cross(e1))
}

fn unit_axis(name: &str, v: Vec3) -> Result<Vec3> {
    v.normalized()
        .ok_or_else(|| Error::param(name, "must be a non-zero vector"))
}

pub fn build_meander(spec: &MeanderSpec) -> Result<WirePath> {
    spec.validate()?;
    let runs = spec.run_count();
    let half_x = 0.5 * spec.footprint_x;
    let r = 0.5 * spec.pitch;
    let y0 = -0.5 * (runs - 1) as f64 * spec.pitch;
    let mut vertices = Vec::with_capacity(runs * (spec.corner_samples + 1));

    for i in 0..runs {
        let y = y0 + i as f64 * spec.pitch;
        let (xs, xe) = if i % 2 == 0 {
            (-half_x, half_x)
        } else {
            (half_x, -half_x)
        };
        vertices.push(Vec3::new(xs, y, 0.0));
        vertices.push(Vec3::new(xe, y, 0.0));
        if i + 1 < runs {
            // semicircle bulging outward from the run end, interior vertices only
            let side = xe.signum();
            let cy = y + r;
            for k in 1..spec.corner_samples {
                let phi = -0.5 * PI + PI * k as f64 / spec.corner_samples as f64;
                vertices.push(Vec3::new(xe + side * r * phi.cos(), cy + r * phi.sin(), 0.0));
            }
        }
    }
    WirePath::new(vertices, spec.wire_radius, false)
}

pub fn build_helix(spec: &HelixSpec) -> Result<WirePath> {
    positive("radius", spec.radius)?;
    positive("wire_radius", spec.wire_radius)?;
    if !(spec.turns >= 1.0 && spec.turns.is_finite()) {
        return Err(Error::param("turns", format!("must be >= 1, got {}", spec.turns)));
    }
    if !(spec.pitch_per_turn >= 0.0 && spec.pitch_per_turn.is_finite()) {
        return Err(Error::param(
            "pitch_per_turn",
            format!("must be non-negative, got {}", spec.pitch_per_turn),
        ));
    }
    if spec.samples_per_turn < 16 {
        return Err(Error::param(
            "samples_per_turn",
            format!("must be >= 16, got {}", spec.samples_per_turn),
        ));
    }
    let axis = unit_axis("axis", spec.axis)?;
    let (e1, e2) = plane_basis(axis);
    let segments = (spec.turns * spec.samples_per_turn as f64).round() as usize;
    let theta_end = 2.0 * PI * spec.turns;
    let vertices = (0..=segments)
        .map(|k| {
            let theta = theta_end * k as f64 / segments as f64;
            let (s, c) = theta.sin_cos();
            e1 * (spec.radius * c) + e2 * (spec.radius * s) + axis * (spec.pitch_per_turn * theta / (2.0 * PI))
        })
        .collect();
    WirePath::new(vertices, spec.wire_radius, false)
}

pub fn build_loop(spec: &LoopSpec) -> Result<WirePath> {
    positive("radius", spec.radius)?;
    positive("wire_radius", spec.wire_radius)?;
    if spec.segments < 8 {
        return Err(Error::param(
            "segments",
            format!("must be >= 8, got {}", spec.segments),
        ));
    }
    if !spec.center.is_finite() {
        return Err(Error::param("center", "must be finite"));
    }
    let normal = unit_axis("normal", spec.normal)?;
    let (e1, e2) = plane_basis(normal);
    let n = spec.segments;
    let vertices = (0..n)
        .map(|k| {
            let (s, c) = (2.0 * PI * k as f64 / n as f64).sin_cos();
            spec.center + e1 * (spec.radius * c) + e2 * (spec.radius * s)
        })
        .collect();
    WirePath::new(vertices, spec.wire_radius, true)
}

/// Sum of segment lengths, including the closing segment of a closed path.
pub fn path_length(path: &WirePath) -> f64 {
    path.segments().map(|(a, b)| a.distance(b)).sum()
}

/// Subdivides every segment longer than `max_segment_length` into equal
/// collinear pieces. Existing vertices are kept.
pub fn resample(path: &WirePath, max_segment_length: f64) -> Result<WirePath> {
    positive("max_segment_length", max_segment_length)?;
    let mut vertices = Vec::with_capacity(path.vertices.len());
    for (a, b) in path.segments() {
        vertices.push(a);
        let len = a.distance(b);
        // slack keeps an already-resampled path unchanged under rounding
        let pieces = ((len / max_segment_length) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        for k in 1..pieces {
            vertices.push(a + (b - a) * (k as f64 / pieces as f64));
        }
    }
    if !path.closed {
        vertices.push(*path.vertices.last().expect("non-empty"));
    }
    WirePath::new(vertices, path.wire_radius, path.closed)
}

/// Wraps a planar (`z = 0`) path onto a cylinder of radius `bend_radius`
/// whose axis runs along `axis_direction` (in-plane, x/y components). The
/// cylinder axis sits at `z = -bend_radius`, so the middle of the footprint
/// stays in place and the rest of the coil curls toward `-z`; the convex
/// face points to `+z`.
///
/// Each segment keeps its exact length: the angular step across the axis is
/// chosen so that the chord on the cylinder equals the original in-plane
/// displacement. Long straight segments become chords, so resample first for
/// a smooth wrap. An infinite radius returns the input unchanged.
pub fn bend_around_cylinder(
    path: &WirePath,
    bend_radius: f64,
    axis_direction: [f64; 2],
) -> Result<WirePath> {
    if let Some(i) = path.vertices.iter().position(|v| v.z.abs() > PLANAR_TOLERANCE) {
        return Err(Error::Geometry(format!(
            "bend requires a path in the z = 0 plane; vertex {i} has z = {}",
            path.vertices[i].z
        )));
    }
    if bend_radius == f64::INFINITY {
        return Ok(path.clone());
    }
    if !(bend_radius > 0.0 && bend_radius.is_finite()) {
        return Err(Error::Geometry(format!(
            "bend radius must be positive, got {bend_radius}"
        )));
    }
    let axis = Vec3::new(axis_direction[0], axis_direction[1], 0.0)
        .normalized()
        .ok_or_else(|| Error::Geometry("bend axis direction must be non-zero".into()))?;
    let across = Vec3::new(-axis.y, axis.x, 0.0);

    let u: Vec<f64> = path.vertices.iter().map(|v| v.dot(across)).collect();
    let mut theta = Vec::with_capacity(u.len());
    theta.push(0.0);
    for k in 1..u.len() {
        let du = u[k] - u[k - 1];
        let half = du / (2.0 * bend_radius);
        if half.abs() > 1.0 {
            return Err(Error::Geometry(format!(
                "segment {} spans {:.4} m across the bend, more than the cylinder diameter; resample first",
                k - 1,
                du.abs()
            )));
        }
        theta.push(theta[k - 1] + 2.0 * half.asin());
    }
    let (tmin, tmax) = theta
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &t| (lo.min(t), hi.max(t)));
    let span = tmax - tmin;
    let clearance = 2.0 * path.wire_radius / bend_radius;
    if span + clearance >= 2.0 * PI {
        return Err(Error::Geometry(format!(
            "bend radius {bend_radius} m too small: wrap angle {span:.3} rad self-intersects"
        )));
    }
    let shift = -0.5 * (tmin + tmax);
    let (umin, umax) = u
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let u_center = 0.5 * (umin + umax);

    let vertices = path
        .vertices
        .iter()
        .zip(&theta)
        .map(|(v, &t)| {
            let t = t + shift;
            let along = v.dot(axis);
            let s_half = (0.5 * t).sin();
            let u_new = u_center + bend_radius * t.sin();
            let z_new = -2.0 * bend_radius * s_half * s_half;
            across * u_new + axis * along + Vec3::Z * z_new
        })
        .collect();
    WirePath::new(vertices, path.wire_radius, path.closed)
}
