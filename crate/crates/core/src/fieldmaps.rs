//! Field sampling over planar grids and depth lines, plus the confinement
//! metrics derived from them.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::WirePath;
use crate::magnetics::{FieldSample, FieldSource};
use crate::vec3::Vec3;

/// Depths closer than this are treated as the same sample.
const DEPTH_MATCH: f64 = 1e-12;

/// Distance from the coil plane to the skin surface used in metadata.
pub const SKIN_STANDOFF: f64 = 5e-3;

/// Sampling plane: point `(iu, iv)` sits at
/// `origin + iu·spacing·axis_u + iv·spacing·axis_v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub origin: Vec3,
    pub axis_u: Vec3,
    pub axis_v: Vec3,
    pub nu: usize,
    pub nv: usize,
    pub spacing: f64,
}

impl GridSpec {
    /// An `nu × nv` grid centered on `center` in the plane spanned by the
    /// given axes.
    pub fn centered(center: Vec3, axis_u: Vec3, axis_v: Vec3, nu: usize, nv: usize, spacing: f64) -> Self {
        let half_u = (nu.saturating_sub(1)) as f64 * spacing * 0.5;
        let half_v = (nv.saturating_sub(1)) as f64 * spacing * 0.5;
        GridSpec {
            origin: center - axis_u * half_u - axis_v * half_v,
            axis_u,
            axis_v,
            nu,
            nv,
            spacing,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu == 0 || self.nv == 0 {
            return Err(Error::param("grid", "nu and nv must be at least 1"));
        }
        if !(self.spacing > 0.0 && self.spacing.is_finite()) {
            return Err(Error::param("spacing", format!("must be positive, got {}", self.spacing)));
        }
        if !self.origin.is_finite() {
            return Err(Error::param("origin", "must be finite"));
        }
        for (name, a) in [("axis_u", self.axis_u), ("axis_v", self.axis_v)] {
            if (a.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::param(name, "must be a unit vector"));
            }
        }
        if self.axis_u.dot(self.axis_v).abs() >= 1e-12 {
            return Err(Error::param("axis_v", "must be orthogonal to axis_u"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major: `index = iv·nu + iu`.
    pub fn index(&self, iu: usize, iv: usize) -> usize {
        iv * self.nu + iu
    }

    pub fn point(&self, index: usize) -> Vec3 {
        let (u, v) = self.uv(index);
        self.origin + self.axis_u * u + self.axis_v * v
    }

    /// In-plane coordinates of a sample relative to the origin.
    pub fn uv(&self, index: usize) -> (f64, f64) {
        let iu = index % self.nu;
        let iv = index / self.nu;
        (iu as f64 * self.spacing, iv as f64 * self.spacing)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldGrid {
    pub spec: GridSpec,
    pub current: f64,
    /// Row-major, see [`GridSpec::index`].
    pub samples: Vec<FieldSample>,
}

impl FieldGrid {
    pub fn sample(&self, iu: usize, iv: usize) -> &FieldSample {
        &self.samples[self.spec.index(iu, iv)]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.samples.len() * 120);
        out.push_str("u,v,x,y,z,Bx,By,Bz,Bmag\n");
        for (i, s) in self.samples.iter().enumerate() {
            let (u, v) = self.spec.uv(i);
            let p = s.position;
            let b = s.b;
            let _ = writeln!(
                out,
                "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                u,
                v,
                p.x,
                p.y,
                p.z,
                b.x,
                b.y,
                b.z,
                b.norm()
            );
        }
        out
    }
}

/// Evaluates the field at every point, in parallel, keeping input order.
/// On failure reports the lowest offending index.
fn field_at_points(path: &WirePath, current: f64, points: &[Vec3]) -> Result<Vec<Vec3>> {
    if !current.is_finite() {
        return Err(Error::param("current", "must be finite"));
    }
    let source = FieldSource::new(path);
    let results: Vec<Result<Vec3>> = points
        .par_iter()
        .enumerate()
        .map(|(i, &p)| source.field(current, p, i))
        .collect();
    results.into_iter().collect()
}

pub fn sample_plane(path: &WirePath, current: f64, grid: &GridSpec) -> Result<FieldGrid> {
    grid.validate()?;
    let points: Vec<Vec3> = (0..grid.len()).map(|i| grid.point(i)).collect();
    let fields = field_at_points(path, current, &points)?;
    let samples = points
        .into_iter()
        .zip(fields)
        .map(|(position, b)| FieldSample { position, b })
        .collect();
    Ok(FieldGrid {
        spec: *grid,
        current,
        samples,
    })
}

/// |B| along a ray from `start` in `direction`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    pub start: Vec3,
    pub direction: Vec3,
    pub depths: Vec<f64>,
    pub magnitudes: Vec<f64>,
}

impl DecayProfile {
    pub fn magnitude_at(&self, depth: f64) -> Option<f64> {
        self.depths
            .iter()
            .position(|&d| (d - depth).abs() <= DEPTH_MATCH)
            .map(|i| self.magnitudes[i])
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("depth_m,Bmag_T\n");
        for (d, b) in self.depths.iter().zip(&self.magnitudes) {
            let _ = writeln!(out, "{d:e},{b:e}");
        }
        out
    }
}

fn sorted_depths(depths: &[f64]) -> Result<Vec<f64>> {
    if depths.is_empty() {
        return Err(Error::param("depths", "at least one depth is required"));
    }
    if let Some(d) = depths.iter().find(|d| !d.is_finite()) {
        return Err(Error::param("depths", format!("must be finite, got {d}")));
    }
    let mut sorted = depths.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup_by(|a, b| (*a - *b).abs() <= DEPTH_MATCH);
    Ok(sorted)
}

/// Samples above the coil's areal centroid along its plane normal.
pub fn decay_profile(path: &WirePath, current: f64, depths: &[f64]) -> Result<DecayProfile> {
    decay_profile_along(path, current, path.areal_centroid(), path.plane_normal(), depths)
}

pub fn decay_profile_along(
    path: &WirePath,
    current: f64,
    start: Vec3,
    direction: Vec3,
    depths: &[f64],
) -> Result<DecayProfile> {
    let direction = direction
        .normalized()
        .ok_or_else(|| Error::param("direction", "must be non-zero"))?;
    let depths = sorted_depths(depths)?;
    if let Some(&d) = depths.iter().find(|&&d| d <= path.wire_radius()) {
        return Err(Error::param(
            "depths",
            format!("depth {d} m must exceed the wire radius {} m", path.wire_radius()),
        ));
    }
    let points: Vec<Vec3> = depths.iter().map(|&d| start + direction * d).collect();
    let magnitudes = field_at_points(path, current, &points)?
        .into_iter()
        .map(Vec3::norm)
        .collect();
    Ok(DecayProfile {
        start,
        direction,
        depths,
        magnitudes,
    })
}

/// Negated least-squares slope of ln|B| against depth over the closed
/// `window`.
pub fn fit_decay_rate(profile: &DecayProfile, window: (f64, f64)) -> Result<f64> {
    let (lo, hi) = window;
    let pts: Vec<(f64, f64)> = profile
        .depths
        .iter()
        .zip(&profile.magnitudes)
        .filter(|(&d, _)| d >= lo - DEPTH_MATCH && d <= hi + DEPTH_MATCH)
        .map(|(&d, &b)| (d, b))
        .collect();
    if pts.len() < 4 {
        return Err(Error::Analysis(format!(
            "decay fit needs at least 4 samples in [{lo}, {hi}] m, found {}",
            pts.len()
        )));
    }
    if let Some((d, _)) = pts.iter().find(|(_, b)| !(*b > 0.0)) {
        return Err(Error::Analysis(format!(
            "field magnitude at depth {d} m is not positive"
        )));
    }
    let n = pts.len() as f64;
    let xm = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ym = pts.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for &(x, b) in &pts {
        let dx = x - xm;
        sxy += dx * (b.ln() - ym);
        sxx += dx * dx;
    }
    if sxx <= 0.0 {
        return Err(Error::Analysis("decay fit window has no depth spread".into()));
    }
    Ok(-sxy / sxx)
}

/// |B(deep)| / |B(shallow)|; both depths must be sampled exactly.
pub fn confinement_ratio(profile: &DecayProfile, shallow: f64, deep: f64) -> Result<f64> {
    if shallow > deep {
        return Err(Error::param(
            "shallow",
            format!("must not exceed deep ({shallow} > {deep})"),
        ));
    }
    let at = |d: f64| {
        profile
            .magnitude_at(d)
            .ok_or_else(|| Error::Analysis(format!("depth {d} m was not sampled")))
    };
    let bs = at(shallow)?;
    let bd = at(deep)?;
    if !(bs > 0.0) {
        return Err(Error::Analysis(format!("field at depth {shallow} m is zero")));
    }
    Ok(bd / bs)
}
