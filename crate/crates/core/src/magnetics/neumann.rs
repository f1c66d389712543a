//! Neumann double line integrals for mutual and self inductance.
//!
//! Each segment pair is integrated with a 3×3 Gauss–Legendre product rule and
//! refined by bisection until the refined estimate moves less than
//! [`ADAPTIVE_TOLERANCE`] relative to the coarser one.

use std::cmp::Ordering;

use rayon::prelude::*;

use super::quadrature::{GL3_NODES, GL3_WEIGHTS};
use crate::error::{Error, Result};
use crate::geometry::WirePath;
use crate::vec3::Vec3;
use crate::MU0_OVER_4PI;

/// Relative change that stops per-pair subdivision.
pub const ADAPTIVE_TOLERANCE: f64 = 1e-4;

const MAX_DEPTH: u32 = 16;

#[derive(Debug, Clone, Copy)]
struct Segment {
    start: Vec3,
    delta: Vec3,
    length: f64,
}

impl Segment {
    fn new(start: Vec3, end: Vec3) -> Self {
        let delta = end - start;
        Segment {
            start,
            delta,
            length: delta.norm(),
        }
    }

    fn halves(self) -> [Segment; 2] {
        let half = self.delta * 0.5;
        let length = 0.5 * self.length;
        [
            Segment {
                start: self.start,
                delta: half,
                length,
            },
            Segment {
                start: self.start + half,
                delta: half,
                length,
            },
        ]
    }
}

fn segments_of(path: &WirePath) -> Vec<Segment> {
    path.segments().map(|(a, b)| Segment::new(a, b)).collect()
}

/// GL estimate of ∫∫ ds dt / sqrt(r² + reg2) over the unit parameter square.
#[inline]
fn estimate(a: &Segment, b: &Segment, reg2: f64) -> f64 {
    let mut sum = 0.0;
    for (i, &s) in GL3_NODES.iter().enumerate() {
        let x = a.start + a.delta * s;
        let mut row = 0.0;
        for (j, &t) in GL3_NODES.iter().enumerate() {
            let y = b.start + b.delta * t;
            row += GL3_WEIGHTS[j] / ((x - y).norm_squared() + reg2).sqrt();
        }
        sum += GL3_WEIGHTS[i] * row;
    }
    sum
}

fn adaptive(a: &Segment, b: &Segment, reg2: f64, coarse: f64, depth: u32) -> f64 {
    // split whichever segments are comparable to the longer one
    let split_a = a.length >= 0.5 * b.length;
    let split_b = b.length >= 0.5 * a.length;
    let pa: Vec<Segment> = if split_a { a.halves().to_vec() } else { vec![*a] };
    let pb: Vec<Segment> = if split_b { b.halves().to_vec() } else { vec![*b] };
    let scale = 1.0 / (pa.len() * pb.len()) as f64;

    let mut parts = [(Segment::new(Vec3::ZERO, Vec3::X), Segment::new(Vec3::ZERO, Vec3::X), 0.0); 4];
    let mut count = 0;
    let mut fine = 0.0;
    for sa in &pa {
        for sb in &pb {
            let e = estimate(sa, sb, reg2);
            parts[count] = (*sa, *sb, e);
            count += 1;
            fine += e;
        }
    }
    fine *= scale;

    if depth >= MAX_DEPTH || (fine - coarse).abs() <= ADAPTIVE_TOLERANCE * fine.abs() {
        return fine;
    }
    let mut refined = 0.0;
    for (sa, sb, e) in &parts[..count] {
        refined += adaptive(sa, sb, reg2, *e, depth + 1);
    }
    refined * scale
}

/// ∫∫ dl_a · dl_b / sqrt(r² + reg2) for one segment pair, m.
fn pair_integral(a: &Segment, b: &Segment, reg2: f64) -> f64 {
    let dot = a.delta.dot(b.delta);
    if dot == 0.0 {
        return 0.0;
    }
    let coarse = estimate(a, b, reg2);
    dot * adaptive(a, b, reg2, coarse, 0)
}

/// Closest distance between two segments.
fn segment_distance(p1: Vec3, q1: Vec3, p2: Vec3, q2: Vec3) -> f64 {
    let d1 = q1 - p1;
    let d2 = q2 - p2;
    let r = p1 - p2;
    let a = d1.dot(d1);
    let e = d2.dot(d2);
    let f = d2.dot(r);
    let c = d1.dot(r);
    let b = d1.dot(d2);
    let denom = a * e - b * b;
    let mut s = if denom > 1e-300 {
        ((b * f - c * e) / denom).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mut t = (b * s + f) / e;
    if t < 0.0 {
        t = 0.0;
        s = (-c / a).clamp(0.0, 1.0);
    } else if t > 1.0 {
        t = 1.0;
        s = ((b - c) / a).clamp(0.0, 1.0);
    }
    ((p1 + d1 * s) - (p2 + d2 * t)).norm()
}

/// Closest approach between two paths as (segment of `a`, segment of `b`,
/// distance). Ties resolve to the lowest indices.
pub fn min_path_distance(a: &WirePath, b: &WirePath) -> (usize, usize, f64) {
    let mut best = (0, 0, f64::INFINITY);
    for (i, (p1, q1)) in a.segments().enumerate() {
        for (j, (p2, q2)) in b.segments().enumerate() {
            let d = segment_distance(p1, q1, p2, q2);
            if d < best.2 {
                best = (i, j, d);
            }
        }
    }
    best
}

fn canonical_order(a: &WirePath, b: &WirePath) -> Ordering {
    a.segment_count()
        .cmp(&b.segment_count())
        .then_with(|| {
            a.vertices()
                .iter()
                .zip(b.vertices())
                .map(|(u, v)| {
                    u.x.total_cmp(&v.x)
                        .then(u.y.total_cmp(&v.y))
                        .then(u.z.total_cmp(&v.z))
                })
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
        .then(a.wire_radius().total_cmp(&b.wire_radius()))
        .then(a.is_closed().cmp(&b.is_closed()))
}

/// Mutual inductance between two filamentary paths, H.
///
/// The pair is evaluated in a canonical order so that swapping the arguments
/// returns a bit-identical value.
pub fn mutual_inductance(a: &WirePath, b: &WirePath) -> Result<f64> {
    if canonical_order(a, b) == Ordering::Greater {
        return mutual_inductance(b, a);
    }
    let clearance = a.wire_radius().max(b.wire_radius());
    let (i, j, d) = min_path_distance(a, b);
    if d <= clearance {
        return Err(Error::Overlap {
            segment_a: i,
            segment_b: j,
            distance: d,
            clearance,
        });
    }
    let sa = segments_of(a);
    let sb = segments_of(b);
    let rows: Vec<f64> = sa
        .par_iter()
        .map(|x| sb.iter().map(|y| pair_integral(x, y, 0.0)).sum::<f64>())
        .collect();
    Ok(MU0_OVER_4PI * rows.iter().sum::<f64>())
}

/// Partial self inductance of a straight round wire of length `length` and
/// radius `radius` with surface current, H:
/// (μ0/2π)·[l·asinh(l/a) − sqrt(l² + a²) + a].
///
/// For l ≫ a this tends to (μ0·l/2π)·(ln(2l/a) − 1).
pub fn segment_self_inductance(length: f64, radius: f64) -> f64 {
    2.0 * MU0_OVER_4PI * segment_self_integral(length, radius)
}

fn segment_self_integral(l: f64, a: f64) -> f64 {
    l * (l / a).asinh() - (l * l + a * a).sqrt() + a
}

/// Self inductance of a round wire following `path`, H.
///
/// Distinct segment pairs use the Neumann kernel with the centerline offset
/// by the wire radius, 1/sqrt(r² + a²); each segment contributes its own
/// closed-form straight-wire term. Together they form the same regularized
/// double integral, so segments may be shorter than the wire radius.
pub fn self_inductance(path: &WirePath) -> Result<f64> {
    let a = path.wire_radius();
    let reg2 = a * a;
    let segs = segments_of(path);
    let rows: Vec<f64> = (0..segs.len())
        .into_par_iter()
        .map(|i| {
            let own = 2.0 * segment_self_integral(segs[i].length, a);
            let others: f64 = segs[i + 1..]
                .iter()
                .map(|s| pair_integral(&segs[i], s, reg2))
                .sum();
            own + 2.0 * others
        })
        .collect();
    let total = MU0_OVER_4PI * rows.iter().sum::<f64>();
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::Analysis(format!(
            "self inductance evaluated to {total:e} H; check the path for overlapping turns"
        )));
    }
    Ok(total)
}
