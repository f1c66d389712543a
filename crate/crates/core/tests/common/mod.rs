//! Independent analytic oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

pub const MU0: f64 = 1.256_637_062_12e-6;

/// Complete elliptic integrals K(k) and E(k) (modulus k) by the
/// arithmetic–geometric mean.
pub fn ellip_ke(k: f64) -> (f64, f64) {
    let mut a = 1.0f64;
    let mut b = (1.0 - k * k).sqrt();
    let mut c = k;
    let mut sum = 0.5 * c * c;
    let mut pow = 0.5;
    for _ in 0..64 {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        c = 0.5 * (a - b);
        pow *= 2.0;
        sum += pow * c * c;
        a = an;
        b = bn;
    }
    let kk = PI / (2.0 * a);
    (kk, kk * (1.0 - sum))
}

/// Maxwell's formula for coaxial circular filaments.
pub fn maxwell_coaxial_mutual(r1: f64, r2: f64, gap: f64) -> f64 {
    let k2 = 4.0 * r1 * r2 / ((r1 + r2).powi(2) + gap * gap);
    let k = k2.sqrt();
    let (kk, ee) = ellip_ke(k);
    MU0 * (r1 * r2).sqrt() * ((2.0 / k - k) * kk - 2.0 / k * ee)
}

/// Far-field dipole approximation of coaxial loops.
pub fn dipole_coaxial_mutual(r1: f64, r2: f64, gap: f64) -> f64 {
    MU0 * PI * r1 * r1 * r2 * r2 / (2.0 * gap.powi(3))
}

/// Thin round-wire loop with surface current.
pub fn loop_self_inductance(r: f64, a: f64) -> f64 {
    MU0 * r * ((8.0 * r / a).ln() - 2.0)
}

/// On-axis field magnitude of a circular loop.
pub fn loop_axis_field(current: f64, r: f64, z: f64) -> f64 {
    MU0 * current * r * r / (2.0 * (r * r + z * z).powf(1.5))
}

/// Brute-force Biot–Savart: midpoint rule over `n` pieces per segment.
pub fn brute_field(vertices: &[[f64; 3]], closed: bool, current: f64, p: [f64; 3], n: usize) -> [f64; 3] {
    let mut b = [0.0; 3];
    let count = if closed { vertices.len() } else { vertices.len() - 1 };
    for k in 0..count {
        let s = vertices[k];
        let e = vertices[(k + 1) % vertices.len()];
        let dl = [(e[0] - s[0]) / n as f64, (e[1] - s[1]) / n as f64, (e[2] - s[2]) / n as f64];
        for i in 0..n {
            let t = (i as f64 + 0.5) / n as f64;
            let q = [s[0] + (e[0] - s[0]) * t, s[1] + (e[1] - s[1]) * t, s[2] + (e[2] - s[2]) * t];
            let r = [p[0] - q[0], p[1] - q[1], p[2] - q[2]];
            let r3 = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).powf(1.5);
            b[0] += (dl[1] * r[2] - dl[2] * r[1]) / r3;
            b[1] += (dl[2] * r[0] - dl[0] * r[2]) / r3;
            b[2] += (dl[0] * r[1] - dl[1] * r[0]) / r3;
        }
    }
    let f = MU0 / (4.0 * PI) * current;
    [b[0] * f, b[1] * f, b[2] * f]
}

#[test]
fn elliptic_reference_values() {
    // K(0) = E(0) = π/2; K(1/√2) = 1.854074677301372, E(1/√2) = 1.350643881047675
    let (k0, e0) = ellip_ke(0.0);
    assert!((k0 - PI / 2.0).abs() < 1e-15 && (e0 - PI / 2.0).abs() < 1e-15);
    let (k, e) = ellip_ke(0.5f64.sqrt());
    assert!((k - 1.854_074_677_301_372).abs() < 1e-13);
    assert!((e - 1.350_643_881_047_675).abs() < 1e-13, "{k} {e}");
}
