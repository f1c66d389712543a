mod common;

use common::*;
use meander_wpt::fieldmaps::{
    confinement_ratio, decay_profile, fit_decay_rate, sample_plane, DecayProfile, GridSpec,
};
use meander_wpt::geometry::{build_loop, LoopSpec};
use meander_wpt::{Error, Vec3, WirePath};
use proptest::prelude::*;

fn ring(segments: usize) -> WirePath {
    build_loop(&LoopSpec {
        radius: 0.1,
        center: Vec3::ZERO,
        normal: Vec3::Z,
        segments,
        wire_radius: 1e-3,
    })
    .unwrap()
}

#[test]
fn long_wire_field_is_ampere() {
    let wire = WirePath::new(vec![Vec3::new(-100.0, 0.0, 0.0), Vec3::new(100.0, 0.0, 0.0)], 1e-3, false).unwrap();
    let grid = GridSpec::centered(Vec3::new(0.0, 0.0, 0.05), Vec3::X, Vec3::Y, 5, 5, 0.01);
    let map = sample_plane(&wire, 2.0, &grid).unwrap();
    for s in &map.samples {
        let d = (s.position.y.powi(2) + s.position.z.powi(2)).sqrt();
        let expect = MU0 * 2.0 / (2.0 * std::f64::consts::PI * d);
        assert!((s.b.norm() - expect).abs() / expect < 1e-6);
        assert!(s.b.x.abs() < 1e-12 * expect);
    }
}

#[test]
fn loop_profile_follows_axis_formula() {
    let path = ring(1024);
    let depths: Vec<f64> = (1..=10).map(|i| 0.02 * i as f64).collect();
    let p = decay_profile(&path, 1.5, &depths).unwrap();
    for (d, b) in p.depths.iter().zip(&p.magnitudes) {
        let expect = loop_axis_field(1.5, 0.1, *d);
        assert!((b - expect).abs() / expect < 1e-4, "depth {d}: {b} vs {expect}");
    }
}

#[test]
fn grid_agrees_with_brute_force_quadrature() {
    let path = ring(48);
    let verts: Vec<[f64; 3]> = path.vertices().iter().map(|&v| v.into()).collect();
    let grid = GridSpec::centered(Vec3::new(0.01, -0.02, 0.03), Vec3::X, Vec3::Y, 4, 3, 0.07);
    let map = sample_plane(&path, 1.0, &grid).unwrap();
    for s in &map.samples {
        let b = brute_field(&verts, true, 1.0, s.position.into(), 2000);
        let e = Vec3::from(b);
        assert!((s.b - e).norm() < 1e-5 * e.norm().max(1e-9));
    }
}

#[test]
fn grid_layout_is_row_major() {
    let grid = GridSpec::centered(Vec3::ZERO, Vec3::X, Vec3::Y, 4, 3, 0.1);
    assert_eq!(grid.index(3, 0), 3);
    assert_eq!(grid.index(0, 1), 4);
    let p = grid.point(grid.index(3, 2));
    assert!((p - Vec3::new(0.15, 0.1, 0.0)).norm() < 1e-12);
}

#[test]
fn non_orthogonal_axes_are_rejected() {
    let grid = GridSpec::centered(Vec3::new(0.0, 0.0, 0.1), Vec3::X, Vec3::new(1.0, 1.0, 0.0), 3, 3, 0.01);
    assert!(sample_plane(&ring(64), 1.0, &grid).is_err());
}

#[test]
fn point_on_conductor_reports_indices() {
    let path = ring(64);
    let (a, _) = path.segment(5);
    let grid = GridSpec::centered(a, Vec3::X, Vec3::Y, 1, 1, 0.01);
    match sample_plane(&path, 1.0, &grid) {
        Err(Error::Proximity { point_index, .. }) => assert_eq!(point_index, 0),
        other => panic!("expected proximity error, got {other:?}"),
    }
}

#[test]
fn fit_recovers_synthetic_rate() {
    let depths: Vec<f64> = (0..20).map(|i| 0.01 * i as f64 + 0.005).collect();
    let profile = DecayProfile {
        start: Vec3::ZERO,
        direction: Vec3::Z,
        magnitudes: depths.iter().map(|d| 3e-6 * (-42.0 * d).exp()).collect(),
        depths,
    };
    assert!((fit_decay_rate(&profile, (0.0, 1.0)).unwrap() - 42.0).abs() < 1e-9);
    let r = confinement_ratio(&profile, 0.045, 0.095).unwrap();
    assert!((r - (-42.0f64 * 0.05).exp()).abs() < 1e-12);
    assert!(fit_decay_rate(&profile, (0.0, 0.02)).is_err());
}

proptest! {
    #[test]
    fn field_is_linear_in_current(i in -10.0f64..10.0, x in -0.05f64..0.05, z in 0.01f64..0.3) {
        let path = ring(32);
        let grid = GridSpec::centered(Vec3::new(x, 0.0, z), Vec3::X, Vec3::Y, 2, 2, 0.01);
        let unit = sample_plane(&path, 1.0, &grid).unwrap();
        let scaled = sample_plane(&path, i, &grid).unwrap();
        for (u, s) in unit.samples.iter().zip(&scaled.samples) {
            prop_assert!((u.b * i - s.b).norm() <= 1e-12 * u.b.norm() * i.abs().max(1.0));
        }
    }

    #[test]
    fn reversed_path_negates_field(x in -0.2f64..0.2, y in -0.2f64..0.2, z in 0.005f64..0.3) {
        let path = ring(40);
        let grid = GridSpec::centered(Vec3::new(x, y, z), Vec3::X, Vec3::Y, 1, 1, 0.01);
        let a = sample_plane(&path, 1.0, &grid).unwrap();
        let b = sample_plane(&path.reversed(), 1.0, &grid).unwrap();
        prop_assert!((a.samples[0].b + b.samples[0].b).norm() <= 1e-12 * a.samples[0].b.norm());
    }
}
