use meander_wpt::experiments::{
    material_compare, optimize_trace, run_sweep, Objective, OptimizeSpec, Stage, SweepParameter,
    SweepSpec,
};
use meander_wpt::scenario::reference_link;
use meander_wpt::Conductor;

#[test]
fn material_ranking_follows_resistance() {
    let base = reference_link(Conductor::liquid_metal());
    let rows = material_compare(
        &base,
        &[Conductor::yarn(), Conductor::copper(), Conductor::liquid_metal()],
    )
    .unwrap();
    let eta: Vec<f64> = rows.iter().map(|r| r.result.eta_max).collect();
    assert!(eta[1] > eta[2] && eta[2] > eta[0], "{eta:?}");
    // geometry is shared, so only the resistances differ
    assert_eq!(rows[0].result.m, rows[1].result.m);
    assert!(rows[0].result.r1 > rows[2].result.r1 && rows[2].result.r1 > rows[1].result.r1);
}

#[test]
fn coupling_falls_with_separation() {
    let base = reference_link(Conductor::liquid_metal());
    let spec = SweepSpec {
        parameter: SweepParameter::Separation,
        values: vec![0.01, 0.02, 0.04, 0.08],
        retune: false,
    };
    let rows = run_sweep(&base, &spec).unwrap();
    assert_eq!(rows.iter().map(|r| r.value).collect::<Vec<_>>(), spec.values);
    for w in rows.windows(2) {
        assert!(w[1].k < w[0].k);
        assert!(w[1].eta_max < w[0].eta_max);
        assert_eq!(w[1].l1, w[0].l1);
    }
}

#[test]
fn bend_sweep_lists_flat_first() {
    let base = reference_link(Conductor::liquid_metal());
    let spec = SweepSpec {
        parameter: SweepParameter::BendRadius,
        values: vec![0.2, f64::INFINITY],
        retune: true,
    };
    let rows = run_sweep(&base, &spec).unwrap();
    assert!(rows[0].value.is_infinite());
    assert!(rows[0].csv_line().starts_with("inf,"));
    let json = serde_json::to_value(rows[0]).unwrap();
    assert!(json["value"].is_null());
}

#[test]
fn too_tight_bend_is_a_geometry_error() {
    let base = reference_link(Conductor::liquid_metal());
    let spec = SweepSpec {
        parameter: SweepParameter::BendRadius,
        values: vec![0.001],
        retune: false,
    };
    assert!(run_sweep(&base, &spec).is_err());
}

#[test]
fn optimizer_refinement_never_loses_to_the_grid() {
    let base = reference_link(Conductor::liquid_metal());
    let spec = OptimizeSpec {
        grid: 3,
        rounds: 1,
        golden_iterations: 4,
        ..OptimizeSpec::new([0.04, 0.06], [1e-3, 2e-3], Objective::EtaMax)
    };
    let r = optimize_trace(&base, &spec).unwrap();
    let grid_best = r
        .log
        .iter()
        .filter(|e| e.stage == Stage::Grid)
        .filter_map(|e| e.value)
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(r.best_value >= grid_best);
    assert_eq!(r.log.iter().filter(|e| e.stage == Stage::Grid).count(), 9);
    assert!((0.04..=0.06).contains(&r.best.pitch));
    assert!(r.log_csv().lines().count() == r.log.len() + 1);
}
