use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fieldmaps::{sample_plane, GridSpec, SKIN_STANDOFF};
use crate::geometry::MeanderSpec;
use crate::magnetics::ac_resistance;
use crate::scenario::LinkScenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Maximum efficiency of the flat, tuned link.
    #[default]
    EtaMax,
    /// Mean |B| per ampere over the central part of the transmitter at the
    /// skin standoff, divided by its AC resistance (T/Ω).
    SurfaceFieldPerOhm,
}

fn default_grid() -> usize {
    8
}

fn default_rounds() -> usize {
    3
}

fn default_golden_iterations() -> usize {
    12
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeSpec {
    /// `[min, max]`, m.
    pub pitch: [f64; 2],
    /// `[min, max]`, m.
    pub wire_radius: [f64; 2],
    #[serde(default)]
    pub objective: Objective,
    /// Coarse grid points per axis.
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_rounds")]
    pub rounds: usize,
    #[serde(default = "default_golden_iterations")]
    pub golden_iterations: usize,
}

impl OptimizeSpec {
    pub fn new(pitch: [f64; 2], wire_radius: [f64; 2], objective: Objective) -> Self {
        OptimizeSpec {
            pitch,
            wire_radius,
            objective,
            grid: default_grid(),
            rounds: default_rounds(),
            golden_iterations: default_golden_iterations(),
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, [lo, hi]) in [("pitch", self.pitch), ("wire_radius", self.wire_radius)] {
            if !(lo > 0.0 && lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::param(name, format!("range [{lo}, {hi}] is not valid")));
            }
        }
        if self.grid < 2 {
            return Err(Error::param("grid", "need at least 2 points per axis"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Grid,
    Refine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub stage: Stage,
    pub pitch: f64,
    pub wire_radius: f64,
    /// `None` where the point is infeasible.
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub objective: Objective,
    pub best: MeanderSpec,
    pub best_value: f64,
    pub log: Vec<Evaluation>,
}

impl OptimizationResult {
    pub const CSV_HEADER: &'static str = "index,stage,pitch,wire_radius,value";

    pub fn log_csv(&self) -> String {
        let mut out = format!("{}\n", Self::CSV_HEADER);
        for (i, e) in self.log.iter().enumerate() {
            let stage = match e.stage {
                Stage::Grid => "grid",
                Stage::Refine => "refine",
            };
            let value = e.value.map_or_else(|| "nan".to_string(), |v| format!("{v:e}"));
            out.push_str(&format!("{i},{stage},{:e},{:e},{value}\n", e.pitch, e.wire_radius));
        }
        out
    }
}

/// Objective at one trace setting. Errors mark the point infeasible.
pub fn objective_value(base: &LinkScenario, objective: Objective, pitch: f64, wire_radius: f64) -> Result<f64> {
    if pitch <= 2.0 * wire_radius {
        return Err(Error::param("pitch", "pitch must exceed twice the wire radius"));
    }
    let s = base.with_trace(Some(pitch), Some(wire_radius))?;
    match objective {
        Objective::EtaMax => Ok(s.evaluate_flat()?.eta_max),
        Objective::SurfaceFieldPerOhm => {
            let tx = s.tx.build()?;
            let (lo, hi) = tx.bounding_box();
            let n = 16;
            let side = 0.5 * (hi.x - lo.x).min(hi.y - lo.y);
            let normal = tx.plane_normal();
            let u = normal.any_perpendicular();
            let v = normal.cross(u);
            let grid = GridSpec::centered(
                tx.areal_centroid() + normal * SKIN_STANDOFF,
                u,
                v,
                n,
                n,
                side / (n - 1) as f64,
            );
            let field = sample_plane(&tx, 1.0, &grid)?;
            let mean = field.samples.iter().map(|s| s.b.norm()).sum::<f64>() / field.samples.len() as f64;
            Ok(mean / ac_resistance(&tx, &s.tx.conductor, s.frequency)?)
        }
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if lo == hi {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

struct Search<'a> {
    base: &'a LinkScenario,
    spec: &'a OptimizeSpec,
    log: Vec<Evaluation>,
    best: Option<(f64, f64, f64)>,
}

impl Search<'_> {
    fn record(&mut self, e: Evaluation) -> f64 {
        self.log.push(e);
        match e.value {
            Some(v) => {
                if self.best.is_none_or(|(_, _, b)| v > b) {
                    self.best = Some((e.pitch, e.wire_radius, v));
                }
                v
            }
            None => f64::NEG_INFINITY,
        }
    }

    fn eval(&mut self, pitch: f64, wire_radius: f64) -> f64 {
        let value = objective_value(self.base, self.spec.objective, pitch, wire_radius).ok();
        self.record(Evaluation {
            stage: Stage::Refine,
            pitch,
            wire_radius,
            value,
        })
    }

    /// Golden-section maximization along one axis inside `[lo, hi]`. Only
    /// improvements replace the incumbent, so refinement never loses ground.
    fn golden(&mut self, axis: usize, lo: f64, hi: f64) {
        const INV_PHI: f64 = 0.618_033_988_749_894_8;
        let (bp, ba, _) = self.best.expect("incumbent exists");
        let at = |x: f64| if axis == 0 { (x, ba) } else { (bp, x) };
        let (mut a, mut b) = (lo, hi);
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        let (p, w) = at(c);
        let mut fc = self.eval(p, w);
        let (p, w) = at(d);
        let mut fd = self.eval(p, w);
        for _ in 0..self.spec.golden_iterations {
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - INV_PHI * (b - a);
                let (p, w) = at(c);
                fc = self.eval(p, w);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + INV_PHI * (b - a);
                let (p, w) = at(d);
                fd = self.eval(p, w);
            }
        }
    }
}

/// Coarse grid over (pitch, wire_radius) followed by golden-section
/// coordinate descent around the incumbent, bracket halving every round.
/// Trace parameters apply to both coils as in
/// [`LinkScenario::with_trace`].
pub fn optimize_trace(base: &LinkScenario, spec: &OptimizeSpec) -> Result<OptimizationResult> {
    spec.validate()?;
    let tx = base
        .tx
        .geometry
        .as_meander()
        .ok_or_else(|| Error::Configuration("optimizer needs a meander transmitter".into()))?;

    let pitches = linspace(spec.pitch[0], spec.pitch[1], spec.grid);
    let radii = linspace(spec.wire_radius[0], spec.wire_radius[1], spec.grid);
    let points: Vec<(f64, f64)> = pitches
        .iter()
        .flat_map(|&p| radii.iter().map(move |&a| (p, a)))
        .collect();
    let grid: Vec<Evaluation> = points
        .par_iter()
        .map(|&(pitch, wire_radius)| Evaluation {
            stage: Stage::Grid,
            pitch,
            wire_radius,
            value: objective_value(base, spec.objective, pitch, wire_radius).ok(),
        })
        .collect();

    let mut search = Search {
        base,
        spec,
        log: Vec::with_capacity(grid.len() + 64),
        best: None,
    };
    for e in grid {
        search.record(e);
    }
    if search.best.is_none() {
        return Err(Error::Configuration(
            "no feasible trace in the requested ranges".into(),
        ));
    }

    let ranges = [spec.pitch, spec.wire_radius];
    let mut widths = [
        (spec.pitch[1] - spec.pitch[0]) / (spec.grid - 1) as f64,
        (spec.wire_radius[1] - spec.wire_radius[0]) / (spec.grid - 1) as f64,
    ];
    for _ in 0..spec.rounds {
        for axis in 0..2 {
            if widths[axis] == 0.0 {
                continue;
            }
            let (bp, ba, _) = search.best.expect("incumbent exists");
            let x = if axis == 0 { bp } else { ba };
            let lo = (x - widths[axis]).max(ranges[axis][0]);
            let hi = (x + widths[axis]).min(ranges[axis][1]);
            search.golden(axis, lo, hi);
        }
        widths[0] *= 0.5;
        widths[1] *= 0.5;
    }

    let (pitch, wire_radius, best_value) = search.best.expect("incumbent exists");
    Ok(OptimizationResult {
        objective: spec.objective,
        best: MeanderSpec {
            pitch,
            wire_radius,
            ..*tx
        },
        best_value,
        log: search.log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magnetics::Conductor;
    use crate::scenario::{reference_link, GeometrySpec};

    fn small() -> LinkScenario {
        let mut s = reference_link(Conductor::liquid_metal());
        s.tx.geometry = GeometrySpec::Meander(MeanderSpec {
            footprint_x: 0.3,
            footprint_y: 0.2,
            pitch: 0.05,
            wire_radius: 1.5e-3,
            corner_samples: 8,
        });
        s
    }

    fn argmax(log: &[Evaluation]) -> f64 {
        log.iter()
            .filter_map(|e| e.value)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn degenerate_ranges_return_the_point() {
        let spec = OptimizeSpec::new([0.05, 0.05], [1e-3, 1e-3], Objective::EtaMax);
        let r = optimize_trace(&small(), &spec).unwrap();
        assert_eq!(r.best.pitch, 0.05);
        assert_eq!(r.best.wire_radius, 1e-3);
        assert_eq!(r.log.len(), 1);
        assert_eq!(r.best_value, objective_value(&small(), Objective::EtaMax, 0.05, 1e-3).unwrap());
    }

    #[test]
    fn refinement_never_worse_and_best_is_log_argmax() {
        let mut spec = OptimizeSpec::new([0.04, 0.06], [5e-4, 2e-3], Objective::EtaMax);
        spec.grid = 3;
        spec.rounds = 1;
        spec.golden_iterations = 4;
        let r = optimize_trace(&small(), &spec).unwrap();
        let coarse = argmax(&r.log[..9]);
        assert!(r.best_value >= coarse);
        assert_eq!(r.best_value, argmax(&r.log));
        assert!(r.log.iter().any(|e| e.stage == Stage::Refine));
    }

    #[test]
    fn infeasible_everywhere_is_configuration_error() {
        let spec = OptimizeSpec::new([0.004, 0.005], [3e-3, 4e-3], Objective::EtaMax);
        assert!(matches!(optimize_trace(&small(), &spec), Err(Error::Configuration(_))));
    }

    #[test]
    fn surface_objective_is_positive() {
        let v = objective_value(&small(), Objective::SurfaceFieldPerOhm, 0.05, 1e-3).unwrap();
        assert!(v > 0.0 && v.is_finite());
    }

    #[test]
    fn log_csv_has_every_point() {
        let mut spec = OptimizeSpec::new([0.04, 0.06], [1e-3, 1e-3], Objective::SurfaceFieldPerOhm);
        spec.grid = 2;
        spec.rounds = 1;
        spec.golden_iterations = 2;
        let r = optimize_trace(&small(), &spec).unwrap();
        assert_eq!(r.log_csv().lines().count(), r.log.len() + 1);
    }

    #[test]
    fn deterministic() {
        let mut spec = OptimizeSpec::new([0.04, 0.06], [5e-4, 2e-3], Objective::EtaMax);
        spec.grid = 3;
        spec.rounds = 1;
        spec.golden_iterations = 3;
        let a = optimize_trace(&small(), &spec).unwrap();
        let b = optimize_trace(&small(), &spec).unwrap();
        assert_eq!(a, b);
    }
}
