//! Coil and link descriptions shared by the experiments, the scene format and
//! the Python bindings, plus the reference configuration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    bend_around_cylinder, build_helix, build_loop, build_meander, resample, HelixSpec, LoopSpec,
    MeanderSpec, WirePath,
};
use crate::link::{evaluate_link, LinkResult, ResonantCoil};
use crate::magnetics::Conductor;
use crate::vec3::Vec3;
use crate::DEFAULT_FREQUENCY;

/// Longest segment allowed before wrapping a coil onto a cylinder.
pub const BEND_RESAMPLE_STEP: f64 = 0.01;

/// Bend radii standing in for torso, thigh and arm, flat first.
pub const REFERENCE_BEND_RADII: [f64; 4] = [f64::INFINITY, 0.4, 0.2, 0.1];

pub const REFERENCE_PITCH: f64 = 0.05;
pub const REFERENCE_WIRE_RADIUS: f64 = 1.5e-3;
pub const REFERENCE_SEPARATION: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometrySpec {
    Meander(MeanderSpec),
    Helix(HelixSpec),
    Loop(LoopSpec),
    Polyline {
        vertices: Vec<Vec3>,
        wire_radius: f64,
        #[serde(default)]
        closed: bool,
    },
}

impl GeometrySpec {
    pub fn build(&self) -> Result<WirePath> {
        match self {
            GeometrySpec::Meander(m) => build_meander(m),
            GeometrySpec::Helix(h) => build_helix(h),
            GeometrySpec::Loop(l) => build_loop(l),
            GeometrySpec::Polyline {
                vertices,
                wire_radius,
                closed,
            } => WirePath::new(vertices.clone(), *wire_radius, *closed),
        }
    }

    pub fn as_meander(&self) -> Option<&MeanderSpec> {
        match self {
            GeometrySpec::Meander(m) => Some(m),
            _ => None,
        }
    }
}

/// Geometry plus conductor, placed by a rigid offset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoilSpec {
    pub geometry: GeometrySpec,
    pub conductor: Conductor,
    #[serde(default)]
    pub offset: Vec3,
}

impl CoilSpec {
    pub fn build(&self) -> Result<WirePath> {
        Ok(self.geometry.build()?.translated(self.offset))
    }
}

fn default_frequency() -> f64 {
    DEFAULT_FREQUENCY
}

fn default_input_power() -> f64 {
    1.0
}

fn default_true() -> bool {
    true
}

fn default_bend_axis() -> [f64; 2] {
    [1.0, 0.0]
}

/// Transmitter in the `z = 0` plane, receiver stacked `separation` above it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkScenario {
    pub tx: CoilSpec,
    pub rx: CoilSpec,
    #[serde(default = "default_frequency")]
    pub frequency: f64,
    #[serde(default = "default_input_power")]
    pub input_power: f64,
    pub separation: f64,
    /// Re-tune the capacitors after deformation instead of keeping the flat
    /// values.
    #[serde(default)]
    pub retune: bool,
    /// Wrap the receiver concentrically with the transmitter when bending.
    #[serde(default = "default_true")]
    pub bend_rx: bool,
    /// Center a meander receiver over the transmitter run nearest the origin.
    #[serde(default = "default_true")]
    pub register_rx: bool,
    /// In-plane direction of the cylinder axis used for bending.
    #[serde(default = "default_bend_axis")]
    pub bend_axis: [f64; 2],
}

/// Index of the meander run closest to the center (lower one on a tie).
/// Even-indexed runs carry current toward `+x`.
fn central_run(m: &MeanderSpec) -> usize {
    (m.run_count() - 1) / 2
}

fn run_y(m: &MeanderSpec, i: usize) -> f64 {
    (i as f64 - 0.5 * (m.run_count() - 1) as f64) * m.pitch
}

/// y of the transmitter run the receiver's middle run should sit on. With an
/// odd run count a meander carries a net current along x; picking a run with
/// the same index parity as the receiver's middle run makes the near-field
/// and net-current couplings add instead of cancel.
fn registration_y(tx: &MeanderSpec, rx: &MeanderSpec) -> f64 {
    let c = central_run(tx);
    let no_net_current = tx.run_count() % 2 == 0 || rx.run_count() % 2 == 0;
    if no_net_current || c % 2 == central_run(rx) % 2 {
        return run_y(tx, c);
    }
    let up = c + 1;
    if up < tx.run_count() && (c == 0 || run_y(tx, up).abs() < run_y(tx, c - 1).abs()) {
        run_y(tx, up)
    } else {
        run_y(tx, c - 1)
    }
}

fn bend(path: &WirePath, radius: f64, axis: [f64; 2]) -> Result<WirePath> {
    let step = BEND_RESAMPLE_STEP.min(radius / 8.0);
    bend_around_cylinder(&resample(path, step)?, radius, axis)
}

impl LinkScenario {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("frequency", self.frequency), ("separation", self.separation)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(name, format!("must be positive and finite, got {v}")));
            }
        }
        if !(self.input_power >= 0.0 && self.input_power.is_finite()) {
            return Err(Error::param("input_power", "must be non-negative"));
        }
        self.tx.conductor.validate()?;
        self.rx.conductor.validate()?;
        Ok(())
    }

    fn rx_flat(&self) -> Result<WirePath> {
        let mut rx = self.rx.build()?;
        if self.register_rx {
            if let (Some(t), Some(r)) = (self.tx.geometry.as_meander(), self.rx.geometry.as_meander()) {
                rx = rx.translated(Vec3::new(0.0, registration_y(t, r), 0.0));
            }
        }
        Ok(rx)
    }

    /// Transmitter and receiver paths with the tx wrapped on a cylinder of
    /// `bend_radius` (infinite for flat).
    pub fn paths(&self, bend_radius: f64) -> Result<(WirePath, WirePath)> {
        let lift = Vec3::new(0.0, 0.0, self.separation);
        let tx = self.tx.build()?;
        let rx = self.rx_flat()?;
        if bend_radius == f64::INFINITY {
            return Ok((tx, rx.translated(lift)));
        }
        let tx_b = bend(&tx, bend_radius, self.bend_axis)?;
        let rx_b = if self.bend_rx {
            bend(&rx, bend_radius + self.separation, self.bend_axis)?
        } else {
            rx
        };
        Ok((tx_b, rx_b.translated(lift)))
    }

    pub fn evaluate_flat(&self) -> Result<LinkResult> {
        self.validate()?;
        let (tx, rx) = self.paths(f64::INFINITY)?;
        let txc = ResonantCoil::tuned(tx, self.tx.conductor.clone(), self.frequency)?;
        let rxc = ResonantCoil::tuned(rx, self.rx.conductor.clone(), self.frequency)?;
        evaluate_link(&txc, &rxc, self.input_power)
    }

    /// Link after wrapping onto a cylinder. Without re-tuning, each coil keeps
    /// the capacitor tuned for its flat geometry.
    pub fn evaluate_bent(&self, bend_radius: f64, retune: bool) -> Result<LinkResult> {
        self.validate()?;
        if bend_radius == f64::INFINITY {
            return self.evaluate_flat();
        }
        let (tx, rx) = self.paths(bend_radius)?;
        let f = self.frequency;
        let (txc, rxc) = if retune {
            (
                ResonantCoil::tuned(tx, self.tx.conductor.clone(), f)?,
                ResonantCoil::tuned(rx, self.rx.conductor.clone(), f)?,
            )
        } else {
            let (tx0, rx0) = self.paths(f64::INFINITY)?;
            let c1 = ResonantCoil::tuned(tx0, self.tx.conductor.clone(), f)?.tuning_capacitance;
            let c2 = ResonantCoil::tuned(rx0, self.rx.conductor.clone(), f)?.tuning_capacitance;
            (
                ResonantCoil::with_fixed_capacitance(tx, self.tx.conductor.clone(), f, c1)?,
                ResonantCoil::with_fixed_capacitance(rx, self.rx.conductor.clone(), f, c2)?,
            )
        };
        evaluate_link(&txc, &rxc, self.input_power)
    }

    pub fn with_conductor(&self, conductor: &Conductor) -> LinkScenario {
        let mut s = self.clone();
        s.tx.conductor = conductor.clone();
        s.rx.conductor = conductor.clone();
        s
    }

    /// Applies a new trace pitch and/or wire radius to the transmitter
    /// meander. A meander receiver follows the same trace and keeps its run
    /// count and run length.
    pub fn with_trace(&self, pitch: Option<f64>, wire_radius: Option<f64>) -> Result<LinkScenario> {
        let mut s = self.clone();
        let GeometrySpec::Meander(tx) = &mut s.tx.geometry else {
            return Err(Error::Configuration(
                "trace parameters require a meander transmitter".into(),
            ));
        };
        if let Some(p) = pitch {
            tx.pitch = p;
        }
        if let Some(a) = wire_radius {
            tx.wire_radius = a;
        }
        if let GeometrySpec::Meander(rx) = &mut s.rx.geometry {
            let runs = rx.run_count();
            if let Some(p) = pitch {
                rx.footprint_y = (runs - 1) as f64 * p;
                rx.pitch = p;
            }
            if let Some(a) = wire_radius {
                rx.wire_radius = a;
            }
        }
        Ok(s)
    }
}

pub fn reference_meander() -> MeanderSpec {
    MeanderSpec {
        footprint_x: 0.8,
        footprint_y: 0.5,
        pitch: REFERENCE_PITCH,
        wire_radius: REFERENCE_WIRE_RADIUS,
        corner_samples: 16,
    }
}

/// Three-run receiver patch on the same trace.
pub fn reference_receiver() -> MeanderSpec {
    MeanderSpec {
        footprint_x: 0.2,
        footprint_y: 2.0 * REFERENCE_PITCH,
        pitch: REFERENCE_PITCH,
        wire_radius: REFERENCE_WIRE_RADIUS,
        corner_samples: 16,
    }
}

/// Helix whose footprint diameter matches `meander`'s, five closely wound
/// turns, same wire.
pub fn matching_helix(meander: &MeanderSpec) -> Result<HelixSpec> {
    let path = build_meander(meander)?;
    let d = path.footprint_diameter(Vec3::Z);
    Ok(HelixSpec {
        radius: 0.5 * d - meander.wire_radius,
        turns: 5.0,
        pitch_per_turn: 4.0 * meander.wire_radius,
        axis: Vec3::Z,
        samples_per_turn: 128,
        wire_radius: meander.wire_radius,
    })
}

pub fn reference_link(conductor: Conductor) -> LinkScenario {
    LinkScenario {
        tx: CoilSpec {
            geometry: GeometrySpec::Meander(reference_meander()),
            conductor: conductor.clone(),
            offset: Vec3::ZERO,
        },
        rx: CoilSpec {
            geometry: GeometrySpec::Meander(reference_receiver()),
            conductor,
            offset: Vec3::ZERO,
        },
        frequency: DEFAULT_FREQUENCY,
        input_power: 1.0,
        separation: REFERENCE_SEPARATION,
        retune: false,
        bend_rx: true,
        register_rx: true,
        bend_axis: default_bend_axis(),
    }
}
