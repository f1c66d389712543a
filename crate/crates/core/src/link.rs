//! Series-resonant two-coil link at a fixed design frequency.
//!
//! Both coils are series-tuned and the load is assumed optimal, so the link is
//! summarized by its maximum achievable efficiency
//! `U² / (1 + sqrt(1 + U²))²` with `U = k·sqrt(Q1·Q2)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::WirePath;
use crate::magnetics::{ac_resistance, mutual_inductance, self_inductance, Conductor};

fn require_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be positive and finite, got {v}")))
    }
}

/// Series capacitance resonating `inductance` at `f0`: 1/((2π f0)²·L).
pub fn tune_capacitance(inductance: f64, f0: f64) -> Result<f64> {
    require_positive("inductance", inductance)?;
    require_positive("frequency", f0)?;
    let w = 2.0 * PI * f0;
    Ok(1.0 / (w * w * inductance))
}

pub fn resonant_frequency(inductance: f64, capacitance: f64) -> f64 {
    1.0 / (2.0 * PI * (inductance * capacitance).sqrt())
}

/// Q = 2πf·L/R.
pub fn quality_factor(inductance: f64, resistance: f64, frequency: f64) -> Result<f64> {
    require_positive("inductance", inductance)?;
    require_positive("resistance", resistance)?;
    require_positive("frequency", frequency)?;
    Ok(2.0 * PI * frequency * inductance / resistance)
}

/// Effective Q of a coil whose inductance moved by `relative_shift` (ΔL/L)
/// away from the value its fixed capacitor was tuned for.
pub fn detuned_quality_factor(q: f64, relative_shift: f64) -> f64 {
    q / (1.0 + 2.0 * relative_shift.abs() * q)
}

/// Maximum link efficiency from the squared figure of merit U².
pub fn efficiency_from_figure_of_merit(u2: f64) -> f64 {
    let d = 1.0 + (1.0 + u2).sqrt();
    u2 / (d * d)
}

/// Maximum efficiency of a resonant link with optimal load.
pub fn link_efficiency(k: f64, q1: f64, q2: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::param("k", format!("coupling must lie in [0, 1), got {k}")));
    }
    require_positive("Q1", q1)?;
    require_positive("Q2", q2)?;
    Ok(efficiency_from_figure_of_merit(k * k * q1 * q2))
}

/// A coil with its conductor and series tuning capacitor.
#[derive(Debug, Clone, Serialize)]
pub struct ResonantCoil {
    pub path: WirePath,
    pub conductor: Conductor,
    pub design_frequency: f64,
    pub tuning_capacitance: f64,
    pub inductance: f64,
    pub resistance: f64,
}

impl ResonantCoil {
    /// Computes L and R of `path` and picks the capacitor resonating at `f0`.
    pub fn tuned(path: WirePath, conductor: Conductor, f0: f64) -> Result<Self> {
        let inductance = self_inductance(&path)?;
        let capacitance = tune_capacitance(inductance, f0)?;
        Self::assemble(path, conductor, f0, capacitance, inductance)
    }

    /// Keeps a capacitor chosen for some other inductance (e.g. the flat coil)
    /// while `path` is deformed.
    pub fn with_fixed_capacitance(
        path: WirePath,
        conductor: Conductor,
        f0: f64,
        capacitance: f64,
    ) -> Result<Self> {
        require_positive("tuning_capacitance", capacitance)?;
        let inductance = self_inductance(&path)?;
        Self::assemble(path, conductor, f0, capacitance, inductance)
    }

    fn assemble(
        path: WirePath,
        conductor: Conductor,
        f0: f64,
        capacitance: f64,
        inductance: f64,
    ) -> Result<Self> {
        require_positive("frequency", f0)?;
        let resistance = ac_resistance(&path, &conductor, f0)?;
        Ok(ResonantCoil {
            path,
            conductor,
            design_frequency: f0,
            tuning_capacitance: capacitance,
            inductance,
            resistance,
        })
    }

    pub fn natural_frequency(&self) -> f64 {
        resonant_frequency(self.inductance, self.tuning_capacitance)
    }

    /// ΔL/L between the present inductance and the one the capacitor resonates
    /// with at the design frequency.
    pub fn detuning(&self) -> f64 {
        let w = 2.0 * PI * self.design_frequency;
        let tuned_for = 1.0 / (w * w * self.tuning_capacitance);
        (self.inductance - tuned_for) / self.inductance
    }

    /// Unloaded Q at the design frequency, before detuning.
    pub fn intrinsic_quality_factor(&self) -> Result<f64> {
        quality_factor(self.inductance, self.resistance, self.design_frequency)
    }

    /// Q including the fixed-capacitor detuning penalty.
    pub fn quality_factor(&self) -> Result<f64> {
        Ok(detuned_quality_factor(
            self.intrinsic_quality_factor()?,
            self.detuning(),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkResult {
    #[serde(rename = "L1")]
    pub l1: f64,
    #[serde(rename = "L2")]
    pub l2: f64,
    #[serde(rename = "R1")]
    pub r1: f64,
    #[serde(rename = "R2")]
    pub r2: f64,
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub k: f64,
    #[serde(rename = "Q1")]
    pub q1: f64,
    #[serde(rename = "Q2")]
    pub q2: f64,
    #[serde(rename = "U")]
    pub u: f64,
    pub eta_max: f64,
    pub input_power: f64,
    pub delivered_power: f64,
    pub frequency: f64,
}

pub fn evaluate_link(tx: &ResonantCoil, rx: &ResonantCoil, input_power: f64) -> Result<LinkResult> {
    let f = tx.design_frequency;
    if (tx.design_frequency - rx.design_frequency).abs() > 1e-6 * f {
        return Err(Error::Configuration(format!(
            "coils are tuned to different frequencies: {} Hz vs {} Hz",
            tx.design_frequency, rx.design_frequency
        )));
    }
    if !(input_power >= 0.0 && input_power.is_finite()) {
        return Err(Error::param(
            "input_power",
            format!("must be non-negative, got {input_power}"),
        ));
    }
    let m = mutual_inductance(&tx.path, &rx.path)?;
    let k = m.abs() / (tx.inductance * rx.inductance).sqrt();
    if k >= 1.0 {
        return Err(Error::Analysis(format!(
            "coupling coefficient {k} >= 1; the coils are discretized too coarsely"
        )));
    }
    let q1 = tx.quality_factor()?;
    let q2 = rx.quality_factor()?;
    let eta = link_efficiency(k, q1, q2)?;
    Ok(LinkResult {
        l1: tx.inductance,
        l2: rx.inductance,
        r1: tx.resistance,
        r2: rx.resistance,
        c1: tx.tuning_capacitance,
        c2: rx.tuning_capacitance,
        m,
        k,
        q1,
        q2,
        u: k * (q1 * q2).sqrt(),
        eta_max: eta,
        input_power,
        delivered_power: eta * input_power,
        frequency: f,
    })
}
