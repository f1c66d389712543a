use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::link::LinkResult;
use crate::scenario::LinkScenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    BendRadius,
    Pitch,
    WireRadius,
    Separation,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::BendRadius => "bend_radius",
            SweepParameter::Pitch => "pitch",
            SweepParameter::WireRadius => "wire_radius",
            SweepParameter::Separation => "separation",
        }
    }
}

/// Accepts numbers, `null` or `"inf"` (the latter two meaning a flat coil).
fn deserialize_values<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Value {
        Number(f64),
        Text(String),
    }
    let raw: Vec<Option<Value>> = Vec::deserialize(d)?;
    raw.into_iter()
        .map(|v| match v {
            None => Ok(f64::INFINITY),
            Some(Value::Number(x)) => Ok(x),
            Some(Value::Text(s)) => match s.to_ascii_lowercase().as_str() {
                "inf" | "infinity" => Ok(f64::INFINITY),
                _ => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got \"{s}\""))),
            },
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    #[serde(deserialize_with = "deserialize_values")]
    pub values: Vec<f64>,
    #[serde(default)]
    pub retune: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// Infinite bend radius serializes as `null`.
    pub value: f64,
    #[serde(rename = "L1")]
    pub l1: f64,
    #[serde(rename = "L2")]
    pub l2: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub k: f64,
    #[serde(rename = "Q1")]
    pub q1: f64,
    #[serde(rename = "Q2")]
    pub q2: f64,
    pub eta_max: f64,
    pub delivered_power: f64,
}

impl SweepRow {
    fn new(value: f64, r: &LinkResult) -> Self {
        SweepRow {
            value,
            l1: r.l1,
            l2: r.l2,
            m: r.m,
            k: r.k,
            q1: r.q1,
            q2: r.q2,
            eta_max: r.eta_max,
            delivered_power: r.delivered_power,
        }
    }

    pub const CSV_HEADER: &'static str = "value,L1,L2,M,k,Q1,Q2,eta_max,delivered_power";

    pub fn csv_line(&self) -> String {
        let v = if self.value.is_infinite() {
            "inf".to_string()
        } else {
            format!("{:e}", self.value)
        };
        format!(
            "{v},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            self.l1, self.l2, self.m, self.k, self.q1, self.q2, self.eta_max, self.delivered_power
        )
    }
}

fn check_values(parameter: SweepParameter, values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::param("values", "sweep needs at least one value"));
    }
    for &v in values {
        let ok = match parameter {
            SweepParameter::BendRadius => v > 0.0 && !v.is_nan(),
            _ => v > 0.0 && v.is_finite(),
        };
        if !ok {
            return Err(Error::param(
                "values",
                format!("{} value {v} is out of range", parameter.name()),
            ));
        }
    }
    Ok(())
}

/// Bends the transmitter (and the receiver, per the scenario) to each radius
/// and re-evaluates the link. Rows come back flat first, then by decreasing
/// radius.
pub fn deformation_sweep(base: &LinkScenario, radii: &[f64], retune: bool) -> Result<Vec<SweepRow>> {
    check_values(SweepParameter::BendRadius, radii)?;
    let mut radii = radii.to_vec();
    radii.sort_by(|a, b| b.total_cmp(a));
    let rows: Vec<Result<SweepRow>> = radii
        .par_iter()
        .map(|&r| {
            let res = base.evaluate_bent(r, retune).map_err(|e| match e {
                Error::Geometry(msg) => Error::Geometry(format!("bend radius {r} m: {msg}")),
                other => other,
            })?;
            Ok(SweepRow::new(r, &res))
        })
        .collect();
    rows.into_iter().collect()
}

/// Runs a sweep. Bend-radius rows are sorted flat first; all other
/// parameters keep the order of `spec.values`.
pub fn run_sweep(base: &LinkScenario, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let retune = spec.retune || base.retune;
    if spec.parameter == SweepParameter::BendRadius {
        return deformation_sweep(base, &spec.values, retune);
    }
    check_values(spec.parameter, &spec.values)?;
    let rows: Vec<Result<SweepRow>> = spec
        .values
        .par_iter()
        .map(|&v| {
            let scenario = match spec.parameter {
                SweepParameter::Pitch => base.with_trace(Some(v), None)?,
                SweepParameter::WireRadius => base.with_trace(None, Some(v))?,
                SweepParameter::Separation => LinkScenario {
                    separation: v,
                    ..base.clone()
                },
                SweepParameter::BendRadius => unreachable!(),
            };
            Ok(SweepRow::new(v, &scenario.evaluate_flat()?))
        })
        .collect();
    rows.into_iter().collect()
}
