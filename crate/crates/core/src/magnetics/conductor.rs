use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::WirePath;
use crate::MU0;

/// Electrical model of a coil conductor.
///
/// Resistance comes from `resistance_per_length_override` when it is set
/// (measured yarn-style value, frequency independent); otherwise from the
/// bulk `resistivity` with round-wire skin effect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Conductor {
    #[serde(default)]
    pub name: String,
    /// Ω·m.
    #[serde(default)]
    pub resistivity: Option<f64>,
    #[serde(default = "unit_permeability")]
    pub relative_permeability: f64,
    /// Ω/m.
    #[serde(default)]
    pub resistance_per_length_override: Option<f64>,
}

fn unit_permeability() -> f64 {
    1.0
}

impl Conductor {
    pub fn with_resistivity(name: &str, resistivity: f64) -> Self {
        Conductor {
            name: name.to_string(),
            resistivity: Some(resistivity),
            relative_permeability: 1.0,
            resistance_per_length_override: None,
        }
    }

    pub fn with_resistance_per_length(name: &str, ohms_per_meter: f64) -> Self {
        Conductor {
            name: name.to_string(),
            resistivity: None,
            relative_permeability: 1.0,
            resistance_per_length_override: Some(ohms_per_meter),
        }
    }

    pub fn copper() -> Self {
        Self::with_resistivity("copper", 1.68e-8)
    }

    /// Gallium–indium–tin class liquid metal.
    pub fn liquid_metal() -> Self {
        Self::with_resistivity("liquid_metal", 2.89e-7)
    }

    /// Conductive yarn with a measured-style per-length resistance.
    pub fn yarn() -> Self {
        Self::with_resistance_per_length("yarn", 1.0)
    }

    /// Built-in presets keyed by name.
    pub fn presets() -> Vec<Conductor> {
        vec![Self::copper(), Self::liquid_metal(), Self::yarn()]
    }

    pub fn preset(name: &str) -> Option<Conductor> {
        Self::presets().into_iter().find(|c| c.name == name)
    }

    pub fn validate(&self) -> Result<()> {
        match (self.resistivity, self.resistance_per_length_override) {
            (None, None) => {
                return Err(Error::param(
                    "resistivity",
                    "one of resistivity or resistance_per_length_override is required",
                ))
            }
            (Some(r), _) if !(r > 0.0 && r.is_finite()) => {
                return Err(Error::param("resistivity", format!("must be positive, got {r}")))
            }
            (_, Some(r)) if !(r > 0.0 && r.is_finite()) => {
                return Err(Error::param(
                    "resistance_per_length_override",
                    format!("must be positive, got {r}"),
                ))
            }
            _ => {}
        }
        if !(self.relative_permeability >= 1.0 && self.relative_permeability.is_finite()) {
            return Err(Error::param(
                "relative_permeability",
                format!("must be >= 1, got {}", self.relative_permeability),
            ));
        }
        Ok(())
    }
}

/// Skin depth sqrt(2ρ / (ω μ0 μr)), m.
pub fn skin_depth(resistivity: f64, frequency: f64, relative_permeability: f64) -> f64 {
    (2.0 * resistivity / (2.0 * PI * frequency * MU0 * relative_permeability)).sqrt()
}

/// Series resistance of the whole path at `frequency`, Ω.
pub fn ac_resistance(path: &WirePath, conductor: &Conductor, frequency: f64) -> Result<f64> {
    if !(frequency > 0.0 && frequency.is_finite()) {
        return Err(Error::param("frequency", format!("must be positive, got {frequency}")));
    }
    conductor.validate()?;
    let length = path.length();
    if let Some(per_length) = conductor.resistance_per_length_override {
        return Ok(per_length * length);
    }
    let rho = conductor.resistivity.expect("validated");
    let a = path.wire_radius();
    let delta = skin_depth(rho, frequency, conductor.relative_permeability);
    if delta >= a {
        Ok(rho * length / (PI * a * a))
    } else {
        Ok(rho * length / (PI * (2.0 * a * delta - delta * delta)))
    }
}
