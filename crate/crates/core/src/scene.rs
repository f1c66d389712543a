//! JSON scene documents: named coils plus optional sections for each CLI
//! command.
//!
//! All quantities are SI (m, A, Hz, W, Ω·m, Ω/m); keys carry no unit
//! suffixes. A minimal document:
//!
//! ```json
//! {
//!   "version": 1,
//!   "coils": [
//!     {"name": "tx", "conductor": "liquid_metal",
//!      "geometry": {"meander": {"footprint_x": 0.8, "footprint_y": 0.5,
//!                               "pitch": 0.05, "wire_radius": 0.0015}}}
//!   ]
//! }
//! ```
//!
//! `conductor` is either a preset name (`copper`, `liquid_metal`, `yarn`),
//! a key of the optional `materials` table, or an inline conductor object.
//! Sections: `link`, `sweep`, `field`, `profile`, `compare`, `optimize`.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::experiments::{OptimizeSpec, SweepSpec};
use crate::geometry::WirePath;
use crate::magnetics::Conductor;
use crate::scenario::{CoilSpec, GeometrySpec, LinkScenario};
use crate::vec3::Vec3;
use crate::DEFAULT_FREQUENCY;

pub const SCENE_VERSION: u64 = 1;

const TOP_LEVEL_KEYS: [&str; 9] = [
    "version", "coils", "materials", "link", "sweep", "field", "profile", "compare", "optimize",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConductorRef {
    Named(String),
    Inline(Conductor),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneCoil {
    pub name: String,
    pub geometry: GeometrySpec,
    pub conductor: ConductorRef,
    #[serde(default)]
    pub offset: Vec3,
}

fn default_separation() -> f64 {
    crate::scenario::REFERENCE_SEPARATION
}

fn default_one() -> f64 {
    1.0
}

fn default_true() -> bool {
    true
}

fn default_bend_axis() -> [f64; 2] {
    [1.0, 0.0]
}

/// `link` section: coils by name plus the scenario settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneLink {
    pub tx: String,
    pub rx: String,
    #[serde(default)]
    pub frequency: Option<f64>,
    #[serde(default = "default_one")]
    pub input_power: f64,
    #[serde(default = "default_separation")]
    pub separation: f64,
    #[serde(default)]
    pub retune: bool,
    #[serde(default = "default_true")]
    pub bend_rx: bool,
    #[serde(default = "default_true")]
    pub register_rx: bool,
    #[serde(default = "default_bend_axis")]
    pub bend_axis: [f64; 2],
}

/// `field` section. The grid is centered on `center`; when omitted it sits
/// at the skin standoff above the coil's areal centroid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    pub coil: String,
    #[serde(default)]
    pub center: Option<Vec3>,
    #[serde(default)]
    pub axis_u: Option<Vec3>,
    #[serde(default)]
    pub axis_v: Option<Vec3>,
    #[serde(default)]
    pub spacing: Option<f64>,
    #[serde(default)]
    pub nu: Option<usize>,
    #[serde(default)]
    pub nv: Option<usize>,
    #[serde(default)]
    pub current: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSection {
    pub coil: String,
    pub depths: Vec<f64>,
    #[serde(default)]
    pub current: Option<f64>,
}

fn default_shallow() -> f64 {
    0.01
}

fn default_deep() -> f64 {
    0.1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareSection {
    pub meander: String,
    pub helix: String,
    pub depths: Vec<f64>,
    #[serde(default = "default_shallow")]
    pub shallow: f64,
    #[serde(default = "default_deep")]
    pub deep: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SceneDocument {
    pub version: u64,
    pub coils: Vec<SceneCoil>,
    pub materials: BTreeMap<String, Conductor>,
    pub link: Option<SceneLink>,
    pub sweep: Option<SweepSpec>,
    pub field: Option<FieldSection>,
    pub profile: Option<ProfileSection>,
    pub compare: Option<CompareSection>,
    pub optimize: Option<OptimizeSpec>,
}

fn typed<T: DeserializeOwned>(value: &Value, path: &str) -> Result<T> {
    T::deserialize(value).map_err(|e| Error::validation(path, e.to_string()))
}

fn section<T: DeserializeOwned>(root: &serde_json::Map<String, Value>, key: &str) -> Result<Option<T>> {
    match root.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => typed(v, key).map(Some),
    }
}

impl SceneDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| Error::validation("", format!("not valid JSON: {e}")))?;
        Self::from_value(&value)
    }

    pub fn from_value(value: &Value) -> Result<Self> {
        let root = value
            .as_object()
            .ok_or_else(|| Error::validation("", "scene must be a JSON object"))?;
        if let Some(k) = root.keys().find(|k| !TOP_LEVEL_KEYS.contains(&k.as_str())) {
            return Err(Error::validation(k.as_str(), "unknown key"));
        }
        let version = root
            .get("version")
            .ok_or_else(|| Error::validation("version", "missing"))?
            .as_u64()
            .ok_or_else(|| Error::validation("version", "must be an integer"))?;
        if version != SCENE_VERSION {
            return Err(Error::validation(
                "version",
                format!("unsupported version {version}, expected {SCENE_VERSION}"),
            ));
        }
        let coils_value = root
            .get("coils")
            .ok_or_else(|| Error::validation("coils", "missing"))?
            .as_array()
            .ok_or_else(|| Error::validation("coils", "must be a list of coils"))?;
        let coils = coils_value
            .iter()
            .enumerate()
            .map(|(i, c)| typed::<SceneCoil>(c, &format!("coils[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let doc = SceneDocument {
            version,
            coils,
            materials: section(root, "materials")?.unwrap_or_default(),
            link: section(root, "link")?,
            sweep: section(root, "sweep")?,
            field: section(root, "field")?,
            profile: section(root, "profile")?,
            compare: section(root, "compare")?,
            optimize: section(root, "optimize")?,
        };
        doc.validate()?;
        Ok(doc)
    }

    fn coil_index(&self, name: &str, path: &str) -> Result<usize> {
        self.coils
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::validation(path, format!("no coil named `{name}`")))
    }

    /// Names are unique and every cross-reference resolves.
    fn validate(&self) -> Result<()> {
        if self.coils.is_empty() {
            return Err(Error::validation("coils", "at least one coil is required"));
        }
        for (i, c) in self.coils.iter().enumerate() {
            if c.name.is_empty() {
                return Err(Error::validation(format!("coils[{i}].name"), "must not be empty"));
            }
            if self.coils[..i].iter().any(|o| o.name == c.name) {
                return Err(Error::validation(
                    format!("coils[{i}].name"),
                    format!("duplicate coil name `{}`", c.name),
                ));
            }
            self.conductor(i)?;
        }
        for (name, m) in &self.materials {
            m.validate()
                .map_err(|e| Error::validation(format!("materials.{name}"), e.to_string()))?;
        }
        if let Some(l) = &self.link {
            self.coil_index(&l.tx, "link.tx")?;
            self.coil_index(&l.rx, "link.rx")?;
        }
        if self.sweep.is_some() && self.link.is_none() {
            return Err(Error::validation("link", "a sweep needs a link section"));
        }
        if self.optimize.is_some() && self.link.is_none() {
            return Err(Error::validation("link", "optimize needs a link section"));
        }
        if let Some(f) = &self.field {
            self.coil_index(&f.coil, "field.coil")?;
        }
        if let Some(p) = &self.profile {
            self.coil_index(&p.coil, "profile.coil")?;
        }
        if let Some(c) = &self.compare {
            let m = self.coil_index(&c.meander, "compare.meander")?;
            let h = self.coil_index(&c.helix, "compare.helix")?;
            if self.coils[m].geometry.as_meander().is_none() {
                return Err(Error::validation("compare.meander", "must name a meander coil"));
            }
            if !matches!(self.coils[h].geometry, GeometrySpec::Helix(_)) {
                return Err(Error::validation("compare.helix", "must name a helix coil"));
            }
        }
        Ok(())
    }

    /// Resolved conductor of coil `index`.
    pub fn conductor(&self, index: usize) -> Result<Conductor> {
        let c = match &self.coils[index].conductor {
            ConductorRef::Inline(c) => c.clone(),
            ConductorRef::Named(name) => self
                .materials
                .get(name)
                .cloned()
                .or_else(|| Conductor::preset(name))
                .ok_or_else(|| {
                    Error::validation(
                        format!("coils[{index}].conductor"),
                        format!("unknown conductor `{name}`"),
                    )
                })?,
        };
        c.validate()
            .map_err(|e| Error::validation(format!("coils[{index}].conductor"), e.to_string()))?;
        Ok(c)
    }

    pub fn coil_spec(&self, name: &str) -> Result<CoilSpec> {
        let i = self.coil_index(name, "coil")?;
        let c = &self.coils[i];
        Ok(CoilSpec {
            geometry: c.geometry.clone(),
            conductor: self.conductor(i)?,
            offset: c.offset,
        })
    }

    pub fn build_coil(&self, name: &str) -> Result<WirePath> {
        self.coil_spec(name)?.build()
    }

    /// Link scenario from the `link` section; `frequency` overrides the
    /// document's value.
    pub fn link_scenario(&self, frequency: Option<f64>) -> Result<LinkScenario> {
        let l = self
            .link
            .as_ref()
            .ok_or_else(|| Error::validation("link", "missing"))?;
        Ok(LinkScenario {
            tx: self.coil_spec(&l.tx)?,
            rx: self.coil_spec(&l.rx)?,
            frequency: frequency.or(l.frequency).unwrap_or(DEFAULT_FREQUENCY),
            input_power: l.input_power,
            separation: l.separation,
            retune: l.retune,
            bend_rx: l.bend_rx,
            register_rx: l.register_rx,
            bend_axis: l.bend_axis,
        })
    }

    /// Every conductor referenced by a coil, keyed by coil name.
    pub fn conductors(&self) -> Result<BTreeMap<String, Conductor>> {
        (0..self.coils.len())
            .map(|i| Ok((self.coils[i].name.clone(), self.conductor(i)?)))
            .collect()
    }
}
