//! File emission helpers and the JSON metadata sidecar written next to every
//! output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fieldmaps::SKIN_STANDOFF;
use crate::magnetics::{skin_depth, Conductor};
use crate::MU0;

pub const TOOL_NAME: &str = "meander-wpt";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Git-style object hash: SHA-256 over `"blob <len>\0"` followed by the
/// content, as lowercase hex.
pub fn content_hash(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", bytes.len()).as_bytes());
    h.update(bytes);
    let digest = h.finalize();
    let mut out = String::with_capacity(64);
    for b in digest.iter() {
        let _ = write!(out, "{b:02x}");
    }
    out
}

pub fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// `<out>.meta.json`
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// `<out>.summary.json`
pub fn summary_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".summary.json");
    PathBuf::from(s)
}

pub fn to_json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("serializable");
    v.push(b'\n');
    v
}

/// Conductor constants as recorded in metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaterialRecord {
    #[serde(flatten)]
    pub conductor: Conductor,
    /// At the run frequency; absent for resistance-per-length conductors.
    pub skin_depth: Option<f64>,
}

impl MaterialRecord {
    pub fn new(conductor: &Conductor, frequency: f64) -> Self {
        let skin = match (conductor.resistance_per_length_override, conductor.resistivity) {
            (None, Some(rho)) => Some(skin_depth(rho, frequency, conductor.relative_permeability)),
            _ => None,
        };
        MaterialRecord {
            conductor: conductor.clone(),
            skin_depth: skin,
        }
    }
}

/// Everything needed to reproduce an output: the inputs' hash, the command
/// and flags, and the physical constants in force.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub scene: String,
    pub input_hash: String,
    pub output_hash: String,
    pub flags: BTreeMap<String, serde_json::Value>,
    pub frequency: f64,
    pub current: Option<f64>,
    pub mu0: f64,
    pub skin_standoff: f64,
    pub materials: BTreeMap<String, MaterialRecord>,
    pub notes: Vec<String>,
}

impl Metadata {
    pub fn new(command: &str, scene: &str, input: &[u8], output: &[u8], frequency: f64) -> Self {
        Metadata {
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            command: command.to_string(),
            scene: scene.to_string(),
            input_hash: content_hash(input),
            output_hash: content_hash(output),
            flags: BTreeMap::new(),
            frequency,
            current: None,
            mu0: MU0,
            skin_standoff: SKIN_STANDOFF,
            materials: BTreeMap::new(),
            notes: Vec::new(),
        }
    }
}
