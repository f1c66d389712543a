//! `meander-wpt` command line: one subcommand per study, all driven by a
//! scene file.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::experiments::{
    confinement_compare, optimize_trace, run_sweep, SweepParameter, SweepRow,
};
use crate::fieldmaps::{decay_profile, sample_plane, GridSpec, SKIN_STANDOFF};
use crate::geometry::WirePath;
use crate::output::{
    read_file, sidecar_path, summary_path, to_json_bytes, write_file, MaterialRecord, Metadata,
};
use crate::scenario::GeometrySpec;
use crate::scene::SceneDocument;
use crate::vec3::Vec3;
use crate::DEFAULT_FREQUENCY;

/// Relative efficiency change from flat that a bend sweep tolerates.
pub const BEND_DEVIATION_LIMIT: f64 = 0.2;

const DEFAULT_GRID: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Geom,
    Field,
    Profile,
    Link,
    Sweep,
    Compare,
    Optimize,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Geom => "geom",
            Command::Field => "field",
            Command::Profile => "profile",
            Command::Link => "link",
            Command::Sweep => "sweep",
            Command::Compare => "compare",
            Command::Optimize => "optimize",
        }
    }
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Write the coil centerline as CSV (x,y,z).
    Geom(Args),
    /// Sample B over a plane; CSV u,v,x,y,z,Bx,By,Bz,Bmag.
    Field(Args),
    /// |B| along the coil normal; CSV depth_m,Bmag_T.
    Profile(Args),
    /// Evaluate the resonant link; JSON.
    Link(Args),
    /// Run the scene's sweep; CSV plus summary JSON.
    Sweep(Args),
    /// Meander vs helix confinement; JSON.
    Compare(Args),
    /// Optimize trace pitch and wire radius; CSV log plus summary JSON.
    Optimize(Args),
}

#[derive(Debug, Clone, PartialEq, clap::Args)]
pub struct Args {
    #[arg(long)]
    pub scene: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads, or `auto`.
    #[arg(long, default_value = "auto")]
    pub threads: String,
    /// Re-tune capacitors after deformation.
    #[arg(long)]
    pub retune: bool,
    /// Field grid size as NUxNV.
    #[arg(long)]
    pub grid: Option<String>,
    /// Coil current, A.
    #[arg(long)]
    pub current: Option<f64>,
    /// Operating frequency, Hz (default 13.56e6).
    #[arg(long)]
    pub frequency: Option<f64>,
    /// Coil name for geom/field/profile; defaults to the first coil.
    #[arg(long)]
    pub coil: Option<String>,
}

#[derive(Debug, Parser)]
#[command(name = "meander-wpt", version, about = "Meander coil field and wireless link analysis")]
struct Cli {
    #[command(subcommand)]
    sub: Sub,
}

fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::validation("--grid", format!("expected NUxNV, got `{s}`"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let nu: usize = a.trim().parse().map_err(|_| bad())?;
    let nv: usize = b.trim().parse().map_err(|_| bad())?;
    if nu == 0 || nv == 0 {
        return Err(bad());
    }
    Ok((nu, nv))
}

fn parse_threads(s: &str) -> Result<Option<usize>> {
    if s == "auto" {
        return Ok(None);
    }
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(Some(n)),
        _ => Err(Error::validation("--threads", format!("expected a positive integer or `auto`, got `{s}`"))),
    }
}

/// In-plane basis for a plane with unit normal `n`; (x, y) for the z axis.
fn plane_axes(n: Vec3) -> (Vec3, Vec3) {
    let mut u = Vec3::X - n * n.dot(Vec3::X);
    if u.norm() < 1e-6 {
        u = Vec3::Y - n * n.dot(Vec3::Y);
    }
    let u = u.normalized().expect("non-degenerate");
    (u, n.cross(u))
}

struct Ctx<'a> {
    args: &'a Args,
    command: Command,
    input: Vec<u8>,
    doc: SceneDocument,
}

struct Emission {
    main: Vec<u8>,
    summary: Option<Vec<u8>>,
    current: Option<f64>,
    notes: Vec<String>,
}

impl Ctx<'_> {
    fn frequency(&self) -> f64 {
        self.args
            .frequency
            .or_else(|| self.doc.link.as_ref().and_then(|l| l.frequency))
            .unwrap_or(DEFAULT_FREQUENCY)
    }

    fn coil_name(&self, section: Option<&str>) -> String {
        self.args
            .coil
            .clone()
            .or_else(|| section.map(str::to_string))
            .unwrap_or_else(|| self.doc.coils[0].name.clone())
    }

    fn coil(&self, name: &str) -> Result<WirePath> {
        if !self.doc.coils.iter().any(|c| c.name == name) {
            return Err(Error::validation("--coil", format!("no coil named `{name}`")));
        }
        self.doc.build_coil(name)
    }

    fn geom(&self) -> Result<Emission> {
        let path = self.coil(&self.coil_name(None))?;
        Ok(Emission {
            main: path.to_csv().into_bytes(),
            summary: None,
            current: None,
            notes: vec![],
        })
    }

    fn field(&self) -> Result<Emission> {
        let sec = self.doc.field.as_ref();
        let path = self.coil(&self.coil_name(sec.map(|s| s.coil.as_str())))?;
        let normal = path.plane_normal();
        let (du, dv) = plane_axes(normal);
        let (mut nu, mut nv) = (
            sec.and_then(|s| s.nu).unwrap_or(DEFAULT_GRID),
            sec.and_then(|s| s.nv).unwrap_or(DEFAULT_GRID),
        );
        if let Some(g) = &self.args.grid {
            (nu, nv) = parse_grid(g)?;
        }
        let u = sec.and_then(|s| s.axis_u).unwrap_or(du);
        let v = sec.and_then(|s| s.axis_v).unwrap_or(dv);
        let spacing = match sec.and_then(|s| s.spacing) {
            Some(s) => s,
            None => {
                let (lo, hi) = path.bounding_box();
                1.2 * (hi - lo).norm() / (nu.max(nv).max(2) - 1) as f64
            }
        };
        let center = sec
            .and_then(|s| s.center)
            .unwrap_or_else(|| path.areal_centroid() + normal * SKIN_STANDOFF);
        let current = self.args.current.or(sec.and_then(|s| s.current)).unwrap_or(1.0);
        let grid = GridSpec::centered(center, u, v, nu, nv, spacing);
        let field = sample_plane(&path, current, &grid)?;
        Ok(Emission {
            main: field.to_csv().into_bytes(),
            summary: None,
            current: Some(current),
            notes: vec![format!("grid {nu}x{nv}, row-major index = iv*nu + iu")],
        })
    }

    fn profile(&self) -> Result<Emission> {
        let sec = self.doc.profile.as_ref();
        let path = self.coil(&self.coil_name(sec.map(|s| s.coil.as_str())))?;
        let depths: Vec<f64> = match sec {
            Some(s) => s.depths.clone(),
            None => (1..=40).map(|i| i as f64 * 0.005).collect(),
        };
        let current = self.args.current.or(sec.and_then(|s| s.current)).unwrap_or(1.0);
        let profile = decay_profile(&path, current, &depths)?;
        Ok(Emission {
            main: profile.to_csv().into_bytes(),
            summary: None,
            current: Some(current),
            notes: vec!["depths measured from the areal centroid along the plane normal".into()],
        })
    }

    fn link(&self) -> Result<Emission> {
        let scenario = self.doc.link_scenario(self.args.frequency)?;
        let result = scenario.evaluate_flat()?;
        Ok(Emission {
            main: to_json_bytes(&result),
            summary: None,
            current: None,
            notes: vec![],
        })
    }

    fn sweep(&self) -> Result<Emission> {
        let mut spec = self
            .doc
            .sweep
            .clone()
            .ok_or_else(|| Error::validation("sweep", "missing"))?;
        spec.retune |= self.args.retune;
        let scenario = self.doc.link_scenario(self.args.frequency)?;
        let rows = run_sweep(&scenario, &spec)?;
        let mut csv = format!("{}\n", SweepRow::CSV_HEADER);
        for r in &rows {
            csv.push_str(&r.csv_line());
            csv.push('\n');
        }
        let mut summary = json!({
            "parameter": spec.parameter.name(),
            "retune": spec.retune,
            "rows": rows,
            "input_hash": crate::output::content_hash(&self.input),
        });
        let mut notes = vec![];
        if spec.parameter == SweepParameter::BendRadius {
            notes.push("bend radii 0.4, 0.2 and 0.1 m stand in for torso, thigh and arm".into());
            if let Some(flat) = rows.iter().find(|r| r.value.is_infinite()) {
                let dev = rows
                    .iter()
                    .map(|r| (r.eta_max - flat.eta_max).abs() / flat.eta_max)
                    .fold(0.0, f64::max);
                summary["thresholds"] = json!({
                    "max_relative_eta_deviation": dev,
                    "limit": BEND_DEVIATION_LIMIT,
                    "passed": dev < BEND_DEVIATION_LIMIT,
                });
            }
        }
        Ok(Emission {
            main: csv.into_bytes(),
            summary: Some(to_json_bytes(&summary)),
            current: None,
            notes,
        })
    }

    fn compare(&self) -> Result<Emission> {
        let sec = self
            .doc
            .compare
            .as_ref()
            .ok_or_else(|| Error::validation("compare", "missing"))?;
        let geom = |name: &str| -> Result<GeometrySpec> { Ok(self.doc.coil_spec(name)?.geometry) };
        let (GeometrySpec::Meander(m), GeometrySpec::Helix(h)) = (geom(&sec.meander)?, geom(&sec.helix)?) else {
            return Err(Error::validation("compare", "needs a meander and a helix"));
        };
        let c = confinement_compare(&m, &h, &sec.depths, sec.shallow, sec.deep)?;
        Ok(Emission {
            main: to_json_bytes(&c),
            summary: None,
            current: Some(1.0),
            notes: vec![],
        })
    }

    fn optimize(&self) -> Result<Emission> {
        let spec = self
            .doc
            .optimize
            .clone()
            .ok_or_else(|| Error::validation("optimize", "missing"))?;
        let scenario = self.doc.link_scenario(self.args.frequency)?;
        let r = optimize_trace(&scenario, &spec)?;
        let summary = json!({
            "objective": r.objective,
            "best": r.best,
            "best_value": r.best_value,
            "evaluations": r.log.len(),
            "input_hash": crate::output::content_hash(&self.input),
        });
        Ok(Emission {
            main: r.log_csv().into_bytes(),
            summary: Some(to_json_bytes(&summary)),
            current: None,
            notes: vec![],
        })
    }

    fn metadata(&self, e: &Emission) -> Result<Metadata> {
        let f = self.frequency();
        let mut m = Metadata::new(
            self.command.name(),
            &self.args.scene.display().to_string(),
            &self.input,
            &e.main,
            f,
        );
        let a = self.args;
        if a.retune {
            m.flags.insert("retune".into(), Value::Bool(true));
        }
        if let Some(g) = &a.grid {
            m.flags.insert("grid".into(), Value::String(g.clone()));
        }
        if let Some(c) = a.current {
            m.flags.insert("current".into(), json!(c));
        }
        if let Some(fr) = a.frequency {
            m.flags.insert("frequency".into(), json!(fr));
        }
        if let Some(c) = &a.coil {
            m.flags.insert("coil".into(), Value::String(c.clone()));
        }
        m.current = e.current;
        m.materials = self
            .doc
            .conductors()?
            .into_iter()
            .map(|(k, c)| (k, MaterialRecord::new(&c, f)))
            .collect();
        m.notes = e.notes.clone();
        Ok(m)
    }
}

/// Runs one command; writes `--out`, its sidecar and any summary.
pub fn run(command: Command, args: &Args) -> Result<()> {
    let input = read_file(&args.scene)?;
    let text = std::str::from_utf8(&input)
        .map_err(|_| Error::validation("", "scene is not UTF-8"))?;
    let doc = SceneDocument::from_json(text)?;
    if let Some(f) = args.frequency {
        if !(f > 0.0 && f.is_finite()) {
            return Err(Error::validation("--frequency", "must be positive"));
        }
    }
    if let Some(c) = args.current {
        if !c.is_finite() {
            return Err(Error::validation("--current", "must be finite"));
        }
    }
    let ctx = Ctx {
        args,
        command,
        input,
        doc,
    };
    let emission = match command {
        Command::Geom => ctx.geom(),
        Command::Field => ctx.field(),
        Command::Profile => ctx.profile(),
        Command::Link => ctx.link(),
        Command::Sweep => ctx.sweep(),
        Command::Compare => ctx.compare(),
        Command::Optimize => ctx.optimize(),
    }?;
    let meta = ctx.metadata(&emission)?;
    write_file(&args.out, &emission.main)?;
    if let Some(s) = &emission.summary {
        write_file(&summary_path(&args.out), s)?;
    }
    write_file(&sidecar_path(&args.out), &to_json_bytes(&meta))?;
    Ok(())
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    message: String,
    exit_code: i32,
    #[serde(flatten)]
    detail: Value,
}

/// The single-line JSON object written to standard error on failure.
pub fn error_json(e: &Error) -> String {
    let detail = match e {
        Error::Validation { path, .. } => json!({ "path": path }),
        Error::Parameter { name, .. } => json!({ "path": name }),
        Error::Proximity {
            point_index,
            segment,
            distance,
            radius,
        } => json!({ "point_index": point_index, "segment": segment, "distance": distance, "radius": radius }),
        Error::Overlap {
            segment_a,
            segment_b,
            distance,
            clearance,
        } => json!({ "segment_a": segment_a, "segment_b": segment_b, "distance": distance, "clearance": clearance }),
        Error::Io { path, .. } => json!({ "file": path }),
        _ => json!({}),
    };
    let report = ErrorReport {
        error: e.kind(),
        message: e.to_string(),
        exit_code: e.exit_code(),
        detail,
    };
    serde_json::to_string(&report).expect("serializable")
}

fn dispatch(sub: &Sub) -> (Command, &Args) {
    match sub {
        Sub::Geom(a) => (Command::Geom, a),
        Sub::Field(a) => (Command::Field, a),
        Sub::Profile(a) => (Command::Profile, a),
        Sub::Link(a) => (Command::Link, a),
        Sub::Sweep(a) => (Command::Sweep, a),
        Sub::Compare(a) => (Command::Compare, a),
        Sub::Optimize(a) => (Command::Optimize, a),
    }
}

fn run_parsed(cli: &Cli) -> Result<()> {
    let (command, args) = dispatch(&cli.sub);
    match parse_threads(&args.threads)? {
        None => run(command, args),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Configuration(format!("thread pool: {e}")))?
            .install(|| run(command, args)),
    }
}

/// Parses `args` (including the program name), runs, and returns the exit
/// status. Errors go to standard error as one JSON object.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                return 0;
            }
            let err = Error::validation("arguments", e.render().to_string().trim().to_string());
            eprintln!("{}", error_json(&err));
            return err.exit_code();
        }
    };
    match run_parsed(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            e.exit_code()
        }
    }
}

/// Re-runs the command recorded in a sidecar, writing to `out`.
pub fn rerun_from_sidecar(sidecar: &Path, out: &Path) -> Result<()> {
    let bytes = read_file(sidecar)?;
    let meta: Value = serde_json::from_slice(&bytes)
        .map_err(|e| Error::validation("", format!("sidecar is not valid JSON: {e}")))?;
    let command = meta["command"]
        .as_str()
        .and_then(|c| Command::from_str(c, false).ok())
        .ok_or_else(|| Error::validation("command", "missing or unknown"))?;
    let scene = meta["scene"]
        .as_str()
        .ok_or_else(|| Error::validation("scene", "missing"))?;
    let flags = &meta["flags"];
    let args = Args {
        scene: PathBuf::from(scene),
        out: out.to_path_buf(),
        threads: "auto".into(),
        retune: flags["retune"].as_bool().unwrap_or(false),
        grid: flags["grid"].as_str().map(str::to_string),
        current: flags["current"].as_f64(),
        frequency: flags["frequency"].as_f64(),
        coil: flags["coil"].as_str().map(str::to_string),
    };
    run(command, &args)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_flag() {
        assert_eq!(parse_grid("100x80").unwrap(), (100, 80));
        assert!(parse_grid("100").is_err());
        assert!(parse_grid("0x3").is_err());
    }

    #[test]
    fn threads_flag() {
        assert_eq!(parse_threads("auto").unwrap(), None);
        assert_eq!(parse_threads("8").unwrap(), Some(8));
        assert!(parse_threads("0").is_err());
    }

    #[test]
    fn error_json_is_one_line() {
        let e = Error::Proximity {
            point_index: 7,
            segment: 3,
            distance: 1e-4,
            radius: 1e-3,
        };
        let s = error_json(&e);
        assert!(!s.contains('\n'));
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["point_index"], 7);
        assert_eq!(v["segment"], 3);
        assert_eq!(v["exit_code"], 2);
    }

    #[test]
    fn bad_arguments_exit_one() {
        assert_eq!(main_with_args(["meander-wpt", "link", "--bogus"]), 1);
    }
}
