//! Python bindings. Errors surface as `MeanderError` (or `OSError` for file
//! problems) carrying the same message the CLI prints.

use meander_wpt::fieldmaps::{decay_profile, sample_plane, GridSpec};
use meander_wpt::geometry::{
    bend_around_cylinder, build_helix, build_loop, build_meander, resample, HelixSpec, LoopSpec,
    MeanderSpec,
};
use meander_wpt::link::link_efficiency as core_link_efficiency;
use meander_wpt::magnetics::{ac_resistance, b_field_at, mutual_inductance, self_inductance, skin_depth};
use meander_wpt::scenario::LinkScenario as CoreScenario;
use meander_wpt::{Conductor as CoreConductor, Error, Vec3, WirePath as CorePath};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyOSError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;
use serde_json::Value;

create_exception!(meanderwpt, MeanderError, PyException);

fn err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        _ => MeanderError::new_err(format!("{}: {e}", e.kind())),
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    MeanderError::new_err(format!("validation: {e}"))
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    match v {
        Value::Null => Ok(py.None().into_bound(py)),
        Value::Bool(b) => b.into_bound_py_any(py),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_bound_py_any(py),
            None => n.as_f64().unwrap_or(f64::NAN).into_bound_py_any(py),
        },
        Value::String(s) => s.into_bound_py_any(py),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            Ok(list.into_any())
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            Ok(dict.into_any())
        }
    }
}

fn serialize<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serde_json::to_value(value).map_err(json_err)?)
}

fn v3(p: [f64; 3]) -> Vec3 {
    Vec3::from(p)
}

/// Conductor material: bulk resistivity or a fixed resistance per length.
#[pyclass(name = "Conductor", module = "meanderwpt", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Conductor {
    inner: CoreConductor,
}

#[pymethods]
impl Conductor {
    #[staticmethod]
    fn copper() -> Self {
        Conductor { inner: CoreConductor::copper() }
    }

    #[staticmethod]
    fn liquid_metal() -> Self {
        Conductor { inner: CoreConductor::liquid_metal() }
    }

    #[staticmethod]
    fn yarn() -> Self {
        Conductor { inner: CoreConductor::yarn() }
    }

    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        CoreConductor::preset(name)
            .map(|inner| Conductor { inner })
            .ok_or_else(|| MeanderError::new_err(format!("validation: unknown conductor `{name}`")))
    }

    #[staticmethod]
    fn with_resistivity(name: &str, resistivity: f64) -> PyResult<Self> {
        let inner = CoreConductor::with_resistivity(name, resistivity);
        inner.validate().map_err(err)?;
        Ok(Conductor { inner })
    }

    #[staticmethod]
    fn with_resistance_per_length(name: &str, ohms_per_meter: f64) -> PyResult<Self> {
        let inner = CoreConductor::with_resistance_per_length(name, ohms_per_meter);
        inner.validate().map_err(err)?;
        Ok(Conductor { inner })
    }

    #[getter]
    fn name(&self) -> &str {
        &self.inner.name
    }

    /// AC resistance of `path` at `frequency`, Ω.
    fn ac_resistance(&self, path: &WirePath, frequency: f64) -> PyResult<f64> {
        ac_resistance(&path.inner, &self.inner, frequency).map_err(err)
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        serialize(py, &self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Conductor({:?})", self.inner.name)
    }
}

/// Polyline wire centerline with a circular cross-section.
#[pyclass(name = "WirePath", module = "meanderwpt", frozen, skip_from_py_object)]
#[derive(Clone)]
struct WirePath {
    inner: CorePath,
}

#[pymethods]
impl WirePath {
    #[new]
    #[pyo3(signature = (vertices, wire_radius, closed = false))]
    fn new(vertices: Vec<[f64; 3]>, wire_radius: f64, closed: bool) -> PyResult<Self> {
        let inner = CorePath::new(vertices.into_iter().map(v3).collect(), wire_radius, closed).map_err(err)?;
        Ok(WirePath { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (footprint_x, footprint_y, pitch, wire_radius, corner_samples = 16))]
    fn meander(footprint_x: f64, footprint_y: f64, pitch: f64, wire_radius: f64, corner_samples: usize) -> PyResult<Self> {
        let spec = MeanderSpec {
            footprint_x,
            footprint_y,
            pitch,
            wire_radius,
            corner_samples,
        };
        Ok(WirePath { inner: build_meander(&spec).map_err(err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (radius, segments, wire_radius, center = [0.0; 3], normal = [0.0, 0.0, 1.0]))]
    fn circle(radius: f64, segments: usize, wire_radius: f64, center: [f64; 3], normal: [f64; 3]) -> PyResult<Self> {
        let spec = LoopSpec {
            radius,
            center: v3(center),
            normal: v3(normal),
            segments,
            wire_radius,
        };
        Ok(WirePath { inner: build_loop(&spec).map_err(err)? })
    }

    /// Accepts the same fields as a scene file's `helix` geometry.
    #[staticmethod]
    fn helix(py: Python<'_>, spec: Bound<'_, PyDict>) -> PyResult<Self> {
        let json = py.import("json")?.call_method1("dumps", (spec,))?.extract::<String>()?;
        let spec: HelixSpec = serde_json::from_str(&json).map_err(json_err)?;
        Ok(WirePath { inner: build_helix(&spec).map_err(err)? })
    }

    #[getter]
    fn vertices(&self) -> Vec<[f64; 3]> {
        self.inner.vertices().iter().map(|&v| v.into()).collect()
    }

    #[getter]
    fn wire_radius(&self) -> f64 {
        self.inner.wire_radius()
    }

    #[getter]
    fn closed(&self) -> bool {
        self.inner.is_closed()
    }

    #[getter]
    fn length(&self) -> f64 {
        self.inner.length()
    }

    fn __len__(&self) -> usize {
        self.inner.segment_count()
    }

    fn translated(&self, offset: [f64; 3]) -> Self {
        WirePath { inner: self.inner.translated(v3(offset)) }
    }

    fn resampled(&self, max_segment_length: f64) -> PyResult<Self> {
        Ok(WirePath { inner: resample(&self.inner, max_segment_length).map_err(err)? })
    }

    /// Wraps the planar path isometrically around a cylinder whose axis runs
    /// along `axis` in the path's plane.
    #[pyo3(signature = (radius, axis = [1.0, 0.0]))]
    fn bent(&self, radius: f64, axis: [f64; 2]) -> PyResult<Self> {
        Ok(WirePath { inner: bend_around_cylinder(&self.inner, radius, axis).map_err(err)? })
    }

    /// B at `point` for `current` amperes, tesla.
    #[pyo3(signature = (point, current = 1.0))]
    fn field_at(&self, point: [f64; 3], current: f64) -> PyResult<[f64; 3]> {
        Ok(b_field_at(&self.inner, current, v3(point)).map_err(err)?.into())
    }

    fn self_inductance(&self, py: Python<'_>) -> PyResult<f64> {
        py.detach(|| self_inductance(&self.inner)).map_err(err)
    }

    fn mutual_inductance(&self, py: Python<'_>, other: &WirePath) -> PyResult<f64> {
        py.detach(|| mutual_inductance(&self.inner, &other.inner)).map_err(err)
    }

    /// Returns `(depths, magnitudes)` along the plane normal from the areal
    /// centroid.
    #[pyo3(signature = (depths, current = 1.0))]
    fn decay_profile(&self, py: Python<'_>, depths: Vec<f64>, current: f64) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let p = py.detach(|| decay_profile(&self.inner, current, &depths)).map_err(err)?;
        Ok((p.depths, p.magnitudes))
    }

    /// Row-major list of `(x, y, z, Bx, By, Bz)` over a plane.
    #[pyo3(signature = (center, axis_u, axis_v, nu, nv, spacing, current = 1.0))]
    #[allow(clippy::too_many_arguments)]
    fn field_grid(
        &self,
        py: Python<'_>,
        center: [f64; 3],
        axis_u: [f64; 3],
        axis_v: [f64; 3],
        nu: usize,
        nv: usize,
        spacing: f64,
        current: f64,
    ) -> PyResult<Vec<[f64; 6]>> {
        let grid = GridSpec::centered(v3(center), v3(axis_u), v3(axis_v), nu, nv, spacing);
        let map = py.detach(|| sample_plane(&self.inner, current, &grid)).map_err(err)?;
        Ok(map
            .samples
            .iter()
            .map(|s| [s.position.x, s.position.y, s.position.z, s.b.x, s.b.y, s.b.z])
            .collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "WirePath(segments={}, length={:.4}, wire_radius={}, closed={})",
            self.inner.segment_count(),
            self.inner.length(),
            self.inner.wire_radius(),
            self.inner.is_closed()
        )
    }
}

/// Two resonant coils at a fixed separation, optionally bent together.
#[pyclass(name = "LinkScenario", module = "meanderwpt", frozen, skip_from_py_object)]
struct LinkScenario {
    inner: CoreScenario,
}

#[pymethods]
impl LinkScenario {
    /// The shipped reference meander link with both coils in `conductor`.
    #[staticmethod]
    fn reference(conductor: &Conductor) -> Self {
        LinkScenario { inner: meander_wpt::scenario::reference_link(conductor.inner.clone()) }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner: CoreScenario = serde_json::from_str(text).map_err(json_err)?;
        inner.validate().map_err(err)?;
        Ok(LinkScenario { inner })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&self.inner).map_err(json_err)
    }

    fn with_conductor(&self, conductor: &Conductor) -> Self {
        LinkScenario { inner: self.inner.with_conductor(&conductor.inner) }
    }

    #[pyo3(signature = (pitch = None, wire_radius = None))]
    fn with_trace(&self, pitch: Option<f64>, wire_radius: Option<f64>) -> PyResult<Self> {
        Ok(LinkScenario { inner: self.inner.with_trace(pitch, wire_radius).map_err(err)? })
    }

    /// Link figures as a dict. `bend_radius=None` evaluates the flat pair.
    #[pyo3(signature = (bend_radius = None, retune = false))]
    fn evaluate<'py>(&self, py: Python<'py>, bend_radius: Option<f64>, retune: bool) -> PyResult<Bound<'py, PyAny>> {
        let result = py
            .detach(|| match bend_radius {
                None => self.inner.evaluate_flat(),
                Some(r) => self.inner.evaluate_bent(r, retune),
            })
            .map_err(err)?;
        serialize(py, &result)
    }

    /// `(tx, rx)` paths as evaluated at `bend_radius` (None for flat).
    #[pyo3(signature = (bend_radius = None))]
    fn paths(&self, bend_radius: Option<f64>) -> PyResult<(WirePath, WirePath)> {
        let (tx, rx) = self.inner.paths(bend_radius.unwrap_or(f64::INFINITY)).map_err(err)?;
        Ok((WirePath { inner: tx }, WirePath { inner: rx }))
    }
}

/// Maximum link efficiency for coupling `k` and quality factors `q1`, `q2`.
#[pyfunction]
fn link_efficiency(k: f64, q1: f64, q2: f64) -> PyResult<f64> {
    core_link_efficiency(k, q1, q2).map_err(err)
}

#[pyfunction]
#[pyo3(name = "skin_depth", signature = (resistivity, frequency, relative_permeability = 1.0))]
fn py_skin_depth(resistivity: f64, frequency: f64, relative_permeability: f64) -> f64 {
    skin_depth(resistivity, frequency, relative_permeability)
}

/// Runs the command-line tool in-process and returns its exit status, e.g.
/// `run_cli(["link", "--scene", "s.json", "--out", "l.json"])`.
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> i32 {
    py.detach(|| {
        meander_wpt::cli::main_with_args(std::iter::once("meander-wpt".to_string()).chain(args))
    })
}

#[pymodule]
fn meanderwpt(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("MeanderError", m.py().get_type::<MeanderError>())?;
    m.add("MU0", meander_wpt::MU0)?;
    m.add("DEFAULT_FREQUENCY", meander_wpt::DEFAULT_FREQUENCY)?;
    m.add_class::<Conductor>()?;
    m.add_class::<WirePath>()?;
    m.add_class::<LinkScenario>()?;
    m.add_function(wrap_pyfunction!(link_efficiency, m)?)?;
    m.add_function(wrap_pyfunction!(py_skin_depth, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
