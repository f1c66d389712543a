use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A numeric parameter is outside its domain.
    #[error("parameter `{name}`: {reason}")]
    Parameter { name: String, reason: String },

    /// The geometry cannot be built or transformed as requested.
    #[error("geometry: {0}")]
    Geometry(String),

    /// An evaluation point or a second conductor sits inside a wire.
    #[error("point {point_index} is within the wire radius of segment {segment}: distance {distance:.3e} m <= {radius:.3e} m")]
    Proximity {
        point_index: usize,
        segment: usize,
        distance: f64,
        radius: f64,
    },

    /// Two conductors come closer than their wire radii allow.
    #[error("segment {segment_a} of the first path and segment {segment_b} of the second are {distance:.3e} m apart (clearance {clearance:.3e} m)")]
    Overlap {
        segment_a: usize,
        segment_b: usize,
        distance: f64,
        clearance: f64,
    },

    #[error("configuration: {0}")]
    Configuration(String),

    #[error("analysis: {0}")]
    Analysis(String),

    /// Scene validation failure; `path` is a dotted path into the document.
    #[error("invalid scene at `{path}`: {message}")]
    Validation { path: String, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name: name.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Short machine-readable category used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parameter { .. } => "parameter",
            Error::Geometry(_) => "geometry",
            Error::Proximity { .. } | Error::Overlap { .. } => "proximity",
            Error::Configuration(_) => "configuration",
            Error::Analysis(_) => "analysis",
            Error::Validation { .. } => "validation",
            Error::Io { .. } => "io",
        }
    }

    /// Process exit status: 1 validation, 2 computation, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation { .. } | Error::Parameter { .. } | Error::Configuration(_) => 1,
            Error::Geometry(_)
            | Error::Proximity { .. }
            | Error::Overlap { .. }
            | Error::Analysis(_) => 2,
            Error::Io { .. } => 3,
        }
    }
}
