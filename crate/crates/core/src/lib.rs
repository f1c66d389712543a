//! Magneto-quasi-static simulation of planar meander coils and resonant
//! inductive links.
//!
//! The crate is organized bottom-up:
//!
//! * [`geometry`] builds and deforms coil centerlines ([`WirePath`]).
//! * [`magnetics`] evaluates Biot–Savart fields, Neumann inductances and
//!   skin-effect resistance on those paths.
//! * [`link`] turns a pair of coils into a tuned series-resonant link and
//!   reports coupling, quality factors and maximum efficiency.
//! * [`fieldmaps`] samples fields over planes and depth lines and quantifies
//!   how tightly a coil keeps its field near its own surface.
//! * [`experiments`] scripts deformation sweeps, material and topology
//!   comparisons and the trace optimizer.
//! * [`scenario`] describes coils and links; [`scene`] and [`cli`] expose
//!   all of it over JSON scene files.

pub mod error;
pub mod cli;
pub mod experiments;
pub mod fieldmaps;
pub mod geometry;
pub mod link;
pub mod magnetics;
pub mod output;
pub mod scenario;
pub mod scene;
pub mod vec3;

pub use error::{Error, Result};
pub use geometry::{HelixSpec, LoopSpec, MeanderSpec, WirePath};
pub use magnetics::Conductor;
pub use vec3::Vec3;

/// Vacuum permeability, H/m (CODATA 2018).
pub const MU0: f64 = 1.256_637_062_12e-6;

/// μ0/4π, the prefactor shared by Biot–Savart and Neumann sums.
pub const MU0_OVER_4PI: f64 = MU0 / (4.0 * std::f64::consts::PI);

/// Default operating frequency of the resonant link, Hz.
pub const DEFAULT_FREQUENCY: f64 = 13.56e6;
