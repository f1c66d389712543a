//! Magnetic field, inductance and conductor loss on discretized wire paths.
//!
//! All routines use the magneto-quasi-static approximation: free-space
//! permeability, no displacement current, no surrounding media.

mod biot_savart;
mod conductor;
mod neumann;
mod quadrature;

pub use biot_savart::{b_field_at, FieldSample, FieldSource};
pub use conductor::{ac_resistance, skin_depth, Conductor};
pub use neumann::{
    min_path_distance, mutual_inductance, segment_self_inductance, self_inductance,
    ADAPTIVE_TOLERANCE,
};
