//! Scripted studies over link scenarios: deformation and parameter sweeps,
//! material comparison, meander-versus-helix confinement and the trace
//! optimizer.

mod compare;
mod optimize;
mod sweep;

pub use compare::{confinement_compare, material_compare, ConfinementComparison, MaterialRow};
pub use optimize::{
    objective_value, optimize_trace, Evaluation, Objective, OptimizationResult, OptimizeSpec,
    Stage,
};
pub use sweep::{deformation_sweep, run_sweep, SweepParameter, SweepRow, SweepSpec};
