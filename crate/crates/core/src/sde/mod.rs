//! Stratonovich integration of the cylinder SDE, its tangent flow, the
//! reduced linear systems and the projective angle process.

mod coupling;
mod noise;
pub(crate) mod state;
pub(crate) mod step;
mod trajectory;

pub use coupling::{CouplingKind, CouplingValue, KinkSign, PhaseCoupling, MAX_DRIVERS};
pub use noise::{Increments, NoiseStream};
pub use state::{CylinderState, Tangent, RENORM_BOUNDS, RENORM_INTERVAL};
pub use step::{
    phase_midpoint, step_phi, step_reduced_linear, step_system, wrap_phase, wrap_projective,
    LinearCoordinates,
};
pub use trajectory::{simulate_trajectory, TrajectoryRecord, TRAJECTORY_HEADER};

/// Default step size for estimation runs.
pub const DEFAULT_DT: f64 = 1e-3;
