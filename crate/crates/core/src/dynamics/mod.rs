//! The sigma-averaged nonlinearity and the interaction-picture RK4 stepper.

mod nonlinearity;
mod params;
mod stepper;

pub use nonlinearity::{dmnls_nonlinearity, rhs_interaction_picture};
pub use params::{ModelParams, Sign, DEFAULT_SIGMA_NODES};
pub use stepper::{evolve, BlowupReason, Checkpoint, RunStatus, StepStats, StepperConfig, Trajectory};

pub(crate) use nonlinearity::{abs_pow, SigmaOperator};
