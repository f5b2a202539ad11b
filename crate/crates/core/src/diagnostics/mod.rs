//! Monitored quantities along trajectories and the checks built on them.

mod fit;
mod pce;
mod probe;
mod profile;
mod scattering;
mod series;
mod spacetime;
mod symmetry;

pub use fit::{decay_fit, japanese_bracket, loglog_fit, DecayQuantity, FitResult, MIN_FIT_POINTS};
pub use pce::{compare_variants, pce_identity_check, CoefficientVariant, PceComparison, PceReport, MAX_SPACING};
pub use probe::{nonscattering_probe, ProbeReport};
pub use profile::{asymptotic_profile_error, ProfileReport};
pub use scattering::{scattering_profile, CauchySeries, ScatteringNorm, ScatteringReport};
pub(crate) use series::lp_integral;
pub use series::{record, record_field, DiagnosticsRecord, DiagnosticsTimeSeries, COLUMNS};
pub use spacetime::{spacetime_accumulation, spacetime_norm, SigmaMode};
pub use symmetry::{reversal_map, time_reversal_check, ReversalReport};
