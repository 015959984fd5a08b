//! Post-processing of trajectories, spectra and steady states.

pub mod ansatz;
pub mod collapse;
pub mod fit;
pub mod frequency;
pub mod steady;

use thiserror::Error;

pub use ansatz::{ansatz_total_spin, brute_force_total_spin, ProductAnsatz, BRUTE_FORCE_LIMIT};
pub use collapse::{best_collapse, damping_collapse, CollapseScan};
pub use fit::{fit_exp_amplitude, fit_power_amplitude, gap_scaling, loglog_fit, FitModel, FitParams, FitResult};
pub use frequency::{dominant_frequency, Frequency};
pub use steady::{steadystate_metrics, SteadyStateMetrics};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("insufficient range: {0}")]
    InsufficientRange(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("no spectral peak (max/median = {ratio:.3})")]
    NoPeak { ratio: f64 },
    #[error("N = {n} exceeds the limit {limit}")]
    SizeLimit { n: u32, limit: u32 },
    #[error("{0}")]
    InvalidInput(String),
}
