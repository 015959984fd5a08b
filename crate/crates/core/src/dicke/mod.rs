//! Exact dynamics in the maximal-spin sector `S = N/2`.
//!
//! Basis states are ordered by decreasing `m = S, S-1, ..., -S`; index `i`
//! holds `m = S - i`. Density matrices are stored column-major.

pub mod generator;
pub mod operators;
pub mod spectrum;
pub mod state;
pub mod evolve;

use thiserror::Error;

use crate::ode::OdeError;

pub use evolve::{evolve, EvolveOptions, EvolveResult, EvolveSample, PositivityBreach};
pub use generator::{build_hamiltonian, build_liouvillian, lindblad_rhs, Generator, LiouvillianMatrix, DENSE_LIMIT};
pub use operators::{build_operators, max_abs, DickeOperators};
pub use spectrum::{fidelity, spectrum, steady_state, steady_state_of, SpectrumRecord, SpectrumResult, SteadyState};
pub use state::{coherent_state, expect, purity, DensityMatrix, DensityMatrixRecord, Diagnostics};

/// Largest `N` accepted by [`evolve`].
pub const EVOLVE_LIMIT: u32 = 300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DickeError {
    #[error("{0}")]
    Domain(String),
    #[error("N = {n} exceeds the limit {limit}")]
    SizeLimit { n: u32, limit: u32 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{count} eigenvalues are numerically zero")]
    DegenerateZero { count: usize },
    #[error("evolution failed: {0}")]
    Ode(#[from] OdeError),
    #[error("linear algebra failure: {0}")]
    Linalg(String),
}

pub type Mat = faer::Mat<faer::c64>;
pub use faer::c64;
