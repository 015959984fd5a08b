//! Mean-field and exact finite-N dynamics of p,q-interacting collective spin
//! models with collective or local pumping and decay.
//!
//! The mean-field and analysis layers are generic over [`Real`] (`f32` or
//! `f64`); exact density-matrix code runs in `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod bloch;
pub mod dicke;
pub mod export;
pub mod meanfield;
pub mod ode;
pub mod params;
pub mod scalar;

use thiserror::Error;

pub use bloch::{angles_from_bloch, bloch_from_angles, Axis, BlochState, PolarState};
pub use params::{validate_params, ModelParams, ParamError, StringLength};
pub use scalar::Real;

pub type Params64 = ModelParams<f64>;
pub type Params32 = ModelParams<f32>;
pub type Bloch64 = BlochState<f64>;
pub type Bloch32 = BlochState<f32>;
pub type Polar64 = PolarState<f64>;
pub type Trajectory64 = meanfield::Trajectory<f64>;
pub type Trajectory32 = meanfield::Trajectory<f32>;
pub type FixedPoint64 = meanfield::FixedPoint<f64>;
pub type FixedPoint32 = meanfield::FixedPoint<f32>;
pub type FitResult64 = analysis::FitResult<f64>;
pub type FitResult32 = analysis::FitResult<f32>;

/// Any error raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    MeanField(#[from] meanfield::MeanFieldError),
    #[error(transparent)]
    Dicke(#[from] dicke::DickeError),
    #[error(transparent)]
    Analysis(#[from] analysis::AnalysisError),
    #[error(transparent)]
    Ode(#[from] ode::OdeError),
}
