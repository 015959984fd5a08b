//! Time integration of the mean-field equations.

use serde::{Deserialize, Serialize};

use crate::bloch::{angles_from_bloch, Axis, BlochState};
use crate::meanfield::rhs::{rhs, Mode};
use crate::meanfield::MeanFieldError;
use crate::ode::{dopri5, OdeOptions, OdeStats};
use crate::params::ModelParams;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrateOptions<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub mode: Mode,
}

impl<T: Real> IntegrateOptions<T> {
    pub fn collective(rel_tol: T, abs_tol: T) -> Self {
        Self {
            rel_tol,
            abs_tol,
            mode: Mode::Collective,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }
}

impl<T: Real> Default for IntegrateOptions<T> {
    fn default() -> Self {
        Self::collective(T::lit(1e-9), T::lit(1e-12))
    }
}

/// Sampled solution of the mean-field equations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<BlochState<T>>,
    pub params: ModelParams<T>,
    pub mode: Mode,
}

impl<T: Real> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// One Cartesian component as a `(t, value)` series: 0 = X, 1 = Y, 2 = Z.
    pub fn component(&self, c: usize) -> Vec<(T, T)> {
        self.times
            .iter()
            .zip(&self.states)
            .map(|(&t, s)| (t, s.to_array()[c]))
            .collect()
    }

    /// The polar component of `axis`: Z for the z chart, X for the x chart.
    pub fn polar_component(&self, axis: Axis) -> Vec<(T, T)> {
        match axis {
            Axis::ZPole => self.component(2),
            Axis::XPole => self.component(0),
        }
    }

    /// Largest `| |s| - 1 |` over the samples.
    pub fn max_norm_drift(&self) -> T {
        self.states
            .iter()
            .map(|s| (s.norm() - T::one()).abs())
            .fold(T::zero(), T::max)
    }

    /// `(phi, cos_theta)` of every sample in the chart of `axis`.
    pub fn to_polar(&self, axis: Axis) -> Vec<(T, T)> {
        self.states
            .iter()
            .map(|&s| {
                let p = angles_from_bloch(s, axis);
                (p.phi, p.cos_theta)
            })
            .collect()
    }

    pub fn last(&self) -> Option<BlochState<T>> {
        self.states.last().copied()
    }
}

/// `n + 1` equally spaced times on `[0, t_end]`.
pub fn uniform_times<T: Real>(t_end: T, n: usize) -> Vec<T> {
    let n = n.max(1);
    let dt = t_end / T::from_usize_lossy(n);
    (0..=n)
        .map(|i| {
            if i == n {
                t_end
            } else {
                dt * T::from_usize_lossy(i)
            }
        })
        .collect()
}

/// Integrates from `t = 0` and samples at `sample_times`. No projection onto
/// the sphere is applied.
pub fn integrate<T: Real>(
    params: &ModelParams<T>,
    initial: BlochState<T>,
    sample_times: &[T],
    opts: &IntegrateOptions<T>,
) -> Result<Trajectory<T>, MeanFieldError> {
    let (traj, _) = integrate_with_stats(params, initial, sample_times, opts)?;
    Ok(traj)
}

pub fn integrate_with_stats<T: Real>(
    params: &ModelParams<T>,
    initial: BlochState<T>,
    sample_times: &[T],
    opts: &IntegrateOptions<T>,
) -> Result<(Trajectory<T>, OdeStats), MeanFieldError> {
    let max_tol = T::lit(1e-2);
    if !(opts.rel_tol > T::zero() && opts.rel_tol <= max_tol)
        || !(opts.abs_tol > T::zero() && opts.abs_tol <= max_tol)
    {
        return Err(MeanFieldError::InvalidInput(format!(
            "tolerances must lie in (0, 1e-2], got rel {} abs {}",
            opts.rel_tol, opts.abs_tol
        )));
    }
    match sample_times.last() {
        Some(&t) if t > T::zero() => {}
        _ => {
            return Err(MeanFieldError::InvalidInput(
                "t_end must be positive".into(),
            ))
        }
    }
    if let Mode::Local(0) = opts.mode {
        return Err(MeanFieldError::InvalidInput("N_s must be >= 1".into()));
    }
    let mode = opts.mode;
    let mut times = Vec::with_capacity(sample_times.len());
    let mut states = Vec::with_capacity(sample_times.len());
    let stats = dopri5(
        |_, y: &[T], dy: &mut [T]| {
            let d = rhs(params, BlochState::new(y[0], y[1], y[2]), mode);
            dy[0] = d.dx;
            dy[1] = d.dy;
            dy[2] = d.dz;
        },
        T::zero(),
        &initial.to_array(),
        sample_times,
        &OdeOptions::new(opts.rel_tol, opts.abs_tol),
        |t, y| {
            // duplicate sample times collapse to one entry
            if times.last().is_none_or(|&l| t > l) {
                times.push(t);
                states.push(BlochState::new(y[0], y[1], y[2]));
            }
        },
    )?;
    Ok((
        Trajectory {
            times,
            states,
            params: *params,
            mode,
        },
        stats,
    ))
}
