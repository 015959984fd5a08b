//! Phase portraits: many trajectories in one polar chart.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{Axis, PolarState};
use crate::meanfield::fixed::{find_fixed_points, FixedPoint};
use crate::meanfield::integrate::{integrate, uniform_times, IntegrateOptions, Trajectory};
use crate::meanfield::MeanFieldError;
use crate::params::ModelParams;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortraitTrace<T> {
    pub seed: PolarState<T>,
    pub times: Vec<T>,
    /// `(phi, cos_theta)` in the portrait chart.
    pub points: Vec<(T, T)>,
    pub trajectory: Trajectory<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortraitData<T> {
    pub axis: Axis,
    /// One entry per seed, in seed order. Failed integrations stay in place.
    pub traces: Vec<Result<PortraitTrace<T>, String>>,
    pub fixed_points: Vec<FixedPoint<T>>,
}

impl<T: Real> PortraitData<T> {
    pub fn ok_traces(&self) -> impl Iterator<Item = &PortraitTrace<T>> {
        self.traces.iter().filter_map(|t| t.as_ref().ok())
    }
}

/// Seeds on a `n_phi x n_cos` cell-centred grid of the chart `axis`.
pub fn seed_grid<T: Real>(n_phi: usize, n_cos: usize, axis: Axis) -> Vec<PolarState<T>> {
    let mut out = Vec::with_capacity(n_phi * n_cos);
    for i in 0..n_phi {
        let phi = T::TAU() * (T::from_usize_lossy(i) + T::lit(0.5)) / T::from_usize_lossy(n_phi);
        for j in 0..n_cos {
            let c = -T::one()
                + T::lit(2.0) * (T::from_usize_lossy(j) + T::lit(0.5)) / T::from_usize_lossy(n_cos);
            out.push(PolarState::new(phi, c, axis));
        }
    }
    out
}

/// Integrates every seed in parallel over `[0, t_end]` with `samples`
/// intervals and attaches the classified fixed points.
pub fn phase_portrait<T: Real>(
    params: &ModelParams<T>,
    seeds: &[PolarState<T>],
    t_end: T,
    samples: usize,
    axis: Axis,
    opts: &IntegrateOptions<T>,
) -> Result<PortraitData<T>, MeanFieldError> {
    if seeds.is_empty() {
        return Err(MeanFieldError::InvalidInput("no seeds".into()));
    }
    let times = uniform_times(t_end, samples);
    let traces = seeds
        .par_iter()
        .map(|seed| {
            let tr = integrate(params, seed.to_bloch(), &times, opts).map_err(|e| e.to_string())?;
            Ok(PortraitTrace {
                seed: *seed,
                times: tr.times.clone(),
                points: tr.to_polar(axis),
                trajectory: tr,
            })
        })
        .collect();
    Ok(PortraitData {
        axis,
        traces,
        fixed_points: find_fixed_points(params, opts.mode),
    })
}
