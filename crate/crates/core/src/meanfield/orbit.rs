//! Closed-orbit detection from envelope drift.

use serde::{Deserialize, Serialize};

use crate::bloch::Axis;
use crate::meanfield::envelope::envelope;
use crate::meanfield::integrate::Trajectory;
use crate::meanfield::MeanFieldError;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OrbitVerdict {
    Closed,
    SpiralIn,
    SpiralOut,
    Relaxed,
}

impl OrbitVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            OrbitVerdict::Closed => "CLOSED",
            OrbitVerdict::SpiralIn => "SPIRAL_IN",
            OrbitVerdict::SpiralOut => "SPIRAL_OUT",
            OrbitVerdict::Relaxed => "RELAXED",
        }
    }
}

impl std::fmt::Display for OrbitVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitReport<T> {
    pub verdict: OrbitVerdict,
    /// Relative amplitude change per period.
    pub drift: T,
    pub period: T,
    pub peaks_used: usize,
    pub final_amplitude: T,
}

pub const DEFAULT_WINDOW_PERIODS: usize = 20;

const DRIFT_TOL: f64 = 1e-3;
const RELAXED_AMPLITUDE: f64 = 1e-6;

/// Verdict on the polar component of the model's natural chart: Z(t), or
/// X(t) when the ferromagnetic points lie on the x axis.
pub fn detect_orbit<T: Real>(
    traj: &Trajectory<T>,
    window_periods: usize,
) -> Result<OrbitReport<T>, MeanFieldError> {
    let axis = Axis::natural(traj.params.p(), traj.params.q());
    detect_orbit_series(&traj.polar_component(axis), window_periods)
}

/// Same as [`detect_orbit`] on an arbitrary `(t, value)` series.
///
/// The period comes from the first two envelope peaks. The window covers
/// `window_periods` periods from the first peak; the drift is the slope of
/// `ln A` against peak index inside it.
pub fn detect_orbit_series<T: Real>(
    series: &[(T, T)],
    window_periods: usize,
) -> Result<OrbitReport<T>, MeanFieldError> {
    let env = envelope(series);
    let relaxed_amp = T::lit(RELAXED_AMPLITUDE);
    if env.len() < 3 {
        // a flat tail means the motion has died out entirely
        let tail = &series[series.len() - series.len() / 4 - 1..];
        let (lo, hi) = tail
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &(_, v)| {
                (lo.min(v), hi.max(v))
            });
        if !tail.is_empty() && hi - lo < relaxed_amp {
            return Ok(OrbitReport {
                verdict: OrbitVerdict::Relaxed,
                drift: T::zero(),
                period: T::nan(),
                peaks_used: env.len(),
                final_amplitude: (hi - lo) * T::lit(0.5),
            });
        }
        return Err(MeanFieldError::TooShort { peaks: env.len() });
    }
    let period = env[1].0 - env[0].0;
    let t_end = series.last().map(|s| s.0).unwrap_or(T::zero());
    let window_end = env[0].0 + period * T::from_usize_lossy(window_periods.max(2));
    if t_end < window_end {
        return Err(MeanFieldError::TooShort { peaks: env.len() });
    }
    let used: Vec<(T, T)> = env.into_iter().filter(|p| p.0 <= window_end).collect();
    if used.len() < 3 {
        return Err(MeanFieldError::TooShort { peaks: used.len() });
    }
    let final_amplitude = used.last().unwrap().1;
    let n = T::from_usize_lossy(used.len());
    let mean_i = (n - T::one()) * T::lit(0.5);
    let mean_l = used.iter().fold(T::zero(), |s, p| s + p.1.ln()) / n;
    let mut sxy = T::zero();
    let mut sxx = T::zero();
    for (i, p) in used.iter().enumerate() {
        let di = T::from_usize_lossy(i) - mean_i;
        sxy += di * (p.1.ln() - mean_l);
        sxx += di * di;
    }
    let drift = sxy / sxx;
    let tol = T::lit(DRIFT_TOL);
    let verdict = if final_amplitude < relaxed_amp {
        OrbitVerdict::Relaxed
    } else if drift.abs() < tol {
        OrbitVerdict::Closed
    } else if drift < T::zero() {
        OrbitVerdict::SpiralIn
    } else {
        OrbitVerdict::SpiralOut
    };
    Ok(OrbitReport {
        verdict,
        drift,
        period,
        peaks_used: used.len(),
        final_amplitude,
    })
}
