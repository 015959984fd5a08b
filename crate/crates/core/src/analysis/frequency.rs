//! Dominant oscillation frequency of a uniformly sampled series.

use num_complex::Complex;
use rustfft::{FftNum, FftPlanner};
use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::scalar::Real;

pub const MIN_SAMPLES: usize = 64;
const ZERO_PAD: usize = 4;
const PEAK_RATIO: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frequency<T> {
    /// Cycles per unit time.
    pub cycles: T,
    /// `2 pi cycles`.
    pub angular: T,
    /// Peak magnitude over the median magnitude.
    pub peak_ratio: T,
}

/// Mean-removed, Hann-windowed, 4x zero-padded FFT; the peak bin is refined by
/// a parabola through the log magnitudes of its neighbours.
pub fn dominant_frequency<T: Real + FftNum>(series: &[(T, T)]) -> Result<Frequency<T>, AnalysisError> {
    let n = series.len();
    if n < MIN_SAMPLES {
        return Err(AnalysisError::InsufficientData(format!(
            "{n} samples, need {MIN_SAMPLES}"
        )));
    }
    let dt = (series[n - 1].0 - series[0].0) / T::from_usize_lossy(n - 1);
    if !(dt > T::zero()) {
        return Err(AnalysisError::InvalidInput("times must increase".into()));
    }
    let tol = dt * T::lit(1e-6).max(T::epsilon() * T::lit(64.0));
    if series.windows(2).any(|w| ((w[1].0 - w[0].0) - dt).abs() > tol * T::from_usize_lossy(n)) {
        return Err(AnalysisError::InvalidInput("samples are not uniform".into()));
    }

    let mean = series.iter().fold(T::zero(), |s, p| s + p.1) / T::from_usize_lossy(n);
    let len = n * ZERO_PAD;
    let mut buf = vec![Complex::new(T::zero(), T::zero()); len];
    for (i, p) in series.iter().enumerate() {
        let w = T::lit(0.5)
            * (T::one() - (T::TAU() * T::from_usize_lossy(i) / T::from_usize_lossy(n - 1)).cos());
        buf[i] = Complex::new((p.1 - mean) * w, T::zero());
    }
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);

    // positive frequencies, DC excluded
    let mag: Vec<T> = buf[..=len / 2].iter().map(|c| c.norm()).collect();
    let (k, &peak) = mag
        .iter()
        .enumerate()
        .skip(1)
        .fold((1, &mag[1]), |b, c| if *c.1 > *b.1 { c } else { b });
    let mut sorted: Vec<T> = mag[1..].to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let median = sorted[sorted.len() / 2];
    let ratio = if median > T::zero() {
        peak / median
    } else if peak > T::zero() {
        T::infinity()
    } else {
        T::zero()
    };
    if !(ratio >= T::lit(PEAK_RATIO)) || !(peak > T::epsilon() * T::lit(1e3)) {
        return Err(AnalysisError::NoPeak { ratio: ratio.as_f64() });
    }

    let mut offset = T::zero();
    if k + 1 < mag.len() && mag[k - 1] > T::zero() && mag[k + 1] > T::zero() {
        let (a, b, c) = (mag[k - 1].ln(), peak.ln(), mag[k + 1].ln());
        let denom = a - T::lit(2.0) * b + c;
        if denom < T::zero() {
            offset = T::lit(0.5) * (a - c) / denom;
        }
    }
    let cycles = (T::from_usize_lossy(k) + offset) / (T::from_usize_lossy(len) * dt);
    Ok(Frequency {
        cycles,
        angular: T::TAU() * cycles,
        peak_ratio: ratio,
    })
}
