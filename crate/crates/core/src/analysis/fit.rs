//! Least-squares fits of amplitude decay and size scaling.

use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FitModel {
    PowerLaw,
    Exponential,
    LinearLoglog,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FitParams<T> {
    /// `A(t) = b t^exponent`
    PowerLaw { b: T, exponent: T },
    /// `A(t) = amplitude exp(-beta t / N_s)`
    Exponential { amplitude: T, beta: T, rate: T },
    /// `log y = intercept + slope log x`
    LinearLoglog { intercept: T, slope: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult<T> {
    pub model: FitModel,
    pub params: FitParams<T>,
    /// RMS residual of the fitted line, in log units.
    pub residual_rms: T,
    pub samples: usize,
}

impl<T: Real> FitResult<T> {
    /// Exponent, `-beta` rate, or slope, depending on the model.
    pub fn slope(&self) -> T {
        match self.params {
            FitParams::PowerLaw { exponent, .. } => exponent,
            FitParams::Exponential { rate, .. } => -rate,
            FitParams::LinearLoglog { slope, .. } => slope,
        }
    }
}

/// Ordinary least squares `y = c + m x`; returns `(c, m, rms)`.
pub(crate) fn line_fit<T: Real>(pts: &[(T, T)]) -> (T, T, T) {
    let n = T::from_usize_lossy(pts.len());
    let mx = pts.iter().fold(T::zero(), |s, p| s + p.0) / n;
    let my = pts.iter().fold(T::zero(), |s, p| s + p.1) / n;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    for &(x, y) in pts {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let m = sxy / sxx;
    let c = my - m * mx;
    let ss = pts.iter().fold(T::zero(), |s, &(x, y)| {
        let r = y - c - m * x;
        s + r * r
    });
    (c, m, (ss / n).sqrt())
}

/// Noise floor below which envelope amplitudes are discarded.
pub const AMPLITUDE_FLOOR: f64 = 1e-4;

/// Power law `A = B t^k` from an envelope. Drops the first oscillation period
/// and amplitudes below `1e-4`; needs five points spanning a decade.
pub fn fit_power_amplitude<T: Real>(env: &[(T, T)]) -> Result<FitResult<T>, AnalysisError> {
    let floor = T::lit(AMPLITUDE_FLOOR);
    let start = if env.len() >= 2 {
        env[0].0 + (env[1].0 - env[0].0)
    } else {
        T::neg_infinity()
    };
    let pts: Vec<(T, T)> = env
        .iter()
        .filter(|p| p.0 >= start && p.0 > T::zero() && p.1 >= floor)
        .map(|&(t, a)| (t.ln(), a.ln()))
        .collect();
    if pts.len() < 5 {
        return Err(AnalysisError::InsufficientRange(format!(
            "{} usable points, need 5",
            pts.len()
        )));
    }
    let lo = pts.first().unwrap().0;
    let hi = pts.last().unwrap().0;
    if hi - lo < T::LN_10() * (T::one() - T::lit(1e-9)) {
        return Err(AnalysisError::InsufficientRange(format!(
            "span t_max/t_min = {:.3} below one decade",
            (hi - lo).exp()
        )));
    }
    let (c, m, rms) = line_fit(&pts);
    Ok(FitResult {
        model: FitModel::PowerLaw,
        params: FitParams::PowerLaw { b: c.exp(), exponent: m },
        residual_rms: rms,
        samples: pts.len(),
    })
}

/// Exponential `A = A0 exp(-beta t / N_s)`; `beta = -slope * N_s`.
pub fn fit_exp_amplitude<T: Real>(env: &[(T, T)], n_s: u32) -> Result<FitResult<T>, AnalysisError> {
    let pts: Vec<(T, T)> = env
        .iter()
        .filter(|p| p.1 > T::zero())
        .map(|&(t, a)| (t, a.ln()))
        .collect();
    if pts.len() < 5 {
        return Err(AnalysisError::InsufficientRange(format!(
            "{} usable points, need 5",
            pts.len()
        )));
    }
    let (c, m, rms) = line_fit(&pts);
    let rate = -m;
    Ok(FitResult {
        model: FitModel::Exponential,
        params: FitParams::Exponential {
            amplitude: c.exp(),
            beta: rate * T::from_u32(n_s).unwrap(),
            rate,
        },
        residual_rms: rms,
        samples: pts.len(),
    })
}

/// Straight line through `(log x, log y)`; needs three positive points.
pub fn loglog_fit<T: Real>(pts: &[(T, T)]) -> Result<FitResult<T>, AnalysisError> {
    let logs: Vec<(T, T)> = pts
        .iter()
        .filter(|p| p.0 > T::zero() && p.1 > T::zero())
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 3 {
        return Err(AnalysisError::InsufficientData(format!(
            "{} positive points, need 3",
            logs.len()
        )));
    }
    let (c, m, rms) = line_fit(&logs);
    Ok(FitResult {
        model: FitModel::LinearLoglog,
        params: FitParams::LinearLoglog { intercept: c, slope: m },
        residual_rms: rms,
        samples: logs.len(),
    })
}

/// Slope of `log gap` against `log N`.
pub fn gap_scaling<T: Real>(gaps: &[(u32, T)]) -> Result<FitResult<T>, AnalysisError> {
    let pts: Vec<(T, T)> = gaps
        .iter()
        .map(|&(n, g)| (T::from_u32(n).unwrap(), g))
        .collect();
    loglog_fit(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_recovered() {
        let env: Vec<(f64, f64)> = (1..=200).map(|i| i as f64).map(|t| (t, 2.0 * t.powf(-0.5))).collect();
        let f = fit_power_amplitude(&env).unwrap();
        let FitParams::PowerLaw { b, exponent } = f.params else { panic!() };
        assert!((exponent + 0.5).abs() < 1e-3);
        assert!((b - 2.0).abs() < 0.02);
        assert!(f.residual_rms < 1e-12);
    }

    #[test]
    fn power_law_needs_a_decade() {
        let env: Vec<(f64, f64)> = (10..=50).map(|i| i as f64).map(|t| (t, t.powf(-0.5))).collect();
        assert!(matches!(fit_power_amplitude(&env), Err(AnalysisError::InsufficientRange(_))));
        let env = vec![(1.0, 1.0), (2.0, 0.5), (50.0, 0.1)];
        assert!(matches!(fit_power_amplitude(&env), Err(AnalysisError::InsufficientRange(_))));
    }

    #[test]
    fn exponential_recovered() {
        let env: Vec<(f64, f64)> = (0..100).map(|i| i as f64).map(|t| (t, (-0.011 * t).exp())).collect();
        let f = fit_exp_amplitude(&env, 10).unwrap();
        let FitParams::Exponential { beta, .. } = f.params else { panic!() };
        assert!((beta - 0.11).abs() < 1e-3);
    }

    #[test]
    fn inverse_size_gap() {
        let g: Vec<(u32, f64)> = [10, 20, 30, 40].iter().map(|&n| (n, 0.43 / n as f64)).collect();
        assert!((gap_scaling(&g).unwrap().slope() + 1.0).abs() < 1e-3);
        assert!(matches!(gap_scaling(&g[..2]), Err(AnalysisError::InsufficientData(_))));
    }

    #[test]
    fn single_precision_fit() {
        let env: Vec<(f32, f32)> = (1..=100).map(|i| i as f32).map(|t| (t, 3.0 * t.powf(-0.25))).collect();
        let f = fit_power_amplitude(&env).unwrap();
        assert!((f.slope() + 0.25).abs() < 1e-3);
    }
}
