//! Oscillation envelopes of sampled signals.

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Extremum<T> {
    pub t: T,
    pub v: T,
    pub is_max: bool,
}

/// Local extrema refined by a parabola through three neighbouring samples.
pub(crate) fn extrema<T: Real>(series: &[(T, T)]) -> Vec<Extremum<T>> {
    let half = T::lit(0.5);
    let quarter = T::lit(0.25);
    let mut out = Vec::new();
    for w in series.windows(3) {
        let (a, b, c) = (w[0].1, w[1].1, w[2].1);
        let is_max = b > a && b >= c;
        let is_min = b < a && b <= c;
        if !(is_max || is_min) {
            continue;
        }
        let den = a - T::lit(2.0) * b + c;
        let x = if den != T::zero() {
            half * (a - c) / den
        } else {
            T::zero()
        };
        let h = half * (w[2].0 - w[0].0);
        out.push(Extremum {
            t: w[1].0 + x * h,
            v: b - quarter * (a - c) * x,
            is_max,
        });
    }
    out
}

/// Piecewise-linear interpolation through `(knots_t, knots_v)`, held constant
/// outside the knot range.
fn interp<T: Real>(kt: &[T], kv: &[T], t: T) -> T {
    if t <= kt[0] {
        return kv[0];
    }
    let last = kt.len() - 1;
    if t >= kt[last] {
        return kv[last];
    }
    let j = kt.partition_point(|&k| k <= t);
    let (t0, t1) = (kt[j - 1], kt[j]);
    let w = if t1 > t0 { (t - t0) / (t1 - t0) } else { T::zero() };
    kv[j - 1] + w * (kv[j] - kv[j - 1])
}

/// Running mean of an oscillating signal. Each knot sits at an extremum and
/// takes the Aitken extrapolation of three consecutive extrema, which is the
/// exact centre of a geometrically damped oscillation.
pub(crate) fn running_mean<T: Real>(series: &[(T, T)]) -> Vec<T> {
    let ex = extrema(series);
    let mut kt = Vec::new();
    let mut kv = Vec::new();
    for w in ex.windows(3) {
        let (e0, e1, e2) = (w[0].v, w[1].v, w[2].v);
        let den = e0 + e2 - T::lit(2.0) * e1;
        let scale = e0.abs().max(e1.abs()).max(e2.abs());
        if den.abs() > T::epsilon() * scale * T::lit(16.0) {
            kt.push(w[1].t);
            kv.push((e0 * e2 - e1 * e1) / den);
        }
    }
    if kt.is_empty() {
        let n = T::from_usize_lossy(series.len().max(1));
        let mean = series.iter().fold(T::zero(), |s, &(_, v)| s + v) / n;
        return vec![mean; series.len()];
    }
    series.iter().map(|&(t, _)| interp(&kt, &kv, t)).collect()
}

/// Upper peaks of `value - running mean` as `(t_peak, amplitude)`.
///
/// A sinusoid over `k` periods gives `k` peaks. Amplitudes are strictly
/// positive; flat or monotone input gives an empty list.
pub fn envelope<T: Real>(series: &[(T, T)]) -> Vec<(T, T)> {
    if series.len() < 3 {
        return Vec::new();
    }
    let mean = running_mean(series);
    let centred: Vec<(T, T)> = series
        .iter()
        .zip(&mean)
        .map(|(&(t, v), &m)| (t, v - m))
        .collect();
    extrema(&centred)
        .into_iter()
        .filter(|e| e.is_max && e.v > T::zero())
        .map(|e| (e.t, e.v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn sampled(f: impl Fn(f64) -> f64, rate: f64, span: f64) -> Vec<(f64, f64)> {
        let n = (rate * span).round() as usize;
        (0..=n).map(|i| i as f64 / rate).map(|t| (t, f(t))).collect()
    }

    #[test]
    fn pure_sine() {
        let env = envelope(&sampled(|t| (TAU * t).sin(), 100.0, 10.0));
        assert_eq!(env.len(), 10);
        for (k, &(t, a)) in env.iter().enumerate() {
            assert!((a - 1.0).abs() < 1e-3, "{a}");
            assert!((t - (k as f64 + 0.25)).abs() < 1e-3);
        }
    }

    #[test]
    fn damped_sine_tracks_peak_values() {
        // Peaks of e^-t sin(2 pi t) sit where tan(2 pi t) = 2 pi and there the
        // signal equals e^-t * 2 pi / sqrt(1 + 4 pi^2).
        let env = envelope(&sampled(|t| (-t).exp() * (TAU * t).sin(), 100.0, 10.0));
        assert!(env.len() >= 9);
        let c = TAU / (1.0 + TAU * TAU).sqrt();
        for &(t, a) in &env {
            let exact = c * (-t).exp();
            assert!(((a - exact) / exact).abs() < 0.01, "t={t}: {a} vs {exact}");
        }
    }

    #[test]
    fn offset_and_drifting_mean() {
        let env = envelope(&sampled(|t| 3.0 + 0.05 * t + 0.5 * (TAU * t).sin(), 50.0, 20.0));
        assert!(env.len() >= 18);
        for &(_, a) in &env[1..env.len() - 1] {
            assert!((a - 0.5).abs() < 5e-3, "{a}");
        }
    }

    #[test]
    fn constant_is_empty() {
        assert!(envelope(&sampled(|_| 0.7, 10.0, 10.0)).is_empty());
        assert!(envelope(&[(0.0, 1.0), (1.0, 2.0)]).is_empty());
    }

    #[test]
    fn generic_f32() {
        let s: Vec<(f32, f32)> = (0..=1000)
            .map(|i| i as f32 / 100.0)
            .map(|t| (t, (std::f32::consts::TAU * t).sin()))
            .collect();
        let env = envelope(&s);
        assert_eq!(env.len(), 10);
    }
}
