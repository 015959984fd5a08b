//! Dormand-Prince 5(4) with step-size control and 4th-order dense output.
//!
//! Works on flat slices so the same stepper drives 3-component Bloch vectors
//! and density matrices with tens of thousands of real entries.

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("step size underflow at t = {t}: h = {h}")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("step budget of {0} exhausted")]
    MaxSteps(usize),
    #[error("non-finite state at t = {0}")]
    NonFinite(f64),
    #[error("invalid request: {0}")]
    InvalidInput(String),
}

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    /// Initial step; chosen automatically when `None`.
    pub h0: Option<T>,
    pub h_max: Option<T>,
    pub max_steps: usize,
}

impl<T: Real> OdeOptions<T> {
    pub fn new(rel_tol: T, abs_tol: T) -> Self {
        Self {
            rel_tol,
            abs_tol,
            h0: None,
            h_max: None,
            max_steps: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

struct Tableau<T> {
    c: [T; 4],
    a: [T; 21],
    e: [T; 6],
    d: [T; 6],
}

impl<T: Real> Tableau<T> {
    fn new() -> Self {
        let l = T::lit;
        Self {
            c: [l(C2), l(C3), l(C4), l(C5)],
            a: [
                l(A21),
                l(A31),
                l(A32),
                l(A41),
                l(A42),
                l(A43),
                l(A51),
                l(A52),
                l(A53),
                l(A54),
                l(A61),
                l(A62),
                l(A63),
                l(A64),
                l(A65),
                l(A71),
                l(A73),
                l(A74),
                l(A75),
                l(A76),
                T::zero(),
            ],
            e: [l(E1), l(E3), l(E4), l(E5), l(E6), l(E7)],
            d: [l(D1), l(D3), l(D4), l(D5), l(D6), l(D7)],
        }
    }
}

/// Integrates `y' = f(t, y)` from `t0` to the last entry of `sample_times`,
/// calling `on_sample(t, y)` at each requested time (dense output between
/// steps). Sample times must be non-decreasing and `>= t0`; samples equal to
/// `t0` return the initial state.
pub fn dopri5<T, F, S>(
    mut f: F,
    t0: T,
    y0: &[T],
    sample_times: &[T],
    opts: &OdeOptions<T>,
    mut on_sample: S,
) -> Result<OdeStats, OdeError>
where
    T: Real,
    F: FnMut(T, &[T], &mut [T]),
    S: FnMut(T, &[T]),
{
    let n = y0.len();
    let mut stats = OdeStats::default();
    if sample_times.windows(2).any(|w| w[1] < w[0]) {
        return Err(OdeError::InvalidInput("sample times must be non-decreasing".into()));
    }
    let Some(&t_end) = sample_times.last() else {
        return Ok(stats);
    };
    if t_end < t0 {
        return Err(OdeError::InvalidInput("sample times precede t0".into()));
    }
    if !(opts.rel_tol > T::zero() && opts.abs_tol >= T::zero()) {
        return Err(OdeError::InvalidInput("tolerances must be positive".into()));
    }

    let tab = Tableau::<T>::new();
    let a = &tab.a;
    let mut y = y0.to_vec();
    let mut y1 = vec![T::zero(); n];
    let mut ytmp = vec![T::zero(); n];
    let mut k: Vec<Vec<T>> = (0..7).map(|_| vec![T::zero(); n]).collect();
    let mut rc: Vec<Vec<T>> = (0..5).map(|_| vec![T::zero(); n]).collect();
    let mut dense = vec![T::zero(); n];

    let mut next = 0;
    while next < sample_times.len() && sample_times[next] <= t0 {
        on_sample(sample_times[next], &y);
        next += 1;
    }
    if next == sample_times.len() {
        return Ok(stats);
    }

    let span = t_end - t0;
    let h_min = T::lit(1e-12) * span.abs().max(T::min_positive_value());
    let h_max = opts.h_max.unwrap_or(span);
    let safety = T::lit(0.9);
    let fac_min = T::lit(0.2);
    let fac_max = T::lit(5.0);
    let expo = T::lit(-0.2);
    let one = T::one();
    let zero = T::zero();

    f(t0, &y, &mut k[0]);
    stats.evaluations += 1;
    let mut t = t0;
    let mut h = match opts.h0 {
        Some(h) => h,
        None => {
            let (k1, rest) = k.split_at_mut(1);
            let h = initial_step(&mut f, t0, &y, &k1[0], opts, &mut ytmp, &mut rest[0]);
            stats.evaluations += 1;
            h
        }
    }
    .min(h_max)
    .min(span);
    let mut last_rejected = false;

    let scale = |yi: T, y1i: T| opts.abs_tol + opts.rel_tol * yi.abs().max(y1i.abs());

    loop {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(OdeError::MaxSteps(opts.max_steps));
        }
        if h < h_min {
            return Err(OdeError::StepSizeUnderflow {
                t: t.as_f64(),
                h: h.as_f64(),
            });
        }
        let mut last = false;
        if t + h >= t_end {
            h = t_end - t;
            last = true;
        }

        let (k1, rest) = k.split_first_mut().unwrap();
        let (k2, rest) = rest.split_first_mut().unwrap();
        let (k3, rest) = rest.split_first_mut().unwrap();
        let (k4, rest) = rest.split_first_mut().unwrap();
        let (k5, rest) = rest.split_first_mut().unwrap();
        let (k6, rest) = rest.split_first_mut().unwrap();
        let k7 = &mut rest[0];

        for i in 0..n {
            ytmp[i] = y[i] + h * a[0] * k1[i];
        }
        f(t + tab.c[0] * h, &ytmp, k2);
        for i in 0..n {
            ytmp[i] = y[i] + h * (a[1] * k1[i] + a[2] * k2[i]);
        }
        f(t + tab.c[1] * h, &ytmp, k3);
        for i in 0..n {
            ytmp[i] = y[i] + h * (a[3] * k1[i] + a[4] * k2[i] + a[5] * k3[i]);
        }
        f(t + tab.c[2] * h, &ytmp, k4);
        for i in 0..n {
            ytmp[i] = y[i] + h * (a[6] * k1[i] + a[7] * k2[i] + a[8] * k3[i] + a[9] * k4[i]);
        }
        f(t + tab.c[3] * h, &ytmp, k5);
        for i in 0..n {
            ytmp[i] = y[i]
                + h * (a[10] * k1[i] + a[11] * k2[i] + a[12] * k3[i] + a[13] * k4[i] + a[14] * k5[i]);
        }
        let t_new = if last { t_end } else { t + h };
        f(t_new, &ytmp, k6);
        for i in 0..n {
            y1[i] = y[i]
                + h * (a[15] * k1[i] + a[16] * k3[i] + a[17] * k4[i] + a[18] * k5[i] + a[19] * k6[i]);
        }
        f(t_new, &y1, k7);
        stats.evaluations += 6;

        let e = &tab.e;
        let mut err = zero;
        for i in 0..n {
            let ei = h
                * (e[0] * k1[i] + e[1] * k3[i] + e[2] * k4[i] + e[3] * k5[i] + e[4] * k6[i] + e[5] * k7[i]);
            let r = ei / scale(y[i], y1[i]);
            err += r * r;
        }
        let err = (err / T::from_usize_lossy(n.max(1))).sqrt();
        if !err.is_finite() {
            if y1.iter().all(|v| v.is_finite()) {
                return Err(OdeError::NonFinite(t.as_f64()));
            }
            // blow-up inside the step: retry smaller
            h *= fac_min;
            stats.rejected += 1;
            last_rejected = true;
            continue;
        }

        if err <= one {
            stats.accepted += 1;
            let d = &tab.d;
            for i in 0..n {
                let dy = y1[i] - y[i];
                let bspl = h * k1[i] - dy;
                rc[0][i] = y[i];
                rc[1][i] = dy;
                rc[2][i] = bspl;
                rc[3][i] = dy - h * k7[i] - bspl;
                rc[4][i] = h
                    * (d[0] * k1[i] + d[1] * k3[i] + d[2] * k4[i] + d[3] * k5[i] + d[4] * k6[i] + d[5] * k7[i]);
            }
            while next < sample_times.len() && (sample_times[next] <= t_new || last) {
                let ts = sample_times[next];
                if ts >= t_new {
                    on_sample(ts, &y1);
                } else {
                    let th = (ts - t) / h;
                    let th1 = one - th;
                    for i in 0..n {
                        dense[i] = rc[0][i]
                            + th * (rc[1][i] + th1 * (rc[2][i] + th * (rc[3][i] + th1 * rc[4][i])));
                    }
                    on_sample(ts, &dense);
                }
                next += 1;
            }
            if last || next == sample_times.len() {
                return Ok(stats);
            }
            std::mem::swap(&mut y, &mut y1);
            std::mem::swap(k1, k7);
            t = t_new;
            if y.iter().any(|v| !v.is_finite()) {
                return Err(OdeError::NonFinite(t.as_f64()));
            }
            let mut fac = safety * err.max(T::lit(1e-10)).powf(expo);
            fac = fac.max(fac_min).min(fac_max);
            if last_rejected {
                fac = fac.min(one);
            }
            h = (h * fac).min(h_max);
            last_rejected = false;
        } else {
            stats.rejected += 1;
            let fac = (safety * err.powf(expo)).max(fac_min);
            h *= fac;
            last_rejected = true;
        }
    }
}

/// Starting step from the usual two-derivative heuristic.
fn initial_step<T: Real, F: FnMut(T, &[T], &mut [T])>(
    f: &mut F,
    t0: T,
    y0: &[T],
    f0: &[T],
    opts: &OdeOptions<T>,
    ytmp: &mut [T],
    f1: &mut [T],
) -> T {
    let n = y0.len().max(1);
    let nf = T::from_usize_lossy(n);
    let sc = |i: usize| opts.abs_tol + opts.rel_tol * y0[i].abs();
    let mut d0 = T::zero();
    let mut d1 = T::zero();
    for i in 0..y0.len() {
        d0 += (y0[i] / sc(i)).powi(2);
        d1 += (f0[i] / sc(i)).powi(2);
    }
    let d0 = (d0 / nf).sqrt();
    let d1 = (d1 / nf).sqrt();
    let small = T::lit(1e-5);
    let h0 = if d0 < small || d1 < small {
        T::lit(1e-6)
    } else {
        T::lit(0.01) * d0 / d1
    };
    for i in 0..y0.len() {
        ytmp[i] = y0[i] + h0 * f0[i];
    }
    f(t0 + h0, ytmp, f1);
    let mut d2 = T::zero();
    for i in 0..y0.len() {
        d2 += ((f1[i] - f0[i]) / sc(i)).powi(2);
    }
    let d2 = (d2 / nf).sqrt() / h0;
    let h1 = if d1.max(d2) <= T::lit(1e-15) {
        (h0 * T::lit(1e-3)).max(T::lit(1e-6))
    } else {
        (T::lit(0.01) / d1.max(d2)).powf(T::lit(0.2))
    };
    (T::lit(100.0) * h0).min(h1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_dense_samples() {
        let ts: Vec<f64> = (0..=100).map(|i| i as f64 * 0.05).collect();
        let mut out = Vec::new();
        let stats = dopri5(
            |_, y, dy| dy[0] = -y[0],
            0.0,
            &[1.0],
            &ts,
            &OdeOptions::new(1e-10, 1e-12),
            |t, y| out.push((t, y[0])),
        )
        .unwrap();
        assert_eq!(out.len(), ts.len());
        for (t, y) in out {
            assert!((y - (-t).exp()).abs() < 1e-9, "t={t}: {y}");
        }
        assert!(stats.accepted > 0);
    }

    #[test]
    fn harmonic_oscillator_single_precision() {
        let ts: Vec<f32> = (0..=20).map(|i| i as f32 * 0.5).collect();
        let mut last = [0.0f32; 2];
        dopri5(
            |_, y: &[f32], dy: &mut [f32]| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0f32,
            &[1.0, 0.0],
            &ts,
            &OdeOptions::new(1e-5, 1e-7),
            |_, y| last.copy_from_slice(y),
        )
        .unwrap();
        assert!((last[0] - 10.0f32.cos()).abs() < 1e-3);
    }

    #[test]
    fn time_dependent_field() {
        // y' = cos t  ->  y = sin t
        let ts = [0.0, 1.0, 2.5, 7.0];
        let mut out = Vec::new();
        dopri5(
            |t: f64, _y, dy| dy[0] = t.cos(),
            0.0,
            &[0.0],
            &ts,
            &OdeOptions::new(1e-11, 1e-13),
            |t, y| out.push((t, y[0])),
        )
        .unwrap();
        for (t, y) in out {
            assert!((y - t.sin()).abs() < 1e-9);
        }
    }

    #[test]
    fn finite_time_blowup_underflows() {
        // y' = y^2 from y(0) = 1 diverges at t = 1
        let r = dopri5(
            |_, y: &[f64], dy| dy[0] = y[0] * y[0],
            0.0,
            &[1.0],
            &[2.0],
            &OdeOptions::new(1e-8, 1e-10),
            |_, _| {},
        );
        assert!(matches!(
            r,
            Err(OdeError::StepSizeUnderflow { .. }) | Err(OdeError::NonFinite(_))
        ));
    }

    #[test]
    fn decreasing_samples_rejected() {
        let r = dopri5(|_, _: &[f64], _| {}, 0.0, &[0.0], &[1.0, 0.5], &OdeOptions::new(1e-6, 1e-8), |_, _| {});
        assert!(matches!(r, Err(OdeError::InvalidInput(_))));
    }
}
