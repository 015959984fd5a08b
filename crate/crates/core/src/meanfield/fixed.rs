//! Stationary points of the mean-field flow and their linear stability.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::bloch::{bloch_from_angles, Axis, BlochState};
use crate::meanfield::rhs::{jacobian, rhs, Mode};
use crate::meanfield::MeanFieldError;
use crate::params::ModelParams;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Stability {
    Attractor,
    Repeller,
    /// Purely imaginary exponents: a centre, candidate for closed orbits.
    Marginal,
    Saddle,
}

impl Stability {
    pub fn as_str(self) -> &'static str {
        match self {
            Stability::Attractor => "ATTRACTOR",
            Stability::Repeller => "REPELLER",
            Stability::Marginal => "MARGINAL",
            Stability::Saddle => "SADDLE",
        }
    }
}

impl std::fmt::Display for Stability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint<T> {
    pub location: BlochState<T>,
    /// Two tangent exponents followed by the radial one in collective mode;
    /// the three eigenvalues of the Cartesian Jacobian in local mode.
    pub jacobian_eigenvalues: [Complex<T>; 3],
    pub stability: Stability,
    pub residual: T,
}

/// Acceptance threshold on `|rhs|` for returned fixed points.
pub fn residual_tolerance<T: Real>() -> T {
    T::lit(1e-10).max(T::epsilon() * T::lit(64.0))
}

fn precondition_tolerance<T: Real>() -> T {
    T::lit(1e-8).max(T::epsilon() * T::lit(1e3))
}

fn dedupe_radius<T: Real>() -> T {
    T::lit(1e-6).max(T::epsilon() * T::lit(100.0))
}

/// Default classification tolerance `1e-6 * max(omega_z, omega_x, |delta_gamma|)`.
pub fn default_epsilon<T: Real>(params: &ModelParams<T>) -> T {
    let s = params.frequency_scale();
    let s = if s > T::zero() { s } else { T::one() };
    T::lit(1e-6).max(T::epsilon().sqrt()) * s
}

/// Default finite-difference step for the tangent Jacobian.
pub fn default_fd_step<T: Real>() -> T {
    T::lit(1e-6).max(T::epsilon().cbrt())
}

fn residual<T: Real>(params: &ModelParams<T>, s: BlochState<T>, mode: Mode) -> T {
    rhs(params, s, mode).norm()
}

/// Closed-form stationary points for `(p, q)` in `{(1,1), (2,1), (1,2)}`,
/// collective dissipation. Candidates whose residual is not at rounding level
/// are dropped, so only existing branches survive.
pub fn closed_form_fixed_points<T: Real>(params: &ModelParams<T>) -> Vec<BlochState<T>> {
    let zero = T::zero();
    let one = T::one();
    let two = T::lit(2.0);
    let wz = params.omega_z();
    let wx = params.omega_x();
    let dg = params.delta_gamma();
    let mut out = Vec::new();
    let mut push = |x: T, y: T, z: T| {
        if x.is_finite() && y.is_finite() && z.is_finite() {
            out.push(BlochState::new(x, y, z));
        }
    };
    match (params.p(), params.q()) {
        (2, 1) => {
            let d = T::lit(4.0) * wz * wz + dg * dg;
            if d > zero && wx * wx <= d {
                let zf = (one - wx * wx / d).max(zero).sqrt();
                let xf = two * wx * wz / d;
                let yf = dg * wx / d;
                push(xf, yf, zf);
                push(xf, yf, -zf);
            }
            if wx > zero && dg.abs() <= wx {
                let xp = (one - dg * dg / (wx * wx)).max(zero).sqrt();
                push(xp, dg / wx, zero);
                push(-xp, dg / wx, zero);
            }
        }
        (1, 2) => {
            push(zero, zero, one);
            push(zero, zero, -one);
            if wz > zero && wx > zero && wx >= dg.abs() {
                let sq = (wx * wx - dg * dg).max(zero).sqrt();
                for z in [wz / (wx + sq), wz / (wx - sq)] {
                    if z.is_finite() && z > zero && z <= one {
                        let x = (wz * (one - z * z) / (two * wx * z)).max(zero).sqrt();
                        for x in [x, -x] {
                            push(x, dg * z * x / wz, z);
                        }
                    }
                }
            }
        }
        (1, 1) => {
            if wx == zero {
                push(zero, zero, one);
                push(zero, zero, -one);
            } else if wz == zero {
                if dg.abs() <= wx {
                    let xp = (one - dg * dg / (wx * wx)).max(zero).sqrt();
                    push(xp, dg / wx, zero);
                    push(-xp, dg / wx, zero);
                }
                if dg != zero && dg.abs() >= wx {
                    let zf = (one - wx * wx / (dg * dg)).max(zero).sqrt();
                    push(zero, wx / dg, zf);
                    push(zero, wx / dg, -zf);
                }
            } else {
                // u = Z^2 solves dg^2 u^2 + (wx^2 + wz^2 - dg^2) u - wz^2 = 0
                let a = dg * dg;
                let b = wx * wx + wz * wz - dg * dg;
                let c = -wz * wz;
                let u = if a == zero {
                    -c / b
                } else {
                    let disc = (b * b - T::lit(4.0) * a * c).max(zero).sqrt();
                    // numerically stable positive root
                    if b >= zero {
                        -two * c / (b + disc)
                    } else {
                        (-b + disc) / (two * a)
                    }
                };
                if u > zero && u <= one {
                    for z in [u.sqrt(), -u.sqrt()] {
                        let x = wz * (one - z * z) / (wx * z);
                        let y = if dg == zero { zero } else { dg * z * x / wz };
                        push(x, y, z);
                    }
                }
            }
        }
        _ => {}
    }
    let tol = residual_tolerance::<T>();
    out.retain(|&s| residual(params, s, Mode::Collective) < tol);
    out
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn solve3<T: Real>(mut a: [[T; 3]; 3], mut b: [T; 3]) -> Option<[T; 3]> {
    let scale = a
        .iter()
        .flatten()
        .fold(T::zero(), |m, v| m.max(v.abs()));
    if scale == T::zero() {
        return None;
    }
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[piv][col].abs() <= scale * T::epsilon() * T::lit(8.0) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..3 {
            let f = a[r][col] / a[col][col];
            for c in col..3 {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
            let v = b[col];
            b[r] -= f * v;
        }
    }
    let mut x = [T::zero(); 3];
    for r in (0..3).rev() {
        let mut s = b[r];
        for c in r + 1..3 {
            s -= a[r][c] * x[c];
        }
        x[r] = s / a[r][r];
    }
    Some(x)
}

/// Root function for the collective search: tangential flow plus a term that
/// pins the radius to one. Its zeros are exactly the fixed points on the
/// unit sphere, and it stays regular where the radial exponent vanishes.
fn projected<T: Real>(params: &ModelParams<T>, s: [T; 3]) -> [T; 3] {
    let st = BlochState::from_array(s);
    let r2 = st.dot(st);
    let r = r2.sqrt();
    let f = rhs(params, st, Mode::Collective).to_array();
    let sf = s[0] * f[0] + s[1] * f[1] + s[2] * f[2];
    let mut out = [T::zero(); 3];
    for i in 0..3 {
        out[i] = f[i] - sf * s[i] / r2 + (r2 - T::one()) * s[i] / r;
    }
    out
}

fn norm3<T: Real>(v: [T; 3]) -> T {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn newton<T: Real>(params: &ModelParams<T>, seed: BlochState<T>, mode: Mode) -> Option<BlochState<T>> {
    let collective = mode == Mode::Collective;
    let eval = |s: [T; 3]| -> [T; 3] {
        if collective {
            projected(params, s)
        } else {
            rhs(params, BlochState::from_array(s), mode).to_array()
        }
    };
    let jac = |s: [T; 3]| -> [[T; 3]; 3] {
        if collective {
            let h = T::epsilon().cbrt() * T::lit(0.5);
            let mut j = [[T::zero(); 3]; 3];
            for c in 0..3 {
                let mut a = s;
                let mut b = s;
                a[c] += h;
                b[c] -= h;
                let (fa, fb) = (eval(a), eval(b));
                for r in 0..3 {
                    j[r][c] = (fa[r] - fb[r]) / (h + h);
                }
            }
            j
        } else {
            jacobian(params, BlochState::from_array(s), mode)
        }
    };
    let target = T::epsilon() * T::lit(4.0);
    let mut s = seed.to_array();
    let mut f = eval(s);
    let mut fn0 = norm3(f);
    for _ in 0..100 {
        if fn0 <= target {
            break;
        }
        let step = solve3(jac(s), [-f[0], -f[1], -f[2]])?;
        let mut alpha = T::one();
        let mut improved = false;
        for _ in 0..30 {
            let trial = [
                s[0] + alpha * step[0],
                s[1] + alpha * step[1],
                s[2] + alpha * step[2],
            ];
            let ft = eval(trial);
            let nt = norm3(ft);
            if nt.is_finite() && nt < fn0 {
                s = trial;
                f = ft;
                fn0 = nt;
                improved = true;
                break;
            }
            alpha *= T::lit(0.5);
        }
        if !improved {
            break;
        }
    }
    let out = BlochState::from_array(s);
    if out.norm() > T::lit(1.5) {
        return None;
    }
    Some(out)
}

/// Damped-Newton roots seeded on a 24 x 12 grid of `(phi, cos_theta)`.
pub fn newton_fixed_points<T: Real>(params: &ModelParams<T>, mode: Mode) -> Vec<BlochState<T>> {
    let tol = residual_tolerance::<T>();
    let mut found: Vec<BlochState<T>> = Vec::new();
    for i in 0..24 {
        let phi = T::TAU() * (T::from_usize_lossy(i) + T::lit(0.5)) / T::lit(24.0);
        for j in 0..12 {
            let c = -T::one() + T::lit(2.0) * (T::from_usize_lossy(j) + T::lit(0.5)) / T::lit(12.0);
            let seed = bloch_from_angles(c.acos(), phi, Axis::ZPole);
            if let Some(s) = newton(params, seed, mode) {
                if residual(params, s, mode) < tol {
                    found.push(s);
                }
            }
        }
    }
    dedupe(found)
}

fn dedupe<T: Real>(points: Vec<BlochState<T>>) -> Vec<BlochState<T>> {
    let r = dedupe_radius::<T>();
    let mut out: Vec<BlochState<T>> = Vec::new();
    for p in points {
        if out.iter().all(|q| q.distance(p) > r) {
            out.push(p);
        }
    }
    out
}

/// Closed forms (where available) merged with the Newton search, each point
/// classified with the default tolerance. Sorted by descending `Z`, then `X`.
pub fn find_fixed_points<T: Real>(params: &ModelParams<T>, mode: Mode) -> Vec<FixedPoint<T>> {
    let mut pts = Vec::new();
    if mode == Mode::Collective {
        pts.extend(closed_form_fixed_points(params));
    }
    pts.extend(newton_fixed_points(params, mode));
    let mut pts = dedupe(pts);
    pts.sort_by(|a, b| {
        b.z.partial_cmp(&a.z)
            .unwrap()
            .then(b.x.partial_cmp(&a.x).unwrap())
    });
    let eps = default_epsilon(params);
    pts.into_iter()
        .filter_map(|s| classify(params, s, mode, eps).ok())
        .collect()
}

/// Classifies a stationary point with the default finite-difference step.
pub fn classify<T: Real>(
    params: &ModelParams<T>,
    point: BlochState<T>,
    mode: Mode,
    epsilon: T,
) -> Result<FixedPoint<T>, MeanFieldError> {
    classify_with_step(params, point, mode, epsilon, default_fd_step())
}

pub fn classify_with_step<T: Real>(
    params: &ModelParams<T>,
    point: BlochState<T>,
    mode: Mode,
    epsilon: T,
    step: T,
) -> Result<FixedPoint<T>, MeanFieldError> {
    let res = residual(params, point, mode);
    if !(res < precondition_tolerance::<T>()) {
        return Err(MeanFieldError::NotAFixedPoint {
            residual: res.as_f64(),
        });
    }
    let (eigs, decisive): ([Complex<T>; 3], usize) = match mode {
        Mode::Collective => {
            let j = tangent_jacobian(params, point, step);
            let [l1, l2] = eig2(j);
            let cos_theta = point.z / point.norm();
            let radial = Complex::new(T::lit(-4.0) * params.delta_gamma() * cos_theta, T::zero());
            ([l1, l2, radial], 2)
        }
        Mode::Local(_) => (eig3(jacobian(params, point, mode)), 3),
    };
    let lead = &eigs[..decisive];
    let stability = if lead.iter().all(|l| l.re < -epsilon) {
        Stability::Attractor
    } else if lead.iter().all(|l| l.re > epsilon) {
        Stability::Repeller
    } else if lead.iter().all(|l| l.re.abs() <= epsilon) && lead.iter().any(|l| l.im.abs() > epsilon) {
        Stability::Marginal
    } else {
        Stability::Saddle
    };
    Ok(FixedPoint {
        location: point,
        jacobian_eigenvalues: eigs,
        stability,
        residual: res,
    })
}

/// Flow in `(phi, cos_theta)` of the chart `axis`, for a point of radius `r`.
pub fn chart_velocity<T: Real>(params: &ModelParams<T>, s: BlochState<T>, axis: Axis) -> (T, T) {
    let d = rhs(params, s, Mode::Collective);
    let [a, b, c] = axis.to_chart(s);
    let [da, db, dc] = axis.to_chart(BlochState::new(d.dx, d.dy, d.dz));
    let rho2 = a * a + b * b;
    let r2 = rho2 + c * c;
    let r = r2.sqrt();
    let phi_dot = (a * db - b * da) / rho2;
    let rdot_r = a * da + b * db + c * dc;
    let cos_dot = (dc * r2 - c * rdot_r) / (r2 * r);
    (phi_dot, cos_dot)
}

/// 2x2 Jacobian of the chart flow by central differences, in whichever chart
/// keeps the point farther from its pole.
fn tangent_jacobian<T: Real>(params: &ModelParams<T>, point: BlochState<T>, h: T) -> [[T; 2]; 2] {
    let rz = (point.x * point.x + point.y * point.y).sqrt();
    let rx = (point.y * point.y + point.z * point.z).sqrt();
    let axis = if rz >= rx { Axis::ZPole } else { Axis::XPole };
    let r = point.norm();
    let [a, b, c] = axis.to_chart(point);
    let phi0 = b.atan2(a);
    let c0 = c / r;
    let at = |phi: T, cz: T| -> (T, T) {
        let cz = cz.max(-T::one()).min(T::one());
        let u = bloch_from_angles(cz.acos(), phi, axis);
        chart_velocity(params, BlochState::new(u.x * r, u.y * r, u.z * r), axis)
    };
    let (fp_phi, fp_c) = at(phi0 + h, c0);
    let (fm_phi, fm_c) = at(phi0 - h, c0);
    let (gp_phi, gp_c) = at(phi0, c0 + h);
    let (gm_phi, gm_c) = at(phi0, c0 - h);
    let two_h = h + h;
    [
        [(fp_phi - fm_phi) / two_h, (gp_phi - gm_phi) / two_h],
        [(fp_c - fm_c) / two_h, (gp_c - gm_c) / two_h],
    ]
}

fn eig2<T: Real>(j: [[T; 2]; 2]) -> [Complex<T>; 2] {
    let half_tr = (j[0][0] + j[1][1]) * T::lit(0.5);
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let disc = half_tr * half_tr - det;
    if disc >= T::zero() {
        let s = disc.sqrt();
        [
            Complex::new(half_tr + s, T::zero()),
            Complex::new(half_tr - s, T::zero()),
        ]
    } else {
        let s = (-disc).sqrt();
        [Complex::new(half_tr, s), Complex::new(half_tr, -s)]
    }
}

/// Eigenvalues of a real 3x3 matrix from its characteristic cubic.
pub(crate) fn eig3<T: Real>(m: [[T; 3]; 3]) -> [Complex<T>; 3] {
    let tr = m[0][0] + m[1][1] + m[2][2];
    let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    // l^3 - tr l^2 + minors l - det = 0; shift l = t + tr/3
    let three = T::lit(3.0);
    let shift = tr / three;
    let p = minors - tr * tr / three;
    let q = -T::lit(2.0) * tr * tr * tr / T::lit(27.0) + tr * minors / three - det;
    // t^3 + p t + q = 0
    let disc = (q / T::lit(2.0)).powi(2) + (p / three).powi(3);
    let real_root = if disc > T::zero() {
        let sd = disc.sqrt();
        let u = (-q / T::lit(2.0) + sd).cbrt();
        let v = (-q / T::lit(2.0) - sd).cbrt();
        u + v
    } else if p == T::zero() {
        T::zero()
    } else {
        let r = (-p / three).sqrt();
        let arg = (T::lit(3.0) * q / (T::lit(2.0) * p) / r).max(-T::one()).min(T::one());
        T::lit(2.0) * r * (arg.acos() / three).cos()
    };
    // polish the real root, then deflate
    let mut l = real_root + shift;
    for _ in 0..3 {
        let f = ((l - tr) * l + minors) * l - det;
        let df = (three * l - T::lit(2.0) * tr) * l + minors;
        if df == T::zero() {
            break;
        }
        let nl = l - f / df;
        if !nl.is_finite() {
            break;
        }
        l = nl;
    }
    // remaining quadratic: l^2 + b l + c with b = l0 - tr, c = det / l0 or via minors
    let b = l - tr;
    let c = minors + l * b;
    let half_b = b * T::lit(0.5);
    let d = half_b * half_b - c;
    let (l2, l3) = if d >= T::zero() {
        let s = d.sqrt();
        (
            Complex::new(-half_b + s, T::zero()),
            Complex::new(-half_b - s, T::zero()),
        )
    } else {
        let s = (-d).sqrt();
        (Complex::new(-half_b, s), Complex::new(-half_b, -s))
    };
    [Complex::new(l, T::zero()), l2, l3]
}
