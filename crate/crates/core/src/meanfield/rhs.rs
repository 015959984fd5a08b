//! Right-hand sides of the mean-field equations.

use serde::{Deserialize, Serialize};

use crate::bloch::BlochState;
use crate::params::{ModelParams, StringLength};
use crate::scalar::{dpow, Real};

/// Time derivative of a Bloch vector.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochDerivative<T> {
    pub dx: T,
    pub dy: T,
    pub dz: T,
}

impl<T: Real> BlochDerivative<T> {
    pub fn to_array(self) -> [T; 3] {
        [self.dx, self.dy, self.dz]
    }

    pub fn norm(self) -> T {
        (self.dx * self.dx + self.dy * self.dy + self.dz * self.dz).sqrt()
    }
}

/// Which dissipator enters the equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Collective,
    /// Independent baths on strings of `N_s` sites.
    Local(u32),
}

impl Mode {
    pub fn from_string_length(n: StringLength) -> Self {
        match n {
            StringLength::Collective => Mode::Collective,
            StringLength::Sites(ns) => Mode::Local(ns),
        }
    }

    /// `1 / N_s`, zero for collective dissipation.
    fn inv_ns<T: Real>(self) -> T {
        match self {
            Mode::Collective => T::zero(),
            Mode::Local(ns) => T::one() / T::from_u32(ns).unwrap(),
        }
    }
}

/// Collective dissipation. Negative powers are expanded so the field is a
/// polynomial in `(X, Y, Z)`.
pub fn rhs_collective<T: Real>(params: &ModelParams<T>, s: BlochState<T>) -> BlochDerivative<T> {
    rhs_impl(params, s, T::zero())
}

/// Local dissipation on strings of `n_s` sites, with the string averages
/// identified with the homogeneous magnetization.
pub fn rhs_local<T: Real>(params: &ModelParams<T>, s: BlochState<T>, n_s: u32) -> BlochDerivative<T> {
    rhs_impl(params, s, Mode::Local(n_s.max(1)).inv_ns())
}

pub fn rhs<T: Real>(params: &ModelParams<T>, s: BlochState<T>, mode: Mode) -> BlochDerivative<T> {
    rhs_impl(params, s, mode.inv_ns())
}

#[inline]
fn rhs_impl<T: Real>(params: &ModelParams<T>, s: BlochState<T>, inv_ns: T) -> BlochDerivative<T> {
    let two = T::lit(2.0);
    let (p, q) = (params.p(), params.q());
    let wz = params.omega_z();
    let wx = params.omega_x();
    let dg = params.delta_gamma();
    let bg = params.bar_gamma();
    let BlochState { x, y, z } = s;

    // p wz Z^(p-1) and q wx X^(q-1)
    let az = wz * dpow(z, p);
    let ax = wx * dpow(x, q);
    let k = dg * z + bg * inv_ns;

    BlochDerivative {
        dx: two * (az * y - k * x),
        dy: two * (ax * z - az * x - k * y),
        dz: two * (-ax * y + dg * (T::one() - z * z + inv_ns) - bg * z * inv_ns),
    }
}

/// Analytic Jacobian `J[i][j] = d rhs_i / d s_j`.
pub fn jacobian<T: Real>(params: &ModelParams<T>, s: BlochState<T>, mode: Mode) -> [[T; 3]; 3] {
    let two = T::lit(2.0);
    let inv_ns: T = mode.inv_ns();
    let (p, q) = (params.p(), params.q());
    let pf = T::from_u32(p).unwrap();
    let qf = T::from_u32(q).unwrap();
    let wz = params.omega_z();
    let wx = params.omega_x();
    let dg = params.delta_gamma();
    let bg = params.bar_gamma();
    let BlochState { x, y, z } = s;

    let az = wz * dpow(z, p);
    let ax = wx * dpow(x, q);
    // derivatives of az, ax with respect to their own variable
    let daz = if p >= 2 { wz * pf * dpow(z, p - 1) } else { T::zero() };
    let dax = if q >= 2 { wx * qf * dpow(x, q - 1) } else { T::zero() };
    let k = dg * z + bg * inv_ns;

    [
        [-two * k, two * az, two * (daz * y - dg * x)],
        [two * (dax * z - az), -two * k, two * (ax - daz * x - dg * y)],
        [-two * dax * y, -two * ax, -two * (two * dg * z + bg * inv_ns)],
    ]
}
