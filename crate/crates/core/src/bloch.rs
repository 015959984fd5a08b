//! Bloch vectors and the two polar charts used for phase portraits.

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Mean-field magnetization `(<J_x>, <J_y>, <J_z>)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochState<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> BlochState<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn distance(self, o: Self) -> T {
        let d = Self::new(self.x - o.x, self.y - o.y, self.z - o.z);
        d.norm()
    }

    pub fn cast<U: Real>(self) -> BlochState<U> {
        BlochState::new(
            U::lit(self.x.as_f64()),
            U::lit(self.y.as_f64()),
            U::lit(self.z.as_f64()),
        )
    }
}

/// Pole of the polar chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Axis {
    /// `(sin t cos f, sin t sin f, cos t)`
    ZPole,
    /// `(cos t, sin t cos f, sin t sin f)`
    XPole,
}

impl Axis {
    /// Chart in which the closed orbits of a `(p, q)` model are easiest to see.
    /// Odd `p` with even `q` has its ferromagnetic points on the x axis.
    pub fn natural(p: u32, q: u32) -> Self {
        if p % 2 == 1 && q.is_multiple_of(2) {
            Axis::XPole
        } else {
            Axis::ZPole
        }
    }

    /// Rotates Cartesian components into chart order `(a, b, c)`, where `c`
    /// is the polar component.
    #[inline]
    pub(crate) fn to_chart<T: Real>(self, s: BlochState<T>) -> [T; 3] {
        match self {
            Axis::ZPole => [s.x, s.y, s.z],
            Axis::XPole => [s.y, s.z, s.x],
        }
    }

    #[inline]
    pub(crate) fn unchart<T: Real>(self, c: [T; 3]) -> BlochState<T> {
        match self {
            Axis::ZPole => BlochState::new(c[0], c[1], c[2]),
            Axis::XPole => BlochState::new(c[2], c[0], c[1]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarState<T> {
    /// In `[0, 2 pi)`.
    pub phi: T,
    /// In `[-1, 1]`.
    pub cos_theta: T,
    pub axis: Axis,
    /// Set when the state sits on the pole; `phi` is then 0.
    pub at_pole: bool,
}

impl<T: Real> PolarState<T> {
    pub fn new(phi: T, cos_theta: T, axis: Axis) -> Self {
        Self {
            phi,
            cos_theta,
            axis,
            at_pole: cos_theta.abs() >= T::one(),
        }
    }

    /// Polar angle in `[0, pi]`.
    pub fn theta(&self) -> T {
        self.cos_theta.max(-T::one()).min(T::one()).acos()
    }

    pub fn to_bloch(&self) -> BlochState<T> {
        bloch_from_angles(self.theta(), self.phi, self.axis)
    }
}

pub fn bloch_from_angles<T: Real>(theta: T, phi: T, axis: Axis) -> BlochState<T> {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    axis.unchart([st * cp, st * sp, ct])
}

/// Inverse of [`bloch_from_angles`]. The vector need not have unit norm.
pub fn angles_from_bloch<T: Real>(s: BlochState<T>, axis: Axis) -> PolarState<T> {
    let [a, b, c] = axis.to_chart(s);
    let r = s.norm();
    let cos_theta = if r > T::zero() {
        (c / r).max(-T::one()).min(T::one())
    } else {
        T::one()
    };
    let at_pole = cos_theta.abs() >= T::one() || (a == T::zero() && b == T::zero());
    let phi = if at_pole {
        T::zero()
    } else {
        wrap_angle(b.atan2(a))
    };
    PolarState {
        phi,
        cos_theta,
        axis,
        at_pole,
    }
}

/// Maps an angle into `[0, 2 pi)`.
pub fn wrap_angle<T: Real>(phi: T) -> T {
    let tau = T::TAU();
    let w = phi % tau;
    let w = if w < T::zero() { w + tau } else { w };
    // `w + tau` can round up to exactly tau
    if w >= tau {
        T::zero()
    } else {
        w
    }
}
