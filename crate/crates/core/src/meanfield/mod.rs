//! Mean-field dynamics on the Bloch sphere.

pub mod envelope;
pub mod fixed;
pub mod integrate;
pub mod orbit;
pub mod portrait;
pub mod rhs;

use thiserror::Error;

use crate::ode::OdeError;
use crate::params::ModelParams;
use crate::scalar::Real;

pub use envelope::envelope;
pub use fixed::{classify, classify_with_step, find_fixed_points, FixedPoint, Stability};
pub use integrate::{integrate, uniform_times, IntegrateOptions, Trajectory};
pub use orbit::{detect_orbit, detect_orbit_series, OrbitReport, OrbitVerdict};
pub use portrait::{phase_portrait, seed_grid, PortraitData, PortraitTrace};
pub use rhs::{rhs, rhs_collective, rhs_local, BlochDerivative, Mode};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeanFieldError {
    #[error("integration failed: {0}")]
    Integrate(#[from] OdeError),
    #[error("point is not stationary: |rhs| = {residual:e}")]
    NotAFixedPoint { residual: f64 },
    #[error("too few oscillation peaks ({peaks}) for the requested window")]
    TooShort { peaks: usize },
    #[error("{0}")]
    InvalidInput(String),
}

/// Collective flow in the z chart written directly in `(phi, cos_theta)` on
/// the unit sphere. Singular at the poles when `q = 1`.
pub fn polar_rhs<T: Real>(params: &ModelParams<T>, phi: T, cos_theta: T) -> (T, T) {
    let two = T::lit(2.0);
    let (p, q) = (params.p() as i32, params.q() as i32);
    let pf = T::from_i32(p).unwrap();
    let qf = T::from_i32(q).unwrap();
    let c = cos_theta;
    let s = (T::one() - c * c).max(T::zero()).sqrt();
    let (sp, cp) = phi.sin_cos();
    let phi_dot = -two * params.omega_z() * pf * c.powi(p - 1)
        + two * params.omega_x() * qf * c * s.powi(q - 2) * cp.powi(q);
    let cos_dot = -two * params.omega_x() * qf * s.powi(q) * cp.powi(q - 1) * sp
        + two * params.delta_gamma() * (T::one() - c * c);
    (phi_dot, cos_dot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{bloch_from_angles, Axis};
    use fixed::chart_velocity;
    use rand::{Rng, SeedableRng};

    #[test]
    fn polar_form_matches_chain_rule() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (p, q) in [(2, 1), (1, 1), (3, 2), (2, 4)] {
            let params = ModelParams::<f64>::new(p, q, rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0), 0.3, 0.1).unwrap();
            for _ in 0..100 {
                let c: f64 = rng.gen_range(-0.99..0.99);
                let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let s = bloch_from_angles(c.acos(), phi, Axis::ZPole);
                let (a, b) = chart_velocity(&params, s, Axis::ZPole);
                let (pa, pb) = polar_rhs(&params, phi, c);
                assert!((a - pa).abs() < 1e-8 && (b - pb).abs() < 1e-8, "{p},{q}: ({a},{b}) vs ({pa},{pb})");
            }
        }
    }
}
