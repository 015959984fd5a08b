//! Structure of a Dicke-basis steady state.

use serde::{Deserialize, Serialize};

use crate::dicke::{purity, DensityMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyStateMetrics {
    pub purity: f64,
    /// `max |rho_mm - 1/(N+1)|`
    pub diag_uniformity: f64,
    /// `sum_{m != m'} |rho_mm'|^2`
    pub offdiag_mass: f64,
    pub n_spins: u32,
}

pub fn steadystate_metrics(rho: &DensityMatrix) -> SteadyStateMetrics {
    let d = rho.dim();
    let flat = 1.0 / d as f64;
    let mut diag_uniformity: f64 = 0.0;
    let mut offdiag_mass = 0.0;
    for j in 0..d {
        for i in 0..d {
            let v = rho.get(i, j);
            if i == j {
                diag_uniformity = diag_uniformity.max((v.re - flat).abs());
            } else {
                offdiag_mass += v.norm_sqr();
            }
        }
    }
    SteadyStateMetrics {
        purity: purity(rho),
        diag_uniformity,
        offdiag_mass,
        n_spins: rho.n_spins(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dicke::coherent_state;

    #[test]
    fn maximally_mixed() {
        let m = steadystate_metrics(&DensityMatrix::maximally_mixed(11));
        assert!((m.purity - 1.0 / 11.0).abs() < 1e-14);
        assert!(m.diag_uniformity < 1e-15);
        assert_eq!(m.offdiag_mass, 0.0);
        assert_eq!(m.n_spins, 10);
    }

    #[test]
    fn coherent_is_pure() {
        let m = steadystate_metrics(&coherent_state(12, 1.1, 0.4));
        assert!((m.purity - 1.0).abs() < 1e-12);
        assert!(m.offdiag_mass > 0.0);
    }
}
