//! Time evolution of the master equation.

use serde::{Deserialize, Serialize};

use super::generator::Generator;
use super::operators::ladder;
use super::state::DensityMatrix;
use super::{c64, DickeError, EVOLVE_LIMIT};
use crate::ode::{dopri5, OdeOptions};
use crate::params::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolveOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Compute the smallest eigenvalue of every sample.
    pub check_positivity: bool,
    pub keep_snapshots: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-11,
            check_positivity: true,
            keep_snapshots: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolveSample {
    pub t: f64,
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    pub purity: f64,
    pub trace_error: f64,
    pub hermiticity_error: f64,
    /// NaN when positivity checks are off.
    pub min_eigenvalue: f64,
}

/// Warning raised when a sample's smallest eigenvalue drops below `-1e-6`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositivityBreach {
    pub t: f64,
    pub min_eigenvalue: f64,
}

pub const POSITIVITY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct EvolveResult {
    pub n_spins: u32,
    pub samples: Vec<EvolveSample>,
    pub warnings: Vec<PositivityBreach>,
    pub snapshots: Vec<(f64, DensityMatrix)>,
}

impl EvolveResult {
    /// `(t, <J_z>)` series.
    pub fn jz_series(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|s| (s.t, s.jz)).collect()
    }

    pub fn jx_series(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|s| (s.t, s.jx)).collect()
    }
}

fn observe(rho: &[c64], d: usize, a: &[f64], n: f64) -> (f64, f64, f64, f64, c64, f64) {
    let mut jz = 0.0;
    let mut jp = c64::new(0.0, 0.0);
    let mut pur = 0.0;
    let mut tr = c64::new(0.0, 0.0);
    let mut herm = 0.0f64;
    for j in 0..d {
        for i in 0..d {
            let z = rho[j * d + i];
            pur += z.norm_sqr();
            if i <= j {
                herm = herm.max((z - rho[i * d + j].conj()).norm());
            }
        }
        let diag = rho[j * d + j];
        tr += diag;
        jz += diag.re * 2.0 * (n / 2.0 - j as f64) / n;
        if j >= 1 {
            // Tr(rho J+) picks rho[j, j-1] * <j-1|J+|j>
            jp += rho[(j - 1) * d + j] * a[j];
        }
    }
    (jp.re, jp.im, jz, pur, tr, herm)
}

/// Integrates from `t = 0` and reports expectation values and diagnostics at
/// each sample time. Positivity breaches are collected as warnings.
pub fn evolve(
    params: &ModelParams<f64>,
    rho0: &DensityMatrix,
    sample_times: &[f64],
    opts: &EvolveOptions,
) -> Result<EvolveResult, DickeError> {
    let d = rho0.dim();
    let n = (d - 1) as u32;
    if n < 1 {
        return Err(DickeError::Domain("N must be >= 1".into()));
    }
    if n > EVOLVE_LIMIT {
        return Err(DickeError::SizeLimit { n, limit: EVOLVE_LIMIT });
    }
    let g = Generator::new(params, n)?;
    let a = ladder(n);
    let y0: Vec<f64> = bytemuck::cast_slice(&rho0.to_vec()).to_vec();
    let mut samples = Vec::with_capacity(sample_times.len());
    let mut warnings = Vec::new();
    let mut snapshots = Vec::new();
    let mut failure = None;
    dopri5(
        |_, y: &[f64], dy: &mut [f64]| {
            g.apply(bytemuck::cast_slice(y), bytemuck::cast_slice_mut(dy));
        },
        0.0,
        &y0,
        sample_times,
        &OdeOptions::new(opts.rel_tol, opts.abs_tol),
        |t, y| {
            let rho: &[c64] = bytemuck::cast_slice(y);
            let (jx, jy, jz, pur, tr, herm) = observe(rho, d, &a, n as f64);
            let needs_matrix = opts.check_positivity || opts.keep_snapshots;
            let mut min_eig = f64::NAN;
            if needs_matrix {
                let dm = DensityMatrix::from_vec(d, rho).expect("square state");
                if opts.check_positivity {
                    match dm.min_eigenvalue() {
                        Ok(v) => {
                            min_eig = v;
                            if v < -POSITIVITY_TOLERANCE {
                                warnings.push(PositivityBreach { t, min_eigenvalue: v });
                            }
                        }
                        Err(e) => failure = Some(e),
                    }
                }
                if opts.keep_snapshots {
                    snapshots.push((t, dm));
                }
            }
            samples.push(EvolveSample {
                t,
                jx,
                jy,
                jz,
                purity: pur,
                trace_error: (tr - c64::new(1.0, 0.0)).norm(),
                hermiticity_error: herm,
                min_eigenvalue: min_eig,
            });
        },
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(EvolveResult {
        n_spins: n,
        samples,
        warnings,
        snapshots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dicke::state::{coherent_state, purity};
    use crate::meanfield::integrate::uniform_times;

    #[test]
    fn unitary_keeps_purity() {
        let p = ModelParams::new(2, 1, 1.0, 3.0, 0.0, 0.0).unwrap();
        let rho = coherent_state(12, 1.0, 0.3);
        let r = evolve(&p, &rho, &uniform_times(3.0, 30), &EvolveOptions::default()).unwrap();
        for s in &r.samples {
            assert!((s.purity - 1.0).abs() < 1e-8, "{}", s.purity - 1.0);
        }
    }

    #[test]
    fn invariants_hold_during_btc_evolution() {
        let p = ModelParams::with_delta_gamma(2, 1, 1.0, 3.0, 0.2).unwrap();
        let rho = coherent_state(20, 0.0, 0.0);
        let opts = EvolveOptions {
            keep_snapshots: true,
            ..Default::default()
        };
        let r = evolve(&p, &rho, &uniform_times(5.0, 50), &opts).unwrap();
        assert_eq!(r.samples.len(), 51);
        assert!(r.warnings.is_empty());
        for s in &r.samples {
            assert!(s.trace_error < 1e-8);
            assert!(s.hermiticity_error < 1e-8);
            assert!(s.min_eigenvalue > -1e-6);
        }
        let (t, last) = r.snapshots.last().unwrap();
        assert_eq!(*t, 5.0);
        assert!((purity(last) - r.samples[50].purity).abs() < 1e-14);
        assert!((r.samples[0].jz - 1.0).abs() < 1e-14);
    }

    #[test]
    fn too_large() {
        let p = ModelParams::with_delta_gamma(2, 1, 1.0, 3.0, 0.2).unwrap();
        let rho = DensityMatrix::maximally_mixed(302);
        assert!(matches!(evolve(&p, &rho, &[1.0], &EvolveOptions::default()), Err(DickeError::SizeLimit { .. })));
    }
}
