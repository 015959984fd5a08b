//! Liouvillian spectra and steady states.

use faer::linalg::solvers::Solve;
use serde::{Deserialize, Serialize};

use super::generator::{build_liouvillian, LiouvillianMatrix};
use super::state::DensityMatrix;
use super::{c64, DickeError, Mat};
use crate::params::ModelParams;

/// Relative threshold (times the 1-norm of `L`) for a numerically zero eigenvalue.
pub const ZERO_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub n_spins: u32,
    /// Leading eigenvalues by descending real part, `lambda_0` first.
    pub eigenvalues: Vec<c64>,
    /// `|Re lambda_1|`.
    pub liouvillian_gap: f64,
    pub norm: f64,
    pub zero_count: usize,
    /// More than one eigenvalue is numerically zero.
    pub degenerate_zero: bool,
    /// Right eigenvector of `lambda_0`, unit 2-norm, column-stacked.
    pub zero_mode: Vec<c64>,
    pub steady_state: DensityMatrix,
}

impl SpectrumResult {
    /// First eigenvalue after `lambda_0` with `|Im| > tol`.
    pub fn slowest_complex(&self, tol: f64) -> Option<c64> {
        self.eigenvalues.iter().skip(1).find(|l| l.im.abs() > tol).copied()
    }

    /// First nonzero eigenvalue with `|Im| <= tol`.
    pub fn slowest_real(&self, tol: f64) -> Option<c64> {
        self.eigenvalues.iter().skip(1).find(|l| l.im.abs() <= tol).copied()
    }
}

fn unit(v: &mut [c64]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
}

fn to_density(d: usize, v: &[c64]) -> DensityMatrix {
    let rho = DensityMatrix::from_vec(d, v).expect("length d^2").hermitized();
    if rho.trace().norm() > f64::EPSILON {
        rho.trace_normalized()
    } else {
        rho
    }
}

/// Dense eigendecomposition of `L`, keeping the `k` eigenvalues with the
/// largest real part. The steady state comes from the `lambda_0` eigenvector,
/// obtained by shifted inverse iteration.
pub fn spectrum(l: &LiouvillianMatrix, k: usize) -> Result<SpectrumResult, DickeError> {
    let m = l.mat.nrows();
    let d = l.hilbert_dim();
    let mut ev = l
        .mat
        .eigenvalues()
        .map_err(|e| DickeError::Linalg(format!("{e:?}")))?;
    ev.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap().then(b.im.partial_cmp(&a.im).unwrap()));
    let norm = l.norm1();
    let zero_tol = ZERO_TOLERANCE * norm.max(f64::MIN_POSITIVE);
    let zero_count = ev.iter().filter(|z| z.norm() < zero_tol).count();
    let lambda0 = ev[0];
    let gap = ev.get(1).map_or(0.0, |z| z.re.abs());

    let shift = lambda0 - c64::new(1e-10 * norm.max(1.0), 0.0);
    let a = Mat::from_fn(m, m, |i, j| {
        if i == j {
            l.mat[(i, j)] - shift
        } else {
            l.mat[(i, j)]
        }
    });
    let lu = a.partial_piv_lu();
    let mut v: Vec<c64> = (0..m)
        .map(|idx| if idx % (d + 1) == 0 { c64::new(1.0, 0.0) } else { c64::new(0.0, 0.0) })
        .collect();
    unit(&mut v);
    for _ in 0..4 {
        let b = Mat::from_fn(m, 1, |i, _| v[i]);
        let x = lu.solve(&b);
        v = (0..m).map(|i| x[(i, 0)]).collect();
        unit(&mut v);
    }
    let steady_state = to_density(d, &v);
    ev.truncate(k.max(1).min(m));
    Ok(SpectrumResult {
        n_spins: l.n_spins,
        eigenvalues: ev,
        liouvillian_gap: gap,
        norm,
        zero_count,
        degenerate_zero: zero_count > 1,
        zero_mode: v,
        steady_state,
    })
}

#[derive(Debug, Clone)]
pub struct SteadyState {
    pub rho: DensityMatrix,
    /// `||L vec(rho)||_2`.
    pub residual: f64,
    pub min_eigenvalue: f64,
    /// Smallest and second-smallest singular values of `L`.
    pub smallest_singular_values: [f64; 2],
    /// Right singular vector of the smallest singular value, unit norm.
    pub null_vector: Vec<c64>,
}

/// Null space of `L` from its singular-value decomposition.
pub fn steady_state(params: &ModelParams<f64>, n: u32) -> Result<SteadyState, DickeError> {
    steady_state_of(&build_liouvillian(params, n)?)
}

pub fn steady_state_of(l: &LiouvillianMatrix) -> Result<SteadyState, DickeError> {
    let m = l.mat.nrows();
    let d = l.hilbert_dim();
    let svd = l.mat.svd().map_err(|e| DickeError::Linalg(format!("{e:?}")))?;
    let s = svd.S().column_vector();
    let smin = s[m - 1].re;
    let snext = if m >= 2 { s[m - 2].re } else { f64::INFINITY };
    let tol = ZERO_TOLERANCE * l.norm1().max(f64::MIN_POSITIVE);
    if snext < tol {
        let count = (0..m).filter(|&i| s[i].re < tol).count();
        return Err(DickeError::DegenerateZero { count });
    }
    let vcol = svd.V().col(m - 1);
    let null_vector: Vec<c64> = vcol.iter().copied().collect();
    let rho = to_density(d, &null_vector);
    let lv = l.apply(&rho.to_vec());
    let residual = lv.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let min_eigenvalue = rho.min_eigenvalue()?;
    Ok(SteadyState {
        rho,
        residual,
        min_eigenvalue,
        smallest_singular_values: [smin, snext],
        null_vector,
    })
}

/// `|<u, v>|^2 / (|u|^2 |v|^2)`.
pub fn fidelity(u: &[c64], v: &[c64]) -> f64 {
    let dot: c64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
    let nu: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    let nv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    dot.norm_sqr() / (nu * nv)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub n_spins: u32,
    pub gap: f64,
    pub eigenvalues: Vec<[f64; 2]>,
}

impl From<&SpectrumResult> for SpectrumRecord {
    fn from(s: &SpectrumResult) -> Self {
        Self {
            n_spins: s.n_spins,
            gap: s.liouvillian_gap,
            eigenvalues: s.eigenvalues.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}
