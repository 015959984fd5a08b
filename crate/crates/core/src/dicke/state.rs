//! Density matrices in the Dicke basis.

use faer::Side;
use serde::{Deserialize, Serialize};

use super::{c64, DickeError, Mat};

#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: Mat,
}

impl DensityMatrix {
    /// Wraps a square matrix without validation; see [`DensityMatrix::diagnostics`].
    pub fn from_mat(mat: Mat) -> Result<Self, DickeError> {
        if mat.nrows() != mat.ncols() {
            return Err(DickeError::DimensionMismatch {
                expected: mat.nrows(),
                got: mat.ncols(),
            });
        }
        Ok(Self { mat })
    }

    /// From a column-major vector of length `d^2`.
    pub fn from_vec(d: usize, v: &[c64]) -> Result<Self, DickeError> {
        if v.len() != d * d {
            return Err(DickeError::DimensionMismatch {
                expected: d * d,
                got: v.len(),
            });
        }
        Ok(Self {
            mat: Mat::from_fn(d, d, |i, j| v[j * d + i]),
        })
    }

    /// `I / d`.
    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            mat: Mat::from_fn(d, d, |i, j| {
                if i == j {
                    c64::new(1.0 / d as f64, 0.0)
                } else {
                    c64::new(0.0, 0.0)
                }
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn n_spins(&self) -> u32 {
        (self.dim() - 1) as u32
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> c64 {
        self.mat[(i, j)]
    }

    pub fn to_vec(&self) -> Vec<c64> {
        let d = self.dim();
        let mut v = Vec::with_capacity(d * d);
        for j in 0..d {
            v.extend(self.mat.col(j).iter().copied());
        }
        v
    }

    pub fn trace(&self) -> c64 {
        (0..self.dim()).map(|i| self.mat[(i, i)]).sum()
    }

    /// Largest `|rho_ij - conj(rho_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut e = 0.0f64;
        for j in 0..d {
            for i in 0..=j {
                e = e.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        e
    }

    /// `(rho + rho^dagger) / 2`.
    pub fn hermitized(&self) -> Self {
        let d = self.dim();
        Self {
            mat: Mat::from_fn(d, d, |i, j| (self.mat[(i, j)] + self.mat[(j, i)].conj()) * 0.5),
        }
    }

    /// Divides by the (real part of the) trace.
    pub fn trace_normalized(&self) -> Self {
        let t = self.trace().re;
        let d = self.dim();
        Self {
            mat: Mat::from_fn(d, d, |i, j| self.mat[(i, j)] / t),
        }
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>, DickeError> {
        self.hermitized()
            .mat
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| DickeError::Linalg(format!("{e:?}")))
    }

    pub fn min_eigenvalue(&self) -> Result<f64, DickeError> {
        Ok(self.eigenvalues()?.first().copied().unwrap_or(f64::NAN))
    }

    pub fn diagnostics(&self) -> Result<Diagnostics, DickeError> {
        Ok(Diagnostics {
            trace_error: (self.trace() - c64::new(1.0, 0.0)).norm(),
            hermiticity_error: self.hermiticity_error(),
            min_eigenvalue: self.min_eigenvalue()?,
        })
    }

    /// Row-major `[re, im]` pairs for serialization.
    pub fn to_record(&self) -> DensityMatrixRecord {
        let d = self.dim();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let z = self.mat[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        DensityMatrixRecord {
            dim: d,
            basis: "dicke_m_descending".into(),
            entries,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

/// Serialized density matrix: row-major entries, basis `m = S .. -S`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrixRecord {
    pub dim: usize,
    pub basis: String,
    pub entries: Vec<[f64; 2]>,
}

fn ln_binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

/// Coherent state with all spins along `(theta, phi)`.
pub fn coherent_state(n: u32, theta: f64, phi: f64) -> DensityMatrix {
    let d = n as usize + 1;
    let (s, c) = (theta / 2.0).sin_cos();
    let amps: Vec<c64> = (0..d)
        .map(|i| {
            // N/2 + m = N - i spins up
            let up = n - i as u32;
            let down = i as u32;
            let mag = |x: f64, k: u32| if k == 0 { 1.0 } else { x.powi(k as i32) };
            let r = (0.5 * ln_binomial(n, up)).exp() * mag(c, up) * mag(s, down);
            c64::from_polar(r, -(up as f64) * phi)
        })
        .collect();
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
    DensityMatrix {
        mat: Mat::from_fn(d, d, |i, j| amps[i] * amps[j].conj() / norm),
    }
}

/// `Tr(rho op)`.
pub fn expect(rho: &DensityMatrix, op: &Mat) -> Result<c64, DickeError> {
    let d = rho.dim();
    if op.nrows() != d || op.ncols() != d {
        return Err(DickeError::DimensionMismatch {
            expected: d,
            got: op.nrows(),
        });
    }
    let mut s = c64::new(0.0, 0.0);
    for j in 0..d {
        for i in 0..d {
            s += rho.mat[(i, j)] * op[(j, i)];
        }
    }
    Ok(s)
}

/// `Tr(rho^2)` for Hermitian `rho`, i.e. the squared Frobenius norm.
pub fn purity(rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let mut s = 0.0;
    for j in 0..d {
        for i in 0..d {
            s += rho.mat[(i, j)].norm_sqr();
        }
    }
    s
}

#[cfg(test)]
pub(crate) fn random_density_matrix<R: rand::Rng>(n: u32, rng: &mut R) -> DensityMatrix {
    let d = n as usize + 1;
    let g = Mat::from_fn(d, d, |_, _| c64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let m = &g * g.adjoint();
    DensityMatrix::from_mat(m).unwrap().trace_normalized()
}
