//! Hamiltonian and Lindblad generator.

use super::operators::{build_operators, ladder, DickeOperators};
use super::state::DensityMatrix;
use super::{c64, DickeError, Mat};
use crate::params::ModelParams;

/// Default cap on `N` for dense superoperators; `(N+1)^2 = 1681` at 40.
pub const DENSE_LIMIT: u32 = 40;

fn mat_pow(a: &Mat, k: u32) -> Mat {
    let d = a.nrows();
    let mut out = Mat::identity(d, d);
    for _ in 0..k {
        out = &out * a;
    }
    out
}

/// `H = -N (omega_z J_z^p + omega_x J_x^q)`.
pub fn build_hamiltonian(params: &ModelParams<f64>, ops: &DickeOperators) -> Mat {
    let n = ops.n_spins as f64;
    let hz = mat_pow(&ops.jz, params.p());
    let hx = mat_pow(&ops.jx, params.q());
    let cz = -n * params.omega_z();
    let cx = -n * params.omega_x();
    Mat::from_fn(ops.dim(), ops.dim(), |i, j| hz[(i, j)] * cz + hx[(i, j)] * cx)
}

/// Banded representation of the master equation for fast evolution.
///
/// `H` is real with bandwidth `q`, `J+` has one superdiagonal, and both
/// `J-J+` and `J+J-` are diagonal, so one application costs `O(d^2 q)`.
#[derive(Debug, Clone)]
pub struct Generator {
    dim: usize,
    /// Nonzero `(column, value)` pairs of each row of the symmetric `H`.
    h_rows: Vec<Vec<(usize, f64)>>,
    a: Vec<f64>,
    rate_up: f64,
    rate_down: f64,
}

impl Generator {
    pub fn new(params: &ModelParams<f64>, n: u32) -> Result<Self, DickeError> {
        let ops = build_operators(n)?;
        let h = build_hamiltonian(params, &ops);
        let d = ops.dim();
        let h_rows = (0..d)
            .map(|i| {
                (0..d)
                    .filter_map(|k| {
                        let v = h[(i, k)];
                        debug_assert!(v.im.abs() < 1e-12);
                        (v.re != 0.0).then_some((k, v.re))
                    })
                    .collect()
            })
            .collect();
        let nf = n as f64;
        Ok(Self {
            dim: d,
            h_rows,
            a: ladder(n),
            rate_up: nf * params.gamma_up(),
            rate_down: nf * params.gamma_down(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `out = L[rho]` for column-major `rho` of length `d^2`.
    pub fn apply(&self, rho: &[c64], out: &mut [c64]) {
        let d = self.dim;
        let a = &self.a;
        let (gu, gd) = (self.rate_up, self.rate_down);
        let minus_i = c64::new(0.0, -1.0);
        for j in 0..d {
            let col = &rho[j * d..(j + 1) * d];
            for i in 0..d {
                let mut comm = c64::new(0.0, 0.0);
                for &(k, h) in &self.h_rows[i] {
                    comm += col[k] * h;
                }
                for &(k, h) in &self.h_rows[j] {
                    comm -= rho[k * d + i] * h;
                }
                let r = col[i];
                let mut v = minus_i * comm;
                // (J-J+)_ii = a_i^2 and (J+J-)_ii = a_{i+1}^2
                let (lo_i, lo_j, hi_i, hi_j) = (a[i], a[j], a[i + 1], a[j + 1]);
                if gu != 0.0 {
                    if i + 1 < d && j + 1 < d {
                        v += rho[(j + 1) * d + i + 1] * (gu * hi_i * hi_j);
                    }
                    v -= r * (0.5 * gu * (lo_i * lo_i + lo_j * lo_j));
                }
                if gd != 0.0 {
                    if i > 0 && j > 0 {
                        v += rho[(j - 1) * d + i - 1] * (gd * lo_i * lo_j);
                    }
                    v -= r * (0.5 * gd * (hi_i * hi_i + hi_j * hi_j));
                }
                out[j * d + i] = v;
            }
        }
    }
}

/// `-i[H, rho] + N G_up D[J+](rho) + N G_down D[J-](rho)`.
pub fn lindblad_rhs(params: &ModelParams<f64>, rho: &DensityMatrix) -> Result<Mat, DickeError> {
    let d = rho.dim();
    if d < 2 {
        return Err(DickeError::Domain("density matrix must be at least 2x2".into()));
    }
    let g = Generator::new(params, (d - 1) as u32)?;
    let v = rho.to_vec();
    let mut out = vec![c64::new(0.0, 0.0); d * d];
    g.apply(&v, &mut out);
    Ok(Mat::from_fn(d, d, |i, j| out[j * d + i]))
}

/// Dense superoperator on column-stacked density matrices.
#[derive(Debug, Clone)]
pub struct LiouvillianMatrix {
    pub n_spins: u32,
    pub mat: Mat,
}

impl LiouvillianMatrix {
    /// Hilbert-space dimension `N + 1`.
    pub fn hilbert_dim(&self) -> usize {
        self.n_spins as usize + 1
    }

    pub fn apply(&self, v: &[c64]) -> Vec<c64> {
        let m = self.mat.nrows();
        let mut out = vec![c64::new(0.0, 0.0); m];
        for (j, &vj) in v.iter().enumerate() {
            if vj == c64::new(0.0, 0.0) {
                continue;
            }
            let col = self.mat.col(j);
            for i in 0..m {
                out[i] += col[i] * vj;
            }
        }
        out
    }

    /// Induced 1-norm (largest column sum).
    pub fn norm1(&self) -> f64 {
        (0..self.mat.ncols())
            .map(|j| self.mat.col(j).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// `L += coef * (b kron a)`, skipping zero entries.
fn add_kron(l: &mut Mat, b: &Mat, a: &Mat, coef: c64) {
    let d = a.nrows();
    let zero = c64::new(0.0, 0.0);
    for jb in 0..d {
        for ib in 0..d {
            let bv = b[(ib, jb)];
            if bv == zero {
                continue;
            }
            let f = bv * coef;
            for ja in 0..d {
                for ia in 0..d {
                    let av = a[(ia, ja)];
                    if av != zero {
                        l[(ib * d + ia, jb * d + ja)] += f * av;
                    }
                }
            }
        }
    }
}

/// Builds `L` by Kronecker products with `vec(A rho B) = (B^T kron A) vec(rho)`.
pub fn build_liouvillian(params: &ModelParams<f64>, n: u32) -> Result<LiouvillianMatrix, DickeError> {
    build_liouvillian_with_limit(params, n, DENSE_LIMIT)
}

pub fn build_liouvillian_with_limit(
    params: &ModelParams<f64>,
    n: u32,
    limit: u32,
) -> Result<LiouvillianMatrix, DickeError> {
    if n > limit {
        return Err(DickeError::SizeLimit { n, limit });
    }
    let ops = build_operators(n)?;
    let d = ops.dim();
    let h = build_hamiltonian(params, &ops);
    let id = Mat::identity(d, d);
    let mut l = Mat::zeros(d * d, d * d);
    let one = c64::new(1.0, 0.0);
    let i = c64::new(0.0, 1.0);
    add_kron(&mut l, &id, &h, -i);
    add_kron(&mut l, &h.transpose().to_owned(), &id, i);
    let nf = n as f64;
    for (rate, a) in [(params.gamma_up(), &ops.jplus), (params.gamma_down(), &ops.jminus)] {
        if rate == 0.0 {
            continue;
        }
        let g = one * (nf * rate);
        let ada = a.adjoint() * a;
        add_kron(&mut l, &a.conjugate().to_owned(), a, g);
        add_kron(&mut l, &id, &ada, g * -0.5);
        add_kron(&mut l, &ada.transpose().to_owned(), &id, g * -0.5);
    }
    Ok(LiouvillianMatrix { n_spins: n, mat: l })
}
