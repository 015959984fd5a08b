//! Collective spin matrices `J_a = sum_i sigma_a^i / N` in the Dicke basis.

use super::{c64, DickeError, Mat};

#[derive(Debug, Clone)]
pub struct DickeOperators {
    pub n_spins: u32,
    pub jx: Mat,
    pub jy: Mat,
    pub jz: Mat,
    pub jplus: Mat,
    pub jminus: Mat,
}

impl DickeOperators {
    pub fn dim(&self) -> usize {
        self.n_spins as usize + 1
    }

    /// Collective pi rotation about x, up to a global phase: maps `m -> -m`.
    pub fn g_z(&self) -> Mat {
        let d = self.dim();
        Mat::from_fn(d, d, |i, j| {
            if i + j == d - 1 {
                c64::new(1.0, 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        })
    }

    /// `m` of basis index `i`.
    pub fn m(&self, i: usize) -> f64 {
        self.n_spins as f64 / 2.0 - i as f64
    }
}

/// `a[i] = <i-1| J+ |i>` for `i = 1..d`, zero at both ends (length `d + 1`).
/// Ladder elements `(2/N) sqrt(S(S+1) - m(m+1))` for raising from index `i`.
pub(crate) fn ladder(n: u32) -> Vec<f64> {
    let d = n as usize + 1;
    let s = n as f64 / 2.0;
    let scale = 2.0 / n as f64;
    let mut a = vec![0.0; d + 1];
    for (i, ai) in a.iter_mut().enumerate().take(d).skip(1) {
        let m = s - i as f64;
        *ai = scale * (s * (s + 1.0) - m * (m + 1.0)).max(0.0).sqrt();
    }
    a
}

pub fn build_operators(n: u32) -> Result<DickeOperators, DickeError> {
    if n < 1 {
        return Err(DickeError::Domain("N must be >= 1".into()));
    }
    let d = n as usize + 1;
    let a = ladder(n);
    let s = n as f64 / 2.0;
    let zero = c64::new(0.0, 0.0);
    let jz = Mat::from_fn(d, d, |i, j| {
        if i == j {
            c64::new(2.0 * (s - i as f64) / n as f64, 0.0)
        } else {
            zero
        }
    });
    let jplus = Mat::from_fn(d, d, |i, j| if j == i + 1 { c64::new(a[j], 0.0) } else { zero });
    let jminus = jplus.adjoint().to_owned();
    let jx = Mat::from_fn(d, d, |i, j| (jplus[(i, j)] + jminus[(i, j)]) * 0.5);
    let jy = Mat::from_fn(d, d, |i, j| (jplus[(i, j)] - jminus[(i, j)]) * c64::new(0.0, -0.5));
    Ok(DickeOperators {
        n_spins: n,
        jx,
        jy,
        jz,
        jplus,
        jminus,
    })
}

/// Largest entry modulus.
pub fn max_abs(m: &Mat) -> f64 {
    let mut out = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            out = out.max(m[(i, j)].norm());
        }
    }
    out
}
