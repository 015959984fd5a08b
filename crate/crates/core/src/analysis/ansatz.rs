//! Total spin of an identical-spin product state.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::AnalysisError;

/// Largest `N` accepted by [`brute_force_total_spin`].
pub const BRUTE_FORCE_LIMIT: u32 = 12;

/// Single-spin state `[[a, b e^{-i phase}], [b e^{i phase}, 1 - a]]` in the
/// `(up, down)` basis, repeated on `n_spins` sites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductAnsatz {
    a: f64,
    b: f64,
    phase: f64,
    n_spins: u32,
}

impl ProductAnsatz {
    pub fn new(a: f64, b: f64, phase: f64, n_spins: u32) -> Result<Self, AnalysisError> {
        if !(0.0..=1.0).contains(&a) || !b.is_finite() || !phase.is_finite() {
            return Err(AnalysisError::InvalidInput(format!(
                "a = {a} must lie in [0, 1]; b and phase must be finite"
            )));
        }
        if b * b > a * (1.0 - a) + 1e-15 {
            return Err(AnalysisError::InvalidInput(format!(
                "b^2 = {} exceeds a(1-a) = {}",
                b * b,
                a * (1.0 - a)
            )));
        }
        if n_spins == 0 {
            return Err(AnalysisError::InvalidInput("n_spins must be positive".into()));
        }
        Ok(Self { a, b, phase, n_spins })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn phase(&self) -> f64 {
        self.phase
    }
    pub fn n_spins(&self) -> u32 {
        self.n_spins
    }

    /// Purity of the single-spin state.
    pub fn single_purity(&self) -> f64 {
        0.5 * ((2.0 * self.a - 1.0).powi(2) + 1.0 + 4.0 * self.b * self.b)
    }

    /// `rho[r][c]`, with index 0 = up.
    fn single(&self) -> [[Complex64; 2]; 2] {
        let off = Complex64::from_polar(self.b, self.phase);
        [
            [Complex64::new(self.a, 0.0), off.conj()],
            [off, Complex64::new(1.0 - self.a, 0.0)],
        ]
    }
}

/// `<S^2> = 3N/4 + N(N-1)(2P-1)/4`.
pub fn ansatz_total_spin(ans: &ProductAnsatz) -> f64 {
    let n = ans.n_spins as f64;
    0.75 * n + 0.25 * n * (n - 1.0) * (2.0 * ans.single_purity() - 1.0)
}

/// Applies `sum_j sigma_alpha^j / 2` to a sparse vector.
fn apply_s(alpha: usize, n: u32, v: &[(usize, Complex64)]) -> Vec<(usize, Complex64)> {
    let i = Complex64::i();
    let mut out = Vec::with_capacity(v.len() * n as usize);
    for &(u, c) in v {
        for j in 0..n {
            let bit = 1usize << j;
            let down = u & bit != 0;
            let (target, coeff) = match alpha {
                0 => (u ^ bit, Complex64::new(1.0, 0.0)),
                1 => (u ^ bit, if down { -i } else { i }),
                _ => (u, Complex64::new(if down { -1.0 } else { 1.0 }, 0.0)),
            };
            out.push((target, c * coeff * 0.5));
        }
    }
    out
}

/// `Tr(rho^{(x)N} S^2)` with `S^2` assembled from Pauli sums on `2^N` states.
pub fn brute_force_total_spin(ans: &ProductAnsatz) -> Result<f64, AnalysisError> {
    let n = ans.n_spins;
    if n > BRUTE_FORCE_LIMIT {
        return Err(AnalysisError::SizeLimit {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let r1 = ans.single();
    let rho = |row: usize, col: usize| -> Complex64 {
        (0..n).fold(Complex64::new(1.0, 0.0), |acc, j| {
            acc * r1[(row >> j) & 1][(col >> j) & 1]
        })
    };
    let mut total = Complex64::new(0.0, 0.0);
    for u in 0..1usize << n {
        // column u of S^2, summed over the three components
        for alpha in 0..3 {
            let once = apply_s(alpha, n, &[(u, Complex64::new(1.0, 0.0))]);
            for (v, c) in apply_s(alpha, n, &once) {
                total += rho(u, v) * c;
            }
        }
    }
    Ok(total.re)
}
