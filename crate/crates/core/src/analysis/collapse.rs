//! Finite-size data collapse of damping envelopes.

use serde::{Deserialize, Serialize};

use super::fit::AMPLITUDE_FLOOR;
use super::AnalysisError;
use crate::scalar::Real;

const GRID_POINTS: usize = 200;

fn interp<T: Real>(pts: &[(T, T)], x: T) -> T {
    let j = pts.partition_point(|p| p.0 <= x);
    if j == 0 {
        return pts[0].1;
    }
    if j >= pts.len() {
        return pts[pts.len() - 1].1;
    }
    let (x0, y0) = pts[j - 1];
    let (x1, y1) = pts[j];
    if x1 > x0 {
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    } else {
        y0
    }
}

/// Mean pairwise RMS distance between envelopes replotted against
/// `t N^(-nu)`, on a 200-point grid spanning the common rescaled range.
pub fn damping_collapse<T: Real>(envelopes: &[(u32, Vec<(T, T)>)], nu: T) -> Result<T, AnalysisError> {
    if envelopes.len() < 3 {
        return Err(AnalysisError::InsufficientData(format!(
            "{} sizes, need 3",
            envelopes.len()
        )));
    }
    let floor = T::lit(AMPLITUDE_FLOOR);
    let scaled: Vec<Vec<(T, T)>> = envelopes
        .iter()
        .map(|(n, env)| {
            let s = T::from_u32(*n).unwrap().powf(-nu);
            env.iter()
                .filter(|p| p.1 >= floor)
                .map(|&(t, a)| (t * s, a))
                .collect::<Vec<_>>()
        })
        .collect();
    if scaled.iter().any(|e| e.len() < 2) {
        return Err(AnalysisError::InsufficientData(
            "an envelope has fewer than 2 usable points".into(),
        ));
    }
    let lo = scaled.iter().map(|e| e[0].0).fold(T::neg_infinity(), T::max);
    let hi = scaled.iter().map(|e| e[e.len() - 1].0).fold(T::infinity(), T::min);
    if !(hi > lo) {
        return Ok(T::infinity());
    }
    let grid: Vec<T> = (0..GRID_POINTS)
        .map(|i| lo + (hi - lo) * T::from_usize_lossy(i) / T::from_usize_lossy(GRID_POINTS - 1))
        .collect();
    let curves: Vec<Vec<T>> = scaled
        .iter()
        .map(|e| grid.iter().map(|&x| interp(e, x)).collect())
        .collect();
    let mut total = T::zero();
    let mut pairs = 0usize;
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            let ss = curves[i]
                .iter()
                .zip(&curves[j])
                .fold(T::zero(), |s, (a, b)| s + (*a - *b) * (*a - *b));
            total += (ss / T::from_usize_lossy(GRID_POINTS)).sqrt();
            pairs += 1;
        }
    }
    Ok(total / T::from_usize_lossy(pairs))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseScan<T> {
    pub nu_best: T,
    pub score_best: T,
    /// `(nu, score)` for every grid value.
    pub scores: Vec<(T, T)>,
}

/// Grid minimization of [`damping_collapse`].
pub fn best_collapse<T: Real>(envelopes: &[(u32, Vec<(T, T)>)], nu_grid: &[T]) -> Result<CollapseScan<T>, AnalysisError> {
    if nu_grid.is_empty() {
        return Err(AnalysisError::InvalidInput("empty nu grid".into()));
    }
    let mut scores = Vec::with_capacity(nu_grid.len());
    for &nu in nu_grid {
        scores.push((nu, damping_collapse(envelopes, nu)?));
    }
    let (nu_best, score_best) = scores
        .iter()
        .copied()
        .fold((nu_grid[0], T::infinity()), |b, s| if s.1 < b.1 { s } else { b });
    Ok(CollapseScan {
        nu_best,
        score_best,
        scores,
    })
}
