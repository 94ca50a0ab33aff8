//! One-sided (Hestenes) Jacobi singular value decomposition.
//!
//! Columns of a working copy are orthogonalized pairwise by complex plane
//! rotations until every pair is orthogonal to working precision. The column
//! norms are then the singular values. The method computes small singular
//! values to high relative accuracy, which matters when checking spectra
//! against each other at 1e-9.

use super::matrix::{dot, norm, ComplexMatrix, C64, ZERO};
use super::sweep_budget;
use crate::error::{Error, Result};

/// Thin decomposition `M = U diag(σ) V†` with `min(rows, cols)` singular
/// values in descending order.
#[derive(Debug, Clone)]
pub struct SingularSpectrum {
    pub singular_values: Vec<f64>,
    /// `rows × k`, orthonormal columns.
    pub left_vectors: ComplexMatrix,
    /// `cols × k`, orthonormal columns.
    pub right_vectors: ComplexMatrix,
}

impl SingularSpectrum {
    pub fn rank(&self, rel_tol: f64) -> usize {
        let top = self.singular_values.first().copied().unwrap_or(0.0);
        self.singular_values
            .iter()
            .filter(|&&s| s > rel_tol * top && s > 0.0)
            .count()
    }

    pub fn left(&self, k: usize) -> Vec<C64> {
        self.left_vectors.column(k)
    }

    pub fn right(&self, k: usize) -> Vec<C64> {
        self.right_vectors.column(k)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let (m, k) = self.left_vectors.shape();
        let n = self.right_vectors.rows();
        ComplexMatrix::from_fn(m, n, |i, j| {
            (0..k)
                .map(|l| {
                    self.left_vectors[(i, l)]
                        * self.singular_values[l]
                        * self.right_vectors[(j, l)].conj()
                })
                .sum()
        })
    }
}

/// SVD with the default sweep budget of `100 · max(rows, cols)`.
pub fn svd(m: &ComplexMatrix) -> Result<SingularSpectrum> {
    svd_with_budget(m, sweep_budget(m.rows(), m.cols()))
}

pub fn svd_with_budget(m: &ComplexMatrix, max_sweeps: usize) -> Result<SingularSpectrum> {
    if m.rows() >= m.cols() {
        jacobi_tall(m, max_sweeps)
    } else {
        let t = jacobi_tall(&m.adjoint(), max_sweeps)?;
        Ok(SingularSpectrum {
            singular_values: t.singular_values,
            left_vectors: t.right_vectors,
            right_vectors: t.left_vectors,
        })
    }
}

fn jacobi_tall(m: &ComplexMatrix, max_sweeps: usize) -> Result<SingularSpectrum> {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<C64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..cols)
        .map(|j| {
            let mut e = vec![ZERO; cols];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();
    let threshold = f64::EPSILON * rows as f64;
    // Columns this far below the matrix norm are numerically zero; rotating
    // them stalls once their entries go subnormal.
    let negligible = 1e-60 * a.iter().map(|col| norm_sqr(col)).sum::<f64>();

    let mut converged = cols == 1;
    for _ in 0..max_sweeps {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha = norm_sqr(&a[p]);
                let beta = norm_sqr(&a[q]);
                let gamma = dot(&a[p], &a[q]);
                let g = gamma.norm();
                if alpha.min(beta) <= negligible
                    || g <= threshold * alpha.sqrt() * beta.sqrt()
                    || g < f64::MIN_POSITIVE
                {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta.is_infinite() {
                    0.0
                } else {
                    let sign = if zeta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (lo, hi) = a.split_at_mut(q);
                rotate_pair(&mut lo[p], &mut hi[0], c, s, phase);
                let (lo, hi) = v.split_at_mut(q);
                rotate_pair(&mut lo[p], &mut hi[0], c, s, phase);
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure { sweeps: max_sweeps });
    }

    let sigma: Vec<f64> = a.iter().map(|col| norm(col)).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
    let top = sigma[order[0]];
    let cutoff = (top * 1e-13).max(f64::MIN_POSITIVE);

    let singular_values: Vec<f64> = order.iter().map(|&j| sigma[j]).collect();
    let mut left: Vec<Option<Vec<C64>>> = order
        .iter()
        .map(|&j| {
            (sigma[j] > cutoff).then(|| a[j].iter().map(|z| z / sigma[j]).collect())
        })
        .collect();
    complete_orthonormal(&mut left, rows);

    let left_vectors = ComplexMatrix::from_fn(rows, cols, |i, k| {
        left[k].as_ref().expect("completed")[i]
    });
    let right_vectors = ComplexMatrix::from_fn(cols, cols, |i, k| v[order[k]][i]);
    Ok(SingularSpectrum {
        singular_values,
        left_vectors,
        right_vectors,
    })
}

fn norm_sqr(u: &[C64]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum()
}

/// `(x, y) ← (c x − s·conj(phase)·y, s x + c·conj(phase)·y)`.
fn rotate_pair(x: &mut [C64], y: &mut [C64], c: f64, s: f64, phase: C64) {
    let ph = phase.conj();
    for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
        let a = *xi;
        let b = *yi * ph;
        *xi = a * c - b * s;
        *yi = a * s + b * c;
    }
}

/// Fills the missing slots with unit vectors orthogonal to all present ones,
/// drawn from the standard basis by largest residual.
fn complete_orthonormal(vectors: &mut [Option<Vec<C64>>], dim: usize) {
    for slot in 0..vectors.len() {
        if vectors[slot].is_some() {
            continue;
        }
        let mut best: Option<(f64, Vec<C64>)> = None;
        for k in 0..dim {
            let mut cand = vec![ZERO; dim];
            cand[k] = C64::new(1.0, 0.0);
            for _ in 0..2 {
                for u in vectors.iter().flatten() {
                    let proj = dot(u, &cand);
                    for (c, &ui) in cand.iter_mut().zip(u) {
                        *c -= ui * proj;
                    }
                }
            }
            let r = norm(&cand);
            if best.as_ref().is_none_or(|(b, _)| r > *b) {
                best = Some((r, cand));
            }
        }
        let (r, mut cand) = best.expect("dimension is positive");
        for c in cand.iter_mut() {
            *c /= r;
        }
        vectors[slot] = Some(cand);
    }
}
