//! Dense complex linear algebra used throughout the crate.
//!
//! Everything here is self-contained: a row-major [`ComplexMatrix`], a cyclic
//! Jacobi hermitian eigensolver, a one-sided Jacobi SVD and the functional
//! calculus on positive semidefinite matrices (square roots and inverse square
//! roots restricted to the support).

mod hermitian;
mod matrix;
mod svd;

pub use hermitian::{hermitian_eig, HermitianSpectrum};
pub use matrix::{ComplexMatrix, C64};
pub use svd::{svd, svd_with_budget, SingularSpectrum};

pub(crate) use matrix::{dot, norm, ZERO};

use crate::error::{Error, Result};

/// Relative cutoff separating the support of a PSD matrix from rounding noise.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;
/// Absolute part of the default `atol + rtol·scale` comparison.
pub const DEFAULT_ATOL: f64 = 1e-10;
/// Relative part of the default `atol + rtol·scale` comparison.
pub const DEFAULT_RTOL: f64 = 1e-8;
/// Hermiticity tolerance used when a caller does not supply one.
pub const DEFAULT_HERMITIAN_TOL: f64 = 1e-10;

/// `|a − b| ≤ atol + rtol·max(|a|, |b|)`.
pub fn approx_eq(a: f64, b: f64, atol: f64, rtol: f64) -> bool {
    (a - b).abs() <= atol + rtol * a.abs().max(b.abs())
}

pub(crate) fn sweep_budget(rows: usize, cols: usize) -> usize {
    100 * rows.max(cols)
}

/// Hilbert–Schmidt inner product `tr(M†N)`.
pub fn frobenius_inner(m: &ComplexMatrix, n: &ComplexMatrix) -> Result<C64> {
    if m.shape() != n.shape() {
        return Err(Error::DimensionMismatch(format!(
            "inner product of {}x{} and {}x{}",
            m.rows(),
            m.cols(),
            n.rows(),
            n.cols()
        )));
    }
    Ok(dot(m.data(), n.data()))
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(svd(m)?.singular_values.iter().sum())
}

/// Eigendecomposition of a PSD matrix with small negative eigenvalues
/// (above `−rank_tol·λ_max`) clipped to zero.
fn psd_spectrum(m: &ComplexMatrix, rank_tol: f64) -> Result<HermitianSpectrum> {
    let mut spec = hermitian_eig(m, DEFAULT_HERMITIAN_TOL.max(rank_tol))?;
    let top = spec.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    let floor = -rank_tol * top.max(f64::MIN_POSITIVE);
    if let Some(&min) = spec.eigenvalues.last() {
        if min < floor && min < -f64::EPSILON * 16.0 {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
    }
    for x in spec.eigenvalues.iter_mut() {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    Ok(spec)
}

/// Applies `f` to the eigenvalues above `rank_tol·λ_max`; the rest map to 0.
fn support_fn(m: &ComplexMatrix, rank_tol: f64, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let spec = psd_spectrum(m, rank_tol)?;
    let cutoff = rank_tol * spec.eigenvalues.first().copied().unwrap_or(0.0);
    Ok(spec.apply_fn(|x| if x > cutoff && x > 0.0 { f(x) } else { 0.0 }))
}

/// `Σ_{λ > rank_tol·λ_max} λ^{-1/2} v v†`: the inverse square root on the
/// support, zero on the kernel.
pub fn psd_inverse_sqrt(m: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    support_fn(m, rank_tol, |x| 1.0 / x.sqrt())
}

/// Square root of a PSD matrix (kernel and sub-threshold directions map to 0).
pub fn psd_sqrt(m: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    support_fn(m, rank_tol, f64::sqrt)
}

/// Orthogonal projector onto the support of a PSD matrix.
pub fn support_projector(m: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    support_fn(m, rank_tol, |_| 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(values: &[f64]) -> ComplexMatrix {
        ComplexMatrix::diag_real(values)
    }

    #[test]
    fn inverse_sqrt_of_diagonal() {
        let r = psd_inverse_sqrt(&diag(&[4.0, 1.0]), DEFAULT_RANK_TOL).unwrap();
        assert!(r.distance(&diag(&[0.5, 1.0])).unwrap() < 1e-14);
    }

    #[test]
    fn inverse_sqrt_annihilates_kernel() {
        let r = psd_inverse_sqrt(&diag(&[1.0, 0.0]), DEFAULT_RANK_TOL).unwrap();
        assert!(r.distance(&diag(&[1.0, 0.0])).unwrap() < 1e-14);
    }

    #[test]
    fn inverse_sqrt_of_scalar() {
        let r = psd_inverse_sqrt(&diag(&[0.5, 0.5]), DEFAULT_RANK_TOL).unwrap();
        let s = 2f64.sqrt();
        assert!(r.distance(&diag(&[s, s])).unwrap() < 1e-14);
    }

    #[test]
    fn inverse_sqrt_rejects_negative_spectrum() {
        assert!(matches!(
            psd_inverse_sqrt(&diag(&[1.0, -0.5]), DEFAULT_RANK_TOL),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn frobenius_inner_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(frobenius_inner(&i2, &i2).unwrap(), C64::new(2.0, 0.0));
        let e1 = ComplexMatrix::unit(2, 0, 0);
        let e2 = ComplexMatrix::unit(2, 1, 1);
        assert_eq!(frobenius_inner(&e1, &e2).unwrap(), ZERO);
        // tr(X†X) = tr(I) = 2 for the Pauli X matrix.
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(frobenius_inner(&x, &x).unwrap(), C64::new(2.0, 0.0));
        assert!(frobenius_inner(&x, &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn trace_norm_examples() {
        assert!((trace_norm(&ComplexMatrix::identity(3)).unwrap() - 3.0).abs() < 1e-14);
        let rho = diag(&[0.25, 0.75]);
        assert!((trace_norm(&rho).unwrap() - 1.0).abs() < 1e-14);
        // |0><0| − |1><1| has eigenvalues ±1.
        let d = &ComplexMatrix::unit(2, 0, 0) - &ComplexMatrix::unit(2, 1, 1);
        assert!((trace_norm(&d).unwrap() - 2.0).abs() < 1e-14);
    }
}
