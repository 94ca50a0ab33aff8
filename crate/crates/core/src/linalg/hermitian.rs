//! Cyclic Jacobi eigendecomposition for hermitian matrices.

use super::matrix::{ComplexMatrix, C64, ZERO};
use super::sweep_budget;
use crate::error::{Error, Result};

/// Eigenvalues in descending order with the matching unitary of column
/// eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianSpectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// `Σ f(λ_k) v_k v_k†`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        self.apply_fn_indexed(|_, lambda| f(lambda))
    }

    /// `Σ f(k, λ_k) v_k v_k†`, where `k` indexes the descending order.
    pub fn apply_fn_indexed(&self, f: impl Fn(usize, f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(k, lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = self.eigenvectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vi * self.eigenvectors[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_fn(|x| x)
    }
}

/// Eigendecomposition of a hermitian matrix.
///
/// The input must satisfy `‖M − M†‖_F ≤ tol · max(1, ‖M‖_F)`; it is
/// symmetrized as `(M + M†)/2` before the Jacobi sweeps.
pub fn hermitian_eig(m: &ComplexMatrix, tol: f64) -> Result<HermitianSpectrum> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let deviation = m.hermitian_deviation();
    if deviation > tol * m.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let budget = sweep_budget(n, n);

    let mut converged = false;
    for _ in 0..budget {
        let off = off_diagonal_norm(&a);
        if off <= f64::EPSILON * scale || off < f64::MIN_POSITIVE {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > 1e3 * f64::EPSILON * scale {
        return Err(Error::ConvergenceFailure { sweeps: budget });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianSpectrum {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One Jacobi rotation annihilating `a[p][q]`, accumulated into `v`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag < f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / mag;
    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // W = diag(1, conj(phase)) · [[c, s], [-s, c]] restricted to (p, q).
    let w_pp = C64::new(c, 0.0);
    let w_pq = C64::new(s, 0.0);
    let w_qp = -phase.conj() * s;
    let w_qq = phase.conj() * c;

    let n = a.rows();
    for i in 0..n {
        let x = a[(i, p)];
        let y = a[(i, q)];
        a[(i, p)] = x * w_pp + y * w_qp;
        a[(i, q)] = x * w_pq + y * w_qq;
    }
    for j in 0..n {
        let x = a[(p, j)];
        let y = a[(q, j)];
        a[(p, j)] = w_pp.conj() * x + w_qp.conj() * y;
        a[(q, j)] = w_pq.conj() * x + w_qq.conj() * y;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for i in 0..n {
        let x = v[(i, p)];
        let y = v[(i, q)];
        v[(i, p)] = x * w_pp + y * w_qp;
        v[(i, q)] = x * w_pq + y * w_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn identity_has_unit_eigenvalues() {
        let spec = hermitian_eig(&ComplexMatrix::identity(2), 1e-10).unwrap();
        assert!(spec.eigenvalues.iter().all(|&x| close(x, 1.0)));
    }

    #[test]
    fn diagonal_keeps_basis_vectors() {
        let m = ComplexMatrix::diag_real(&[3.0, -1.0]);
        let spec = hermitian_eig(&m, 1e-10).unwrap();
        assert!(close(spec.eigenvalues[0], 3.0) && close(spec.eigenvalues[1], -1.0));
        assert!(close(spec.eigenvectors[(0, 0)].norm(), 1.0));
        assert!(close(spec.eigenvectors[(1, 1)].norm(), 1.0));
    }

    #[test]
    fn pauli_x_eigenvalues_from_characteristic_polynomial() {
        // λ² − 1 = 0.
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let spec = hermitian_eig(&m, 1e-10).unwrap();
        assert!(close(spec.eigenvalues[0], 1.0) && close(spec.eigenvalues[1], -1.0));
        for (k, &lambda) in spec.eigenvalues.iter().enumerate() {
            let v = spec.eigenvector(k);
            let mv = m.matvec(&v);
            assert!(mv.iter().zip(&v).all(|(a, b)| (a - b * lambda).norm() < 1e-12));
        }
    }

    #[test]
    fn complex_pauli_y() {
        let m = ComplexMatrix::new(
            2,
            2,
            vec![ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO],
        )
        .unwrap();
        let spec = hermitian_eig(&m, 1e-10).unwrap();
        assert!(close(spec.eigenvalues[0], 1.0) && close(spec.eigenvalues[1], -1.0));
        assert!(spec.reconstruct().distance(&m).unwrap() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            hermitian_eig(&m, 1e-10),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            hermitian_eig(&ComplexMatrix::zeros(2, 3), 1e-10),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
