use crate::error::{Error, Result};
use crate::linalg::{norm, svd, ComplexMatrix, C64};

/// Singular values of the coefficient matrix above this count toward the
/// Schmidt rank.
const SCHMIDT_RANK_TOL: f64 = 1e-10;

fn coefficient_matrix(psi: &[C64], dim_a: usize, dim_b: usize) -> Result<ComplexMatrix> {
    if psi.len() != dim_a * dim_b {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for dims ({dim_a}, {dim_b})",
            psi.len()
        )));
    }
    let n = norm(psi);
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm: n });
    }
    ComplexMatrix::new(dim_a, dim_b, psi.to_vec())
}

/// `μ(|ψ⟩⟨ψ|)`: 0 for product vectors, 1 for every entangled one.
pub fn pure_state_mu(psi: &[C64], dim_a: usize, dim_b: usize) -> Result<f64> {
    let c = coefficient_matrix(psi, dim_a, dim_b)?;
    let rank = svd(&c)?
        .singular_values
        .iter()
        .filter(|&&s| s > SCHMIDT_RANK_TOL)
        .count();
    Ok(if rank > 1 { 1.0 } else { 0.0 })
}

/// Explicit hermitian optimizers attaining `μ = 1` for an entangled vector
/// `ψ = Σ α_i v_i ⊗ w_i`: `X = c(α₂²|v₁⟩⟨v₁| − α₁²|v₂⟩⟨v₂|)` and the same on
/// `w`, with `c = 1/(α₁α₂√(α₁² + α₂²))`.
pub fn pure_state_optimizers(psi: &[C64], dim_a: usize, dim_b: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let c = coefficient_matrix(psi, dim_a, dim_b)?;
    let dec = svd(&c)?;
    let alphas = &dec.singular_values;
    if alphas.len() < 2 || alphas[1] <= SCHMIDT_RANK_TOL {
        return Err(Error::NoCorrelation);
    }
    let (a1, a2) = (alphas[0], alphas[1]);
    let scale = 1.0 / (a1 * a2 * (a1 * a1 + a2 * a2).sqrt());
    let (v1, v2) = (dec.left(0), dec.left(1));
    let conj = |v: Vec<C64>| v.into_iter().map(|z| z.conj()).collect::<Vec<_>>();
    let (w1, w2) = (conj(dec.right(0)), conj(dec.right(1)));
    let observable = |first: &[C64], second: &[C64]| {
        &ComplexMatrix::outer(first, first).scale_real(scale * a2 * a2)
            - &ComplexMatrix::outer(second, second).scale_real(scale * a1 * a1)
    };
    Ok((observable(&v1, &v2), observable(&w1, &w2)))
}
