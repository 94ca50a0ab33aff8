use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::{partial_trace_op, BipartiteState, Side};

use super::spectrum::TildeOperator;

/// `Ω_Z(X) = tr_A(Z (X ⊗ I))`, the superoperator with
/// `Z = Σ_{ij} |i⟩⟨j| ⊗ Ω_Z(|j⟩⟨i|)`.
pub fn apply_omega(z: &ComplexMatrix, x: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<ComplexMatrix> {
    let n = dim_a * dim_b;
    if z.shape() != (n, n) || x.shape() != (dim_a, dim_a) {
        return Err(Error::DimensionMismatch(format!(
            "superoperator of a {}x{} operator applied to {}x{} with dims ({dim_a}, {dim_b})",
            z.rows(),
            z.cols(),
            x.rows(),
            x.cols()
        )));
    }
    let lifted = x.kron(&ComplexMatrix::identity(dim_b));
    Ok(partial_trace_op(&(z * &lifted), dim_a, dim_b, Side::B))
}

/// Matrix of `Ω_Z: L(H_A) → L(H_B)` on row-major vectorized operators:
/// column `j·d_A + i` holds `Ω_Z(|j⟩⟨i|)`.
pub fn omega_superoperator(z: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<ComplexMatrix> {
    let n = dim_a * dim_b;
    if z.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, expected {n}x{n}",
            z.rows(),
            z.cols()
        )));
    }
    Ok(ComplexMatrix::from_fn(dim_b * dim_b, dim_a * dim_a, |row, col| {
        let (k, l) = (row / dim_b, row % dim_b);
        let (j, i) = (col / dim_a, col % dim_a);
        z[(i * dim_b + k, j * dim_b + l)]
    }))
}

/// The matrix of `Ω_ρ̃` assembled column by column from
/// `X ↦ ρ_B^{-1/2} Ω_ρ(ρ_A^{-1/2} X)`, without forming `ρ̃`.
pub fn omega_tilde_from_state(rho: &BipartiteState, tilde: &TildeOperator) -> Result<ComplexMatrix> {
    let (da, db) = rho.dims();
    let inv_a = tilde.marginal_inv_sqrt(Side::A);
    let inv_b = tilde.marginal_inv_sqrt(Side::B);
    let mut out = ComplexMatrix::zeros(db * db, da * da);
    for j in 0..da {
        for i in 0..da {
            let basis = ComplexMatrix::unit(da, j, i);
            let image = inv_b * &apply_omega(rho.matrix(), &(inv_a * &basis), da, db)?;
            out.set_column(j * da + i, image.data());
        }
    }
    Ok(out)
}
