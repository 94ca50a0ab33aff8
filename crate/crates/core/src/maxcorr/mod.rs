//! Maximal correlation of bipartite quantum states.
//!
//! `μ(ρ)` is the largest `|tr(ρ X ⊗ Y†)|` over local operators with
//! `tr(ρ_A X) = tr(ρ_B Y) = 0` and `tr(ρ_A XX†) = tr(ρ_B YY†) = 1`. It equals
//! the second operator-Schmidt coefficient of
//! `ρ̃ = (I ⊗ ρ_B^{-1/2}) ρ (ρ_A^{-1/2} ⊗ I)`, whose first coefficient is
//! always 1 with Schmidt pair `(ρ_A^{1/2}, ρ_B^{1/2})`. The coefficients are
//! computed here as singular values of the realigned matrix of `ρ̃`.

mod omega;
mod optimizers;
mod pure;
mod spectrum;
mod witness;

pub use omega::{apply_omega, omega_superoperator, omega_tilde_from_state};
pub use optimizers::{extract_optimizers, OptimizerPair, TIE_TOL};
pub use pure::{pure_state_mu, pure_state_optimizers};
pub use spectrum::{
    maximal_correlation, mu_k, realign, schmidt_spectrum, tilde_operator, unrealign,
    SchmidtSpectrum, TildeOperator,
};
pub use witness::{common_data_witness, CommonDataWitness, DEFAULT_WITNESS_TOL};
