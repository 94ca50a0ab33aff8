//! Variational computation of `μ` that never forms a singular value
//! decomposition.
//!
//! Maximizes `|tr(ρ̃ R ⊗ S)|` over unit Frobenius-norm `R ⊥ ρ_A^{1/2}` and
//! `S ⊥ ρ_B^{1/2}` by alternating exact maximization: for fixed `S` the
//! best `R` is the normalized projection of `T†`, `T = tr_B(ρ̃ (I ⊗ S))`.
//! This is power iteration on the realigned `ρ̃` with the top pair deflated.

use crate::error::Result;
use crate::linalg::{frobenius_inner, ComplexMatrix};
use crate::maxcorr::tilde_operator;
use crate::rng;
use crate::states::{partial_trace_op, BipartiteState, Side};

pub const DEFAULT_RESTARTS: usize = 4;
pub const DEFAULT_MAX_ITERS: usize = 10_000;
const RELATIVE_STOP: f64 = 1e-12;

/// Removes the component along the unit vector `dir` and normalizes;
/// returns the norm before normalizing.
fn project_normalize(z: ComplexMatrix, dir: &ComplexMatrix) -> (ComplexMatrix, f64) {
    let overlap = frobenius_inner(dir, &z).expect("shapes agree");
    let projected = &z - &dir.scale(overlap);
    let n = projected.frobenius_norm();
    if n > 0.0 {
        (projected.scale_real(1.0 / n), n)
    } else {
        (projected, 0.0)
    }
}

/// Best `|tr(ρ̃ R ⊗ S)|` found over `restarts` seeded random starts.
pub fn oracle_mu(rho: &BipartiteState, restarts: usize, max_iters: usize, seed: u64) -> Result<f64> {
    let (da, db) = rho.dims();
    let tilde = tilde_operator(rho)?;
    let z = tilde.matrix();
    let root_a = tilde.marginal_sqrt(Side::A);
    let root_b = tilde.marginal_sqrt(Side::B);
    let (id_a, id_b) = (ComplexMatrix::identity(da), ComplexMatrix::identity(db));

    let mut best = 0.0f64;
    for restart in 0..restarts.max(1) {
        let mut r = rng::seeded(rng::trial_seed(seed, restart as u64));
        let (mut s, _) = project_normalize(rng::gaussian_matrix(&mut r, db, db), root_b);
        let mut value = 0.0;
        for _ in 0..max_iters {
            let t = partial_trace_op(&(z * &id_a.kron(&s)), da, db, Side::A);
            let (r_op, _) = project_normalize(t.adjoint(), root_a);
            let t2 = partial_trace_op(&(z * &r_op.kron(&id_b)), da, db, Side::B);
            let (next_s, next_value) = project_normalize(t2.adjoint(), root_b);
            s = next_s;
            let done = next_value == 0.0
                || (next_value - value).abs() <= RELATIVE_STOP * next_value;
            value = next_value;
            if done {
                break;
            }
        }
        best = best.max(value);
    }
    Ok(best)
}
