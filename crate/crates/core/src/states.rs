//! Bipartite density matrices.
//!
//! Basis convention: the composite basis vector `|i⟩_A|k⟩_B` has index
//! `i·dim_b + k`. Every reshaping in the crate (partial traces, register
//! reordering, realignment) is written against this rule.

use serde::{Deserialize, Serialize};

use crate::classical::JointDistribution;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, norm, ComplexMatrix, C64, ZERO};
use crate::rng;

/// Tolerance applied by [`BipartiteState::new`] and friends.
pub const DEFAULT_STATE_TOL: f64 = 1e-10;
/// Eigenvalues below this contribute nothing to the von Neumann entropy.
pub const ENTROPY_FLOOR: f64 = 1e-12;

/// One of the two registers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// A validated single-register density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let dim = matrix.rows();
        Ok(Self {
            matrix: validate_operator(matrix, dim, tol)?,
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn pure(psi: &[C64]) -> Result<Self> {
        check_normalized(psi)?;
        Ok(Self {
            matrix: ComplexMatrix::outer(psi, psi),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn entropy(&self) -> f64 {
        von_neumann_entropy(&self.matrix)
    }
}

/// Density matrix on `H_A ⊗ H_B` with its local dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    dim_a: usize,
    dim_b: usize,
    matrix: ComplexMatrix,
}

impl BipartiteState {
    /// Validates with [`DEFAULT_STATE_TOL`].
    pub fn new(matrix: ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        validate_density(matrix, (dim_a, dim_b), DEFAULT_STATE_TOL)
    }

    pub(crate) fn from_parts_unchecked(matrix: ComplexMatrix, dim_a: usize, dim_b: usize) -> Self {
        debug_assert_eq!(matrix.shape(), (dim_a * dim_b, dim_a * dim_b));
        Self {
            dim_a,
            dim_b,
            matrix,
        }
    }

    /// `|ψ⟩⟨ψ|` for a unit vector in the composite basis.
    pub fn pure(psi: &[C64], dim_a: usize, dim_b: usize) -> Result<Self> {
        if psi.len() != dim_a * dim_b {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} on {dim_a}x{dim_b}",
                psi.len()
            )));
        }
        check_normalized(psi)?;
        Ok(Self::from_parts_unchecked(
            ComplexMatrix::outer(psi, psi),
            dim_a,
            dim_b,
        ))
    }

    /// `ρ_A ⊗ ρ_B`.
    pub fn product(rho_a: &DensityMatrix, rho_b: &DensityMatrix) -> Self {
        Self::from_parts_unchecked(
            rho_a.matrix().kron(rho_b.matrix()),
            rho_a.dim(),
            rho_b.dim(),
        )
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    pub fn dim(&self, side: Side) -> usize {
        match side {
            Side::A => self.dim_a,
            Side::B => self.dim_b,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// The reduced state on `keep` (`side = A` gives `tr_B ρ`).
    pub fn partial_trace(&self, keep: Side) -> DensityMatrix {
        DensityMatrix {
            matrix: partial_trace_op(&self.matrix, self.dim_a, self.dim_b, keep)
                .hermitian_part(),
        }
    }

    /// `ρ_A ⊗ ρ_B` built from this state's own marginals.
    pub fn marginal_product(&self) -> BipartiteState {
        Self::product(&self.partial_trace(Side::A), &self.partial_trace(Side::B))
    }

    /// The same state with the registers exchanged (`ρ_BA`).
    pub fn swapped(&self) -> BipartiteState {
        let (da, db) = self.dims();
        let perm = |idx: usize| {
            let (k, i) = (idx / da, idx % da);
            i * db + k
        };
        let n = da * db;
        let m = ComplexMatrix::from_fn(n, n, |r, c| self.matrix[(perm(r), perm(c))]);
        Self::from_parts_unchecked(m, db, da)
    }

    /// `(U ⊗ V) ρ (U ⊗ V)†`.
    pub fn conjugate_local(&self, u: &ComplexMatrix, v: &ComplexMatrix) -> Result<BipartiteState> {
        if u.shape() != (self.dim_a, self.dim_a) || v.shape() != (self.dim_b, self.dim_b) {
            return Err(Error::DimensionMismatch(
                "local unitaries must match the register dimensions".into(),
            ));
        }
        let w = u.kron(v);
        let out = &(&w * &self.matrix) * &w.adjoint();
        validate_density(out, self.dims(), 1e-9)
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

fn check_normalized(psi: &[C64]) -> Result<()> {
    let n = norm(psi);
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm: n });
    }
    Ok(())
}

/// Trace drift below this is rounding noise and left alone, so validating a
/// validated matrix returns it bit for bit.
const RENORMALIZE_FLOOR: f64 = 1e-14;

fn validate_operator(matrix: ComplexMatrix, dim: usize, tol: f64) -> Result<ComplexMatrix> {
    if matrix.shape() != (dim, dim) {
        return Err(Error::DimensionMismatch(format!(
            "expected a {dim}x{dim} matrix, got {}x{}",
            matrix.rows(),
            matrix.cols()
        )));
    }
    let deviation = matrix.hermitian_deviation();
    if deviation > tol * matrix.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    let m = matrix.hermitian_part();
    let trace = m.trace().re;
    if (trace - 1.0).abs() > tol {
        return Err(Error::TraceNotOne { trace });
    }
    let spec = hermitian_eig(&m, tol)?;
    let min = spec.eigenvalues.last().copied().unwrap_or(0.0);
    if min < -tol {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    if (trace - 1.0).abs() <= RENORMALIZE_FLOOR {
        Ok(m)
    } else {
        Ok(m.scale_real(1.0 / trace))
    }
}

/// Checks that `matrix` is a density matrix on `dim_a × dim_b` within `tol`
/// (hermiticity relative to `max(1, ‖M‖_F)`, trace and eigenvalues absolute),
/// then symmetrizes and renormalizes it.
pub fn validate_density(
    matrix: ComplexMatrix,
    dims: (usize, usize),
    tol: f64,
) -> Result<BipartiteState> {
    let (dim_a, dim_b) = dims;
    if dim_a == 0 || dim_b == 0 {
        return Err(Error::DimensionMismatch("register dimensions must be positive".into()));
    }
    let m = validate_operator(matrix, dim_a * dim_b, tol)?;
    Ok(BipartiteState::from_parts_unchecked(m, dim_a, dim_b))
}

/// Partial trace of an arbitrary (not necessarily hermitian) operator on
/// `H_A ⊗ H_B`, keeping register `keep`.
pub fn partial_trace_op(m: &ComplexMatrix, dim_a: usize, dim_b: usize, keep: Side) -> ComplexMatrix {
    match keep {
        Side::A => ComplexMatrix::from_fn(dim_a, dim_a, |i, j| {
            (0..dim_b).map(|k| m[(i * dim_b + k, j * dim_b + k)]).sum()
        }),
        Side::B => ComplexMatrix::from_fn(dim_b, dim_b, |k, l| {
            (0..dim_a).map(|i| m[(i * dim_b + k, i * dim_b + l)]).sum()
        }),
    }
}

/// `ρ_AB ⊗ σ_A'B'` regrouped as a state on `(AA') ⊗ (BB')`.
pub fn tensor_states(rho: &BipartiteState, sigma: &BipartiteState) -> BipartiteState {
    let (a1, b1) = rho.dims();
    let (a2, b2) = sigma.dims();
    let kron = rho.matrix().kron(sigma.matrix());
    // Index (i·a2 + i')·(b1·b2) + (k·b2 + k') on the regrouped side comes
    // from (i·b1 + k)·(a2·b2) + (i'·b2 + k') in the plain product.
    let old_index = |idx: usize| {
        let (left, right) = (idx / (b1 * b2), idx % (b1 * b2));
        let (i, i2) = (left / a2, left % a2);
        let (k, k2) = (right / b2, right % b2);
        (i * b1 + k) * (a2 * b2) + (i2 * b2 + k2)
    };
    let n = a1 * a2 * b1 * b2;
    let m = ComplexMatrix::from_fn(n, n, |r, c| kron[(old_index(r), old_index(c))]);
    BipartiteState::from_parts_unchecked(m, a1 * a2, b1 * b2)
}

/// `ρ^{⊗n}` grouped as `(A^n, B^n)`.
pub fn tensor_power(rho: &BipartiteState, n: usize) -> BipartiteState {
    assert!(n >= 1, "tensor power needs n >= 1");
    let mut out = rho.clone();
    for _ in 1..n {
        out = tensor_states(&out, rho);
    }
    out
}

/// `(|00⟩ + |11⟩ + … + |d−1,d−1⟩)/√d`.
pub fn maximally_entangled_vector(d: usize) -> Vec<C64> {
    let mut psi = vec![ZERO; d * d];
    let amp = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        psi[i * d + i] = C64::new(amp, 0.0);
    }
    psi
}

pub fn maximally_entangled(d: usize) -> BipartiteState {
    let psi = maximally_entangled_vector(d);
    BipartiteState::from_parts_unchecked(ComplexMatrix::outer(&psi, &psi), d, d)
}

pub fn bell_state() -> BipartiteState {
    maximally_entangled(2)
}

/// `(1 − p)·I/4 + p·|ψ⟩⟨ψ|` with `ψ = (|00⟩ + |11⟩)/√2`.
pub fn isotropic_state(p: f64) -> Result<BipartiteState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("isotropic parameter {p} not in [0, 1]")));
    }
    let mixed = ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
    let bell = bell_state().into_matrix().scale_real(p);
    Ok(BipartiteState::from_parts_unchecked(&mixed + &bell, 2, 2))
}

/// Diagonal state with entries `p_ik` in the composite basis.
pub fn embed_classical(p: &JointDistribution) -> BipartiteState {
    let (da, db) = p.shape();
    let mut m = ComplexMatrix::zeros(da * db, da * db);
    for i in 0..da {
        for k in 0..db {
            m[(i * db + k, i * db + k)] = C64::new(p.get(i, k), 0.0);
        }
    }
    BipartiteState::from_parts_unchecked(m, da, db)
}

/// Von Neumann entropy in bits of a hermitian PSD matrix.
pub fn von_neumann_entropy(m: &ComplexMatrix) -> f64 {
    let spec = hermitian_eig(m, 1e-8).expect("entropy of a hermitian matrix");
    spec.eigenvalues
        .iter()
        .filter(|&&x| x > ENTROPY_FLOOR)
        .map(|&x| -x * x.log2())
        .sum()
}

/// `I(A;B) = S(ρ_A) + S(ρ_B) − S(ρ_AB)` in bits.
pub fn mutual_information(rho: &BipartiteState) -> f64 {
    rho.partial_trace(Side::A).entropy() + rho.partial_trace(Side::B).entropy()
        - von_neumann_entropy(rho.matrix())
}

/// `GG†/tr(GG†)` for a seeded complex gaussian `(dim_a·dim_b) × rank` matrix.
pub fn random_bipartite(dim_a: usize, dim_b: usize, rank: usize, seed: u64) -> Result<BipartiteState> {
    let n = dim_a * dim_b;
    if dim_a == 0 || dim_b == 0 || rank == 0 || rank > n {
        return Err(Error::OutOfRange(format!(
            "rank {rank} not in 1..={n} for dims ({dim_a}, {dim_b})"
        )));
    }
    let mut rng = rng::seeded(seed);
    let g = rng::gaussian_matrix(&mut rng, n, rank);
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    Ok(BipartiteState::from_parts_unchecked(
        gg.scale_real(1.0 / tr).hermitian_part(),
        dim_a,
        dim_b,
    ))
}

/// Seeded Haar-random pure state.
pub fn random_pure(dim_a: usize, dim_b: usize, seed: u64) -> BipartiteState {
    let mut rng = rng::seeded(seed);
    let psi = rng::random_unit_vector(&mut rng, dim_a * dim_b);
    BipartiteState::from_parts_unchecked(ComplexMatrix::outer(&psi, &psi), dim_a, dim_b)
}

/// Seeded product of two random full-rank local states.
pub fn random_product(dim_a: usize, dim_b: usize, seed: u64) -> BipartiteState {
    let a = random_bipartite(dim_a, 1, dim_a, rng::trial_seed(seed, 0)).expect("valid dims");
    let b = random_bipartite(dim_b, 1, dim_b, rng::trial_seed(seed, 1)).expect("valid dims");
    BipartiteState::product(&a.partial_trace(Side::A), &b.partial_trace(Side::A))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        a.distance(b).unwrap() <= tol
    }

    #[test]
    fn maximally_mixed_validates() {
        let m = ComplexMatrix::identity(4).scale_real(0.25);
        assert!(validate_density(m, (2, 2), 1e-10).is_ok());
    }

    #[test]
    fn bell_projector_validates() {
        let b = bell_state();
        assert!(validate_density(b.matrix().clone(), (2, 2), 1e-10).is_ok());
        assert!((b.purity() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn half_trace_is_rejected() {
        let m = ComplexMatrix::identity(4).scale_real(0.125);
        assert!(matches!(
            validate_density(m, (2, 2), 1e-10),
            Err(Error::TraceNotOne { .. })
        ));
    }

    #[test]
    fn negative_and_asymmetric_inputs_are_rejected() {
        let neg = ComplexMatrix::diag_real(&[1.2, -0.2, 0.0, 0.0]);
        assert!(matches!(validate_density(neg, (2, 2), 1e-10), Err(Error::NotPsd { .. })));
        let mut asym = ComplexMatrix::identity(4).scale_real(0.25);
        asym[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(
            validate_density(asym, (2, 2), 1e-10),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            validate_density(ComplexMatrix::identity(4), (2, 3), 1e-10),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn small_drift_is_repaired() {
        let m = ComplexMatrix::identity(4).scale_real(0.25 + 1e-12);
        let s = validate_density(m, (2, 2), 1e-10).unwrap();
        assert!((s.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn isotropic_marginals_are_maximally_mixed() {
        for p in [0.0, 0.3, 1.0] {
            let rho = isotropic_state(p).unwrap();
            let half = ComplexMatrix::identity(2).scale_real(0.5);
            assert!(close(rho.partial_trace(Side::A).matrix(), &half, 1e-15));
            assert!(close(rho.partial_trace(Side::B).matrix(), &half, 1e-15));
        }
        assert!(isotropic_state(1.5).is_err());
        assert!(isotropic_state(-0.1).is_err());
    }

    #[test]
    fn isotropic_endpoints_and_spectrum() {
        let mixed = ComplexMatrix::identity(4).scale_real(0.25);
        assert!(close(isotropic_state(0.0).unwrap().matrix(), &mixed, 1e-15));
        assert!(close(isotropic_state(1.0).unwrap().matrix(), bell_state().matrix(), 1e-15));
        // Bell direction gets (1 − p)/4 + p; the others (1 − p)/4.
        let spec = hermitian_eig(isotropic_state(0.5).unwrap().matrix(), 1e-10).unwrap();
        let expected = [0.625, 0.125, 0.125, 0.125];
        for (x, e) in spec.eigenvalues.iter().zip(expected) {
            assert!((x - e).abs() < 1e-14);
        }
    }

    #[test]
    fn product_state_marginals_are_exact() {
        let a = random_bipartite(2, 1, 2, 1).unwrap().partial_trace(Side::A);
        let b = random_bipartite(3, 1, 3, 2).unwrap().partial_trace(Side::A);
        let rho = BipartiteState::product(&a, &b);
        assert!(close(rho.partial_trace(Side::A).matrix(), a.matrix(), 1e-14));
        assert!(close(rho.partial_trace(Side::B).matrix(), b.matrix(), 1e-14));
    }

    #[test]
    fn tensor_of_bells_is_maximally_entangled() {
        let bb = tensor_states(&bell_state(), &bell_state());
        assert_eq!(bb.dims(), (4, 4));
        assert!((bb.purity() - 1.0).abs() < 1e-13);
        let quarter = ComplexMatrix::identity(4).scale_real(0.25);
        assert!(close(bb.partial_trace(Side::A).matrix(), &quarter, 1e-14));
        assert!(close(bb.partial_trace(Side::B).matrix(), &quarter, 1e-14));
        assert!(close(bb.matrix(), maximally_entangled(4).matrix(), 1e-14));
    }

    #[test]
    fn tensor_marginals_factorize() {
        let rho = random_bipartite(2, 3, 4, 11).unwrap();
        let sigma = random_bipartite(3, 2, 6, 12).unwrap();
        let t = tensor_states(&rho, &sigma);
        let expect_a = rho.partial_trace(Side::A).matrix().kron(sigma.partial_trace(Side::A).matrix());
        let expect_b = rho.partial_trace(Side::B).matrix().kron(sigma.partial_trace(Side::B).matrix());
        assert!(close(t.partial_trace(Side::A).matrix(), &expect_a, 1e-14));
        assert!(close(t.partial_trace(Side::B).matrix(), &expect_b, 1e-14));
    }

    #[test]
    fn embedding_correlated_bits() {
        let p = JointDistribution::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let rho = embed_classical(&p);
        assert!(close(rho.matrix(), &ComplexMatrix::diag_real(&[0.5, 0.0, 0.0, 0.5]), 0.0));
        let u = JointDistribution::new(2, 2, vec![0.25; 4]).unwrap();
        assert!(close(
            embed_classical(&u).matrix(),
            &ComplexMatrix::identity(4).scale_real(0.25),
            0.0
        ));
    }

    #[test]
    fn embedding_marginals_match_distribution() {
        let p = JointDistribution::new(2, 3, vec![0.1, 0.2, 0.05, 0.3, 0.15, 0.2]).unwrap();
        let rho = embed_classical(&p);
        let ra = rho.partial_trace(Side::A);
        let rb = rho.partial_trace(Side::B);
        let (pa, pb) = (p.row_marginal(), p.col_marginal());
        assert!(close(ra.matrix(), &ComplexMatrix::diag_real(&pa), 1e-15));
        assert!(close(rb.matrix(), &ComplexMatrix::diag_real(&pb), 1e-15));
    }

    #[test]
    fn mutual_information_examples() {
        assert!(mutual_information(&random_product(2, 3, 5)).abs() < 1e-10);
        assert!((mutual_information(&bell_state()) - 2.0).abs() < 1e-10);
        let rho = random_bipartite(2, 2, 3, 8).unwrap();
        let sigma = random_bipartite(2, 2, 2, 9).unwrap();
        let sum = mutual_information(&rho) + mutual_information(&sigma);
        assert!((mutual_information(&tensor_states(&rho, &sigma)) - sum).abs() < 1e-9);
    }

    #[test]
    fn random_states_rank_and_determinism() {
        let full = random_bipartite(2, 3, 6, 3).unwrap();
        let spec = hermitian_eig(full.matrix(), 1e-10).unwrap();
        assert!(*spec.eigenvalues.last().unwrap() > 0.0);
        let pure = random_bipartite(3, 3, 1, 4).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-10);
        assert_eq!(random_bipartite(2, 2, 2, 99).unwrap(), random_bipartite(2, 2, 2, 99).unwrap());
        assert!(random_bipartite(2, 2, 5, 1).is_err());
        assert!(random_bipartite(2, 2, 0, 1).is_err());
    }

    #[test]
    fn swap_exchanges_marginals() {
        let rho = random_bipartite(2, 3, 3, 21).unwrap();
        let s = rho.swapped();
        assert_eq!(s.dims(), (3, 2));
        assert!(close(s.partial_trace(Side::A).matrix(), rho.partial_trace(Side::B).matrix(), 1e-15));
        assert_eq!(s.swapped(), rho);
    }
}
