//! Completely positive trace-preserving maps in Kraus form and binary local
//! measurements.

use crate::classical::JointDistribution;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, C64};
use crate::rng;
use crate::states::{validate_density, BipartiteState, Side};

pub const DEFAULT_CHANNEL_TOL: f64 = 1e-9;

/// CPTP map `L(C^dim_in) → L(C^dim_out)` given by Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

/// Checks shapes and `Σ K†K = I` within `tol` (max-entry deviation).
pub fn validate_channel(kraus: Vec<ComplexMatrix>, tol: f64) -> Result<QuantumChannel> {
    let first = kraus
        .first()
        .ok_or_else(|| Error::ShapeMismatch("empty kraus list".into()))?;
    let (dim_out, dim_in) = first.shape();
    if let Some(bad) = kraus.iter().find(|k| k.shape() != (dim_out, dim_in)) {
        return Err(Error::ShapeMismatch(format!(
            "operator of shape {}x{} among {dim_out}x{dim_in}",
            bad.rows(),
            bad.cols()
        )));
    }
    let channel = QuantumChannel {
        dim_in,
        dim_out,
        kraus,
    };
    let deviation = channel.trace_preservation_error();
    if deviation > tol {
        return Err(Error::NotTracePreserving { deviation });
    }
    Ok(channel)
}

impl QuantumChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        validate_channel(kraus, DEFAULT_CHANNEL_TOL)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim_in: dim,
            dim_out: dim,
            kraus: vec![ComplexMatrix::identity(dim)],
        }
    }

    /// Conjugation by an isometry (or unitary).
    pub fn isometry(v: ComplexMatrix) -> Result<Self> {
        validate_channel(vec![v], DEFAULT_CHANNEL_TOL)
    }

    /// `X ↦ tr(X)·I/d_out`, with Kraus operators `|o⟩⟨i|/√d_out`.
    pub fn completely_depolarizing(dim_in: usize, dim_out: usize) -> Self {
        let s = 1.0 / (dim_out as f64).sqrt();
        let kraus = (0..dim_out)
            .flat_map(|o| {
                (0..dim_in).map(move |i| {
                    let mut k = ComplexMatrix::zeros(dim_out, dim_in);
                    k[(o, i)] = C64::new(s, 0.0);
                    k
                })
            })
            .collect();
        Self {
            dim_in,
            dim_out,
            kraus,
        }
    }

    /// Qubit depolarizing channel `ρ ↦ (1 − q)ρ + q·I/2` via four Pauli
    /// Kraus operators.
    pub fn qubit_depolarizing(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::OutOfRange(format!("depolarizing parameter {q}")));
        }
        let i = C64::new(0.0, 1.0);
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let paulis = [
            ComplexMatrix::identity(2).scale_real((1.0 - 0.75 * q).sqrt()),
            ComplexMatrix::new(2, 2, vec![o, l, l, o])?.scale_real((q / 4.0).sqrt()),
            ComplexMatrix::new(2, 2, vec![o, -i, i, o])?.scale_real((q / 4.0).sqrt()),
            ComplexMatrix::new(2, 2, vec![l, o, o, -l])?.scale_real((q / 4.0).sqrt()),
        ];
        validate_channel(paulis.to_vec(), DEFAULT_CHANNEL_TOL)
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// Largest entry of `Σ K†K − I`.
    pub fn trace_preservation_error(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            sum = &sum + &(&k.adjoint() * k);
        }
        (&sum - &ComplexMatrix::identity(self.dim_in)).max_abs()
    }

    /// `Φ(X) = Σ K X K†`.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.shape() != (self.dim_in, self.dim_in) {
            return Err(Error::DimensionMismatch(format!(
                "channel input is {0}x{0}, operator is {1}x{2}",
                self.dim_in,
                x.rows(),
                x.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out = &out + &(&(k * x) * &k.adjoint());
        }
        Ok(out)
    }

    /// The dual map `Φ*(Y) = Σ K† Y K`, unital because `Φ` is trace preserving.
    pub fn adjoint(&self) -> AdjointMap<'_> {
        AdjointMap { channel: self }
    }

    /// `after ∘ self`, Kraus operators `{B_j A_i}`.
    pub fn then(&self, after: &QuantumChannel) -> Result<QuantumChannel> {
        if after.dim_in != self.dim_out {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}→{} with {}→{}",
                self.dim_in, self.dim_out, after.dim_in, after.dim_out
            )));
        }
        let kraus = after
            .kraus
            .iter()
            .flat_map(|b| self.kraus.iter().map(move |a| b * a))
            .collect();
        Ok(QuantumChannel {
            dim_in: self.dim_in,
            dim_out: after.dim_out,
            kraus,
        })
    }
}

/// The adjoint `Φ*` of a channel: completely positive and unital.
#[derive(Debug, Clone, Copy)]
pub struct AdjointMap<'a> {
    channel: &'a QuantumChannel,
}

impl AdjointMap<'_> {
    pub fn apply(&self, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        let ch = self.channel;
        if y.shape() != (ch.dim_out, ch.dim_out) {
            return Err(Error::DimensionMismatch(format!(
                "adjoint input is {0}x{0}, operator is {1}x{2}",
                ch.dim_out,
                y.rows(),
                y.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(ch.dim_in, ch.dim_in);
        for k in &ch.kraus {
            out = &out + &(&(&k.adjoint() * y) * k);
        }
        Ok(out)
    }
}

/// `(I ⊗ Φ)(ρ)` for `side = B`, `(Φ ⊗ I)(ρ)` for `side = A`.
pub fn apply_local(channel: &QuantumChannel, rho: &BipartiteState, side: Side) -> Result<BipartiteState> {
    let (da, db) = rho.dims();
    if rho.dim(side) != channel.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "channel input dimension {} does not match register {:?} of dimension {}",
            channel.dim_in(),
            side,
            rho.dim(side)
        )));
    }
    let (out_a, out_b) = match side {
        Side::A => (channel.dim_out(), db),
        Side::B => (da, channel.dim_out()),
    };
    let n = out_a * out_b;
    let mut out = ComplexMatrix::zeros(n, n);
    for k in channel.kraus() {
        let lifted = match side {
            Side::A => k.kron(&ComplexMatrix::identity(db)),
            Side::B => ComplexMatrix::identity(da).kron(k),
        };
        out = &out + &(&(&lifted * rho.matrix()) * &lifted.adjoint());
    }
    validate_density(out, (out_a, out_b), 1e-9)
}

/// Seeded channel from a Haar isometry `V: C^dim_in → C^dim_out ⊗ C^env_dim`;
/// Kraus operator `e` collects the rows `o·env_dim + e` of `V`.
pub fn random_channel(dim_in: usize, dim_out: usize, env_dim: usize, seed: u64) -> Result<QuantumChannel> {
    if dim_in == 0 || dim_out == 0 || env_dim == 0 {
        return Err(Error::OutOfRange("channel dimensions must be positive".into()));
    }
    if dim_out * env_dim < dim_in {
        return Err(Error::OutOfRange(format!(
            "isometry {dim_in} → {dim_out}·{env_dim} does not exist"
        )));
    }
    let mut r = rng::seeded(seed);
    let v = rng::haar_isometry(&mut r, dim_out * env_dim, dim_in);
    let kraus = (0..env_dim)
        .map(|e| ComplexMatrix::from_fn(dim_out, dim_in, |o, i| v[(o * env_dim + e, i)]))
        .collect();
    validate_channel(kraus, DEFAULT_CHANNEL_TOL)
}

/// Two-outcome measurement `{E, I − E}` with `0 ≤ E ≤ I`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryMeasurement {
    effect: ComplexMatrix,
}

impl BinaryMeasurement {
    /// Validates hermiticity and the spectrum of the effect within 1e-10.
    pub fn new(effect: ComplexMatrix) -> Result<Self> {
        let spec = hermitian_eig(&effect, 1e-10)?;
        let (top, bottom) = (spec.eigenvalues[0], *spec.eigenvalues.last().unwrap());
        if bottom < -1e-10 || top > 1.0 + 1e-10 {
            return Err(Error::InvalidEffect(format!(
                "eigenvalues span [{bottom}, {top}]"
            )));
        }
        Ok(Self {
            effect: effect.hermitian_part(),
        })
    }

    /// Projective measurement onto the computational basis vector `|index⟩`.
    pub fn basis_projector(dim: usize, index: usize) -> Self {
        Self {
            effect: ComplexMatrix::unit(dim, index, index),
        }
    }

    pub fn dim(&self) -> usize {
        self.effect.rows()
    }

    pub fn effect(&self) -> &ComplexMatrix {
        &self.effect
    }

    pub fn complement(&self) -> ComplexMatrix {
        &ComplexMatrix::identity(self.dim()) - &self.effect
    }
}

/// `p_uv = tr(ρ · E_u ⊗ F_v)` with `E_0 = M`, `E_1 = I − M`, `F_0 = N`,
/// `F_1 = I − N`.
pub fn measure_binary(rho: &BipartiteState, m: &BinaryMeasurement, n: &BinaryMeasurement) -> Result<JointDistribution> {
    if m.dim() != rho.dim_a() || n.dim() != rho.dim_b() {
        return Err(Error::DimensionMismatch(format!(
            "effects of dimension ({}, {}) on a ({}, {}) state",
            m.dim(),
            n.dim(),
            rho.dim_a(),
            rho.dim_b()
        )));
    }
    let a = [m.effect().clone(), m.complement()];
    let b = [n.effect().clone(), n.complement()];
    let mut p = Vec::with_capacity(4);
    for ea in &a {
        for fb in &b {
            let x = (rho.matrix() * &ea.kron(fb)).trace().re;
            if x < -1e-10 {
                return Err(Error::InvalidDistribution(format!("negative probability {x}")));
            }
            p.push(x.max(0.0));
        }
    }
    let total: f64 = p.iter().sum();
    JointDistribution::new(2, 2, p.into_iter().map(|x| x / total).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius_inner;
    use crate::states::{bell_state, random_bipartite, random_product};

    #[test]
    fn unitary_is_valid_and_half_identity_is_not() {
        let mut r = rng::seeded(1);
        let u = rng::haar_unitary(&mut r, 3);
        assert!(QuantumChannel::isometry(u).is_ok());
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(matches!(
            validate_channel(vec![half], 1e-9),
            Err(Error::NotTracePreserving { .. })
        ));
        assert!(matches!(validate_channel(vec![], 1e-9), Err(Error::ShapeMismatch(_))));
        assert!(matches!(
            validate_channel(vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)], 1e-9),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn pauli_depolarizing_is_trace_preserving() {
        let ch = QuantumChannel::qubit_depolarizing(0.7).unwrap();
        assert_eq!(ch.kraus().len(), 4);
        assert!(ch.trace_preservation_error() < 1e-15);
    }

    #[test]
    fn identity_channel_leaves_state() {
        let rho = random_bipartite(2, 3, 4, 5).unwrap();
        let out = apply_local(&QuantumChannel::identity(3), &rho, Side::B).unwrap();
        assert!(out.matrix().distance(rho.matrix()).unwrap() < 1e-15);
    }

    #[test]
    fn depolarizing_b_gives_product_with_mixed() {
        let rho = random_bipartite(2, 3, 6, 6).unwrap();
        let out = apply_local(&QuantumChannel::completely_depolarizing(3, 2), &rho, Side::B).unwrap();
        let expected = rho
            .partial_trace(Side::A)
            .matrix()
            .kron(&ComplexMatrix::identity(2).scale_real(0.5));
        assert!(out.matrix().distance(&expected).unwrap() < 1e-14);
    }

    #[test]
    fn untouched_marginal_is_preserved() {
        for seed in 0..10 {
            let rho = random_bipartite(3, 2, 3, seed).unwrap();
            let ch = random_channel(2, 3, 2, 100 + seed).unwrap();
            let out = apply_local(&ch, &rho, Side::B).unwrap();
            assert!(out.partial_trace(Side::A).matrix().distance(rho.partial_trace(Side::A).matrix()).unwrap() < 1e-10);
            let ch = random_channel(3, 2, 2, 200 + seed).unwrap();
            let out = apply_local(&ch, &rho, Side::A).unwrap();
            assert!(out.partial_trace(Side::B).matrix().distance(rho.partial_trace(Side::B).matrix()).unwrap() < 1e-10);
        }
    }

    #[test]
    fn wrong_side_dimension_is_rejected() {
        let rho = random_bipartite(2, 3, 2, 1).unwrap();
        assert!(matches!(
            apply_local(&QuantumChannel::identity(2), &rho, Side::B),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn adjoint_of_unitary_conjugation() {
        let mut r = rng::seeded(3);
        let u = rng::haar_unitary(&mut r, 2);
        let ch = QuantumChannel::isometry(u.clone()).unwrap();
        let y = rng::gaussian_matrix(&mut r, 2, 2);
        let expected = &(&u.adjoint() * &y) * &u;
        assert!(ch.adjoint().apply(&y).unwrap().distance(&expected).unwrap() < 1e-14);
    }

    #[test]
    fn adjoint_duality_and_unitality() {
        let mut r = rng::seeded(4);
        for seed in 0..20 {
            let ch = random_channel(3, 2, 3, seed).unwrap();
            let m = rng::gaussian_matrix(&mut r, 3, 3);
            let n = rng::gaussian_matrix(&mut r, 2, 2);
            let lhs = frobenius_inner(&ch.apply(&m).unwrap(), &n).unwrap();
            let rhs = frobenius_inner(&m, &ch.adjoint().apply(&n).unwrap()).unwrap();
            assert!((lhs - rhs).norm() < 1e-9);
            let unit = ch.adjoint().apply(&ComplexMatrix::identity(2)).unwrap();
            assert!(unit.distance(&ComplexMatrix::identity(3)).unwrap() < 1e-9);
        }
        // Completely depolarizing: Φ*(N) = tr(N)·I/d_out.
        let ch = QuantumChannel::completely_depolarizing(2, 3);
        let n = rng::gaussian_matrix(&mut r, 3, 3);
        let expected = ComplexMatrix::identity(2).scale(n.trace() / 3.0);
        assert!(ch.adjoint().apply(&n).unwrap().distance(&expected).unwrap() < 1e-14);
    }

    #[test]
    fn random_channel_shapes_and_determinism() {
        let ch = random_channel(2, 3, 2, 9).unwrap();
        assert_eq!(ch.kraus().len(), 2);
        assert!(ch.kraus().iter().all(|k| k.shape() == (3, 2)));
        assert!(ch.trace_preservation_error() < 1e-12);
        assert_eq!(ch, random_channel(2, 3, 2, 9).unwrap());
        let iso = random_channel(2, 2, 1, 10).unwrap();
        let k = &iso.kraus()[0];
        assert!((&(k * &k.adjoint()) - &ComplexMatrix::identity(2)).max_abs() < 1e-12);
        assert!(random_channel(4, 1, 2, 1).is_err());
        assert!(random_channel(2, 2, 0, 1).is_err());
    }

    #[test]
    fn composition_matches_sequential_application() {
        let rho = random_bipartite(2, 2, 4, 30).unwrap();
        let first = random_channel(2, 3, 2, 31).unwrap();
        let second = random_channel(3, 2, 2, 32).unwrap();
        let seq = apply_local(&second, &apply_local(&first, &rho, Side::B).unwrap(), Side::B).unwrap();
        let composed = apply_local(&first.then(&second).unwrap(), &rho, Side::B).unwrap();
        assert!(seq.matrix().distance(composed.matrix()).unwrap() < 1e-9);
    }

    #[test]
    fn bell_measured_in_computational_basis() {
        let m = BinaryMeasurement::basis_projector(2, 0);
        let p = measure_binary(&bell_state(), &m, &m).unwrap();
        assert!((p.get(0, 0) - 0.5).abs() < 1e-15 && (p.get(1, 1) - 0.5).abs() < 1e-15);
        assert!(p.get(0, 1).abs() < 1e-15 && p.get(1, 0).abs() < 1e-15);
    }

    #[test]
    fn trivial_effect_concentrates_on_first_row() {
        let rho = random_bipartite(2, 3, 3, 40).unwrap();
        let m = BinaryMeasurement::new(ComplexMatrix::identity(2)).unwrap();
        let n = BinaryMeasurement::new(ComplexMatrix::diag_real(&[0.3, 1.0, 0.0])).unwrap();
        let p = measure_binary(&rho, &m, &n).unwrap();
        let expect = (rho.partial_trace(Side::B).matrix() * n.effect()).trace().re;
        assert!(p.get(1, 0) == 0.0 && p.get(1, 1) == 0.0);
        assert!((p.get(0, 0) - expect).abs() < 1e-14);
        assert!((p.get(0, 1) - (1.0 - expect)).abs() < 1e-14);
    }

    #[test]
    fn product_state_gives_product_distribution() {
        let rho = random_product(2, 2, 41);
        let m = BinaryMeasurement::new(ComplexMatrix::diag_real(&[0.9, 0.2])).unwrap();
        let n = BinaryMeasurement::basis_projector(2, 1);
        let p = measure_binary(&rho, &m, &n).unwrap();
        let (ra, rb) = (p.row_marginal(), p.col_marginal());
        for u in 0..2 {
            for v in 0..2 {
                assert!((p.get(u, v) - ra[u] * rb[v]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn effects_outside_unit_interval_are_rejected() {
        assert!(BinaryMeasurement::new(ComplexMatrix::diag_real(&[1.5, 0.0])).is_err());
        let rho = bell_state();
        let m3 = BinaryMeasurement::basis_projector(3, 0);
        let m2 = BinaryMeasurement::basis_projector(2, 0);
        assert!(measure_binary(&rho, &m3, &m2).is_err());
    }
}
