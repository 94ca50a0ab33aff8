use crate::error::{Error, Result};
use crate::linalg::{
    dot, hermitian_eig, norm, psd_inverse_sqrt, psd_sqrt, svd, ComplexMatrix, C64,
    DEFAULT_RANK_TOL,
};
use crate::states::{BipartiteState, Side};

/// Singular values closer than this to the top one are treated as tied with it.
const TOP_CLUSTER_TOL: f64 = 1e-8;
/// Largest tolerated `|μ₁ − 1|` before the spectrum is declared corrupt.
const TOP_DEVIATION_LIMIT: f64 = 1e-6;
/// Excursions of μ outside `[0, 1]` smaller than this are clamped.
const CLAMP_TOL: f64 = 1e-8;

/// `ρ̃ = (I ⊗ ρ_B^{-1/2}) ρ (ρ_A^{-1/2} ⊗ I)` together with the marginal
/// roots used to build it. Generally not hermitian.
#[derive(Debug, Clone)]
pub struct TildeOperator {
    dim_a: usize,
    dim_b: usize,
    matrix: ComplexMatrix,
    sqrt_a: ComplexMatrix,
    sqrt_b: ComplexMatrix,
    inv_sqrt_a: ComplexMatrix,
    inv_sqrt_b: ComplexMatrix,
}

impl TildeOperator {
    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `ρ_A^{1/2}` or `ρ_B^{1/2}`.
    pub fn marginal_sqrt(&self, side: Side) -> &ComplexMatrix {
        match side {
            Side::A => &self.sqrt_a,
            Side::B => &self.sqrt_b,
        }
    }

    /// Inverse square root of a marginal on its support.
    pub fn marginal_inv_sqrt(&self, side: Side) -> &ComplexMatrix {
        match side {
            Side::A => &self.inv_sqrt_a,
            Side::B => &self.inv_sqrt_b,
        }
    }
}

pub fn tilde_operator(rho: &BipartiteState) -> Result<TildeOperator> {
    let (dim_a, dim_b) = rho.dims();
    let rho_a = rho.partial_trace(Side::A);
    let rho_b = rho.partial_trace(Side::B);
    let inv_sqrt_a = psd_inverse_sqrt(rho_a.matrix(), DEFAULT_RANK_TOL)?;
    let inv_sqrt_b = psd_inverse_sqrt(rho_b.matrix(), DEFAULT_RANK_TOL)?;
    let left = ComplexMatrix::identity(dim_a).kron(&inv_sqrt_b);
    let right = inv_sqrt_a.kron(&ComplexMatrix::identity(dim_b));
    let matrix = &(&left * rho.matrix()) * &right;
    Ok(TildeOperator {
        dim_a,
        dim_b,
        matrix,
        sqrt_a: psd_sqrt(rho_a.matrix(), DEFAULT_RANK_TOL)?,
        sqrt_b: psd_sqrt(rho_b.matrix(), DEFAULT_RANK_TOL)?,
        inv_sqrt_a,
        inv_sqrt_b,
    })
}

fn check_bipartite(z: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<()> {
    let n = dim_a * dim_b;
    if z.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, expected {n}x{n} for dims ({dim_a}, {dim_b})",
            z.rows(),
            z.cols()
        )));
    }
    Ok(())
}

/// Reshuffles `Z` on `H_A ⊗ H_B` into the `d_A² × d_B²` matrix
/// `R[(i,j),(k,l)] = ⟨i k|Z|j l⟩`; its singular values are the
/// operator-Schmidt coefficients of `Z`.
pub fn realign(z: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<ComplexMatrix> {
    check_bipartite(z, dim_a, dim_b)?;
    Ok(ComplexMatrix::from_fn(dim_a * dim_a, dim_b * dim_b, |r, c| {
        let (i, j) = (r / dim_a, r % dim_a);
        let (k, l) = (c / dim_b, c % dim_b);
        z[(i * dim_b + k, j * dim_b + l)]
    }))
}

/// Inverse of [`realign`].
pub fn unrealign(r: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<ComplexMatrix> {
    if r.shape() != (dim_a * dim_a, dim_b * dim_b) {
        return Err(Error::DimensionMismatch(format!(
            "realigned matrix is {}x{}, expected {}x{}",
            r.rows(),
            r.cols(),
            dim_a * dim_a,
            dim_b * dim_b
        )));
    }
    let n = dim_a * dim_b;
    Ok(ComplexMatrix::from_fn(n, n, |row, col| {
        let (i, k) = (row / dim_b, row % dim_b);
        let (j, l) = (col / dim_b, col % dim_b);
        r[(i * dim_a + j, k * dim_b + l)]
    }))
}

/// Row-major vectorization of a square operator.
fn vectorize(m: &ComplexMatrix) -> Vec<C64> {
    m.data().to_vec()
}

fn devectorize(v: &[C64], dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |i, j| v[i * dim + j])
}

/// Operator-Schmidt decomposition `ρ̃ = Σ μ_i M_i ⊗ N_i`.
#[derive(Debug, Clone)]
pub struct SchmidtSpectrum {
    pub coefficients: Vec<f64>,
    /// Frobenius-orthonormal operators on A.
    pub a_vectors: Vec<ComplexMatrix>,
    /// Frobenius-orthonormal operators on B.
    pub b_vectors: Vec<ComplexMatrix>,
}

impl SchmidtSpectrum {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `Σ μ_i M_i ⊗ N_i`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let da = self.a_vectors[0].rows();
        let db = self.b_vectors[0].rows();
        let mut out = ComplexMatrix::zeros(da * db, da * db);
        for ((&mu, m), n) in self.coefficients.iter().zip(&self.a_vectors).zip(&self.b_vectors) {
            if mu != 0.0 {
                out = &out + &m.kron(n).scale_real(mu);
            }
        }
        out
    }

    /// The coefficient `μ_k`, one-based.
    pub fn mu_k(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.len() {
            return Err(Error::OutOfRange(format!(
                "coefficient index {k} outside 1..={}",
                self.len()
            )));
        }
        Ok(self.coefficients[k - 1])
    }

    /// `μ₂`, or 0 when the spectrum has a single entry.
    pub fn maximal_correlation(&self) -> f64 {
        self.coefficients.get(1).copied().unwrap_or(0.0)
    }
}

/// Operator-Schmidt spectrum of `ρ̃`, with the top pair fixed to
/// `(ρ_A^{1/2}, ρ_B^{1/2})` and every later `M_i` phased so its
/// largest-magnitude entry is real and positive.
pub fn schmidt_spectrum(rho: &BipartiteState) -> Result<SchmidtSpectrum> {
    let tilde = tilde_operator(rho)?;
    spectrum_of_tilde(&tilde)
}

pub(crate) fn spectrum_of_tilde(tilde: &TildeOperator) -> Result<SchmidtSpectrum> {
    let (da, db) = tilde.dims();
    let r = realign(tilde.matrix(), da, db)?;
    let dec = svd(&r)?;
    let mut sigma = dec.singular_values.clone();
    let k = sigma.len();
    let top = sigma[0];
    if (top - 1.0).abs() > TOP_DEVIATION_LIMIT {
        return Err(Error::TopCoefficientDeviation { value: top });
    }

    let mut left: Vec<Vec<C64>> = (0..k).map(|i| dec.left(i)).collect();
    let mut right: Vec<Vec<C64>> = (0..k).map(|i| dec.right(i)).collect();
    let a = vectorize(tilde.marginal_sqrt(Side::A));
    let b: Vec<C64> = vectorize(tilde.marginal_sqrt(Side::B))
        .into_iter()
        .map(|z| z.conj())
        .collect();

    let cluster = sigma.iter().take_while(|&&s| top - s <= TOP_CLUSTER_TOL).count();
    if cluster == 1 {
        let overlap = dot(&a, &left[0]);
        if overlap.norm() > 0.0 {
            let phase = overlap.conj() / overlap.norm();
            left[0].iter_mut().for_each(|z| *z *= phase);
            right[0].iter_mut().for_each(|z| *z *= phase);
        }
    } else {
        align_top_cluster(&r, &mut left, &mut right, &sigma, cluster, a, b)?;
    }

    for i in 1..k {
        let pivot = left[i]
            .iter()
            .copied()
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .unwrap_or_default();
        if pivot.norm() > 0.0 {
            let phase = pivot.conj() / pivot.norm();
            left[i].iter_mut().for_each(|z| *z *= phase);
            right[i].iter_mut().for_each(|z| *z *= phase);
        }
    }

    for s in sigma.iter_mut().skip(1) {
        if *s > 1.0 + CLAMP_TOL {
            return Err(Error::TopCoefficientDeviation { value: *s });
        }
        *s = s.min(1.0);
    }

    Ok(SchmidtSpectrum {
        coefficients: sigma,
        a_vectors: left.iter().map(|u| devectorize(u, da)).collect(),
        b_vectors: right
            .iter()
            .map(|v| devectorize(v, db).conj())
            .collect(),
    })
}

/// Rotates a degenerate top singular subspace so its first pair is exactly
/// `(a, b)` and the rest span the complement of `a` inside the cluster.
fn align_top_cluster(
    r: &ComplexMatrix,
    left: &mut [Vec<C64>],
    right: &mut [Vec<C64>],
    sigma: &[f64],
    cluster: usize,
    a: Vec<C64>,
    b: Vec<C64>,
) -> Result<()> {
    // Coefficients of `a` in the cluster basis; the residual Gram matrix
    // I − c c† has eigenvalue 1 exactly on the complement of `c`.
    let c: Vec<C64> = left[..cluster].iter().map(|u| dot(u, &a)).collect();
    let captured = norm(&c);
    if (captured - 1.0).abs() > TOP_DEVIATION_LIMIT {
        return Err(Error::TopCoefficientDeviation { value: captured });
    }
    let gram = ComplexMatrix::from_fn(cluster, cluster, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        C64::new(delta, 0.0) - c[i] * c[j].conj()
    });
    let eig = hermitian_eig(&gram, 1e-10)?;
    let adj = r.adjoint();
    let mut new_left = vec![a];
    let mut new_right = vec![b];
    for m in 0..cluster - 1 {
        let w = eig.eigenvector(m);
        let dim = left[0].len();
        let mut u = vec![C64::default(); dim];
        for (coef, basis) in w.iter().zip(left.iter()) {
            for (ui, &bi) in u.iter_mut().zip(basis) {
                *ui += coef * bi;
            }
        }
        let n = norm(&u);
        u.iter_mut().for_each(|z| *z /= n);
        let mut v = adj.matvec(&u);
        let vn = norm(&v);
        if vn > 0.0 {
            v.iter_mut().for_each(|z| *z /= vn);
        }
        debug_assert!((vn - sigma[m + 1]).abs() < 1e-6);
        new_left.push(u);
        new_right.push(v);
    }
    for (slot, u) in left.iter_mut().zip(new_left) {
        *slot = u;
    }
    for (slot, v) in right.iter_mut().zip(new_right) {
        *slot = v;
    }
    Ok(())
}

/// `μ(ρ)`: the second operator-Schmidt coefficient of `ρ̃`, in `[0, 1]`.
pub fn maximal_correlation(rho: &BipartiteState) -> Result<f64> {
    Ok(schmidt_spectrum(rho)?.maximal_correlation())
}

/// `μ_k(ρ)` for `1 ≤ k ≤ min(d_A², d_B²)`.
pub fn mu_k(rho: &BipartiteState, k: usize) -> Result<f64> {
    let (da, db) = rho.dims();
    let len = (da * da).min(db * db);
    if k == 0 || k > len {
        return Err(Error::OutOfRange(format!("coefficient index {k} outside 1..={len}")));
    }
    schmidt_spectrum(rho)?.mu_k(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{tilde_matrix, JointDistribution};
    use crate::linalg::frobenius_inner;
    use crate::rng;
    use crate::states::{
        bell_state, embed_classical, isotropic_state, random_bipartite, random_product,
        DensityMatrix,
    };

    #[test]
    fn tilde_of_product_is_product_of_roots() {
        let rho = random_product(2, 3, 3);
        let t = tilde_operator(&rho).unwrap();
        let expected = psd_sqrt(rho.partial_trace(Side::A).matrix(), 1e-10)
            .unwrap()
            .kron(&psd_sqrt(rho.partial_trace(Side::B).matrix(), 1e-10).unwrap());
        assert!(t.matrix().distance(&expected).unwrap() < 1e-10);
    }

    #[test]
    fn tilde_of_isotropic_doubles_state() {
        let rho = isotropic_state(0.3).unwrap();
        let t = tilde_operator(&rho).unwrap();
        assert!(t.matrix().distance(&rho.matrix().scale_real(2.0)).unwrap() < 1e-13);
    }

    #[test]
    fn tilde_of_classical_embedding_is_diagonal() {
        let p = JointDistribution::from_rows(&[vec![0.1, 0.2, 0.05], vec![0.3, 0.0, 0.35]]).unwrap();
        let t = tilde_operator(&embed_classical(&p)).unwrap();
        let pt = tilde_matrix(&p);
        for row in 0..6 {
            for col in 0..6 {
                let expected = if row == col { pt[(row / 3, row % 3)] } else { C64::default() };
                assert!((t.matrix()[(row, col)] - expected).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn tilde_pairs_with_root_marginals_to_one() {
        let rho = random_bipartite(3, 2, 2, 8).unwrap();
        let t = tilde_operator(&rho).unwrap();
        let pair = t.marginal_sqrt(Side::A).kron(t.marginal_sqrt(Side::B));
        let v = frobenius_inner(&pair, t.matrix()).unwrap();
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn realign_of_product_is_rank_one() {
        let mut r = rng::seeded(1);
        let m = rng::gaussian_matrix(&mut r, 2, 2);
        let n = rng::gaussian_matrix(&mut r, 3, 3);
        let z = m.kron(&n);
        let re = realign(&z, 2, 3).unwrap();
        assert_eq!(re.shape(), (4, 9));
        let expected = ComplexMatrix::from_fn(4, 9, |row, col| m.data()[row] * n.data()[col]);
        assert!(re.distance(&expected).unwrap() < 1e-14);
        assert_eq!(svd(&re).unwrap().rank(1e-10), 1);
    }

    #[test]
    fn realign_of_identity_has_single_value_two() {
        let re = realign(&ComplexMatrix::identity(4), 2, 2).unwrap();
        let s = svd(&re).unwrap().singular_values;
        assert!((s[0] - 2.0).abs() < 1e-14);
        assert!(s[1..].iter().all(|&x| x < 1e-14));
    }

    #[test]
    fn realign_round_trip_and_shape_errors() {
        let mut r = rng::seeded(2);
        let z = rng::gaussian_matrix(&mut r, 6, 6);
        let back = unrealign(&realign(&z, 3, 2).unwrap(), 3, 2).unwrap();
        assert_eq!(back, z);
        assert!(realign(&z, 2, 2).is_err());
        assert!(unrealign(&z, 2, 3).is_err());
    }

    #[test]
    fn product_state_spectrum() {
        let s = schmidt_spectrum(&random_product(2, 2, 4)).unwrap();
        assert_eq!(s.len(), 4);
        assert!((s.coefficients[0] - 1.0).abs() < 1e-12);
        assert!(s.coefficients[1..].iter().all(|&x| x < 1e-8));
    }

    #[test]
    fn isotropic_spectrum_is_one_then_p() {
        for &p in &[0.0, 0.2, 0.5, 0.9, 1.0] {
            let s = schmidt_spectrum(&isotropic_state(p).unwrap()).unwrap();
            assert!((s.coefficients[0] - 1.0).abs() < 1e-12);
            for &c in &s.coefficients[1..] {
                assert!((c - p).abs() < 1e-12, "p = {p}: {:?}", s.coefficients);
            }
        }
    }

    #[test]
    fn correlated_bits_spectrum() {
        let p = JointDistribution::binary(0.5, 0.0, 0.0, 0.5).unwrap();
        let s = schmidt_spectrum(&embed_classical(&p)).unwrap();
        assert!((s.coefficients[0] - 1.0).abs() < 1e-12);
        assert!((s.coefficients[1] - 1.0).abs() < 1e-12);
        assert!(s.coefficients[2] < 1e-12 && s.coefficients[3] < 1e-12);
    }

    fn check_decomposition(rho: &BipartiteState) {
        let t = tilde_operator(rho).unwrap();
        let s = spectrum_of_tilde(&t).unwrap();
        assert!(s.reconstruct().distance(t.matrix()).unwrap() < 1e-8);
        for i in 0..s.len() {
            for j in 0..s.len() {
                let expected = if i == j { 1.0 } else { 0.0 };
                let gm = frobenius_inner(&s.a_vectors[i], &s.a_vectors[j]).unwrap();
                let gn = frobenius_inner(&s.b_vectors[i], &s.b_vectors[j]).unwrap();
                assert!((gm - C64::new(expected, 0.0)).norm() < 1e-9);
                assert!((gn - C64::new(expected, 0.0)).norm() < 1e-9);
            }
        }
        assert!((s.coefficients[0] - 1.0).abs() < 1e-8);
        assert!(s.a_vectors[0].distance(t.marginal_sqrt(Side::A)).unwrap() < 1e-7);
        assert!(s.b_vectors[0].distance(t.marginal_sqrt(Side::B)).unwrap() < 1e-7);
    }

    #[test]
    fn decomposition_invariants_on_random_and_degenerate_states() {
        for seed in 0..10 {
            check_decomposition(&random_bipartite(2, 3, 1 + (seed as usize % 6), seed).unwrap());
            check_decomposition(&random_bipartite(3, 3, 2, 100 + seed).unwrap());
        }
        check_decomposition(&bell_state());
        check_decomposition(&isotropic_state(0.4).unwrap());
        check_decomposition(&isotropic_state(1.0).unwrap());
        let rho_a = DensityMatrix::new(ComplexMatrix::diag_real(&[1.0, 0.0, 0.0]), 1e-10).unwrap();
        check_decomposition(&BipartiteState::product(&rho_a, &DensityMatrix::maximally_mixed(2)));
    }

    #[test]
    fn mu_values_and_indexing() {
        let rho = isotropic_state(0.5).unwrap();
        assert!((mu_k(&rho, 1).unwrap() - 1.0).abs() < 1e-12);
        assert!((mu_k(&rho, 4).unwrap() - 0.5).abs() < 1e-12);
        assert!((mu_k(&rho, 2).unwrap() - maximal_correlation(&rho).unwrap()).abs() == 0.0);
        assert!(matches!(mu_k(&rho, 0), Err(Error::OutOfRange(_))));
        assert!(matches!(mu_k(&rho, 5), Err(Error::OutOfRange(_))));
        assert!((maximal_correlation(&bell_state()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_dimension_register_has_no_correlation() {
        let psi = rng::random_unit_vector(&mut rng::seeded(5), 3);
        let rho = BipartiteState::pure(&psi, 1, 3).unwrap();
        let s = schmidt_spectrum(&rho).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(maximal_correlation(&rho).unwrap(), 0.0);
    }
}
