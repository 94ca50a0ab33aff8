use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, C64};
use crate::states::{BipartiteState, Side};

use super::spectrum::{spectrum_of_tilde, tilde_operator};

/// Coefficients within this distance of `μ₂` share its optimizer subspace.
pub const TIE_TOL: f64 = 1e-10;
/// Below this `μ₂` there is no correlation to optimize.
const ZERO_CORRELATION: f64 = 1e-12;
/// Relative Gram eigenvalue below which a direction counts as null.
const NULL_TOL: f64 = 1e-13;
/// Largest anti-hermitian part accepted before symmetrizing.
const HERMITIAN_ACCEPT: f64 = 1e-9;

/// Local observables attaining `μ(ρ) = tr(ρ X ⊗ Y†)` under the constraints
/// `tr(ρ_A X) = tr(ρ_B Y) = 0` and `tr(ρ_A XX†) = tr(ρ_B YY†) = 1`.
#[derive(Debug, Clone)]
pub struct OptimizerPair {
    pub x_a: ComplexMatrix,
    pub y_b: ComplexMatrix,
    pub value: f64,
    /// Both observables are hermitian.
    pub hermitian: bool,
    /// `μ₂` is tied with `μ₃`, so this pair is one of many optimizers.
    pub degenerate: bool,
    /// `μ₃`, or 0 when absent.
    pub next_coefficient: f64,
}

impl OptimizerPair {
    /// Fails with [`Error::DegenerateOptimizer`] when the optimizer is not
    /// unique.
    pub fn require_unique(self) -> Result<Self> {
        if self.degenerate {
            return Err(Error::DegenerateOptimizer {
                mu2: self.value,
                mu3: self.next_coefficient,
            });
        }
        Ok(self)
    }

    /// `tr(ρ X ⊗ Y†)`.
    pub fn attained(&self, rho: &BipartiteState) -> C64 {
        (rho.matrix() * &self.x_a.kron(&self.y_b.adjoint())).trace()
    }
}

/// Optimizers from the second Schmidt pair, `X = ρ_A^{-1/2} M₂†` and
/// `Y = ρ_B^{-1/2} N₂`. Within the tie cluster of `μ₂` a hermitian member is
/// selected when one exists, preferring the largest diagonal weight of `X`.
pub fn extract_optimizers(rho: &BipartiteState) -> Result<OptimizerPair> {
    let tilde = tilde_operator(rho)?;
    let spec = spectrum_of_tilde(&tilde)?;
    if spec.len() < 2 || spec.coefficients[1] <= ZERO_CORRELATION {
        return Err(Error::NoCorrelation);
    }
    let mu2 = spec.coefficients[1];
    let cluster: Vec<usize> = (1..spec.len())
        .take_while(|&j| (spec.coefficients[j] - mu2).abs() <= TIE_TOL)
        .collect();
    let inv_a = tilde.marginal_inv_sqrt(Side::A);
    let inv_b = tilde.marginal_inv_sqrt(Side::B);
    let xs: Vec<ComplexMatrix> = cluster
        .iter()
        .map(|&j| inv_a * &spec.a_vectors[j].adjoint())
        .collect();
    let ys: Vec<ComplexMatrix> = cluster.iter().map(|&j| inv_b * &spec.b_vectors[j]).collect();

    let (x_a, y_b, hermitian) = match hermitian_combination(&xs, &ys)? {
        Some((x, y)) => (x, y, true),
        None => (xs[0].clone(), ys[0].clone(), false),
    };
    let last = *cluster.last().expect("cluster contains μ₂");
    Ok(OptimizerPair {
        x_a,
        y_b,
        value: mu2,
        hermitian,
        degenerate: cluster.len() > 1,
        next_coefficient: spec.coefficients.get(last + 1).copied().unwrap_or(0.0),
    })
}

/// Real embedding of a complex matrix as stacked real and imaginary parts.
fn real_parts(m: &ComplexMatrix) -> impl Iterator<Item = f64> + '_ {
    m.data().iter().map(|z| z.re).chain(m.data().iter().map(|z| z.im))
}

/// `Σ (a_j + i b_j) M_j` for a real coefficient vector `(a, b)`.
fn combine(ms: &[ComplexMatrix], coeffs: &[f64]) -> ComplexMatrix {
    let g = ms.len();
    let (rows, cols) = ms[0].shape();
    let mut out = ComplexMatrix::zeros(rows, cols);
    for (j, m) in ms.iter().enumerate() {
        out = &out + &m.scale(C64::new(coeffs[j], coeffs[g + j]));
    }
    out
}

/// Searches the real span of `c = a + ib` for `X = Σ c_j X_j`, `Y = Σ c_j Y_j`
/// both hermitian. Any such unit `c` keeps the value at `μ₂`.
fn hermitian_combination(
    xs: &[ComplexMatrix],
    ys: &[ComplexMatrix],
) -> Result<Option<(ComplexMatrix, ComplexMatrix)>> {
    let g = xs.len();
    let i = C64::new(0.0, 1.0);
    // Columns: anti-hermitian parts produced by each real unknown.
    let columns: Vec<Vec<f64>> = (0..2 * g)
        .map(|col| {
            let j = col % g;
            let (dx, dy) = if col < g {
                (&xs[j] - &xs[j].adjoint(), &ys[j] - &ys[j].adjoint())
            } else {
                (
                    (&xs[j] + &xs[j].adjoint()).scale(i),
                    (&ys[j] + &ys[j].adjoint()).scale(i),
                )
            };
            real_parts(&dx).chain(real_parts(&dy)).collect()
        })
        .collect();
    let scale: f64 = columns
        .iter()
        .map(|c| c.iter().map(|x| x * x).sum::<f64>())
        .fold(0.0, f64::max)
        .max(1.0);
    let gram = ComplexMatrix::from_fn(2 * g, 2 * g, |r, c| {
        C64::new(columns[r].iter().zip(&columns[c]).map(|(x, y)| x * y).sum(), 0.0)
    });
    let eig = hermitian_eig(&gram, 1e-10)?;
    let null: Vec<Vec<f64>> = (0..2 * g)
        .filter(|&k| eig.eigenvalues[k] <= NULL_TOL * scale)
        .map(|k| eig.eigenvector(k).iter().map(|z| z.re).collect())
        .collect();
    if null.is_empty() {
        return Ok(None);
    }

    // Within the null space, maximize the diagonal weight of X.
    let diagonals: Vec<Vec<f64>> = null
        .iter()
        .map(|n| {
            let x = combine(xs, n);
            let d: Vec<C64> = (0..x.rows()).map(|k| x[(k, k)]).collect();
            d.iter().map(|z| z.re).chain(d.iter().map(|z| z.im)).collect()
        })
        .collect();
    let r = null.len();
    let weights = ComplexMatrix::from_fn(r, r, |p, q| {
        C64::new(diagonals[p].iter().zip(&diagonals[q]).map(|(x, y)| x * y).sum(), 0.0)
    });
    let top = hermitian_eig(&weights, 1e-10)?.eigenvector(0);
    let mut coeffs = vec![0.0; 2 * g];
    for (w, n) in top.iter().zip(&null) {
        for (c, v) in coeffs.iter_mut().zip(n) {
            *c += w.re * v;
        }
    }
    let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    coeffs.iter_mut().for_each(|c| *c /= norm);

    let (x, y) = (combine(xs, &coeffs), combine(ys, &coeffs));
    let deviation = x.hermitian_deviation().max(y.hermitian_deviation());
    if deviation > HERMITIAN_ACCEPT * x.frobenius_norm().max(y.frobenius_norm()).max(1.0) {
        return Ok(None);
    }
    let mut x = x.hermitian_part();
    let mut y = y.hermitian_part();
    let max_diag = (0..x.rows()).map(|k| x[(k, k)].re.abs()).fold(0.0, f64::max);
    let first = (0..x.rows())
        .map(|k| x[(k, k)].re)
        .find(|d| d.abs() > 1e-9 * max_diag.max(f64::MIN_POSITIVE));
    if first.is_some_and(|d| d < 0.0) {
        x = x.scale_real(-1.0);
        y = y.scale_real(-1.0);
    }
    Ok(Some((x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::JointDistribution;
    use crate::states::{bell_state, embed_classical, isotropic_state, random_bipartite, random_product};

    fn check_feasible(rho: &BipartiteState, pair: &OptimizerPair) {
        let rho_a = rho.partial_trace(Side::A);
        let rho_b = rho.partial_trace(Side::B);
        let mean_x = (rho_a.matrix() * &pair.x_a).trace();
        let mean_y = (rho_b.matrix() * &pair.y_b).trace();
        let var_x = (&(rho_a.matrix() * &pair.x_a) * &pair.x_a.adjoint()).trace();
        let var_y = (&(rho_b.matrix() * &pair.y_b) * &pair.y_b.adjoint()).trace();
        assert!(mean_x.norm() < 1e-8 && mean_y.norm() < 1e-8);
        assert!((var_x.re - 1.0).abs() < 1e-8 && var_x.im.abs() < 1e-8);
        assert!((var_y.re - 1.0).abs() < 1e-8 && var_y.im.abs() < 1e-8);
        assert!((pair.attained(rho).norm() - pair.value).abs() < 1e-8);
    }

    #[test]
    fn random_states_give_feasible_optimizers() {
        for seed in 0..20 {
            let rho = random_bipartite(2, 3, 3, seed).unwrap();
            let pair = extract_optimizers(&rho).unwrap();
            check_feasible(&rho, &pair);
            assert!(!pair.degenerate);
            let mu = crate::maxcorr::maximal_correlation(&rho).unwrap();
            assert!((pair.value - mu).abs() < 1e-8);
        }
    }

    #[test]
    fn isotropic_optimizer_matches_pauli_z_value() {
        let p = 0.6;
        let rho = isotropic_state(p).unwrap();
        let z = ComplexMatrix::diag_real(&[1.0, -1.0]);
        let reference = (rho.matrix() * &z.kron(&z)).trace();
        assert!((reference.re - p).abs() < 1e-14);
        let pair = extract_optimizers(&rho).unwrap();
        check_feasible(&rho, &pair);
        assert!(pair.hermitian && pair.degenerate);
        assert!((pair.attained(&rho).re - p).abs() < 1e-10);
        assert!(pair.x_a.distance(&z).unwrap() < 1e-8);
        assert!(matches!(pair.require_unique(), Err(Error::DegenerateOptimizer { .. })));
    }

    #[test]
    fn bell_optimizer_is_pauli_z() {
        let pair = extract_optimizers(&bell_state()).unwrap();
        let z = ComplexMatrix::diag_real(&[1.0, -1.0]);
        assert!(pair.hermitian);
        assert!(pair.x_a.distance(&z).unwrap() < 1e-8);
        assert!(pair.y_b.distance(&z).unwrap() < 1e-8);
    }

    #[test]
    fn classical_optimizers_are_real_diagonal() {
        let p = JointDistribution::binary(0.4, 0.1, 0.15, 0.35).unwrap();
        let rho = embed_classical(&p);
        let pair = extract_optimizers(&rho).unwrap().require_unique().unwrap();
        check_feasible(&rho, &pair);
        assert!(pair.hermitian);
        for m in [&pair.x_a, &pair.y_b] {
            assert!(m[(0, 1)].norm() < 1e-12 && m[(1, 0)].norm() < 1e-12);
            assert!(m[(0, 0)].im.abs() < 1e-12 && m[(1, 1)].im.abs() < 1e-12);
        }
    }

    /// Hermitian orthonormal basis of `L(C^d)` as a real vector space.
    fn hermitian_basis(d: usize) -> Vec<ComplexMatrix> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let mut m = ComplexMatrix::zeros(d, d);
                match i.cmp(&j) {
                    std::cmp::Ordering::Equal => m[(i, i)] = C64::new(1.0, 0.0),
                    std::cmp::Ordering::Less => {
                        m[(i, j)] = C64::new(h, 0.0);
                        m[(j, i)] = C64::new(h, 0.0);
                    }
                    std::cmp::Ordering::Greater => {
                        m[(i, j)] = C64::new(0.0, -h);
                        m[(j, i)] = C64::new(0.0, h);
                    }
                }
                out.push(m);
            }
        }
        out
    }

    /// Best value over hermitian X, Y: second singular value of the whitened
    /// real correlation matrix `G_A^{-1/2} C G_B^{-1/2}`.
    fn hermitian_restricted_mu(rho: &BipartiteState) -> f64 {
        use crate::linalg::{psd_inverse_sqrt, svd};
        let ra = rho.partial_trace(Side::A);
        let rb = rho.partial_trace(Side::B);
        let (ha, hb) = (hermitian_basis(rho.dim_a()), hermitian_basis(rho.dim_b()));
        let gram = |r: &ComplexMatrix, basis: &[ComplexMatrix]| {
            ComplexMatrix::from_fn(basis.len(), basis.len(), |p, q| {
                C64::new((&(r * &basis[p]) * &basis[q]).trace().re, 0.0)
            })
        };
        let ga = psd_inverse_sqrt(&gram(ra.matrix(), &ha), 1e-12).unwrap();
        let gb = psd_inverse_sqrt(&gram(rb.matrix(), &hb), 1e-12).unwrap();
        let c = ComplexMatrix::from_fn(ha.len(), hb.len(), |p, q| {
            C64::new((rho.matrix() * &ha[p].kron(&hb[q])).trace().re, 0.0)
        });
        svd(&(&(&ga * &c) * &gb)).unwrap().singular_values[1]
    }

    #[test]
    fn hermitian_restriction_matches_on_isotropic_state() {
        let rho = isotropic_state(0.35).unwrap();
        assert!((hermitian_restricted_mu(&rho) - 0.35).abs() < 1e-10);
    }

    #[test]
    fn generic_states_need_non_hermitian_optimizers() {
        for seed in 0..10 {
            let rho = random_bipartite(3, 2, 4, 50 + seed).unwrap();
            let pair = extract_optimizers(&rho).unwrap();
            check_feasible(&rho, &pair);
            assert!(!pair.degenerate);
            let restricted = hermitian_restricted_mu(&rho);
            assert!(restricted < pair.value - 1e-3, "seed {seed}");
            assert!(!pair.hermitian, "seed {seed}");
        }
    }

    #[test]
    fn product_state_has_no_optimizer() {
        assert!(matches!(
            extract_optimizers(&random_product(2, 2, 1)),
            Err(Error::NoCorrelation)
        ));
    }
}
