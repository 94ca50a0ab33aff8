use crate::channels::{measure_binary, BinaryMeasurement};
use crate::classical::JointDistribution;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, HermitianSpectrum};
use crate::states::{BipartiteState, Side};

use super::optimizers::extract_optimizers;
use super::spectrum::maximal_correlation;

pub const DEFAULT_WITNESS_TOL: f64 = 1e-8;
/// Relative eigenvalue gap separating spectral clusters of an observable.
const CLUSTER_GAP: f64 = 1e-6;

/// Local binary measurements whose outcomes agree with certainty, with the
/// joint distribution they induce.
#[derive(Debug, Clone)]
pub struct CommonDataWitness {
    pub measurement_a: BinaryMeasurement,
    pub measurement_b: BinaryMeasurement,
    pub distribution: JointDistribution,
}

impl CommonDataWitness {
    /// `p₀₁ + p₁₀`.
    pub fn cross_terms(&self) -> f64 {
        self.distribution.get(0, 1) + self.distribution.get(1, 0)
    }
}

/// Groups descending eigenvalues into clusters; returns index ranges.
fn clusters(values: &[f64]) -> Vec<std::ops::Range<usize>> {
    let scale = values.iter().map(|v| v.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k - 1] - values[k] > CLUSTER_GAP * scale {
            out.push(start..k);
            start = k;
        }
    }
    out
}

fn projector(spec: &HermitianSpectrum, range: std::ops::Range<usize>) -> ComplexMatrix {
    spec.apply_fn_indexed(|k, _| if range.contains(&k) { 1.0 } else { 0.0 })
}

/// Lagrange polynomial equal to 1 at `nodes[chosen]` and 0 at the others.
fn indicator_polynomial(nodes: &[f64], chosen: usize) -> impl Fn(f64) -> f64 + '_ {
    move |t| {
        nodes
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != chosen)
            .map(|(_, &r)| (t - r) / (nodes[chosen] - r))
            .product()
    }
}

/// Measurements `{M, I − M}` on A and `{N, I − N}` on B with
/// `tr(ρ M ⊗ (I − N)) = tr(ρ (I − M) ⊗ N) = 0` and nontrivial outcomes, when
/// `μ(ρ) ≥ 1 − tol`. `M` is a spectral projector of the hermitian optimizer
/// `X`; `N = q(Y)²` where `q` is the interpolating polynomial with `q(X) = M`.
pub fn common_data_witness(rho: &BipartiteState, tol: f64) -> Result<Option<CommonDataWitness>> {
    let mu = maximal_correlation(rho)?;
    if mu < 1.0 - tol {
        return Ok(None);
    }
    let fail = |msg: String| Err(Error::WitnessConstructionFailed(msg));
    let pair = extract_optimizers(rho)?;
    if !pair.hermitian {
        return fail("no hermitian optimizer in the top subspace".into());
    }
    let (x, y) = (&pair.x_a, &pair.y_b);
    let (da, db) = rho.dims();
    let lhs = rho.matrix() * &x.kron(&ComplexMatrix::identity(db));
    let rhs = rho.matrix() * &ComplexMatrix::identity(da).kron(y);
    let residual = lhs.distance(&rhs)?;
    // ‖ρ^{1/2}(X⊗I − I⊗Y)‖² = 2(1 − μ) and ‖ρ^{1/2}‖ ≤ 1.
    if residual > (2.0 * tol).sqrt() + 1e-10 {
        return fail(format!("optimizers are not perfectly correlated (residual {residual:e})"));
    }

    let x_spec = hermitian_eig(x, 1e-8)?;
    let groups = clusters(&x_spec.eigenvalues);
    let nodes: Vec<f64> = groups
        .iter()
        .map(|g| x_spec.eigenvalues[g.clone()].iter().sum::<f64>() / g.len() as f64)
        .collect();
    let rho_a = rho.partial_trace(Side::A);
    let chosen = groups.iter().position(|g| {
        let weight = (rho_a.matrix() * &projector(&x_spec, g.clone())).trace().re;
        weight > tol && weight < 1.0 - tol
    });
    let Some(chosen) = chosen else {
        return fail("every spectral projector of the optimizer is trivial".into());
    };
    let m = projector(&x_spec, groups[chosen].clone());
    let q = indicator_polynomial(&nodes, chosen);
    let y_spec = hermitian_eig(y, 1e-8)?;
    let n = y_spec.apply_fn(|t| q(t).powi(2).clamp(0.0, 1.0));

    let measurement_a = BinaryMeasurement::new(m)?;
    let measurement_b = BinaryMeasurement::new(n)?;
    let distribution = measure_binary(rho, &measurement_a, &measurement_b)?;
    let witness = CommonDataWitness {
        measurement_a,
        measurement_b,
        distribution,
    };
    let p = &witness.distribution;
    if p.get(0, 1) > 10.0 * tol || p.get(1, 0) > 10.0 * tol {
        return fail(format!("cross terms {} and {}", p.get(0, 1), p.get(1, 0)));
    }
    let inside = |v: f64| v > tol && v < 1.0 - tol;
    if !inside(p.get(0, 0)) || !inside(p.get(1, 1)) {
        return fail(format!("trivial diagonal {} and {}", p.get(0, 0), p.get(1, 1)));
    }
    Ok(Some(witness))
}
