//! Seeded randomized suites. Trial `i` of a run seeded with `seed` draws all
//! its randomness from `trial_seed(seed, i)`, so results do not depend on
//! scheduling.

use rand::Rng;
use rayon::prelude::*;

use crate::channels::{apply_local, random_channel, QuantumChannel};
use crate::classical::{binary_mu_exact, lemma_lower_bound, random_block_distribution, random_distribution};
use crate::error::Result;
use crate::linalg::{trace_norm, ComplexMatrix};
use crate::maxcorr::{common_data_witness, maximal_correlation, pure_state_mu, schmidt_spectrum};
use crate::rng::{self, trial_seed, SeededRng};
use crate::states::{
    embed_classical, maximally_entangled, mutual_information, random_bipartite, random_product,
    tensor_power, tensor_states, BipartiteState, Side,
};

use super::oracle::{oracle_mu, DEFAULT_MAX_ITERS, DEFAULT_RESTARTS};
use super::report::{Check, SuiteReport, TrialOutcome};

/// Slack for inequalities checked after channel application and tensoring.
pub const SUITE_TOL: f64 = 1e-7;
/// Agreement required between the variational oracle and the spectrum.
pub const ORACLE_TOL: f64 = 1e-6;
/// Perturbation sizes for the near-maximally-entangled bound.
pub const PERTURBATION_GRID: [f64; 3] = [0.01, 0.05, 0.1];

fn run_trials(count: usize, seed: u64, trial: impl Fn(usize, u64) -> TrialOutcome + Sync) -> Vec<TrialOutcome> {
    (0..count)
        .into_par_iter()
        .map(|i| trial(i, trial_seed(seed, i as u64)))
        .collect()
}

fn check_or_broken(label: &str, result: Result<Vec<Check>>) -> Vec<Check> {
    result.unwrap_or_else(|e| vec![Check::broken(format!("{label}: {e}"))])
}

fn random_state(r: &mut SeededRng, max_dims: (usize, usize)) -> Result<BipartiteState> {
    let da = r.random_range(2..=max_dims.0.max(2));
    let db = r.random_range(2..=max_dims.1.max(2));
    let rank = r.random_range(1..=da * db);
    random_bipartite(da, db, rank, r.random())
}

/// `μ_i(out) ≤ μ_i(in)` for every `i`; missing coefficients count as 0.
fn all_coefficients_at_most(label: &str, output: &[f64], input: &[f64]) -> Check {
    let len = output.len().max(input.len());
    let (mut worst, mut worst_index) = (f64::NEG_INFINITY, 1);
    for i in 0..len {
        let out = output.get(i).copied().unwrap_or(0.0);
        let inp = input.get(i).copied().unwrap_or(0.0);
        if out - inp > worst {
            worst = out - inp;
            worst_index = i + 1;
        }
    }
    Check::at_most(format!("{label}: μ_{worst_index} does not increase"), worst, 0.0)
}

fn dpi_trial(index: usize, seed: u64, dims: (usize, usize)) -> Result<Vec<Check>> {
    let mut r = rng::seeded(seed);
    let rho = random_state(&mut r, dims)?;
    let side = if r.random_bool(0.5) { Side::A } else { Side::B };
    let dim_in = rho.dim(side);
    let (channel, kind) = match index % 10 {
        3 => (random_channel(dim_in, dim_in, 1, r.random())?, "unitary"),
        7 => {
            let dim_out = r.random_range(1..=3);
            (QuantumChannel::completely_depolarizing(dim_in, dim_out), "completely depolarizing")
        }
        _ => {
            let dim_out = r.random_range(2..=3);
            let mut env = r.random_range(1..=3);
            while dim_out * env < dim_in {
                env += 1;
            }
            (random_channel(dim_in, dim_out, env, r.random())?, "random channel")
        }
    };
    let before = schmidt_spectrum(&rho)?.coefficients;
    let after = schmidt_spectrum(&apply_local(&channel, &rho, side)?)?.coefficients;
    let label = format!("{kind} on {side:?}, dims {:?}", rho.dims());
    let mut checks = vec![all_coefficients_at_most(&label, &after, &before)];
    if kind == "unitary" {
        checks.push(Check::equal(format!("{label}: μ unchanged"), after[1], before[1]));
    }
    Ok(checks)
}

/// `μ` of a channel output from two copies is at most `μ` of one copy.
fn two_copy_trial(seed: u64) -> Result<Vec<Check>> {
    let mut r = rng::seeded(seed);
    let rank = r.random_range(1..=4);
    let rho = random_bipartite(2, 2, rank, r.random())?;
    let doubled = tensor_power(&rho, 2);
    let dim_out = r.random_range(2..=3);
    let channel = random_channel(4, dim_out, 2, r.random())?;
    let out = apply_local(&channel, &doubled, Side::B)?;
    Ok(vec![Check::at_most(
        "two copies through a channel on B",
        maximal_correlation(&out)?,
        maximal_correlation(&rho)?,
    )])
}

/// Data processing: `trials` single-copy trials with all coefficients
/// compared, plus one two-copy trial per ten.
pub fn run_dpi_suite(trials: usize, dims: (usize, usize), seed: u64) -> SuiteReport {
    let extra = trials / 10;
    let outcomes = run_trials(trials + extra, seed, |i, s| TrialOutcome {
        seed: s,
        checks: if i < trials {
            check_or_broken("data processing", dpi_trial(i, s, dims))
        } else {
            check_or_broken("two-copy data processing", two_copy_trial(s))
        },
        note: None,
    });
    SuiteReport::from_outcomes("dpi", seed, SUITE_TOL, Some(dims), outcomes)
}

fn tensor_trial(index: usize, seed: u64, dims: (usize, usize)) -> Result<(Vec<Check>, Option<String>)> {
    let mut r = rng::seeded(seed);
    let rho = random_state(&mut r, dims)?;
    let (sigma, kind) = match index % 4 {
        0 => (rho.clone(), "self-product"),
        1 => {
            let (da, db) = (r.random_range(2..=dims.0.max(2)), r.random_range(2..=dims.1.max(2)));
            (random_product(da, db, r.random()), "product partner")
        }
        _ => (random_state(&mut r, dims)?, "random pair"),
    };
    let joint = tensor_states(&rho, &sigma);
    let mu_rho = maximal_correlation(&rho)?;
    let mu_sigma = maximal_correlation(&sigma)?;
    let mu_joint = maximal_correlation(&joint)?;
    let mut checks = vec![Check::equal(format!("{kind}: μ(ρ⊗σ) = max"), mu_joint, mu_rho.max(mu_sigma))];
    let mut note = None;
    if kind == "self-product" {
        let single = mutual_information(&rho);
        let double = mutual_information(&joint);
        checks.push(Check::equal("self-product: mutual information doubles", double, 2.0 * single));
        note = Some(format!(
            "self-product: I(ρ⊗ρ) = {double:.6} = 2·I(ρ) = {:.6} while μ(ρ⊗ρ) = {mu_joint:.6} = μ(ρ) = {mu_rho:.6}",
            2.0 * single
        ));
    }
    Ok((checks, note))
}

/// Tensorization `μ(ρ ⊗ σ) = max(μ(ρ), μ(σ))`, with every fourth trial a
/// self-product that also checks mutual information doubling.
pub fn run_tensorization_suite(trials: usize, dims: (usize, usize), seed: u64) -> SuiteReport {
    let outcomes = run_trials(trials, seed, |i, s| match tensor_trial(i, s, dims) {
        Ok((checks, note)) => TrialOutcome { seed: s, checks, note },
        Err(e) => TrialOutcome {
            seed: s,
            checks: vec![Check::broken(format!("tensorization: {e}"))],
            note: None,
        },
    });
    SuiteReport::from_outcomes("tensorization", seed, SUITE_TOL, Some(dims), outcomes)
}

/// `(1 − t)τ + t·junk` with `t` chosen so the trace-norm distance to the
/// maximally entangled `τ` is exactly `epsilon`.
pub fn perturbed_maximally_entangled(dim: usize, epsilon: f64, seed: u64) -> Result<BipartiteState> {
    let tau = maximally_entangled(dim);
    let junk = random_bipartite(dim, dim, dim * dim, seed)?;
    let distance = trace_norm(&(junk.matrix() - tau.matrix()))?;
    let t = (epsilon / distance).min(1.0);
    let mixed = &tau.matrix().scale_real(1.0 - t) + &junk.matrix().scale_real(t);
    BipartiteState::new(mixed, dim, dim)
}

fn product_vector(r: &mut SeededRng, da: usize, db: usize) -> Vec<crate::linalg::C64> {
    let a = ComplexMatrix::new(da, 1, rng::random_unit_vector(r, da)).expect("nonempty");
    let b = ComplexMatrix::new(db, 1, rng::random_unit_vector(r, db)).expect("nonempty");
    a.kron(&b).into_data()
}

fn extreme_trial(index: usize, seed: u64) -> Result<Vec<Check>> {
    let mut r = rng::seeded(seed);
    let round = index / 6;
    match index % 6 {
        0 => {
            let rho = random_state(&mut r, (3, 3))?;
            let spec = schmidt_spectrum(&rho)?;
            let mu = spec.maximal_correlation();
            Ok(vec![
                Check::equal("μ₁ = 1", spec.coefficients[0], 1.0),
                Check::at_most("μ ≥ 0", -mu, 0.0),
                Check::at_most("μ ≤ 1", mu, 1.0),
            ])
        }
        1 => {
            let (da, db) = (r.random_range(2..=3), r.random_range(2..=3));
            let mu = maximal_correlation(&random_product(da, db, r.random()))?;
            Ok(vec![Check::at_most("product state has μ = 0", mu, 0.0)])
        }
        2 => {
            let (da, db) = (r.random_range(2..=3), r.random_range(2..=3));
            let psi = if round.is_multiple_of(2) {
                rng::random_unit_vector(&mut r, da * db)
            } else {
                product_vector(&mut r, da, db)
            };
            let exact = pure_state_mu(&psi, da, db)?;
            let mu = maximal_correlation(&BipartiteState::pure(&psi, da, db)?)?;
            Ok(vec![Check::equal("pure state dichotomy", mu, exact)])
        }
        3 => {
            let dim = 2 + round % 2;
            let epsilon = PERTURBATION_GRID[(round / 2) % PERTURBATION_GRID.len()];
            let rho = perturbed_maximally_entangled(dim, epsilon, r.random())?;
            Ok(vec![Check::at_most(
                format!("μ ≥ 1 − 9ε at ε = {epsilon}, d = {dim}"),
                1.0 - 9.0 * epsilon,
                maximal_correlation(&rho)?,
            )])
        }
        4 => {
            let (rows, cols) = (r.random_range(2..=4), r.random_range(2..=4));
            let (p, _) = random_block_distribution(rows, cols, r.random());
            let Some(w) = common_data_witness(&embed_classical(&p), 1e-8)? else {
                return Ok(vec![Check::broken("decomposable embedding: no witness")]);
            };
            let (p00, p11) = (w.distribution.get(0, 0), w.distribution.get(1, 1));
            let mut checks = vec![Check::at_most("witness cross terms vanish", w.cross_terms(), 0.0)];
            if !(p00 > 0.0 && p00 < 1.0 && p11 > 0.0 && p11 < 1.0) {
                checks.push(Check::broken("witness outcomes are trivial"));
            }
            Ok(checks)
        }
        _ => {
            let p = random_distribution(2, 2, 0.0, r.random());
            Ok(vec![Check::at_most(
                "binary lower bound ≤ exact value",
                lemma_lower_bound(&p)?,
                binary_mu_exact(&p)?,
            )])
        }
    }
}

/// Extreme values: range, vanishing on products, the pure-state dichotomy,
/// the bound near maximally entangled states, common-data witnesses on
/// decomposable embeddings and soundness of the binary lower bound.
pub fn run_extreme_suite(trials: usize, seed: u64) -> SuiteReport {
    let outcomes = run_trials(trials, seed, |i, s| TrialOutcome {
        seed: s,
        checks: check_or_broken("extreme values", extreme_trial(i, s)),
        note: None,
    });
    SuiteReport::from_outcomes("extreme", seed, SUITE_TOL, None, outcomes)
}

/// The variational oracle against the spectral value on alternating
/// (2,2) and (2,3) states.
pub fn run_oracle_suite(trials: usize, seed: u64) -> SuiteReport {
    let outcomes = run_trials(trials, seed, |i, s| {
        let checks = check_or_broken("oracle", (|| {
            let mut r = rng::seeded(s);
            let db = 2 + i % 2;
            let rank = r.random_range(1..=2 * db);
            let rho = random_bipartite(2, db, rank, r.random())?;
            let oracle = oracle_mu(&rho, DEFAULT_RESTARTS, DEFAULT_MAX_ITERS, r.random())?;
            Ok(vec![Check::equal(
                format!("oracle agrees on (2,{db}) rank {rank}"),
                oracle,
                maximal_correlation(&rho)?,
            )])
        })());
        TrialOutcome { seed: s, checks, note: None }
    });
    SuiteReport::from_outcomes("oracle", seed, ORACLE_TOL, None, outcomes)
}
