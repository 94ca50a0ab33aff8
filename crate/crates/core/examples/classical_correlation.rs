//! Classical maximal correlation, its closed form on bits, the diagonal lower
//! bound, and the agreement with the embedded quantum state.

use qmaxcorr::classical::{
    binary_mu_exact, classical_maximal_correlation, is_decomposable, lemma_lower_bound,
    JointDistribution, DEFAULT_SUPPORT_TOL,
};
use qmaxcorr::maximal_correlation;
use qmaxcorr::states::embed_classical;

fn main() -> qmaxcorr::Result<()> {
    let noisy_bits = JointDistribution::binary(0.4, 0.1, 0.1, 0.4)?;
    println!("noisy copy of a bit:");
    println!("  exact        {:.6}", binary_mu_exact(&noisy_bits)?);
    println!("  via svd      {:.6}", classical_maximal_correlation(&noisy_bits)?);
    println!("  lower bound  {:.6}", lemma_lower_bound(&noisy_bits)?);
    println!("  embedded     {:.6}", maximal_correlation(&embed_classical(&noisy_bits))?);

    let blocks = JointDistribution::from_rows(&[
        vec![0.2, 0.1, 0.0],
        vec![0.1, 0.2, 0.0],
        vec![0.0, 0.0, 0.4],
    ])?;
    let (decomposable, partition) = is_decomposable(&blocks, DEFAULT_SUPPORT_TOL);
    println!("block distribution: mu = {:.6}", classical_maximal_correlation(&blocks)?);
    println!("  decomposable {decomposable}, partition {partition:?}");
    Ok(())
}
