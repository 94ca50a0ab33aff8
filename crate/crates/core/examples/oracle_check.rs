//! The variational oracle, which never decomposes a matrix, against the
//! spectral value.

use qmaxcorr::harness::{oracle_mu, DEFAULT_MAX_ITERS, DEFAULT_RESTARTS};
use qmaxcorr::maximal_correlation;
use qmaxcorr::states::random_bipartite;

fn main() -> qmaxcorr::Result<()> {
    for seed in 0..5 {
        let rho = random_bipartite(3, 3, 4, seed)?;
        let spectral = maximal_correlation(&rho)?;
        let oracle = oracle_mu(&rho, DEFAULT_RESTARTS, DEFAULT_MAX_ITERS, seed)?;
        println!("seed {seed}: spectral {spectral:.10}, oracle {oracle:.10}, gap {:.1e}", (spectral - oracle).abs());
    }
    Ok(())
}
