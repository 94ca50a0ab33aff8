//! Copies do not add maximal correlation, while mutual information adds up.

use qmaxcorr::maximal_correlation;
use qmaxcorr::states::{mutual_information, random_bipartite, tensor_power, tensor_states};

fn main() -> qmaxcorr::Result<()> {
    let rho = random_bipartite(2, 2, 3, 5)?;
    let sigma = random_bipartite(2, 2, 4, 6)?;
    let pair = tensor_states(&rho, &sigma);
    println!(
        "mu(rho) = {:.6}, mu(sigma) = {:.6}, mu(rho x sigma) = {:.6}",
        maximal_correlation(&rho)?,
        maximal_correlation(&sigma)?,
        maximal_correlation(&pair)?
    );
    for n in 1..=2 {
        let copies = tensor_power(&rho, n);
        println!(
            "{n} copies: mu = {:.6}, MI = {:.6} bits",
            maximal_correlation(&copies)?,
            mutual_information(&copies)
        );
    }
    Ok(())
}
