//! Full operator-Schmidt spectrum of a random mixed state, and the
//! reconstruction of the normalized operator from it.

use qmaxcorr::maxcorr::{schmidt_spectrum, tilde_operator};
use qmaxcorr::states::random_bipartite;

fn main() -> qmaxcorr::Result<()> {
    let rho = random_bipartite(2, 3, 3, 7)?;
    let spectrum = schmidt_spectrum(&rho)?;
    for (i, c) in spectrum.coefficients.iter().enumerate() {
        println!("mu_{} = {c:.12}", i + 1);
    }
    let tilde = tilde_operator(&rho)?;
    let error = spectrum.reconstruct().distance(tilde.matrix())?;
    println!("reconstruction error {error:.2e}");
    println!("maximal correlation {:.12}", spectrum.maximal_correlation());
    Ok(())
}
