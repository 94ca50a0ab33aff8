//! Pure states are either product (mu = 0) or maximally correlated
//! (mu = 1); slightly perturbed maximally entangled states stay close to 1.

use qmaxcorr::harness::{perturbed_maximally_entangled, PERTURBATION_GRID};
use qmaxcorr::maxcorr::pure_state_mu;
use qmaxcorr::maximal_correlation;
use qmaxcorr::C64;

fn main() -> qmaxcorr::Result<()> {
    let s = 0.5f64.sqrt();
    let product = [C64::new(s, 0.0), C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    let weakly_entangled = [C64::new(0.99f64.sqrt(), 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.1, 0.0)];
    println!("product pure state: mu = {}", pure_state_mu(&product, 2, 2)?);
    println!("weakly entangled:   mu = {}", pure_state_mu(&weakly_entangled, 2, 2)?);

    for eps in PERTURBATION_GRID {
        let rho = perturbed_maximally_entangled(3, eps, 1)?;
        println!("eps = {eps}: mu = {:.6} >= {:.2}", maximal_correlation(&rho)?, 1.0 - 9.0 * eps);
    }
    Ok(())
}
