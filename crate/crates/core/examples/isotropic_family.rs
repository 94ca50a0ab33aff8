//! Maximal correlation along the isotropic family `p·Φ⁺ + (1 − p)·I/4`.

use qmaxcorr::maximal_correlation;
use qmaxcorr::states::{isotropic_state, mutual_information};

fn main() -> qmaxcorr::Result<()> {
    println!("{:>5} {:>10} {:>10}", "p", "mu", "MI (bits)");
    for step in 0..=10 {
        let p = step as f64 / 10.0;
        let rho = isotropic_state(p)?;
        println!("{p:>5.1} {:>10.6} {:>10.6}", maximal_correlation(&rho)?, mutual_information(&rho));
    }
    Ok(())
}
