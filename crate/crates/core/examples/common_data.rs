//! Local measurements producing a shared random bit from a state with
//! maximal correlation one.

use qmaxcorr::classical::random_block_distribution;
use qmaxcorr::maxcorr::{common_data_witness, DEFAULT_WITNESS_TOL};
use qmaxcorr::states::{bell_state, embed_classical, isotropic_state};

fn main() -> qmaxcorr::Result<()> {
    let (p, partition) = random_block_distribution(3, 3, 9);
    let states = [
        ("bell", bell_state()),
        ("block distribution", embed_classical(&p)),
        ("isotropic p = 0.9", isotropic_state(0.9)?),
    ];
    println!("block partition {partition:?}");
    for (name, rho) in states {
        match common_data_witness(&rho, DEFAULT_WITNESS_TOL)? {
            Some(w) => println!(
                "{name}: shared bit with distribution {:?}, cross terms {:.1e}",
                w.distribution.to_rows(),
                w.cross_terms()
            ),
            None => println!("{name}: absent"),
        }
    }
    Ok(())
}
