//! Local channels never increase any Schmidt coefficient.

use qmaxcorr::channels::{apply_local, random_channel};
use qmaxcorr::harness::run_dpi_suite;
use qmaxcorr::maxcorr::schmidt_spectrum;
use qmaxcorr::states::random_bipartite;
use qmaxcorr::Side;

fn main() -> qmaxcorr::Result<()> {
    let rho = random_bipartite(2, 2, 4, 3)?;
    let channel = random_channel(2, 2, 2, 11)?;
    let out = apply_local(&channel, &rho, Side::A)?;
    let before = schmidt_spectrum(&rho)?.coefficients;
    let after = schmidt_spectrum(&out)?.coefficients;
    for (i, (b, a)) in before.iter().zip(&after).enumerate() {
        println!("mu_{}: {b:.6} -> {a:.6}", i + 1);
    }

    let report = run_dpi_suite(50, (2, 3), 42);
    println!(
        "suite: {} trials, {} failures, max violation {:.2e}",
        report.trials,
        report.failures.len(),
        report.max_violation
    );
    Ok(())
}
