//! Kraus channels, their adjoints, and two-outcome measurements on a state.

use qmaxcorr::channels::{apply_local, measure_binary, random_channel, BinaryMeasurement, QuantumChannel};
use qmaxcorr::states::bell_state;
use qmaxcorr::Side;

fn main() -> qmaxcorr::Result<()> {
    let depolarizing = QuantumChannel::qubit_depolarizing(0.5)?;
    let noisy = apply_local(&depolarizing, &bell_state(), Side::B)?;
    println!("trace-preservation error {:.1e}", depolarizing.trace_preservation_error());
    println!("purity after depolarizing one half: {:.4}", noisy.purity());

    let z0 = BinaryMeasurement::basis_projector(2, 0);
    let p = measure_binary(&noisy, &z0, &z0)?;
    println!("outcome distribution {:?}", p.to_rows());

    let composed = random_channel(2, 3, 2, 4)?.then(&random_channel(3, 2, 2, 5)?)?;
    println!("composed channel: {} Kraus operators, {} -> {}", composed.kraus().len(), composed.dim_in(), composed.dim_out());
    Ok(())
}
