//! Maximal correlation of bipartite quantum states and classical
//! distributions.
//!
//! The maximal correlation `μ(ρ)` is the second operator-Schmidt coefficient
//! of the marginal-normalized state; it never increases under local channels,
//! does not grow under tensor products, vanishes exactly on product states and
//! reaches 1 exactly when the two parties can extract a shared random bit.
//!
//! - [`states`]: density matrices, partial traces, standard families.
//! - [`channels`]: Kraus-form channels and binary measurements.
//! - [`maxcorr`]: the Schmidt spectrum, optimizers and common-data witnesses.
//! - [`classical`]: joint distributions and their Hirschfeld–Gebelein–Rényi
//!   correlation.
//! - [`harness`]: seeded property suites and an SVD-free variational oracle.
//! - [`io`] and [`cli`]: file formats and the `qmaxcorr` command.
//!
//! ```
//! use qmaxcorr::{maximal_correlation, states::isotropic_state};
//!
//! let rho = isotropic_state(0.7).unwrap();
//! assert!((maximal_correlation(&rho).unwrap() - 0.7).abs() < 1e-10);
//! ```

pub mod channels;
pub mod classical;
pub mod cli;
pub mod error;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod maxcorr;
pub mod rng;
pub mod states;

pub use channels::{apply_local, BinaryMeasurement, QuantumChannel};
pub use classical::{classical_maximal_correlation, JointDistribution};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use maxcorr::{maximal_correlation, schmidt_spectrum, SchmidtSpectrum};
pub use states::{BipartiteState, DensityMatrix, Side};
