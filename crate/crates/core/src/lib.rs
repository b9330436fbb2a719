//! Classical, linear-time quantum Fourier transform on computational basis
//! states and on the product states whose transform stays separable, plus a
//! dense oracle (direct DFT, FFT and gate-level circuit simulation) to check
//! it against.
//!
//! - [`numerics`]: exact dyadic phases and unit-circle square roots.
//! - [`states`]: qubits, product states, dense vectors, bit strings.
//! - [`oracle`]: exponential-cost ground truth and the separability test.
//! - [`dequant`]: the O(n) transforms and the separability predicate.
//! - [`cli`]: JSON state documents and the `dequant` command.

pub mod cli;
pub mod dequant;
pub mod numerics;
pub mod oracle;
pub mod states;

pub use dequant::{
    analyze_qft_separability, qft_basis, qft_basis_into, qft_separable, DequantError,
    SeparabilityReport,
};
pub use numerics::{Complex, DyadicPhase};
pub use oracle::GateTally;
pub use states::{BitString, DenseState, ProductState, Qubit, StateError};
