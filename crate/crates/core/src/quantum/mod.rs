//! States, the Pauli basis, process representations and the Jamiolkowski
//! fidelity.
//!
//! Conventions used throughout the crate:
//! * `|0> = |H>`, `|1> = |V>`, `|D> = (|H>+|V>)/√2`, `|A> = (|H>-|V>)/√2`,
//!   `|L> = (|H>+i|V>)/√2`, `|R> = (|H>-i|V>)/√2`.
//! * χ is indexed in the Pauli order `(I, X, Y, Z)`.
//! * On two-qubit states the first tensor slot is the idler, the second the
//!   signal; single-qubit processes act on the signal.

mod fidelity;
mod pauli;
mod process;
pub mod random;
mod state;

pub use fidelity::{choi_fidelity, jamiolkowski_fidelity};
pub use pauli::{pauli, pauli_basis, pauli_index_label, PAULI_LABELS};
pub use process::{
    apply_chi, apply_chi_on_signal, apply_kraus, check_physicality, chi_to_choi, chi_to_kraus,
    choi_to_chi, kraus_to_chi, ChiMatrix, ChoiState, KrausSet, PhysicalityReport,
};
pub use state::{bell_state_vectors, phi_state, DensityMatrix, Polarization};

/// Hermiticity tolerance (max absolute element deviation).
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues above `-PSD_TOL` count as non-negative.
pub const PSD_TOL: f64 = 1e-9;
/// Tolerance on trace bounds.
pub const TRACE_TOL: f64 = 1e-10;
