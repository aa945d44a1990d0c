//! Simulation and estimation toolkit for single-qubit process tomography.
//!
//! Two schemes are modeled: standard process tomography (SQPT, 18 local
//! configurations) and direct characterization of quantum dynamics (DCQD,
//! 4 entangled probe states read out by a hyperentanglement-assisted Bell
//! analyzer). The crate builds channels, simulates Poisson photon counts
//! with optional preparation and measurement errors, reconstructs χ by
//! constrained maximum likelihood and scores results with the Jamiolkowski
//! fidelity.

pub mod channels;
pub mod dcqd;
pub mod error;
pub mod estimation;
pub mod io;
pub mod labsim;
pub mod linalg;
pub mod quantum;
pub mod report;
pub mod rng;
pub mod serde_complex;
pub mod sqpt;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector};
pub use quantum::{
    apply_chi, apply_kraus, check_physicality, chi_to_choi, chi_to_kraus, choi_to_chi, jamiolkowski_fidelity,
    kraus_to_chi, ChiMatrix, ChoiState, DensityMatrix, KrausSet, PhysicalityReport, Polarization,
};
