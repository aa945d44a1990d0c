//! Reconstruction engine shared by state tomography, SQPT and DCQD:
//! linear inversion baselines, Poisson maximum likelihood over a T†T
//! parameterization, and parametric bootstrap.

mod bootstrap;
pub mod design;
mod linear;
mod mle;

pub use bootstrap::{bootstrap_uncertainty, BootstrapSummary};
pub use design::{hermitian_basis, process_element, Design};
pub use linear::{design_rank, linear_inversion, linear_inversion_qpt};
pub use mle::{
    fit, mle_qpt, mle_qst, FitOutcome, LikelihoodModel, MleOptions, Parameterization, QstResult, ReconstructionResult,
};
