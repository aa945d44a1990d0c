//! Seeded random channels and states, used by property tests and benches.

use super::process::{kraus_to_chi, ChiMatrix, KrausSet};
use super::state::DensityMatrix;
use crate::linalg::{self, ComplexMatrix};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

/// Random trace-preserving Kraus set with `rank` operators, drawn from a
/// Gaussian Stinespring isometry.
pub fn random_kraus<R: Rng + ?Sized>(rng: &mut R, rank: usize) -> KrausSet {
    let g = ginibre(rng, 2 * rank, 2);
    let gram = g.adjoint() * &g;
    let inv_sqrt = linalg::spectral_map(&linalg::eigh(&gram), |x| 1.0 / x.sqrt());
    let iso = g * inv_sqrt;
    let ops = (0..rank).map(|k| iso.rows(2 * k, 2).into_owned()).collect();
    KrausSet::from_raw(ops).expect("well-formed Kraus set")
}

/// Random physical trace-preserving χ of random Kraus rank 1..=4.
pub fn random_chi<R: Rng + ?Sized>(rng: &mut R) -> ChiMatrix {
    let rank = rng.random_range(1..=4);
    kraus_to_chi(&random_kraus(rng, rank)).expect("qubit Kraus set")
}

/// Random unit-trace state of dimension `dim` (Hilbert-Schmidt measure).
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = ginibre(rng, dim, dim);
    let m = &g * g.adjoint();
    let t = linalg::real_trace(&m);
    DensityMatrix::from_raw(m.unscale(t))
}
