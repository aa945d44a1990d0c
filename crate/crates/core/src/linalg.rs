//! Small dense complex linear algebra shared by every module.
//!
//! Matrices here are at most 16x16, so everything is dense and allocation is
//! not a concern. Hermitian problems go through `SymmetricEigen`, which
//! handles complex Hermitian input.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

/// Dense complex matrix used for every operator in the crate.
pub type ComplexMatrix = DMatrix<Complex64>;
/// Dense complex column vector (kets).
pub type ComplexVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

pub fn ket(amps: &[Complex64]) -> ComplexVector {
    ComplexVector::from_column_slice(amps)
}

/// `|v><v|`
pub fn projector(v: &ComplexVector) -> ComplexMatrix {
    v * v.adjoint()
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn kron_ket(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    a.kronecker(b)
}

/// `Tr(A B)` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Largest absolute deviation between `m` and its adjoint.
pub fn hermiticity_deviation(m: &ComplexMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
///
/// Only the Hermitian part of the input is used. Ties keep the order the
/// solver produced them in (stable sort).
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, aligned with `values`.
    pub vectors: ComplexMatrix,
}

pub fn eigh(m: &ComplexMatrix) -> HermitianEigen {
    let h = hermitian_part(m);
    let eig = SymmetricEigen::new(h);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    HermitianEigen { values, vectors }
}

pub fn eigvalsh(m: &ComplexMatrix) -> Vec<f64> {
    eigh(m).values
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    eigvalsh(m).into_iter().fold(f64::INFINITY, f64::min)
}

/// Rebuild `V diag(f(λ)) V†`.
pub fn spectral_map(eig: &HermitianEigen, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let n = eig.values.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &lam) in eig.values.iter().enumerate() {
        let w = f(lam);
        if w == 0.0 {
            continue;
        }
        let v = eig.vectors.column(k);
        out += (v * v.adjoint()).scale(w);
    }
    out
}

/// Principal square root of a PSD matrix; negative eigenvalues are clipped.
pub fn psd_sqrt(m: &ComplexMatrix) -> ComplexMatrix {
    spectral_map(&eigh(m), |x| x.max(0.0).sqrt())
}

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues set to zero).
pub fn psd_projection(m: &ComplexMatrix) -> ComplexMatrix {
    spectral_map(&eigh(m), |x| x.max(0.0))
}

/// Operator-norm distance from `m` to its PSD projection.
pub fn psd_shift(m: &ComplexMatrix) -> f64 {
    let lo = min_eigenvalue(m);
    (-lo).max(0.0)
}

/// Uhlmann root fidelity `Tr sqrt(sqrt(a) b sqrt(a))` for PSD inputs.
pub fn root_fidelity(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let sa = psd_sqrt(a);
    let inner = &sa * b * &sa;
    eigvalsh(&inner).into_iter().map(|x| x.max(0.0).sqrt()).sum()
}

/// Trace distance `½‖a − b‖₁` for Hermitian inputs.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    0.5 * eigvalsh(&(a - b)).into_iter().map(f64::abs).sum::<f64>()
}

pub fn real_trace(m: &ComplexMatrix) -> f64 {
    m.trace().re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigh_sorts_descending_and_reconstructs() {
        let m = ComplexMatrix::from_row_slice(
            3,
            3,
            &[c(2.0, 0.0), c(0.5, 0.5), ZERO, c(0.5, -0.5), c(1.0, 0.0), c(0.0, 0.3), ZERO, c(0.0, -0.3), c(-1.0, 0.0)],
        );
        let e = eigh(&m);
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        let rebuilt = spectral_map(&e, |x| x);
        assert!(max_abs_diff(&rebuilt, &m) < 1e-13);
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let v = ket(&[c(0.6, 0.0), c(0.0, 0.8)]);
        let m = projector(&v).scale(0.7) + identity(2).scale(0.15);
        let s = psd_sqrt(&m);
        assert!(max_abs_diff(&(&s * &s), &m) < 1e-14);
    }

    #[test]
    fn fidelity_of_pure_and_mixed_state() {
        // F(|0><0|, I/2) = sqrt(1/2)
        let p = projector(&ket(&[ONE, ZERO]));
        let mixed = identity(2).scale(0.5);
        assert!((root_fidelity(&p, &mixed) - 0.5f64.sqrt()).abs() < 1e-14);
        assert!((root_fidelity(&p, &p) - 1.0).abs() < 1e-14);
    }
}
