//! Linear measurement models. Every scheme in the crate maps its unknown
//! (χ for processes, ρ for two-qubit states) linearly onto outcome
//! probabilities `p_i = Tr(G_i X)`, with `G_i` Hermitian.

use crate::linalg::{c, identity, kron, trace_product, ComplexMatrix, ONE};
use crate::quantum::pauli;
use std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    rows: Vec<ComplexMatrix>,
}

impl Design {
    pub fn new(rows: Vec<ComplexMatrix>) -> Self {
        Design { rows }
    }

    pub fn rows(&self) -> &[ComplexMatrix] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Dimension of the unknown matrix.
    pub fn dim(&self) -> usize {
        self.rows.first().map_or(0, |r| r.nrows())
    }

    pub fn probabilities(&self, x: &ComplexMatrix) -> Vec<f64> {
        self.rows.iter().map(|g| trace_product(g, x).re).collect()
    }
}

/// `G[n, m] = Tr[E σ̃_m ρ σ̃_n]`, so that `Tr[E ε(ρ)] = Tr(χ G)`.
///
/// For a two-qubit `input` the Paulis act on the signal (second slot).
pub fn process_element(input: &ComplexMatrix, effect: &ComplexMatrix) -> ComplexMatrix {
    let d = input.nrows();
    let lift = |m: usize| if d == 2 { pauli(m) } else { kron(&identity(d / 2), &pauli(m)) };
    let lifted: Vec<ComplexMatrix> = (0..4).map(lift).collect();
    let mut g = ComplexMatrix::zeros(4, 4);
    for m in 0..4 {
        let left = effect * &lifted[m] * input;
        for n in 0..4 {
            g[(n, m)] = trace_product(&left, &lifted[n]);
        }
    }
    g
}

/// Elements `Q_j` with `Tr(χ Q_j) = ½ Tr(σ_j Σ χ_mn σ_n σ_m)`; trace
/// preservation is `Tr(χ Q_0) = 1`, `Tr(χ Q_j) = 0` for `j = 1..3`.
pub fn trace_preservation_elements() -> [ComplexMatrix; 4] {
    std::array::from_fn(|j| {
        let sj = pauli(j);
        ComplexMatrix::from_fn(4, 4, |n, m| trace_product(&sj, &(pauli(n) * pauli(m))) * 0.5)
    })
}

/// Basis of `d×d` Hermitian matrices, orthonormal under `Tr(A B)`.
pub fn hermitian_basis(d: usize) -> Vec<ComplexMatrix> {
    let mut basis = Vec::with_capacity(d * d);
    for k in 0..d {
        let mut e = ComplexMatrix::zeros(d, d);
        e[(k, k)] = ONE;
        basis.push(e);
    }
    for j in 0..d {
        for k in (j + 1)..d {
            let mut sym = ComplexMatrix::zeros(d, d);
            sym[(j, k)] = c(FRAC_1_SQRT_2, 0.0);
            sym[(k, j)] = c(FRAC_1_SQRT_2, 0.0);
            basis.push(sym);
            let mut anti = ComplexMatrix::zeros(d, d);
            anti[(j, k)] = c(0.0, FRAC_1_SQRT_2);
            anti[(k, j)] = c(0.0, -FRAC_1_SQRT_2);
            basis.push(anti);
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermiticity_deviation, max_abs_diff};
    use crate::quantum::random::random_chi;
    use rand::SeedableRng;

    #[test]
    fn hermitian_basis_is_orthonormal() {
        let b = hermitian_basis(4);
        assert_eq!(b.len(), 16);
        for (i, x) in b.iter().enumerate() {
            assert!(hermiticity_deviation(x) == 0.0);
            for (j, y) in b.iter().enumerate() {
                let t = trace_product(x, y);
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((t.re - expected).abs() < 1e-15 && t.im.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn trace_preservation_elements_reproduce_kraus_sum() {
        let q = trace_preservation_elements();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let chi = random_chi(&mut rng);
            let mut s = ComplexMatrix::zeros(2, 2);
            for (j, qj) in q.iter().enumerate() {
                s += pauli(j) * trace_product(chi.matrix(), qj);
            }
            assert!(max_abs_diff(&s, &chi.kraus_sum()) < 1e-14);
            assert!(hermiticity_deviation(&q[0]) < 1e-15);
        }
    }
}
