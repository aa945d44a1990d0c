use crate::linalg::{c, ComplexMatrix, ONE, ZERO};

pub const PAULI_LABELS: [&str; 4] = ["I", "X", "Y", "Z"];

pub fn pauli_index_label(m: usize) -> &'static str {
    PAULI_LABELS[m]
}

/// `σ_m` for `m` in `0..4`, ordered `(I, X, Y, Z)`.
pub fn pauli(m: usize) -> ComplexMatrix {
    let e = match m {
        0 => [ONE, ZERO, ZERO, ONE],
        1 => [ZERO, ONE, ONE, ZERO],
        2 => [ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO],
        3 => [ONE, ZERO, ZERO, -ONE],
        _ => panic!("Pauli index {m} out of range"),
    };
    ComplexMatrix::from_row_slice(2, 2, &e)
}

pub fn pauli_basis() -> [ComplexMatrix; 4] {
    [pauli(0), pauli(1), pauli(2), pauli(3)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, trace_product};

    #[test]
    fn orthogonality_is_exact() {
        let basis = pauli_basis();
        for m in 0..4 {
            for n in 0..4 {
                let t = trace_product(&basis[m], &basis[n]);
                let expected = if m == n { 2.0 } else { 0.0 };
                assert_eq!(t.re, expected);
                assert_eq!(t.im, 0.0);
            }
        }
    }

    #[test]
    fn hermitian_and_unitary() {
        for s in pauli_basis() {
            assert_eq!(s.adjoint(), s);
            assert_eq!(&s * &s, identity(2));
        }
    }
}
