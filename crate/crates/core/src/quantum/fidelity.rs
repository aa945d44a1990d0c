use super::process::{chi_to_choi, ChiMatrix, ChoiState};
use crate::error::{Error, Result};
use crate::linalg;

/// Root fidelity between two Choi states after normalizing each to unit
/// trace, so trace-decreasing processes are comparable.
pub fn choi_fidelity(a: &ChoiState, b: &ChoiState) -> Result<f64> {
    let ta = a.trace();
    let tb = b.trace();
    if ta <= 1e-15 || tb <= 1e-15 {
        return Err(Error::UndefinedFidelity);
    }
    let f = linalg::root_fidelity(&a.matrix().unscale(ta), &b.matrix().unscale(tb));
    Ok(f.clamp(0.0, 1.0))
}

/// Jamiolkowski fidelity `F_J = Tr sqrt(sqrt(C_a) C_b sqrt(C_a))` between
/// the normalized Choi states of two processes.
pub fn jamiolkowski_fidelity(a: &ChiMatrix, b: &ChiMatrix) -> Result<f64> {
    choi_fidelity(&chi_to_choi(a), &chi_to_choi(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, projector};
    use crate::quantum::phi_state;

    fn depolarizing(p: f64) -> ChiMatrix {
        ChiMatrix::from_diagonal([1.0 - 0.75 * p, p / 4.0, p / 4.0, p / 4.0])
    }

    #[test]
    fn identity_with_itself() {
        let f = jamiolkowski_fidelity(&ChiMatrix::identity(), &ChiMatrix::identity()).unwrap();
        assert!((f - 1.0).abs() < 1e-10);
    }

    #[test]
    fn orthogonal_choi_states() {
        let z = ChiMatrix::from_diagonal([0.0, 0.0, 0.0, 1.0]);
        assert!(jamiolkowski_fidelity(&ChiMatrix::identity(), &z).unwrap() < 1e-7);
    }

    #[test]
    fn identity_vs_depolarizing_closed_form() {
        // pure vs mixed: F = sqrt(<Φ|σ|Φ>) with σ = (1-p)ρ_Φ + p I/4
        let phi = projector(&phi_state());
        for p in [0.0, 0.1, 0.5, 0.9, 1.0] {
            let sigma = phi.scale(1.0 - p) + identity(4).scale(p / 4.0);
            let overlap = crate::linalg::trace_product(&phi, &sigma).re;
            let expected = overlap.sqrt();
            let f = jamiolkowski_fidelity(&ChiMatrix::identity(), &depolarizing(p)).unwrap();
            assert!((f - expected).abs() < 1e-7, "p={p}: {f} vs {expected}");
        }
        let f = jamiolkowski_fidelity(&ChiMatrix::identity(), &depolarizing(1.0)).unwrap();
        assert!((f - 0.5).abs() < 1e-10);
    }

    #[test]
    fn blocking_process_is_undefined() {
        let zero = ChiMatrix::from_diagonal([0.0; 4]);
        assert!(matches!(jamiolkowski_fidelity(&zero, &ChiMatrix::identity()), Err(Error::UndefinedFidelity)));
    }
}
