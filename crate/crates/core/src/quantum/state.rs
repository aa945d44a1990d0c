use super::{HERMITIAN_TOL, PSD_TOL, TRACE_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, c, ket, ComplexMatrix, ComplexVector, ONE, ZERO};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

/// Single-photon polarization states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
    D,
    A,
    L,
    R,
}

impl Polarization {
    pub const ALL: [Polarization; 6] = [Self::H, Self::V, Self::D, Self::A, Self::L, Self::R];

    pub fn ket(self) -> ComplexVector {
        let r = FRAC_1_SQRT_2;
        match self {
            Self::H => ket(&[ONE, ZERO]),
            Self::V => ket(&[ZERO, ONE]),
            Self::D => ket(&[c(r, 0.0), c(r, 0.0)]),
            Self::A => ket(&[c(r, 0.0), c(-r, 0.0)]),
            Self::L => ket(&[c(r, 0.0), c(0.0, r)]),
            Self::R => ket(&[c(r, 0.0), c(0.0, -r)]),
        }
    }

    pub fn projector(self) -> ComplexMatrix {
        linalg::projector(&self.ket())
    }

    pub fn orthogonal(self) -> Polarization {
        match self {
            Self::H => Self::V,
            Self::V => Self::H,
            Self::D => Self::A,
            Self::A => Self::D,
            Self::L => Self::R,
            Self::R => Self::L,
        }
    }

    pub fn density(self) -> DensityMatrix {
        DensityMatrix::from_raw(self.projector())
    }
}

/// `(|00> + |11>)/√2`, the reference state of the Choi construction.
pub fn phi_state() -> ComplexVector {
    let r = FRAC_1_SQRT_2;
    ket(&[c(r, 0.0), ZERO, ZERO, c(r, 0.0)])
}

/// Polarization Bell vectors in the order `(Φ+, Φ−, Ψ+, Ψ−)`.
pub fn bell_state_vectors() -> [ComplexVector; 4] {
    let r = c(FRAC_1_SQRT_2, 0.0);
    [
        ket(&[r, ZERO, ZERO, r]),
        ket(&[r, ZERO, ZERO, -r]),
        ket(&[ZERO, r, r, ZERO]),
        ket(&[ZERO, r, -r, ZERO]),
    ]
}

/// Hermitian PSD matrix of dimension 2 or 4 with trace in `(0, 1]`.
///
/// Sub-normalized states are allowed so that loss can be represented.
/// Outputs of trace-decreasing maps may have zero trace; those are built
/// with [`DensityMatrix::from_raw`] and never pass through validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityMatrixRepr", into = "DensityMatrixRepr")]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

#[derive(Serialize, Deserialize)]
struct DensityMatrixRepr {
    kind: String,
    dim: usize,
    #[serde(with = "crate::serde_complex")]
    matrix: ComplexMatrix,
}

impl From<DensityMatrix> for DensityMatrixRepr {
    fn from(d: DensityMatrix) -> Self {
        DensityMatrixRepr { kind: "density_matrix".into(), dim: d.dim(), matrix: d.matrix }
    }
}

impl TryFrom<DensityMatrixRepr> for DensityMatrix {
    type Error = Error;

    fn try_from(r: DensityMatrixRepr) -> Result<Self> {
        if r.kind != "density_matrix" {
            return Err(Error::InvalidData(format!("expected kind `density_matrix`, found `{}`", r.kind)));
        }
        if r.matrix.nrows() != r.dim {
            return Err(Error::dim(r.dim, r.matrix.nrows()));
        }
        DensityMatrix::new(r.matrix)
    }
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n || !(n == 2 || n == 4) {
            return Err(Error::dim("2x2 or 4x4", format!("{}x{}", matrix.nrows(), matrix.ncols())));
        }
        let herm = linalg::hermiticity_deviation(&matrix);
        if herm > HERMITIAN_TOL {
            return Err(Error::NonPhysical {
                what: "density matrix",
                detail: format!("hermiticity deviation {herm:e} exceeds {HERMITIAN_TOL:e}"),
            });
        }
        let lo = linalg::min_eigenvalue(&matrix);
        if lo < -PSD_TOL {
            return Err(Error::NonPhysical {
                what: "density matrix",
                detail: format!("eigenvalue {lo:e} below -{PSD_TOL:e}"),
            });
        }
        let tr = linalg::real_trace(&matrix);
        if !(tr > 0.0 && tr <= 1.0 + TRACE_TOL) {
            return Err(Error::NonPhysical {
                what: "density matrix",
                detail: format!("trace {tr} outside (0, 1]"),
            });
        }
        Ok(DensityMatrix { matrix })
    }

    /// Wraps a matrix without validation.
    pub fn from_raw(matrix: ComplexMatrix) -> Self {
        DensityMatrix { matrix }
    }

    pub fn pure(v: &ComplexVector) -> Self {
        DensityMatrix { matrix: linalg::projector(v) }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix { matrix: linalg::identity(dim).scale(1.0 / dim as f64) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        linalg::real_trace(&self.matrix)
    }

    /// `Tr(Π ρ)` for a measurement element `Π`.
    pub fn expectation(&self, op: &ComplexMatrix) -> f64 {
        linalg::trace_product(op, &self.matrix).re
    }

    pub fn normalized(&self) -> Result<Self> {
        let t = self.trace();
        if t <= 0.0 {
            return Err(Error::NonPhysical { what: "density matrix", detail: "zero trace".into() });
        }
        Ok(DensityMatrix { matrix: self.matrix.unscale(t) })
    }

    pub fn fidelity(&self, other: &DensityMatrix) -> f64 {
        linalg::root_fidelity(&self.matrix, &other.matrix)
    }

    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        linalg::trace_distance(&self.matrix, &other.matrix)
    }
}
