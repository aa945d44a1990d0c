use super::pauli::pauli;
use super::state::{phi_state, DensityMatrix};
use super::{HERMITIAN_TOL, PSD_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, identity, kron, ComplexMatrix, ZERO};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Process matrix in the Pauli basis: `ε(ρ) = Σ χ_mn σ_m ρ σ_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChiRepr", into = "ChiRepr")]
pub struct ChiMatrix {
    matrix: ComplexMatrix,
}

#[derive(Serialize, Deserialize)]
struct ChiRepr {
    kind: String,
    dim: usize,
    #[serde(with = "crate::serde_complex")]
    matrix: ComplexMatrix,
}

impl From<ChiMatrix> for ChiRepr {
    fn from(c: ChiMatrix) -> Self {
        ChiRepr { kind: "chi".into(), dim: 4, matrix: c.matrix }
    }
}

impl TryFrom<ChiRepr> for ChiMatrix {
    type Error = Error;

    /// Only the shape is checked here: unconstrained estimates (linear
    /// inversion) are allowed to be stored and reloaded.
    fn try_from(r: ChiRepr) -> Result<Self> {
        if r.kind != "chi" {
            return Err(Error::InvalidData(format!("expected kind `chi`, found `{}`", r.kind)));
        }
        if r.dim != 4 {
            return Err(Error::dim(4, r.dim));
        }
        ChiMatrix::from_raw(r.matrix)
    }
}

impl ChiMatrix {
    /// Validated constructor; rejects anything failing [`check_physicality`].
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let chi = Self::from_raw(matrix)?;
        chi.ensure_physical()?;
        Ok(chi)
    }

    /// Shape-checked constructor with no physicality requirement.
    pub fn from_raw(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.nrows() != 4 || matrix.ncols() != 4 {
            return Err(Error::dim("4x4", format!("{}x{}", matrix.nrows(), matrix.ncols())));
        }
        Ok(ChiMatrix { matrix })
    }

    pub fn from_diagonal(d: [f64; 4]) -> Self {
        let mut m = ComplexMatrix::zeros(4, 4);
        for (k, v) in d.iter().enumerate() {
            m[(k, k)] = Complex64::new(*v, 0.0);
        }
        ChiMatrix { matrix: m }
    }

    pub fn identity() -> Self {
        Self::from_diagonal([1.0, 0.0, 0.0, 0.0])
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.matrix[(m, n)]
    }

    pub fn trace(&self) -> f64 {
        linalg::real_trace(&self.matrix)
    }

    pub fn diagonal(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|k| self.matrix[(k, k)].re)
    }

    /// `Σ χ_mn σ_n σ_m`, which equals `Σ_k K_k† K_k` for any Kraus form.
    pub fn kraus_sum(&self) -> ComplexMatrix {
        let mut s = ComplexMatrix::zeros(2, 2);
        for m in 0..4 {
            for n in 0..4 {
                let w = self.matrix[(m, n)];
                if w != ZERO {
                    s += pauli(n) * pauli(m) * w;
                }
            }
        }
        s
    }

    /// Convex (or any real-weighted) combination.
    pub fn combine(parts: &[(f64, &ChiMatrix)]) -> ChiMatrix {
        let mut m = ComplexMatrix::zeros(4, 4);
        for (w, chi) in parts {
            m += chi.matrix.scale(*w);
        }
        ChiMatrix { matrix: m }
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        linalg::max_abs_diff(&self.kraus_sum(), &identity(2)) <= tol
    }

    pub fn physicality(&self) -> PhysicalityReport {
        check_physicality(self)
    }

    pub fn ensure_physical(&self) -> Result<()> {
        let report = check_physicality(self);
        if report.physical {
            Ok(())
        } else {
            Err(Error::NonPhysical { what: "chi matrix", detail: report.violation() })
        }
    }

    pub fn max_abs_diff(&self, other: &ChiMatrix) -> f64 {
        linalg::max_abs_diff(&self.matrix, &other.matrix)
    }
}

/// Operator-sum form `ε(ρ) = Σ K ρ K†`. Operators may be 2x2 (single
/// qubit) or 4x4 (error maps on the photon pair).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrausSet {
    #[serde(with = "crate::serde_complex::vec")]
    operators: Vec<ComplexMatrix>,
}

impl KrausSet {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let set = Self::from_raw(operators)?;
        let lo = linalg::min_eigenvalue(&(identity(set.dim()) - set.completeness()));
        if lo < -PSD_TOL {
            return Err(Error::NonPhysical {
                what: "Kraus set",
                detail: format!("sum K†K exceeds identity (eigenvalue of I - sum = {lo:e})"),
            });
        }
        Ok(set)
    }

    /// Shape-checked constructor without the completeness bound.
    pub fn from_raw(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = operators.first() else {
            return Err(Error::InvalidData("empty Kraus set".into()));
        };
        let d = first.nrows();
        for k in &operators {
            if k.nrows() != d || k.ncols() != d {
                return Err(Error::dim(format!("{d}x{d}"), format!("{}x{}", k.nrows(), k.ncols())));
            }
        }
        Ok(KrausSet { operators })
    }

    pub fn identity(dim: usize) -> Self {
        KrausSet { operators: vec![identity(dim)] }
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn dim(&self) -> usize {
        self.operators[0].nrows()
    }

    /// `Σ K† K`
    pub fn completeness(&self) -> ComplexMatrix {
        self.operators.iter().map(|k| k.adjoint() * k).fold(ComplexMatrix::zeros(self.dim(), self.dim()), |a, b| a + b)
    }

    pub fn apply_matrix(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        self.operators.iter().map(|k| k * rho * k.adjoint()).fold(ComplexMatrix::zeros(rho.nrows(), rho.nrows()), |a, b| a + b)
    }

    /// Heisenberg picture `Σ K† M K`.
    pub fn apply_adjoint(&self, op: &ComplexMatrix) -> ComplexMatrix {
        self.operators.iter().map(|k| k.adjoint() * op * k).fold(ComplexMatrix::zeros(op.nrows(), op.nrows()), |a, b| a + b)
    }

    /// `self` after `first`: operators `B_j A_i`.
    pub fn compose_after(&self, first: &KrausSet) -> KrausSet {
        let mut ops = Vec::with_capacity(self.operators.len() * first.operators.len());
        for b in &self.operators {
            for a in &first.operators {
                ops.push(b * a);
            }
        }
        KrausSet { operators: ops }
    }

    /// Tensor product `self ⊗ other` of two maps on separate systems.
    pub fn tensor(&self, other: &KrausSet) -> KrausSet {
        let mut ops = Vec::with_capacity(self.operators.len() * other.operators.len());
        for a in &self.operators {
            for b in &other.operators {
                ops.push(kron(a, b));
            }
        }
        KrausSet { operators: ops }
    }

    /// Weighted union `√w_i K` for mixtures.
    pub fn mixture(parts: &[(f64, &KrausSet)]) -> Result<KrausSet> {
        let mut ops = Vec::new();
        for (w, set) in parts {
            if *w <= 0.0 {
                continue;
            }
            ops.extend(set.operators.iter().map(|k| k.scale(w.sqrt())));
        }
        KrausSet::from_raw(ops)
    }
}

/// `(I ⊗ ε)(|Φ><Φ|)` with `|Φ> = (|00> + |11>)/√2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiState {
    state: DensityMatrix,
}

impl ChoiState {
    pub fn new(state: DensityMatrix) -> Result<Self> {
        if state.dim() != 4 {
            return Err(Error::dim(4, state.dim()));
        }
        Ok(ChoiState { state })
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.state.matrix()
    }

    pub fn trace(&self) -> f64 {
        self.state.trace()
    }
}

/// Columns `(I ⊗ σ_m)|Φ>`; an orthonormal basis, so Choi = V χ V†.
fn choi_basis() -> ComplexMatrix {
    let phi = phi_state();
    let mut v = ComplexMatrix::zeros(4, 4);
    for m in 0..4 {
        let col = kron(&identity(2), &pauli(m)) * &phi;
        v.set_column(m, &col);
    }
    v
}

fn check_dim(rho: &DensityMatrix, d: usize) -> Result<()> {
    if rho.dim() != d {
        return Err(Error::dim(d, rho.dim()));
    }
    Ok(())
}

/// `Σ χ_mn σ_m ρ σ_n`. Errors on a non-physical χ or a non-qubit state.
pub fn apply_chi(chi: &ChiMatrix, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_dim(rho, 2)?;
    chi.ensure_physical()?;
    Ok(DensityMatrix::from_raw(apply_chi_matrix(chi, rho.matrix())))
}

pub(crate) fn apply_chi_matrix(chi: &ChiMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    let d = rho.nrows();
    let lift = |m: usize| if d == 2 { pauli(m) } else { kron(&identity(d / 2), &pauli(m)) };
    let left: Vec<ComplexMatrix> = (0..4).map(|m| lift(m) * rho).collect();
    let mut out = ComplexMatrix::zeros(d, d);
    for (m, lm) in left.iter().enumerate() {
        for n in 0..4 {
            let w = chi.matrix[(m, n)];
            if w != ZERO {
                out += lm * lift(n) * w;
            }
        }
    }
    out
}

/// `(I ⊗ ε)(ρ)` on a two-qubit state; the process acts on the signal
/// (second slot).
pub fn apply_chi_on_signal(chi: &ChiMatrix, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_dim(rho, 4)?;
    chi.ensure_physical()?;
    Ok(DensityMatrix::from_raw(apply_chi_matrix(chi, rho.matrix())))
}

/// `Σ K ρ K†`.
pub fn apply_kraus(k: &KrausSet, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_dim(rho, k.dim())?;
    Ok(DensityMatrix::from_raw(k.apply_matrix(rho.matrix())))
}

pub fn chi_to_choi(chi: &ChiMatrix) -> ChoiState {
    let v = choi_basis();
    let m = &v * chi.matrix() * v.adjoint();
    ChoiState { state: DensityMatrix::from_raw(m) }
}

pub fn choi_to_chi(choi: &ChoiState) -> ChiMatrix {
    let v = choi_basis();
    ChiMatrix { matrix: v.adjoint() * choi.matrix() * &v }
}

/// Kraus operators from the eigendecomposition of χ:
/// `K_k = √λ_k Σ_m u_k[m] σ_m`. Eigenvalues below 1e-12 are dropped.
pub fn chi_to_kraus(chi: &ChiMatrix) -> Result<KrausSet> {
    let eig = linalg::eigh(chi.matrix());
    if let Some(&lo) = eig.values.last() {
        if lo < -PSD_TOL {
            return Err(Error::NonPhysical { what: "chi matrix", detail: format!("negative eigenvalue {lo:e}") });
        }
    }
    let mut ops = Vec::new();
    for (k, &lam) in eig.values.iter().enumerate() {
        if lam < 1e-12 {
            continue;
        }
        let s = lam.sqrt();
        let mut op = ComplexMatrix::zeros(2, 2);
        for m in 0..4 {
            op += pauli(m) * (eig.vectors[(m, k)] * s);
        }
        ops.push(op);
    }
    if ops.is_empty() {
        ops.push(ComplexMatrix::zeros(2, 2));
    }
    KrausSet::from_raw(ops)
}

/// Expand each operator as `K = Σ c_m σ_m` with `c_m = Tr(σ_m K)/2`, then
/// `χ_mn = Σ_k c_k[m] conj(c_k[n])`.
pub fn kraus_to_chi(k: &KrausSet) -> Result<ChiMatrix> {
    if k.dim() != 2 {
        return Err(Error::dim(2, k.dim()));
    }
    let mut m = ComplexMatrix::zeros(4, 4);
    for op in k.operators() {
        let coeffs: Vec<Complex64> = (0..4).map(|j| linalg::trace_product(&pauli(j), op) * 0.5).collect();
        for a in 0..4 {
            for b in 0..4 {
                m[(a, b)] += coeffs[a] * coeffs[b].conj();
            }
        }
    }
    Ok(ChiMatrix { matrix: m })
}

/// Diagnostics against the χ invariants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalityReport {
    pub hermiticity_deviation: f64,
    pub min_eigenvalue: f64,
    /// Smallest eigenvalue of `I − Σ χ_mn σ_n σ_m`.
    pub trace_floor: f64,
    /// Largest eigenvalue magnitude of `Σ χ_mn σ_n σ_m − I`.
    pub trace_preservation_error: f64,
    pub hermitian: bool,
    pub positive: bool,
    pub trace_non_increasing: bool,
    pub trace_preserving: bool,
    pub physical: bool,
}

impl PhysicalityReport {
    pub fn violation(&self) -> String {
        let mut parts = Vec::new();
        if !self.hermitian {
            parts.push(format!("hermiticity deviation {:e} > {HERMITIAN_TOL:e}", self.hermiticity_deviation));
        }
        if !self.positive {
            parts.push(format!("negative eigenvalue {} < -{PSD_TOL:e}", self.min_eigenvalue));
        }
        if !self.trace_non_increasing {
            parts.push(format!("trace increasing: eigenvalue of I - sum = {} < -{PSD_TOL:e}", self.trace_floor));
        }
        parts.join("; ")
    }
}

impl fmt::Display for PhysicalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.physical {
            write!(
                f,
                "physical (min eigenvalue {:e}, {})",
                self.min_eigenvalue,
                if self.trace_preserving { "trace-preserving" } else { "trace-decreasing" }
            )
        } else {
            write!(f, "non-physical: {}", self.violation())
        }
    }
}

pub fn check_physicality(chi: &ChiMatrix) -> PhysicalityReport {
    let hermiticity_deviation = linalg::hermiticity_deviation(chi.matrix());
    let min_eigenvalue = linalg::min_eigenvalue(chi.matrix());
    let gap = identity(2) - chi.kraus_sum();
    let gap_eigs = linalg::eigvalsh(&gap);
    let trace_floor = gap_eigs.iter().copied().fold(f64::INFINITY, f64::min);
    let trace_preservation_error = gap_eigs.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let hermitian = hermiticity_deviation <= HERMITIAN_TOL;
    let positive = min_eigenvalue >= -PSD_TOL;
    let trace_non_increasing = trace_floor >= -PSD_TOL;
    PhysicalityReport {
        hermiticity_deviation,
        min_eigenvalue,
        trace_floor,
        trace_preservation_error,
        hermitian,
        positive,
        trace_non_increasing,
        trace_preserving: trace_preservation_error <= PSD_TOL,
        physical: hermitian && positive && trace_non_increasing,
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ket, projector, ONE};
    use crate::quantum::random::{random_chi, random_state};
    use crate::quantum::Polarization;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn rho(p: Polarization) -> DensityMatrix {
        p.density()
    }

    #[test]
    fn identity_channel_keeps_state() {
        let out = apply_chi(&ChiMatrix::identity(), &rho(Polarization::H)).unwrap();
        assert!(linalg::max_abs_diff(out.matrix(), &Polarization::H.projector()) < 1e-15);
    }

    #[test]
    fn sigma_z_maps_diagonal_to_antidiagonal() {
        let z = ChiMatrix::from_diagonal([0.0, 0.0, 0.0, 1.0]);
        let out = apply_chi(&z, &rho(Polarization::D)).unwrap();
        assert!(linalg::max_abs_diff(out.matrix(), &Polarization::A.projector()) < 1e-15);
    }

    #[test]
    fn full_depolarizer_outputs_maximally_mixed() {
        let dep = ChiMatrix::from_diagonal([0.25; 4]);
        let out = apply_chi(&dep, &rho(Polarization::H)).unwrap();
        // brute force: average of the four Pauli conjugations
        let mut oracle = ComplexMatrix::zeros(2, 2);
        for m in 0..4 {
            oracle += pauli(m) * Polarization::H.projector() * pauli(m) * c(0.25, 0.0);
        }
        assert!(linalg::max_abs_diff(out.matrix(), &oracle) < 1e-15);
        assert!(linalg::max_abs_diff(out.matrix(), &identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn apply_chi_rejects_bad_inputs() {
        let bad = ChiMatrix::from_diagonal([1.1, 0.0, 0.0, -0.1]);
        let err = apply_chi(&bad, &rho(Polarization::H)).unwrap_err();
        assert!(err.to_string().contains("-0.1"), "{err}");
        let two = DensityMatrix::maximally_mixed(4);
        assert!(matches!(apply_chi(&ChiMatrix::identity(), &two), Err(Error::Dimension { .. })));
    }

    #[test]
    fn kraus_examples() {
        let id = KrausSet::identity(2);
        let r = rho(Polarization::L);
        assert_eq!(apply_kraus(&id, &r).unwrap(), r);

        let pol = KrausSet::new(vec![Polarization::H.projector()]).unwrap();
        let out = apply_kraus(&pol, &rho(Polarization::V)).unwrap();
        assert_eq!(out.trace(), 0.0);
        assert!(out.matrix().iter().all(|z| z.norm() == 0.0));

        // amplitude damping γ = 0.5 on |V><V|, by direct 2x2 multiplication
        let g: f64 = 0.5;
        let k0 = ComplexMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, c((1.0 - g).sqrt(), 0.0)]);
        let k1 = ComplexMatrix::from_row_slice(2, 2, &[ZERO, c(g.sqrt(), 0.0), ZERO, ZERO]);
        let ad = KrausSet::new(vec![k0, k1]).unwrap();
        let out = apply_kraus(&ad, &rho(Polarization::V)).unwrap();
        let expected = ComplexMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), ZERO, ZERO, c(0.5, 0.0)]);
        assert!(linalg::max_abs_diff(out.matrix(), &expected) < 1e-15);
    }

    #[test]
    fn choi_of_identity_and_sigma_z() {
        let phi = phi_state();
        let choi = chi_to_choi(&ChiMatrix::identity());
        assert!(linalg::max_abs_diff(choi.matrix(), &projector(&phi)) < 1e-15);

        let r = FRAC_1_SQRT_2;
        let phi_minus = ket(&[c(r, 0.0), ZERO, ZERO, c(-r, 0.0)]);
        let choi = chi_to_choi(&ChiMatrix::from_diagonal([0.0, 0.0, 0.0, 1.0]));
        assert!(linalg::max_abs_diff(choi.matrix(), &projector(&phi_minus)) < 1e-15);
        // oracle: (I ⊗ σ_z) ρ_Φ (I ⊗ σ_z)
        let lifted = kron(&identity(2), &pauli(3));
        let oracle = &lifted * projector(&phi) * &lifted;
        assert!(linalg::max_abs_diff(choi.matrix(), &oracle) < 1e-15);
    }

    #[test]
    fn choi_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let chi = random_chi(&mut rng);
            let back = choi_to_chi(&chi_to_choi(&chi));
            assert!(back.max_abs_diff(&chi) < 1e-12);
        }
    }

    #[test]
    fn choi_matches_direct_construction() {
        // independent route: (I ⊗ ε)(ρ_Φ) built from Kraus operators
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let chi = random_chi(&mut rng);
            let k = chi_to_kraus(&chi).unwrap();
            let lifted: Vec<ComplexMatrix> = k.operators().iter().map(|op| kron(&identity(2), op)).collect();
            let lifted = KrausSet::from_raw(lifted).unwrap();
            let direct = lifted.apply_matrix(&projector(&phi_state()));
            assert!(linalg::max_abs_diff(&direct, chi_to_choi(&chi).matrix()) < 1e-12);
        }
    }

    #[test]
    fn kraus_from_chi_examples() {
        let k = chi_to_kraus(&ChiMatrix::identity()).unwrap();
        assert_eq!(k.operators().len(), 1);
        let op = &k.operators()[0];
        // {I} up to a global phase
        let phase = op[(0, 0)];
        assert!((phase.norm() - 1.0).abs() < 1e-14);
        assert!(linalg::max_abs_diff(op, &(identity(2) * phase)) < 1e-14);

        let deph = ChiMatrix::from_diagonal([0.5, 0.0, 0.0, 0.5]);
        let k = chi_to_kraus(&deph).unwrap();
        assert_eq!(k.operators().len(), 2);
        for op in k.operators() {
            let in_span = (op[(0, 1)].norm() < 1e-14) && (op[(1, 0)].norm() < 1e-14);
            assert!(in_span);
            assert!((op.norm() - 1.0).abs() < 1e-14); // Frobenius norm of σ/√2
        }
        assert!(kraus_to_chi(&k).unwrap().max_abs_diff(&deph) < 1e-12);
    }

    #[test]
    fn polarizer_chi_by_hand() {
        let chi = kraus_to_chi(&KrausSet::new(vec![Polarization::H.projector()]).unwrap()).unwrap();
        for (m, n) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((chi.get(m, n) - c(0.25, 0.0)).norm() < 1e-15);
        }
        let others: f64 = chi.matrix().iter().map(|z| z.norm()).sum::<f64>() - 1.0;
        assert!(others.abs() < 1e-14);
        let report = check_physicality(&chi);
        assert!(report.physical);
        assert!(!report.trace_preserving);
        assert!(linalg::max_abs_diff(&chi.kraus_sum(), &Polarization::H.projector()) < 1e-15);
    }

    #[test]
    fn physicality_examples() {
        let r = check_physicality(&ChiMatrix::identity());
        assert!(r.physical && r.trace_preserving);
        assert_eq!(r.min_eigenvalue, 0.0);
        assert_eq!(r.trace_preservation_error, 0.0);

        let r = check_physicality(&ChiMatrix::from_diagonal([1.1, 0.0, 0.0, -0.1]));
        assert!(!r.physical && !r.positive);
        assert!((r.min_eigenvalue + 0.1).abs() < 1e-12);
        assert!(r.violation().contains("negative eigenvalue"));

        let mut m = ChiMatrix::identity().into_matrix();
        m[(0, 1)] = c(0.0, 1e-6);
        assert!(!check_physicality(&ChiMatrix::from_raw(m).unwrap()).hermitian);

        let r = check_physicality(&ChiMatrix::from_diagonal([1.5, 0.0, 0.0, 0.0]));
        assert!(r.positive && !r.trace_non_increasing);
    }

    #[test]
    fn chi_kraus_equivalence_and_trace_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let chi = random_chi(&mut rng);
            let k = chi_to_kraus(&chi).unwrap();
            for _ in 0..5 {
                let st = random_state(&mut rng, 2);
                let a = apply_chi(&chi, &st).unwrap();
                let b = apply_kraus(&k, &st).unwrap();
                assert!(linalg::max_abs_diff(a.matrix(), b.matrix()) < 1e-12);
                let expected = linalg::trace_product(&chi.kraus_sum(), st.matrix()).re;
                assert!((a.trace() - expected).abs() < 1e-12);
            }
            assert!(kraus_to_chi(&k).unwrap().max_abs_diff(&chi) < 1e-12);
        }
    }

    #[test]
    fn chi_json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let chi = random_chi(&mut rng);
        let s = serde_json::to_string(&chi).unwrap();
        let back: ChiMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, chi);
        assert!(s.starts_with("{\"kind\":\"chi\",\"dim\":4"));
    }
}
