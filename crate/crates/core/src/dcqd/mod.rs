//! Direct characterization of quantum dynamics (DCQD).
//!
//! Four two-photon probe states are prepared, the process acts on the
//! signal photon (second tensor slot) and a complete polarization Bell
//! analysis is made on the pair. Four configurations suffice for a
//! single-qubit process.

mod bsa;
mod calibration;

pub use bsa::{bsa_classify, hybrid_bell_states, hyper_bsa_decompose, hyper_bsa_table, HybridBellState, HybridLabel};
pub use calibration::{
    calibration_plan, characterize_from_calibration, probe_states, CalibrationConfig, CalibrationData, CalibrationOutcome,
    ProbeRecord, QstRecord, PSD_SHIFT_WARNING,
};

use crate::error::{Error, Result};
use crate::estimation::design::{process_element, Design};
use crate::linalg::{c, kron_ket, projector, ComplexMatrix, ComplexVector};
use crate::quantum::{apply_chi_on_signal, bell_state_vectors, ChiMatrix, DensityMatrix, Polarization};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Probe-state labels in plan order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum InputLabel {
    Bell,
    Hv,
    Da,
    Lr,
}

impl InputLabel {
    pub const ALL: [InputLabel; 4] = [InputLabel::Bell, InputLabel::Hv, InputLabel::Da, InputLabel::Lr];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Pure polarization state of the pair.
    pub fn ket(self) -> ComplexVector {
        let pair = |a: Polarization| kron_ket(&a.ket(), &a.ket());
        let (cos, sin) = ((PI / 8.0).cos(), (PI / 8.0).sin());
        let partial = |a: Polarization| pair(a) * c(cos, 0.0) + pair(a.orthogonal()) * c(0.0, -sin);
        match self {
            InputLabel::Bell => {
                let r = std::f64::consts::FRAC_1_SQRT_2;
                pair(Polarization::H) * c(r, 0.0) - pair(Polarization::V) * c(r, 0.0)
            }
            InputLabel::Hv => partial(Polarization::H),
            InputLabel::Da => partial(Polarization::D),
            InputLabel::Lr => partial(Polarization::L),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DcqdInput {
    pub label: InputLabel,
    pub state: DensityMatrix,
}

/// Polarization Bell outcomes, ordered `(Φ+, Φ−, Ψ+, Ψ−)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellLabel {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [BellLabel::PhiPlus, BellLabel::PhiMinus, BellLabel::PsiPlus, BellLabel::PsiMinus];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn vector(self) -> ComplexVector {
        bell_state_vectors()[self.index()].clone()
    }

    pub fn projector(self) -> ComplexMatrix {
        projector(&self.vector())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BellProjector {
    pub label: BellLabel,
    pub operator: ComplexMatrix,
}

pub fn bell_projectors() -> Vec<BellProjector> {
    BellLabel::ALL.iter().map(|&label| BellProjector { label, operator: label.projector() }).collect()
}

/// The four probe states in the order BELL, HV, DA, LR.
pub fn dcqd_inputs() -> Vec<DcqdInput> {
    InputLabel::ALL.iter().map(|&label| DcqdInput { label, state: DensityMatrix::pure(&label.ket()) }).collect()
}

/// `p_b = Tr[Π_b (id ⊗ ε)(ρ_in)]` for the four Bell outcomes.
pub fn dcqd_probabilities(chi: &ChiMatrix, input: &DcqdInput) -> Result<[f64; 4]> {
    let out = apply_chi_on_signal(chi, &input.state)?;
    Ok(BellLabel::ALL.map(|b| out.expectation(&b.projector())))
}

/// Probability table over the four configurations.
pub fn dcqd_forward(chi: &ChiMatrix) -> Result<Vec<[f64; 4]>> {
    dcqd_inputs().iter().map(|input| dcqd_probabilities(chi, input)).collect()
}

/// Linear design with row `4k + b` for outcome `b` of input `k`. With
/// calibration data the characterized inputs and analyzer elements replace
/// the ideal ones.
pub fn dcqd_design(calibration: Option<&CalibrationData>) -> Design {
    let (inputs, effects): (Vec<ComplexMatrix>, Vec<ComplexMatrix>) = match calibration {
        Some(cal) => (cal.inputs.iter().map(|s| s.matrix().clone()).collect(), cal.measurement.clone()),
        None => (
            dcqd_inputs().into_iter().map(|i| i.state.into_matrix()).collect(),
            BellLabel::ALL.iter().map(|b| b.projector()).collect(),
        ),
    };
    let mut rows = Vec::with_capacity(16);
    for rho in &inputs {
        for effect in &effects {
            rows.push(process_element(rho, effect));
        }
    }
    Design::new(rows)
}

pub fn flatten_table(table: &[[f64; 4]]) -> Vec<f64> {
    table.iter().flat_map(|r| r.iter().copied()).collect()
}

/// χ diagonal from the Bell-input outcome probabilities.
///
/// `(I ⊗ σ_m)|Φ−>` lands on Φ−, Ψ−, Ψ+, Φ+ for `m = 0..3`, so
/// `χ00 = p(Φ−)`, `χ11 = p(Ψ−)`, `χ22 = p(Ψ+)`, `χ33 = p(Φ+)`.
pub fn bell_outcome_to_chi_diag(probs: [f64; 4]) -> Result<[f64; 4]> {
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::NotNormalized(total));
    }
    Ok([probs[1], probs[3], probs[2], probs[0]])
}

/// Longitudinal and transverse decay factors and `R = T2/T1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelaxationEstimate {
    pub alpha: f64,
    pub beta: f64,
    pub ratio: f64,
}

/// `R = ln α / ln β` with `α = χ00 + χ33 − χ11 − χ22`, `β = χ00 − χ33`,
/// from a single Bell-input configuration.
pub fn extract_relaxation_ratio(probs: [f64; 4]) -> Result<RelaxationEstimate> {
    let d = bell_outcome_to_chi_diag(probs)?;
    let alpha = d[0] + d[3] - d[1] - d[2];
    let beta = d[0] - d[3];
    for (name, v) in [("alpha", alpha), ("beta", beta)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::ExtractionUndefined(format!("{name} = {v} is outside (0, 1); no decay time scale")));
        }
    }
    Ok(RelaxationEstimate { alpha, beta, ratio: alpha.ln() / beta.ln() })
}

/// Normalizes Bell-outcome counts to probabilities.
pub fn bell_frequencies(counts: [f64; 4]) -> Result<[f64; 4]> {
    let total: f64 = counts.iter().sum();
    if total <= 0.0 {
        return Err(Error::ExtractionUndefined("no coincidences recorded".into()));
    }
    Ok(counts.map(|n| n / total))
}
