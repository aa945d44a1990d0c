//! Characterization of the probe states and the Bell analyzer, so that
//! preparation and measurement errors can be folded into the DCQD forward
//! model.
//!
//! The plan has 45 configurations: two-qubit state tomography of each of
//! the four probe states over the nine local basis pairs `{HV,DA,LR}²`,
//! plus nine settings that send known product states through the Bell
//! analyzer.

use super::{dcqd_inputs, BellLabel, InputLabel};
use crate::error::{Error, Result};
use crate::estimation::{linear_inversion, mle_qst, Design, LikelihoodModel, MleOptions};
use crate::linalg::{self, kron, ComplexMatrix};
use crate::quantum::{DensityMatrix, Polarization, PSD_TOL};
use crate::sqpt::Basis;
use serde::{Deserialize, Serialize};

/// PSD projection shifts above this (operator norm) raise a warning.
pub const PSD_SHIFT_WARNING: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CalibrationConfig {
    /// Local tomography of a probe state, both outcomes on each photon.
    Qst { config_id: usize, input: InputLabel, bases: [Basis; 2] },
    /// Product eigenstates of `bases` sent through the Bell analyzer.
    Probe { config_id: usize, bases: [Basis; 2] },
}

impl CalibrationConfig {
    pub fn config_id(&self) -> usize {
        match *self {
            CalibrationConfig::Qst { config_id, .. } | CalibrationConfig::Probe { config_id, .. } => config_id,
        }
    }
}

fn basis_pairs() -> Vec<[Basis; 2]> {
    Basis::ALL.iter().flat_map(|&a| Basis::ALL.iter().map(move |&b| [a, b])).collect()
}

pub fn calibration_plan() -> Vec<CalibrationConfig> {
    let mut plan = Vec::with_capacity(45);
    for input in InputLabel::ALL {
        for bases in basis_pairs() {
            plan.push(CalibrationConfig::Qst { config_id: plan.len(), input, bases });
        }
    }
    for bases in basis_pairs() {
        plan.push(CalibrationConfig::Probe { config_id: plan.len(), bases });
    }
    plan
}

/// The four product outcomes of a local basis pair, `(idler, signal)`,
/// ordered `(0,0), (0,1), (1,0), (1,1)`.
pub fn probe_states(bases: [Basis; 2]) -> [(Polarization, Polarization); 4] {
    let [a, b] = bases.map(Basis::outcomes);
    [(a[0], b[0]), (a[0], b[1]), (a[1], b[0]), (a[1], b[1])]
}

pub(crate) fn product_projector(pair: (Polarization, Polarization)) -> ComplexMatrix {
    kron(&pair.0.projector(), &pair.1.projector())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QstRecord {
    pub config_id: usize,
    pub input_label: InputLabel,
    pub bases: [Basis; 2],
    /// Coincidences for the four outcomes of [`probe_states`].
    pub counts: [u64; 4],
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub config_id: usize,
    pub bases: [Basis; 2],
    /// `counts[s][b]`: probe state `s` of [`probe_states`], Bell outcome `b`.
    pub counts: [[u64; 4]; 4],
    /// Pairs sent per probe state.
    pub budget: u64,
}

/// Characterized probe states and Bell-analyzer POVM elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CalibrationRepr", into = "CalibrationRepr")]
pub struct CalibrationData {
    /// Ordered BELL, HV, DA, LR.
    pub inputs: Vec<DensityMatrix>,
    /// Ordered Φ+, Φ−, Ψ+, Ψ−.
    pub measurement: Vec<ComplexMatrix>,
}

#[derive(Serialize, Deserialize)]
struct CalibrationRepr {
    inputs: Vec<DensityMatrix>,
    #[serde(with = "crate::serde_complex::vec")]
    measurement: Vec<ComplexMatrix>,
}

impl From<CalibrationData> for CalibrationRepr {
    fn from(c: CalibrationData) -> Self {
        CalibrationRepr { inputs: c.inputs, measurement: c.measurement }
    }
}

impl TryFrom<CalibrationRepr> for CalibrationData {
    type Error = Error;

    fn try_from(r: CalibrationRepr) -> Result<Self> {
        CalibrationData::new(r.inputs, r.measurement)
    }
}

impl CalibrationData {
    pub fn new(inputs: Vec<DensityMatrix>, measurement: Vec<ComplexMatrix>) -> Result<Self> {
        if inputs.len() != 4 || measurement.len() != 4 {
            return Err(Error::dim("4 inputs and 4 measurement elements", format!("{} and {}", inputs.len(), measurement.len())));
        }
        for (k, rho) in inputs.iter().enumerate() {
            if rho.dim() != 4 {
                return Err(Error::dim(4, rho.dim()));
            }
            if (rho.trace() - 1.0).abs() > 1e-6 {
                return Err(Error::InvalidData(format!("calibrated input {k} has trace {}", rho.trace())));
            }
            if linalg::min_eigenvalue(rho.matrix()) < -PSD_TOL {
                return Err(Error::NonPhysical { what: "calibrated input", detail: format!("input {k} is not PSD") });
            }
        }
        let mut sum = ComplexMatrix::zeros(4, 4);
        for (b, m) in measurement.iter().enumerate() {
            if m.nrows() != 4 || m.ncols() != 4 {
                return Err(Error::dim("4x4", format!("{}x{}", m.nrows(), m.ncols())));
            }
            if linalg::min_eigenvalue(m) < -PSD_TOL {
                return Err(Error::NonPhysical { what: "measurement element", detail: format!("element {b} is not PSD") });
            }
            sum += m;
        }
        let slack = linalg::min_eigenvalue(&(linalg::identity(4) - sum));
        if slack < -PSD_TOL {
            return Err(Error::NonPhysical {
                what: "measurement",
                detail: format!("sum of elements exceeds identity (eigenvalue of I - sum = {slack:e})"),
            });
        }
        Ok(CalibrationData { inputs, measurement })
    }

    /// Ideal probe states and Bell projectors.
    pub fn ideal() -> Self {
        CalibrationData {
            inputs: dcqd_inputs().into_iter().map(|i| i.state).collect(),
            measurement: BellLabel::ALL.iter().map(|b| b.projector()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationOutcome {
    pub data: CalibrationData,
    /// Operator-norm shift applied by the PSD projection, per element.
    pub psd_shift: [f64; 4],
    pub warnings: Vec<String>,
    pub qst_converged: [bool; 4],
}

/// Rebuilds probe states (maximum-likelihood tomography) and analyzer
/// elements (linear inversion over the 36 probe-state equations, then PSD
/// projection) from calibration counts.
pub fn characterize_from_calibration(qst: &[QstRecord], probes: &[ProbeRecord], options: &MleOptions) -> Result<CalibrationOutcome> {
    let mut inputs = Vec::with_capacity(4);
    let mut qst_converged = [false; 4];
    for label in InputLabel::ALL {
        let mine: Vec<&QstRecord> = qst.iter().filter(|r| r.input_label == label).collect();
        if mine.len() < 9 {
            return Err(Error::InvalidData(format!("{label:?} has {} tomography settings, expected 9", mine.len())));
        }
        let mut rows = Vec::with_capacity(4 * mine.len());
        let mut counts = Vec::with_capacity(4 * mine.len());
        let mut budgets = Vec::with_capacity(4 * mine.len());
        for rec in mine {
            for (k, pair) in probe_states(rec.bases).into_iter().enumerate() {
                rows.push(product_projector(pair));
                counts.push(rec.counts[k] as f64);
                budgets.push(rec.budget as f64);
            }
        }
        let fit = mle_qst(&LikelihoodModel::new(Design::new(rows), counts, budgets)?, options)?;
        qst_converged[label.index()] = fit.converged;
        inputs.push(fit.state);
    }

    if probes.len() < 9 {
        return Err(Error::InvalidData(format!("{} analyzer probe settings, expected 9", probes.len())));
    }
    let mut rows = Vec::with_capacity(36);
    let mut freqs: [Vec<f64>; 4] = std::array::from_fn(|_| Vec::with_capacity(36));
    for rec in probes {
        if rec.budget == 0 {
            return Err(Error::InvalidData(format!("probe config {} has zero budget", rec.config_id)));
        }
        for (s, pair) in probe_states(rec.bases).into_iter().enumerate() {
            rows.push(product_projector(pair));
            for (column, &n) in freqs.iter_mut().zip(&rec.counts[s]) {
                column.push(n as f64 / rec.budget as f64);
            }
        }
    }
    let design = Design::new(rows);
    let mut measurement = Vec::with_capacity(4);
    let mut psd_shift = [0.0; 4];
    let mut warnings = Vec::new();
    for (b, f) in freqs.iter().enumerate() {
        let raw = linear_inversion(&design, f, false)?;
        psd_shift[b] = linalg::psd_shift(&raw);
        if psd_shift[b] > PSD_SHIFT_WARNING {
            warnings.push(format!(
                "calibration quality: analyzer element {:?} needed a PSD shift of {:.4} (> {PSD_SHIFT_WARNING})",
                BellLabel::ALL[b],
                psd_shift[b]
            ));
        }
        measurement.push(linalg::psd_projection(&raw));
    }
    let sum = measurement.iter().fold(ComplexMatrix::zeros(4, 4), |a, m| a + m);
    let top = linalg::eigvalsh(&sum)[0];
    if top > 1.0 {
        for m in &mut measurement {
            *m = m.unscale(top);
        }
    }
    let data = CalibrationData::new(inputs, measurement)?;
    Ok(CalibrationOutcome { data, psd_shift, warnings, qst_converged })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_has_45_configurations() {
        let plan = calibration_plan();
        assert_eq!(plan.len(), 45);
        let qst = plan.iter().filter(|c| matches!(c, CalibrationConfig::Qst { .. })).count();
        assert_eq!(qst, 36);
        for label in InputLabel::ALL {
            let n = plan.iter().filter(|c| matches!(c, CalibrationConfig::Qst { input, .. } if *input == label)).count();
            assert_eq!(n, 9);
        }
        assert!(plan.iter().enumerate().all(|(k, c)| c.config_id() == k));
    }

    #[test]
    fn probe_states_span_operator_space() {
        let rows: Vec<ComplexMatrix> = basis_pairs().into_iter().flat_map(|b| probe_states(b).map(product_projector)).collect();
        assert_eq!(rows.len(), 36);
        assert_eq!(crate::estimation::design_rank(&Design::new(rows), false), 16);
    }

    #[test]
    fn ideal_calibration_is_valid() {
        let ideal = CalibrationData::ideal();
        let s = serde_json::to_string(&ideal).unwrap();
        let back: CalibrationData = serde_json::from_str(&s).unwrap();
        assert_eq!(back, ideal);
        let mut bad = ideal.clone();
        bad.measurement[0] = bad.measurement[0].scale(2.0);
        assert!(CalibrationData::new(bad.inputs, bad.measurement).is_err());
    }
}
