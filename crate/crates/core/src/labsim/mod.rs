//! Synthetic experiments: forward-model probabilities turned into seeded
//! Poisson counts, with optional preparation (`ε_i`) and measurement
//! (`ε_f`) errors.
//!
//! The order of operations is fixed: probe state → `ε_i` → `id ⊗ ε` →
//! `ε_f` → measurement. Each configuration draws from its own stream
//! derived from `(seed, config index)`.

mod errors;
mod records;

pub use errors::{inject_default_systematics, ErrorMap, ErrorModel, Target};
pub use records::{BellCounts, CountFile, CountRecord, DcqdRecord, SqptRecord, SCHEMA};

use crate::channels::{build_channel, ChannelSpec};
use crate::dcqd::{
    calibration_plan, characterize_from_calibration, dcqd_design, dcqd_inputs, probe_states, BellLabel, CalibrationConfig,
    CalibrationData, CalibrationOutcome, ProbeRecord, QstRecord,
};
use crate::error::{Error, Result};
use crate::estimation::{Design, LikelihoodModel, MleOptions};
use crate::linalg::{kron, trace_product, ComplexMatrix};
use crate::quantum::{apply_chi, ChiMatrix};
use crate::rng::child_rng;
use crate::sqpt::{sqpt_design, sqpt_plan};
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Sqpt,
    Dcqd,
    Calibration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub channel: ChannelSpec,
    pub scheme: Scheme,
    /// Pairs per configuration (per probe state for analyzer probes).
    pub budget: u64,
    pub seed: u64,
    #[serde(default)]
    pub errors: ErrorModel,
}

impl RunSpec {
    pub fn new(channel: ChannelSpec, scheme: Scheme, budget: u64, seed: u64) -> Self {
        RunSpec { channel, scheme, budget, seed, errors: ErrorModel::default() }
    }

    pub fn with_errors(mut self, errors: ErrorModel) -> Self {
        self.errors = errors;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::param("budget", "must be at least 1"));
        }
        self.channel.validate()?;
        self.errors.check()?;
        if self.scheme == Scheme::Sqpt && !self.errors.is_identity() {
            return Err(Error::param("errors", "preparation/measurement error models apply to the DCQD and calibration schemes only"));
        }
        Ok(())
    }
}

/// Poisson(mean) draw; a zero mean yields zero.
pub fn poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("finite positive mean").sample(rng) as u64
}

fn sample<const K: usize>(seed: u64, index: usize, budget: u64, p: &[f64; K]) -> [u64; K] {
    let mut rng = child_rng(seed, index as u64);
    p.map(|x| poisson(&mut rng, budget as f64 * x))
}

/// `ε_f†(Π_b)` for the four Bell outcomes.
pub fn effective_bell_effects(errors: &ErrorModel) -> Result<Vec<ComplexMatrix>> {
    let f = errors.epsilon_f.to_kraus()?;
    Ok(BellLabel::ALL.iter().map(|b| f.apply_adjoint(&b.projector())).collect())
}

/// Probe states after `ε_i`, ordered BELL, HV, DA, LR.
pub fn prepared_inputs(errors: &ErrorModel) -> Result<Vec<ComplexMatrix>> {
    let prep = errors.epsilon_i.to_kraus()?;
    Ok(dcqd_inputs().iter().map(|i| prep.apply_matrix(i.state.matrix())).collect())
}

/// True DCQD outcome probabilities including systematics.
pub fn dcqd_true_probabilities(chi: &ChiMatrix, errors: &ErrorModel) -> Result<Vec<[f64; 4]>> {
    chi.ensure_physical()?;
    let effects = effective_bell_effects(errors)?;
    let inputs = prepared_inputs(errors)?;
    Ok(inputs
        .iter()
        .map(|rho| {
            let out = crate::quantum::apply_chi_on_signal(chi, &crate::quantum::DensityMatrix::from_raw(rho.clone())).expect("physical chi, 4x4 state");
            std::array::from_fn(|b| trace_product(&effects[b], out.matrix()).re)
        })
        .collect())
}

/// Expected calibration outcomes: per QST config 4 probabilities, per probe
/// config a 4×4 table.
pub enum CalibrationProbabilities {
    Qst([f64; 4]),
    Probe([[f64; 4]; 4]),
}

pub fn calibration_true_probabilities(errors: &ErrorModel) -> Result<Vec<(CalibrationConfig, CalibrationProbabilities)>> {
    let inputs = prepared_inputs(errors)?;
    let effects = effective_bell_effects(errors)?;
    Ok(calibration_plan()
        .into_iter()
        .map(|config| {
            let probs = match config {
                CalibrationConfig::Qst { input, bases, .. } => {
                    let rho = &inputs[input.index()];
                    CalibrationProbabilities::Qst(probe_states(bases).map(|pair| {
                        trace_product(&kron(&pair.0.projector(), &pair.1.projector()), rho).re
                    }))
                }
                CalibrationConfig::Probe { bases, .. } => CalibrationProbabilities::Probe(probe_states(bases).map(|pair| {
                    let rho = kron(&pair.0.projector(), &pair.1.projector());
                    std::array::from_fn(|b| trace_product(&effects[b], &rho).re)
                })),
            };
            (config, probs)
        })
        .collect())
}

/// Runs one simulated experiment.
pub fn simulate_run(spec: &RunSpec) -> Result<CountFile> {
    spec.validate()?;
    let chi = build_channel(&spec.channel)?.chi;
    let n = spec.budget;
    let seed = spec.seed;
    let records = match spec.scheme {
        Scheme::Sqpt => {
            let plan = sqpt_plan();
            plan.par_iter()
                .map(|config| {
                    let out = apply_chi(&chi, &config.input_state())?;
                    let p = config.projectors().map(|proj| out.expectation(&proj));
                    Ok(CountRecord::Sqpt(SqptRecord {
                        config_id: config.config_id,
                        input: config.input,
                        basis: config.basis,
                        counts: sample(seed, config.config_id, n, &p),
                        budget: n,
                    }))
                })
                .collect::<Result<Vec<_>>>()?
        }
        Scheme::Dcqd => {
            let table = dcqd_true_probabilities(&chi, &spec.errors)?;
            dcqd_inputs()
                .iter()
                .zip(&table)
                .enumerate()
                .map(|(k, (input, p))| {
                    CountRecord::Dcqd(DcqdRecord {
                        config_id: k,
                        input_label: input.label,
                        counts: BellCounts::from_array(sample(seed, k, n, p)),
                        budget: n,
                    })
                })
                .collect()
        }
        Scheme::Calibration => calibration_true_probabilities(&spec.errors)?
            .into_iter()
            .map(|(config, probs)| match (config, probs) {
                (CalibrationConfig::Qst { config_id, input, bases }, CalibrationProbabilities::Qst(p)) => {
                    CountRecord::Qst(QstRecord { config_id, input_label: input, bases, counts: sample(seed, config_id, n, &p), budget: n })
                }
                (CalibrationConfig::Probe { config_id, bases }, CalibrationProbabilities::Probe(table)) => {
                    let mut rng = child_rng(seed, config_id as u64);
                    let counts = table.map(|row| row.map(|p| poisson(&mut rng, n as f64 * p)));
                    CountRecord::Probe(ProbeRecord { config_id, bases, counts, budget: n })
                }
                _ => unreachable!("plan and probabilities are built together"),
            })
            .collect(),
    };
    Ok(CountFile::new(spec.clone(), records))
}

/// Likelihood model for an SQPT count file.
pub fn sqpt_likelihood(file: &CountFile) -> Result<LikelihoodModel> {
    let records = file.sqpt_records();
    if records.is_empty() {
        return Err(Error::InvalidData("no SQPT records".into()));
    }
    let plan: Vec<_> = records
        .iter()
        .map(|r| crate::sqpt::SqptConfig { config_id: r.config_id, input: r.input, basis: r.basis })
        .collect();
    let design = sqpt_design(&plan);
    let counts = records.iter().flat_map(|r| r.counts.map(|c| c as f64)).collect();
    let budgets = records.iter().flat_map(|r| [r.budget as f64; 2]).collect();
    LikelihoodModel::new(design, counts, budgets)
}

/// Likelihood model for a DCQD count file, optionally with calibrated
/// inputs and analyzer elements in the forward model.
pub fn dcqd_likelihood(file: &CountFile, calibration: Option<&CalibrationData>) -> Result<LikelihoodModel> {
    let records = file.dcqd_records();
    if records.is_empty() {
        return Err(Error::InvalidData("no DCQD records".into()));
    }
    let full = dcqd_design(calibration);
    let mut rows = Vec::with_capacity(4 * records.len());
    let mut counts = Vec::with_capacity(4 * records.len());
    let mut budgets = Vec::with_capacity(4 * records.len());
    for r in &records {
        let k = r.input_label.index();
        for (b, c) in r.counts.as_array().into_iter().enumerate() {
            rows.push(full.rows()[4 * k + b].clone());
            counts.push(c as f64);
            budgets.push(r.budget as f64);
        }
    }
    LikelihoodModel::new(Design::new(rows), counts, budgets)
}

/// Calibration data from a calibration-scheme count file.
pub fn calibrate(file: &CountFile, options: &MleOptions) -> Result<CalibrationOutcome> {
    if file.spec.scheme != Scheme::Calibration {
        return Err(Error::InvalidData(format!("expected a calibration count file, found scheme {:?}", file.spec.scheme)));
    }
    characterize_from_calibration(&file.qst_records(), &file.probe_records(), options)
}
