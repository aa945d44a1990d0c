//! Poisson maximum likelihood over `X = T†T` with `T` complex lower
//! triangular (16 real parameters for a 4×4 unknown), so every iterate is
//! Hermitian PSD. Processes optionally carry a quadratic trace-preservation
//! penalty; two-qubit states are normalized to unit trace.
//!
//! The optimizer is BFGS with an Armijo backtracking line search, started
//! from a scaled identity so that runs are deterministic.

use super::bootstrap::BootstrapSummary;
use super::design::{trace_preservation_elements, Design};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::quantum::{ChiMatrix, DensityMatrix};
use nalgebra::{Matrix4, SMatrix, SVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

type M4 = Matrix4<Complex64>;
const NPARAM: usize = 16;
type Vec16 = SVector<f64, NPARAM>;
type Mat16 = SMatrix<f64, NPARAM, NPARAM>;

/// Estimator settings. Serialized alongside every result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MleOptions {
    /// Stop when the relative NLL change falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Add the penalty `λ ‖Σ χ_mn σ_n σ_m − I‖²_F`.
    pub trace_preserving: bool,
    /// `λ`; defaults to `1e3 · N` with `N` the mean per-configuration budget.
    pub penalty_weight: Option<f64>,
    pub probability_floor: f64,
    /// Bootstrap resamples (0 disables).
    pub bootstrap: usize,
    pub seed: u64,
}

impl Default for MleOptions {
    fn default() -> Self {
        MleOptions {
            tolerance: 1e-10,
            max_iterations: 5000,
            trace_preserving: false,
            penalty_weight: None,
            probability_floor: 1e-12,
            bootstrap: 0,
            seed: 0,
        }
    }
}

impl MleOptions {
    pub fn trace_preserving(mut self, tp: bool) -> Self {
        self.trace_preserving = tp;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameterization {
    /// χ = T†T, trace free (loss allowed).
    Process,
    /// ρ = T†T / Tr(T†T).
    UnitTraceState,
}

/// Observed counts against a linear design, with per-outcome pair budget.
#[derive(Debug, Clone, PartialEq)]
pub struct LikelihoodModel {
    pub design: Design,
    /// Counts are real so that exact expected values can be fitted.
    pub counts: Vec<f64>,
    pub budgets: Vec<f64>,
}

impl LikelihoodModel {
    pub fn new(design: Design, counts: Vec<f64>, budgets: Vec<f64>) -> Result<Self> {
        let model = LikelihoodModel { design, counts, budgets };
        model.validate()?;
        Ok(model)
    }

    /// Counts equal to the expected values `N·p`.
    pub fn noiseless(design: Design, probabilities: &[f64], budget: f64) -> Result<Self> {
        let counts = probabilities.iter().map(|p| budget * p.max(0.0)).collect();
        let budgets = vec![budget; probabilities.len()];
        Self::new(design, counts, budgets)
    }

    pub fn validate(&self) -> Result<()> {
        if self.design.dim() != 4 {
            return Err(Error::dim("4x4 design elements", self.design.dim()));
        }
        if self.counts.len() != self.design.len() || self.budgets.len() != self.design.len() {
            return Err(Error::dim(self.design.len(), format!("{} counts / {} budgets", self.counts.len(), self.budgets.len())));
        }
        if let Some(n) = self.counts.iter().find(|n| !(**n >= 0.0 && n.is_finite())) {
            return Err(Error::InvalidData(format!("count {n} is negative or not finite")));
        }
        if let Some(b) = self.budgets.iter().find(|b| !(**b > 0.0 && b.is_finite())) {
            return Err(Error::InvalidData(format!("budget {b} must be positive")));
        }
        Ok(())
    }

    pub fn with_counts(&self, counts: Vec<f64>) -> Self {
        LikelihoodModel { design: self.design.clone(), counts, budgets: self.budgets.clone() }
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.counts.iter().zip(&self.budgets).map(|(n, b)| n / b).collect()
    }

    pub fn mean_budget(&self) -> f64 {
        self.budgets.iter().sum::<f64>() / self.budgets.len() as f64
    }
}

/// Raw optimizer output.
#[derive(Debug, Clone, PartialEq)]
pub struct FitOutcome {
    pub matrix: ComplexMatrix,
    pub nll: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Outcomes with a nonzero count whose model probability sat below the floor at exit.
    pub floor_hits: usize,
    /// Objective after each accepted step (starting point first).
    pub history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionResult {
    pub chi: ChiMatrix,
    pub nll: f64,
    pub iterations: usize,
    pub converged: bool,
    pub floor_hits: usize,
    /// `‖Σ χ_mn σ_n σ_m − I‖_F`
    pub tp_residual: f64,
    /// Factor applied to bring a trace-increasing fit back to `⪯ I`; 1 otherwise.
    pub trace_rescale: f64,
    pub options: MleOptions,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bootstrap: Option<BootstrapSummary>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QstResult {
    pub state: DensityMatrix,
    pub nll: f64,
    pub iterations: usize,
    pub converged: bool,
    pub floor_hits: usize,
}

fn to_m4(m: &ComplexMatrix) -> M4 {
    M4::from_fn(|i, j| m[(i, j)])
}

fn from_m4(m: &M4) -> ComplexMatrix {
    ComplexMatrix::from_fn(4, 4, |i, j| m[(i, j)])
}

/// `Tr(A B)` for 4×4 matrices, real part.
fn tr_re(a: &M4, b: &M4) -> f64 {
    let mut acc = 0.0;
    for i in 0..4 {
        for k in 0..4 {
            let x = a[(i, k)];
            let y = b[(k, i)];
            acc += x.re * y.re - x.im * y.im;
        }
    }
    acc
}

fn unpack(x: &Vec16) -> M4 {
    let mut t = M4::zeros();
    for k in 0..4 {
        t[(k, k)] = Complex64::new(x[k], 0.0);
    }
    let mut idx = 4;
    for i in 1..4 {
        for j in 0..i {
            t[(i, j)] = Complex64::new(x[idx], x[idx + 1]);
            idx += 2;
        }
    }
    t
}

fn pack_gradient(a: &M4) -> Vec16 {
    let mut g = Vec16::zeros();
    for k in 0..4 {
        g[k] = 2.0 * a[(k, k)].re;
    }
    let mut idx = 4;
    for i in 1..4 {
        for j in 0..i {
            g[idx] = 2.0 * a[(i, j)].re;
            g[idx + 1] = 2.0 * a[(i, j)].im;
            idx += 2;
        }
    }
    g
}

fn pack(t: &M4) -> Vec16 {
    let mut x = Vec16::zeros();
    for k in 0..4 {
        x[k] = t[(k, k)].re;
    }
    let mut idx = 4;
    for i in 1..4 {
        for j in 0..i {
            x[idx] = t[(i, j)].re;
            x[idx + 1] = t[(i, j)].im;
            idx += 2;
        }
    }
    x
}

struct Objective<'a> {
    rows: Vec<M4>,
    counts: &'a [f64],
    budgets: &'a [f64],
    floor: f64,
    mode: Parameterization,
    penalty: Option<(f64, [M4; 4])>,
}

struct Evaluation {
    value: f64,
    gradient: Vec16,
    floor_hits: usize,
}

impl Objective<'_> {
    fn unknown(&self, t: &M4) -> M4 {
        let x = t.adjoint() * t;
        match self.mode {
            Parameterization::Process => x,
            Parameterization::UnitTraceState => {
                let tr = x.trace().re;
                x.unscale(tr)
            }
        }
    }

    fn value(&self, x: &Vec16) -> f64 {
        self.evaluate(x, false).value
    }

    fn evaluate(&self, x: &Vec16, with_gradient: bool) -> Evaluation {
        let t = unpack(x);
        let raw = t.adjoint() * t;
        let trace = raw.trace().re;
        let unknown = match self.mode {
            Parameterization::Process => raw,
            Parameterization::UnitTraceState => raw.unscale(trace),
        };
        let mut value = 0.0;
        let mut dmat = M4::zeros();
        let mut floor_hits = 0;
        for ((g, &n), &budget) in self.rows.iter().zip(self.counts).zip(self.budgets) {
            let p = tr_re(g, &unknown);
            let w = if p >= self.floor {
                value += budget * p;
                if n > 0.0 {
                    value -= n * (budget * p).ln();
                }
                budget - if n > 0.0 { n / p } else { 0.0 }
            } else {
                // linear continuation of -n ln(N p) below the floor
                value += budget * p;
                if n > 0.0 {
                    floor_hits += 1;
                    value -= n * ((budget * self.floor).ln() + (p - self.floor) / self.floor);
                }
                budget - n / self.floor
            };
            if with_gradient {
                dmat += g * Complex64::new(w, 0.0);
            }
        }
        if let Some((lambda, q)) = &self.penalty {
            let s: [f64; 4] = std::array::from_fn(|j| tr_re(&unknown, &q[j]));
            let r = [s[0] - 1.0, s[1], s[2], s[3]];
            // ‖S − I‖²_F = 2 Σ_j r_j²
            value += lambda * 2.0 * r.iter().map(|v| v * v).sum::<f64>();
            if with_gradient {
                for j in 0..4 {
                    dmat += q[j] * Complex64::new(4.0 * lambda * r[j], 0.0);
                }
            }
        }
        let mut gradient = Vec16::zeros();
        if with_gradient {
            let mut d = dmat;
            if self.mode == Parameterization::UnitTraceState {
                let shift = tr_re(&d, &unknown);
                d = (d - M4::identity() * Complex64::new(shift, 0.0)).unscale(trace);
            }
            gradient = pack_gradient(&(t * d));
        }
        Evaluation { value, gradient, floor_hits }
    }
}

fn dot(a: &Vec16, b: &Vec16) -> f64 {
    a.dot(b)
}

struct Minimization {
    x: Vec16,
    iterations: usize,
    converged: bool,
    history: Vec<f64>,
}

/// BFGS with Armijo backtracking.
fn minimize(objective: &Objective, mut x: Vec16, options: &MleOptions, saturated: f64) -> Minimization {
    let mut current = objective.evaluate(&x, true);
    let mut history = vec![current.value];
    let scaled_identity = |g: &Vec16| Mat16::identity() / g.norm().max(1e-300);
    let mut h = scaled_identity(&current.gradient);
    let mut first_update = true;
    let mut converged = false;
    let mut small_changes = 0;
    let mut iterations = 0;

    while iterations < options.max_iterations {
        let g = current.gradient;
        if g.norm() == 0.0 {
            converged = true;
            break;
        }
        let mut reset = false;
        let accepted = loop {
            let mut d = -(h * g);
            let mut slope = dot(&g, &d);
            if slope.is_nan() || slope >= 0.0 {
                h = scaled_identity(&g);
                reset = true;
                d = -(h * g);
                slope = dot(&g, &d);
            }
            let mut step = 1.0;
            let mut found = None;
            for _ in 0..80 {
                let trial = x + d * step;
                let v = objective.value(&trial);
                if v.is_finite() && v <= current.value + 1e-4 * step * slope {
                    found = Some(trial);
                    break;
                }
                step *= 0.5;
            }
            match found {
                Some(trial) => break Some(trial),
                None if reset => break None,
                None => {
                    h = scaled_identity(&g);
                    reset = true;
                }
            }
        };
        let Some(next_x) = accepted else {
            // no descent direction left at working precision
            converged = true;
            break;
        };
        iterations += 1;
        let next = objective.evaluate(&next_x, true);
        let change = (current.value - next.value).abs() / (current.value - saturated).abs().max(1.0);
        let s = next_x - x;
        let y = next.gradient - current.gradient;
        let sy = dot(&s, &y);
        if sy > 1e-14 * s.norm() * y.norm() {
            if first_update {
                h = Mat16::identity() * (sy / dot(&y, &y));
                first_update = false;
            }
            let rho = 1.0 / sy;
            let hy = h * y;
            let yhy = dot(&y, &hy);
            h += (s * s.transpose()) * (rho * rho * yhy + rho) - (hy * s.transpose() + s * hy.transpose()) * rho;
        }
        x = next_x;
        current = next;
        history.push(current.value);
        if change < options.tolerance {
            small_changes += 1;
            if small_changes >= 2 {
                converged = true;
                break;
            }
        } else {
            small_changes = 0;
        }
    }

    Minimization { x, iterations, converged, history }
}

/// Penalty stages for trace preservation: the weight grows tenfold until
/// the constraint residual drops below this bound.
const TP_TARGET: f64 = 1e-6;
const TP_STAGES: usize = 4;

/// Minimizes the Poisson NLL of `model` starting from `start` (a 4×4 T).
pub fn fit(model: &LikelihoodModel, options: &MleOptions, mode: Parameterization, start: &ComplexMatrix) -> Result<FitOutcome> {
    model.validate()?;
    let base_penalty = match (mode, options.trace_preserving) {
        (Parameterization::Process, true) => Some(options.penalty_weight.unwrap_or(1e3 * model.mean_budget())),
        _ => None,
    };
    let mut objective = Objective {
        rows: model.design.rows().iter().map(to_m4).collect(),
        counts: &model.counts,
        budgets: &model.budgets,
        floor: options.probability_floor,
        mode,
        penalty: base_penalty.map(|lambda| (lambda, trace_preservation_elements().map(|q| to_m4(&q)))),
    };
    // NLL of the saturated model; the gap to it sets the convergence scale
    let saturated: f64 = model.counts.iter().filter(|&&n| n > 0.0).map(|&n| n - n * n.ln()).sum();

    let mut x = pack(&to_m4(start));
    let mut run = minimize(&objective, x, options, saturated);
    let mut iterations = run.iterations;
    let mut history = std::mem::take(&mut run.history);
    x = run.x;
    if options.penalty_weight.is_none() {
        for _ in 1..TP_STAGES {
            let Some((lambda, q)) = &objective.penalty else { break };
            let unknown = objective.unknown(&unpack(&x));
            let residual = q.iter().enumerate().map(|(j, qj)| (tr_re(&unknown, qj) - if j == 0 { 1.0 } else { 0.0 }).abs()).fold(0.0, f64::max);
            if residual < TP_TARGET {
                break;
            }
            objective.penalty = Some((lambda * 10.0, *q));
            let stage = minimize(&objective, x, options, saturated);
            iterations += stage.iterations;
            history.extend(stage.history);
            x = stage.x;
            run.converged = stage.converged;
        }
    }
    let converged = run.converged;

    let t = unpack(&x);
    let matrix = from_m4(&objective.unknown(&t));
    let final_eval = objective.evaluate(&x, false);
    let nll = match &objective.penalty {
        Some(_) => {
            let bare = Objective { penalty: None, ..objective };
            bare.value(&x)
        }
        None => final_eval.value,
    };
    Ok(FitOutcome { matrix, nll, iterations, converged, floor_hits: final_eval.floor_hits, history })
}

fn tp_residual(chi: &ChiMatrix) -> f64 {
    (chi.kraus_sum() - linalg::identity(2)).norm()
}

/// Largest eigenvalue of `Σ χ_mn σ_n σ_m`, if it exceeds one.
fn trace_excess(chi: &ChiMatrix) -> Option<f64> {
    let top = linalg::eigvalsh(&chi.kraus_sum())[0];
    (top > 1.0).then_some(top)
}

/// Maximum-likelihood χ. The result is PSD by construction; with
/// `trace_preserving` the penalty pins `Σ χ_mn σ_n σ_m` to the identity.
/// Fits that come out trace-increasing (shot noise on loss-free data) are
/// scaled down until `Σ χ_mn σ_n σ_m ⪯ I`; the factor is reported.
pub fn mle_qpt(model: &LikelihoodModel, options: &MleOptions) -> Result<ReconstructionResult> {
    let start = linalg::identity(4).scale(0.5);
    let out = fit(model, options, Parameterization::Process, &start)?;
    let mut chi = ChiMatrix::from_raw(linalg::hermitian_part(&out.matrix))?;
    let mut trace_rescale = 1.0;
    if let Some(top) = trace_excess(&chi) {
        trace_rescale = 1.0 / top;
        chi = ChiMatrix::from_raw(chi.matrix().scale(trace_rescale))?;
    }
    let bootstrap = if options.bootstrap > 0 {
        Some(super::bootstrap_uncertainty(model, options, &chi, options.bootstrap, options.seed)?)
    } else {
        None
    };
    Ok(ReconstructionResult {
        tp_residual: tp_residual(&chi),
        trace_rescale,
        chi,
        nll: out.nll,
        iterations: out.iterations,
        converged: out.converged,
        floor_hits: out.floor_hits,
        options: options.clone(),
        bootstrap,
    })
}

/// Maximum-likelihood two-qubit state (unit trace).
pub fn mle_qst(model: &LikelihoodModel, options: &MleOptions) -> Result<QstResult> {
    let start = linalg::identity(4);
    let out = fit(model, &MleOptions { trace_preserving: false, ..options.clone() }, Parameterization::UnitTraceState, &start)?;
    Ok(QstResult {
        state: DensityMatrix::from_raw(linalg::hermitian_part(&out.matrix)),
        nll: out.nll,
        iterations: out.iterations,
        converged: out.converged,
        floor_hits: out.floor_hits,
    })
}
