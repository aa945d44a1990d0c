use super::mle::{mle_qpt, LikelihoodModel, MleOptions};
use crate::error::Result;
use crate::quantum::{jamiolkowski_fidelity, ChiMatrix};
use crate::rng::child_rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Spread of the estimator under parametric Poisson resampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSummary {
    pub fidelity_mean: f64,
    pub fidelity_std: f64,
    /// Resamples requested.
    pub resamples: usize,
    /// Resamples whose fit did not converge; excluded from the statistics.
    pub excluded: usize,
    /// Standard deviation of Re χ_mn and Im χ_mn, row-major.
    pub chi_re_std: Vec<f64>,
    pub chi_im_std: Vec<f64>,
}

fn poisson_draw<R: rand::Rng>(rng: &mut R, mean: f64) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    Poisson::new(mean).expect("positive finite mean").sample(rng)
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

/// Re-draws every count as Poisson(observed), refits `resamples` times and
/// reports the spread of `F_J` against `reference`. Resample `b` uses the
/// stream `child_rng(seed, b)`, so the outcome is independent of thread
/// scheduling.
pub fn bootstrap_uncertainty(
    model: &LikelihoodModel,
    options: &MleOptions,
    reference: &ChiMatrix,
    resamples: usize,
    seed: u64,
) -> Result<BootstrapSummary> {
    let inner = MleOptions { bootstrap: 0, ..options.clone() };
    let fits: Vec<Result<Option<(f64, ChiMatrix)>>> = (0..resamples)
        .into_par_iter()
        .map(|b| {
            let mut rng = child_rng(seed, b as u64);
            let counts = model.counts.iter().map(|&n| poisson_draw(&mut rng, n)).collect();
            let fit = mle_qpt(&model.with_counts(counts), &inner)?;
            if !fit.converged {
                return Ok(None);
            }
            let f = jamiolkowski_fidelity(&fit.chi, reference)?;
            Ok(Some((f, fit.chi)))
        })
        .collect();
    let mut kept = Vec::new();
    for r in fits {
        if let Some(x) = r? {
            kept.push(x);
        }
    }
    let fids: Vec<f64> = kept.iter().map(|(f, _)| *f).collect();
    let (fidelity_mean, fidelity_std) = mean_std(&fids);
    let element_std = |part: fn(num_complex::Complex64) -> f64| -> Vec<f64> {
        (0..16)
            .map(|k| {
                let xs: Vec<f64> = kept.iter().map(|(_, c)| part(c.get(k / 4, k % 4))).collect();
                mean_std(&xs).1
            })
            .collect()
    };
    Ok(BootstrapSummary {
        fidelity_mean,
        fidelity_std,
        resamples,
        excluded: resamples - kept.len(),
        chi_re_std: element_std(|z| z.re),
        chi_im_std: element_std(|z| z.im),
    })
}
