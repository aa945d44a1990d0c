//! Method comparison and χ plot data.

use crate::dcqd::{calibration_plan, dcqd_inputs};
use crate::error::Result;
use crate::quantum::{jamiolkowski_fidelity, ChiMatrix, PAULI_LABELS};
use crate::sqpt::{sqpt_plan, sqpt_plan_minimal};
use serde::{Deserialize, Serialize};
use std::fmt::Write;

/// Experimental configuration counts for single-qubit process tomography.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigLedger {
    pub sqpt_full: usize,
    pub sqpt_minimal: usize,
    pub dcqd: usize,
    pub dcqd_calibration: usize,
    pub sqpt_error_characterization: usize,
    pub aapt_min: usize,
    pub aapt_max: usize,
    pub two_qubit_qpt: usize,
    /// `"12:4"`, i.e. DCQD needs one third of the minimal SQPT settings.
    pub dcqd_vs_sqpt: String,
}

impl ConfigLedger {
    pub fn current() -> Self {
        let minimal = sqpt_plan_minimal().len();
        let dcqd = dcqd_inputs().len();
        ConfigLedger {
            sqpt_full: sqpt_plan().len(),
            sqpt_minimal: minimal,
            dcqd,
            dcqd_calibration: calibration_plan().len(),
            sqpt_error_characterization: 24,
            aapt_min: 54,
            aapt_max: 288,
            two_qubit_qpt: 288,
            dcqd_vs_sqpt: format!("{minimal}:{dcqd}"),
        }
    }
}

impl Default for ConfigLedger {
    fn default() -> Self {
        Self::current()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub cross_fidelity: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub a_vs_truth: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub b_vs_truth: Option<f64>,
    pub ledger: ConfigLedger,
}

/// `F_J` between two reconstructions and, optionally, each against the truth.
pub fn compare_methods(sqpt: &ChiMatrix, dcqd: &ChiMatrix, truth: Option<&ChiMatrix>) -> Result<Comparison> {
    sqpt.ensure_physical()?;
    dcqd.ensure_physical()?;
    let (a_vs_truth, b_vs_truth) = match truth {
        Some(t) => {
            t.ensure_physical()?;
            (Some(jamiolkowski_fidelity(sqpt, t)?), Some(jamiolkowski_fidelity(dcqd, t)?))
        }
        None => (None, None),
    };
    Ok(Comparison { cross_fidelity: jamiolkowski_fidelity(sqpt, dcqd)?, a_vs_truth, b_vs_truth, ledger: ConfigLedger::current() })
}

pub const PLOT_HEADER: &str = "m,n,abs,re,im";

/// CSV rows `m,n,|χ_mn|,Re χ_mn,Im χ_mn`, row-major over the Pauli indices.
pub fn emit_chi_plot_data(chi: &ChiMatrix) -> String {
    let mut out = String::from(PLOT_HEADER);
    out.push('\n');
    for m in 0..PAULI_LABELS.len() {
        for n in 0..PAULI_LABELS.len() {
            let z = chi.get(m, n);
            writeln!(out, "{m},{n},{:?},{:?},{:?}", z.norm(), z.re, z.im).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{build_channel, ChannelSpec};

    fn nonzero_rows(csv: &str) -> Vec<(usize, usize, f64)> {
        csv.lines()
            .skip(1)
            .filter_map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                let a: f64 = f[2].parse().unwrap();
                (a > 1e-12).then(|| (f[0].parse().unwrap(), f[1].parse().unwrap(), a))
            })
            .collect()
    }

    #[test]
    fn ledger_counts() {
        let l = ConfigLedger::current();
        assert_eq!((l.sqpt_full, l.sqpt_minimal, l.dcqd, l.dcqd_calibration), (18, 12, 4, 45));
        assert_eq!(l.dcqd_vs_sqpt, "12:4");
        assert_eq!(l.sqpt_minimal, 3 * l.dcqd);
    }

    #[test]
    fn identical_inputs_compare_to_one() {
        let chi = build_channel(&ChannelSpec::Depolarizing { p: 0.4 }).unwrap().chi;
        let c = compare_methods(&chi, &chi, Some(&chi)).unwrap();
        assert!((c.cross_fidelity - 1.0).abs() < 1e-9);
        assert!((c.a_vs_truth.unwrap() - 1.0).abs() < 1e-9);
        let c = compare_methods(&chi, &chi, None).unwrap();
        assert!(c.a_vs_truth.is_none());
        assert!(!serde_json::to_string(&c).unwrap().contains("truth"));
    }

    #[test]
    fn plot_rows() {
        let id = emit_chi_plot_data(&ChiMatrix::identity());
        assert_eq!(id.lines().count(), 17);
        assert_eq!(id.lines().next().unwrap(), "m,n,abs,re,im");
        assert_eq!(nonzero_rows(&id), vec![(0, 0, 1.0)]);

        let z = build_channel(&ChannelSpec::PauliRotation { axis: crate::channels::Axis::Z }).unwrap().chi;
        assert_eq!(nonzero_rows(&emit_chi_plot_data(&z)), vec![(3, 3, 1.0)]);

        let deph = build_channel(&ChannelSpec::PartialDephasing { q: 0.5 }).unwrap().chi;
        let rows = nonzero_rows(&emit_chi_plot_data(&deph));
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].0, rows[0].1), (0, 0));
        assert!((rows[0].2 - 0.75).abs() < 1e-15);
        assert_eq!((rows[1].0, rows[1].1), (3, 3));
        assert!((rows[1].2 - 0.25).abs() < 1e-15);
    }

    #[test]
    fn plot_data_is_symmetric_in_magnitude() {
        let chi = build_channel(&ChannelSpec::PartialPolarizer { q: 0.6, axis: Default::default() }).unwrap().chi;
        let csv = emit_chi_plot_data(&chi);
        let rows: Vec<Vec<f64>> = csv.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
        for m in 0..4 {
            for n in 0..4 {
                assert!((rows[4 * m + n][2] - rows[4 * n + m][2]).abs() < 1e-12);
            }
        }
    }
}
