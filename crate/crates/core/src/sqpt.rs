//! Standard process tomography: six probe states, three analysis bases,
//! both outcomes of every basis recorded.

use crate::error::Result;
use crate::estimation::design::{process_element, Design};
use crate::linalg::ComplexMatrix;
use crate::quantum::{apply_chi, ChiMatrix, DensityMatrix, Polarization};
use serde::{Deserialize, Serialize};

/// Local analysis basis; each has two orthogonal outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    HV,
    DA,
    LR,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::HV, Basis::DA, Basis::LR];

    pub fn outcomes(self) -> [Polarization; 2] {
        match self {
            Basis::HV => [Polarization::H, Polarization::V],
            Basis::DA => [Polarization::D, Polarization::A],
            Basis::LR => [Polarization::L, Polarization::R],
        }
    }

    pub fn projectors(self) -> [ComplexMatrix; 2] {
        self.outcomes().map(Polarization::projector)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqptConfig {
    pub config_id: usize,
    pub input: Polarization,
    pub basis: Basis,
}

impl SqptConfig {
    pub fn input_state(&self) -> DensityMatrix {
        self.input.density()
    }

    pub fn projectors(&self) -> [ComplexMatrix; 2] {
        self.basis.projectors()
    }
}

fn plan_for(inputs: &[Polarization]) -> Vec<SqptConfig> {
    inputs
        .iter()
        .flat_map(|&input| Basis::ALL.into_iter().map(move |basis| (input, basis)))
        .enumerate()
        .map(|(config_id, (input, basis))| SqptConfig { config_id, input, basis })
        .collect()
}

/// The over-complete 18-configuration plan: inputs H,V,D,A,L,R × bases HV,DA,LR.
pub fn sqpt_plan() -> Vec<SqptConfig> {
    plan_for(&Polarization::ALL)
}

/// The minimal 12-configuration plan (inputs H,V,D,L).
pub fn sqpt_plan_minimal() -> Vec<SqptConfig> {
    plan_for(&[Polarization::H, Polarization::V, Polarization::D, Polarization::L])
}

pub fn sqpt_plan_variant(minimal: bool) -> Vec<SqptConfig> {
    if minimal {
        sqpt_plan_minimal()
    } else {
        sqpt_plan()
    }
}

/// `p_i = Tr[Π_i ε(ρ_in)]` for both outcomes of the configuration.
pub fn sqpt_probabilities(chi: &ChiMatrix, config: &SqptConfig) -> Result<[f64; 2]> {
    let out = apply_chi(chi, &config.input_state())?;
    Ok(config.projectors().map(|p| out.expectation(&p)))
}

/// Probability table, one row per configuration.
pub fn sqpt_forward(chi: &ChiMatrix, plan: &[SqptConfig]) -> Result<Vec<[f64; 2]>> {
    plan.iter().map(|c| sqpt_probabilities(chi, c)).collect()
}

/// Linear design: row `2k + j` gives outcome `j` of configuration `k`.
pub fn sqpt_design(plan: &[SqptConfig]) -> Design {
    let mut rows = Vec::with_capacity(2 * plan.len());
    for config in plan {
        let rho = config.input.projector();
        for effect in config.projectors() {
            rows.push(process_element(&rho, &effect));
        }
    }
    Design::new(rows)
}

pub fn flatten_table(table: &[[f64; 2]]) -> Vec<f64> {
    table.iter().flat_map(|r| r.iter().copied()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{build_channel, channel_zoo, ChannelSpec, PolarizerAxis};
    use crate::linalg::{self, identity};

    fn chi_of(spec: ChannelSpec) -> ChiMatrix {
        build_channel(&spec).unwrap().chi
    }

    #[test]
    fn plan_sizes_and_ordering() {
        let plan = sqpt_plan();
        assert_eq!(plan.len(), 18);
        assert_eq!(sqpt_plan_variant(true).len(), 12);
        assert_eq!(plan[0].input, Polarization::H);
        assert_eq!(plan[0].basis, Basis::HV);
        assert_eq!(plan[4].input, Polarization::V);
        assert_eq!(plan[4].basis, Basis::DA);
        assert_eq!(plan[17].input, Polarization::R);
        assert_eq!(plan[17].basis, Basis::LR);
        for c in &plan {
            let [a, b] = c.projectors();
            assert!(linalg::max_abs_diff(&(a + b), &identity(2)) < 1e-14);
        }
    }

    #[test]
    fn probability_examples() {
        let h_hv = SqptConfig { config_id: 0, input: Polarization::H, basis: Basis::HV };
        assert_eq!(sqpt_probabilities(&ChiMatrix::identity(), &h_hv).unwrap(), [1.0, 0.0]);

        let d_da = SqptConfig { config_id: 7, input: Polarization::D, basis: Basis::DA };
        let z = chi_of(ChannelSpec::PauliRotation { axis: crate::channels::Axis::Z });
        let p = sqpt_probabilities(&z, &d_da).unwrap();
        assert!(p[0].abs() < 1e-15 && (p[1] - 1.0).abs() < 1e-15);

        // polarizer: single Kraus |H><H| on |D><D| leaves |H><H|/2
        let pol = chi_of(ChannelSpec::PartialPolarizer { q: 1.0, axis: PolarizerAxis::H });
        let d_hv = SqptConfig { config_id: 6, input: Polarization::D, basis: Basis::HV };
        let p = sqpt_probabilities(&pol, &d_hv).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15 && p[1].abs() < 1e-15);
    }

    #[test]
    fn identity_table() {
        let table = sqpt_forward(&ChiMatrix::identity(), &sqpt_plan()).unwrap();
        for (c, row) in sqpt_plan().iter().zip(&table) {
            if c.basis.outcomes().contains(&c.input) {
                let expect = if c.basis.outcomes()[0] == c.input { [1.0, 0.0] } else { [0.0, 1.0] };
                assert!((row[0] - expect[0]).abs() < 1e-15 && (row[1] - expect[1]).abs() < 1e-15);
            } else {
                assert!((row[0] - 0.5).abs() < 1e-15 && (row[1] - 0.5).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn full_depolarizer_table_is_flat() {
        let table = sqpt_forward(&chi_of(ChannelSpec::Depolarizing { p: 1.0 }), &sqpt_plan()).unwrap();
        assert!(table.iter().flatten().all(|p| (p - 0.5).abs() < 1e-15));
    }

    #[test]
    fn sigma_z_table_swaps_unbiased_columns() {
        let plan = sqpt_plan();
        let id = sqpt_forward(&ChiMatrix::identity(), &plan).unwrap();
        let z = sqpt_forward(&ChiMatrix::from_diagonal([0.0, 0.0, 0.0, 1.0]), &plan).unwrap();
        for (k, c) in plan.iter().enumerate() {
            // σ_z maps D↔A and L↔R: swap outcome columns for those bases
            let expect = match c.basis {
                Basis::HV => id[k],
                _ => [id[k][1], id[k][0]],
            };
            assert!((z[k][0] - expect[0]).abs() < 1e-15 && (z[k][1] - expect[1]).abs() < 1e-15);
        }
    }

    #[test]
    fn trace_preserving_rows_sum_to_one() {
        for p in channel_zoo() {
            let b = build_channel(&p.spec).unwrap();
            let tp = b.chi.is_trace_preserving(1e-10);
            for row in sqpt_forward(&b.chi, &sqpt_plan()).unwrap() {
                if tp {
                    assert!((row[0] + row[1] - 1.0).abs() < 1e-12);
                } else {
                    assert!(row[0] + row[1] <= 1.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn design_reproduces_forward_model() {
        let plan = sqpt_plan();
        let design = sqpt_design(&plan);
        for p in channel_zoo() {
            let chi = build_channel(&p.spec).unwrap().chi;
            let direct = flatten_table(&sqpt_forward(&chi, &plan).unwrap());
            let linear = design.probabilities(chi.matrix());
            for (a, b) in direct.iter().zip(&linear) {
                assert!((a - b).abs() < 1e-14);
            }
        }
    }
}
