//! Hyperentanglement-assisted Bell analysis.
//!
//! Each photon carries polarization and orbital angular momentum (OAM).
//! With the OAM pair fixed in Ψ+, every polarization Bell state spreads
//! over four products of single-photon hybrid (polarization-OAM) Bell
//! states, and the four groups are disjoint. Identifying the hybrid state
//! of each photon therefore identifies the polarization Bell state.

use super::BellLabel;
use crate::linalg::{c, ket, kron_ket, ComplexVector, ZERO};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

/// Single-photon hybrid Bell states, ordered `(φ+, φ−, ψ+, ψ−)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HybridLabel {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl HybridLabel {
    pub const ALL: [HybridLabel; 4] = [HybridLabel::PhiPlus, HybridLabel::PhiMinus, HybridLabel::PsiPlus, HybridLabel::PsiMinus];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Single-photon basis index `2·pol + oam`, with pol `{H, V}` and OAM
/// `{↺, ↻}`.
const fn mode(pol: usize, oam: usize) -> usize {
    2 * pol + oam
}
const H: usize = 0;
const V: usize = 1;
const ACW: usize = 0; // ↺
const CW: usize = 1; // ↻

#[derive(Debug, Clone, PartialEq)]
pub struct HybridBellState {
    pub label: HybridLabel,
    pub vector: ComplexVector,
}

fn hybrid_vector(label: HybridLabel) -> ComplexVector {
    let r = FRAC_1_SQRT_2;
    let mut amps = [ZERO; 4];
    // ψ± = (|H↺> ± |V↻>)/√2, φ± = (|H↻> ± |V↺>)/√2
    let (first, second, sign) = match label {
        HybridLabel::PsiPlus => (mode(H, ACW), mode(V, CW), 1.0),
        HybridLabel::PsiMinus => (mode(H, ACW), mode(V, CW), -1.0),
        HybridLabel::PhiPlus => (mode(H, CW), mode(V, ACW), 1.0),
        HybridLabel::PhiMinus => (mode(H, CW), mode(V, ACW), -1.0),
    };
    amps[first] = c(r, 0.0);
    amps[second] = c(sign * r, 0.0);
    ket(&amps)
}

pub fn hybrid_bell_states() -> Vec<HybridBellState> {
    HybridLabel::ALL.iter().map(|&label| HybridBellState { label, vector: hybrid_vector(label) }).collect()
}

/// `Bell_spin ⊗ Ψ+_orbit` rearranged into photon order
/// `(pol₁, oam₁) ⊗ (pol₂, oam₂)`.
fn hyperentangled_state(bell: BellLabel) -> ComplexVector {
    let spin = bell.vector();
    let r = FRAC_1_SQRT_2;
    let orbit = ket(&[ZERO, c(r, 0.0), c(r, 0.0), ZERO]); // (|↺↻> + |↻↺>)/√2
    let mut out = ComplexVector::zeros(16);
    for p1 in 0..2 {
        for p2 in 0..2 {
            for o1 in 0..2 {
                for o2 in 0..2 {
                    let amp = spin[2 * p1 + p2] * orbit[2 * o1 + o2];
                    out[4 * mode(p1, o1) + mode(p2, o2)] = amp;
                }
            }
        }
    }
    out
}

/// Coincidence probabilities: `table[bell][4·h₁ + h₂]`.
pub fn hyper_bsa_table() -> [[f64; 16]; 4] {
    let states = hybrid_bell_states();
    let mut table = [[0.0; 16]; 4];
    for bell in BellLabel::ALL {
        let psi = hyperentangled_state(bell);
        for a in &states {
            for b in &states {
                let prod = kron_ket(&a.vector, &b.vector);
                let amp = (prod.adjoint() * &psi)[0];
                table[bell.index()][4 * a.label.index() + b.label.index()] = amp.norm_sqr();
            }
        }
    }
    table
}

/// The coincidence pairs `(photon 1 hybrid, photon 2 hybrid)` produced by a
/// polarization Bell state, with their probabilities.
pub fn hyper_bsa_decompose(bell: BellLabel) -> Vec<((HybridLabel, HybridLabel), f64)> {
    let row = hyper_bsa_table()[bell.index()];
    let mut out = Vec::with_capacity(4);
    for a in HybridLabel::ALL {
        for b in HybridLabel::ALL {
            let p = row[4 * a.index() + b.index()];
            if p > 1e-12 {
                out.push(((a, b), p));
            }
        }
    }
    out
}

/// The polarization Bell state signalled by a coincidence pair.
pub fn bsa_classify(pair: (HybridLabel, HybridLabel)) -> BellLabel {
    let table = hyper_bsa_table();
    let col = 4 * pair.0.index() + pair.1.index();
    BellLabel::ALL
        .into_iter()
        .max_by(|x, y| table[x.index()][col].total_cmp(&table[y.index()][col]))
        .expect("four Bell labels")
}
