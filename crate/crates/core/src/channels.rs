//! Constructors for the single-qubit process suite: identity, Pauli
//! rotations, partial dephasing, partial polarizer, depolarization, T1/T2
//! relaxation and convex mixtures of these.
//!
//! Each channel comes back both as χ and as an independently constructed
//! Kraus set, so the two can be checked against each other.

use crate::error::{Error, Result};
use crate::linalg::{c, identity, kron, ComplexMatrix, ONE, ZERO};
use crate::quantum::{choi_to_chi, pauli, ChiMatrix, ChoiState, DensityMatrix, KrausSet, Polarization};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn pauli_index(self) -> usize {
        match self {
            Axis::X => 1,
            Axis::Y => 2,
            Axis::Z => 3,
        }
    }
}

/// Transmission axis of the polarizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolarizerAxis {
    #[default]
    H,
    V,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub weight: f64,
    pub spec: ChannelSpec,
}

/// A parameterized channel. JSON form: `{"kind": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelSpec {
    Identity,
    PauliRotation {
        axis: Axis,
    },
    /// `(1−q)·id + q·{Π_H, Π_V}`.
    PartialDephasing {
        q: f64,
    },
    /// `(1−q)·id + q·{|a><a|}`; trace-decreasing for `q > 0`.
    PartialPolarizer {
        q: f64,
        #[serde(default)]
        axis: PolarizerAxis,
    },
    /// `ρ → (1−p)ρ + p·Tr(ρ)·I/2`.
    Depolarizing {
        p: f64,
    },
    /// Bloch map `x,y → βx,βy`, `z → αz + 1 − α` with `α = e^{−t/T1}`,
    /// `β = e^{−t/T2}`. Decays toward `|H>`.
    Relaxation {
        t: f64,
        t1: f64,
        t2: f64,
    },
    Mixture {
        components: Vec<MixtureComponent>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuiltChannel {
    pub chi: ChiMatrix,
    pub kraus: KrausSet,
}

fn probability(name: &str, v: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&v) || v.is_nan() {
        return Err(Error::param(name, format!("{v} is outside [0, 1]")));
    }
    Ok(v)
}

impl ChannelSpec {
    pub fn relaxation_from_decay(alpha: f64, beta: f64) -> Result<ChannelSpec> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::param(name, format!("{v} is outside (0, 1]")));
            }
        }
        // t = 1 and times chosen so that exp(-1/T) hits the requested decay
        let time = |v: f64| if v == 1.0 { f64::INFINITY } else { -1.0 / v.ln() };
        Ok(ChannelSpec::Relaxation { t: 1.0, t1: time(alpha), t2: time(beta) })
    }

    /// `(α, β)` for a relaxation spec.
    pub fn decay_factors(&self) -> Option<(f64, f64)> {
        match *self {
            ChannelSpec::Relaxation { t, t1, t2 } => Some(((-t / t1).exp(), (-t / t2).exp())),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ChannelSpec::Identity | ChannelSpec::PauliRotation { .. } => Ok(()),
            ChannelSpec::PartialDephasing { q } | ChannelSpec::PartialPolarizer { q, .. } => probability("q", *q).map(|_| ()),
            ChannelSpec::Depolarizing { p } => probability("p", *p).map(|_| ()),
            ChannelSpec::Relaxation { t, t1, t2 } => {
                if !(*t >= 0.0 && t.is_finite()) {
                    return Err(Error::param("t", format!("{t} must be a finite non-negative time")));
                }
                for (name, v) in [("t1", *t1), ("t2", *t2)] {
                    if v.is_nan() || v <= 0.0 {
                        return Err(Error::param(name, format!("{v} must be positive")));
                    }
                }
                let (alpha, beta) = self.decay_factors().expect("relaxation");
                if beta * beta > alpha + 1e-12 {
                    return Err(Error::NotCompletelyPositive { alpha, beta_sq: beta * beta });
                }
                Ok(())
            }
            ChannelSpec::Mixture { components } => {
                if components.is_empty() {
                    return Err(Error::param("components", "mixture needs at least one component"));
                }
                let mut total = 0.0;
                for comp in components {
                    probability("weight", comp.weight)?;
                    comp.spec.validate()?;
                    total += comp.weight;
                }
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::param("weight", format!("mixture weights sum to {total}, expected 1")));
                }
                Ok(())
            }
        }
    }

    pub fn build(&self) -> Result<BuiltChannel> {
        build_channel(self)
    }
}

fn diag_chi(d: [f64; 4]) -> ChiMatrix {
    ChiMatrix::from_diagonal(d)
}

fn kraus(ops: Vec<ComplexMatrix>) -> KrausSet {
    KrausSet::from_raw(ops).expect("non-empty qubit Kraus set")
}

fn mix2(keep: f64, other: &BuiltChannel) -> Result<BuiltChannel> {
    let id = BuiltChannel { chi: ChiMatrix::identity(), kraus: KrausSet::identity(2) };
    let chi = ChiMatrix::combine(&[(keep, &id.chi), (1.0 - keep, &other.chi)]);
    let kraus = KrausSet::mixture(&[(keep, &id.kraus), (1.0 - keep, &other.kraus)])?;
    Ok(BuiltChannel { chi, kraus })
}

/// χ of the affine Bloch map `r → M r + offset` with `M = diag(mx, my, mz)`,
/// built through the Choi state `½ Σ E_ij ⊗ ε(E_ij)`.
pub fn bloch_map_chi(m: [f64; 3], offset: [f64; 3]) -> ChiMatrix {
    // ε on the Pauli operators: ε(I) = I + offset·σ, ε(σ_k) = m_k σ_k
    let mut image = [ComplexMatrix::zeros(2, 2), ComplexMatrix::zeros(2, 2), ComplexMatrix::zeros(2, 2), ComplexMatrix::zeros(2, 2)];
    image[0] = identity(2);
    for k in 0..3 {
        image[0] += pauli(k + 1).scale(offset[k]);
        image[k + 1] = pauli(k + 1).scale(m[k]);
    }
    // matrix units in the Pauli basis
    let unit = |i: usize, j: usize| -> [num_complex::Complex64; 4] {
        match (i, j) {
            (0, 0) => [c(0.5, 0.0), ZERO, ZERO, c(0.5, 0.0)],
            (1, 1) => [c(0.5, 0.0), ZERO, ZERO, c(-0.5, 0.0)],
            (0, 1) => [ZERO, c(0.5, 0.0), c(0.0, 0.5), ZERO],
            _ => [ZERO, c(0.5, 0.0), c(0.0, -0.5), ZERO],
        }
    };
    let mut choi = ComplexMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            let coeff = unit(i, j);
            let mut out = ComplexMatrix::zeros(2, 2);
            for k in 0..4 {
                out += &image[k] * coeff[k];
            }
            let mut e = ComplexMatrix::zeros(2, 2);
            e[(i, j)] = ONE;
            choi += kron(&e, &out).scale(0.5);
        }
    }
    let choi = ChoiState::new(DensityMatrix::from_raw(choi)).expect("4x4 Choi state");
    choi_to_chi(&choi)
}

fn relaxation_kraus(alpha: f64, beta: f64) -> KrausSet {
    // amplitude damping toward |H> (coherence √α), then pure dephasing
    // bringing the coherence down to β
    let gamma = 1.0 - alpha;
    let ad = kraus(vec![
        ComplexMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, c(alpha.sqrt(), 0.0)]),
        ComplexMatrix::from_row_slice(2, 2, &[ZERO, c(gamma.sqrt(), 0.0), ZERO, ZERO]),
    ]);
    let lambda = if alpha > 0.0 { (beta / alpha.sqrt()).min(1.0) } else { 0.0 };
    let deph = kraus(vec![
        identity(2).scale(((1.0 + lambda) / 2.0).sqrt()),
        pauli(3).scale(((1.0 - lambda) / 2.0).sqrt()),
    ]);
    deph.compose_after(&ad)
}

/// Builds χ and a matching Kraus set for `spec`.
pub fn build_channel(spec: &ChannelSpec) -> Result<BuiltChannel> {
    spec.validate()?;
    let built = match spec {
        ChannelSpec::Identity => BuiltChannel { chi: ChiMatrix::identity(), kraus: KrausSet::identity(2) },
        ChannelSpec::PauliRotation { axis } => {
            let k = axis.pauli_index();
            let mut d = [0.0; 4];
            d[k] = 1.0;
            BuiltChannel { chi: diag_chi(d), kraus: kraus(vec![pauli(k)]) }
        }
        ChannelSpec::PartialDephasing { q } => {
            let full = BuiltChannel {
                chi: diag_chi([0.5, 0.0, 0.0, 0.5]),
                kraus: kraus(vec![Polarization::H.projector(), Polarization::V.projector()]),
            };
            mix2(1.0 - q, &full)?
        }
        ChannelSpec::PartialPolarizer { q, axis } => {
            let (proj, sign) = match axis {
                PolarizerAxis::H => (Polarization::H.projector(), 1.0),
                PolarizerAxis::V => (Polarization::V.projector(), -1.0),
            };
            // |a><a| = (σ0 ± σ3)/2
            let mut m = ComplexMatrix::zeros(4, 4);
            m[(0, 0)] = c(0.25, 0.0);
            m[(3, 3)] = c(0.25, 0.0);
            m[(0, 3)] = c(0.25 * sign, 0.0);
            m[(3, 0)] = c(0.25 * sign, 0.0);
            let full = BuiltChannel { chi: ChiMatrix::from_raw(m)?, kraus: kraus(vec![proj]) };
            mix2(1.0 - q, &full)?
        }
        ChannelSpec::Depolarizing { p } => {
            let chi = diag_chi([1.0 - 0.75 * p, p / 4.0, p / 4.0, p / 4.0]);
            let mut ops = vec![identity(2).scale((1.0 - 0.75 * p).sqrt())];
            ops.extend((1..4).map(|k| pauli(k).scale((p / 4.0).sqrt())));
            BuiltChannel { chi, kraus: kraus(ops) }
        }
        ChannelSpec::Relaxation { t, .. } => {
            if *t == 0.0 {
                BuiltChannel { chi: ChiMatrix::identity(), kraus: KrausSet::identity(2) }
            } else {
                let (alpha, beta) = spec.decay_factors().expect("relaxation");
                let chi = bloch_map_chi([beta, beta, alpha], [0.0, 0.0, 1.0 - alpha]);
                BuiltChannel { chi, kraus: relaxation_kraus(alpha, beta) }
            }
        }
        ChannelSpec::Mixture { components } => {
            let parts = components.iter().map(|comp| Ok((comp.weight, build_channel(&comp.spec)?))).collect::<Result<Vec<_>>>()?;
            let chi = ChiMatrix::combine(&parts.iter().map(|(w, b)| (*w, &b.chi)).collect::<Vec<_>>());
            let kraus = KrausSet::mixture(&parts.iter().map(|(w, b)| (*w, &b.kraus)).collect::<Vec<_>>())?;
            BuiltChannel { chi, kraus }
        }
    };
    Ok(built)
}

/// A named channel preset.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub title: &'static str,
    pub spec: ChannelSpec,
}

/// The six-process suite with default strengths: identity, σ_z rotation,
/// partial dephasing (q = 0.5), partial polarizer (q = 0.5), depolarization
/// (p = 0.5) and relaxation with α = β = 0.5.
pub fn channel_zoo() -> Vec<Preset> {
    let ln2 = std::f64::consts::LN_2;
    vec![
        Preset { name: "fig3a", title: "identity", spec: ChannelSpec::Identity },
        Preset { name: "fig3b", title: "sigma_z rotation", spec: ChannelSpec::PauliRotation { axis: Axis::Z } },
        Preset { name: "fig3c", title: "partial dephasing", spec: ChannelSpec::PartialDephasing { q: 0.5 } },
        Preset {
            name: "fig3d",
            title: "partial polarizer",
            spec: ChannelSpec::PartialPolarizer { q: 0.5, axis: PolarizerAxis::H },
        },
        Preset { name: "fig3e", title: "depolarization", spec: ChannelSpec::Depolarizing { p: 0.5 } },
        Preset {
            name: "fig3f",
            title: "spin-lattice and spin-spin relaxation",
            spec: ChannelSpec::Relaxation { t: ln2, t1: 1.0, t2: 1.0 },
        },
    ]
}

/// Full-strength building blocks the partial processes are mixed from.
pub fn building_blocks() -> Vec<Preset> {
    vec![
        Preset { name: "sigma_x", title: "sigma_x rotation", spec: ChannelSpec::PauliRotation { axis: Axis::X } },
        Preset { name: "sigma_y", title: "sigma_y rotation", spec: ChannelSpec::PauliRotation { axis: Axis::Y } },
        Preset { name: "dephasing", title: "full dephasing", spec: ChannelSpec::PartialDephasing { q: 1.0 } },
        Preset {
            name: "polarizer",
            title: "polarizer",
            spec: ChannelSpec::PartialPolarizer { q: 1.0, axis: PolarizerAxis::H },
        },
        Preset { name: "depolarizer", title: "full depolarization", spec: ChannelSpec::Depolarizing { p: 1.0 } },
        Preset {
            name: "amplitude_damping",
            title: "amplitude damping (T2 = 2 T1)",
            spec: ChannelSpec::Relaxation { t: std::f64::consts::LN_2, t1: 1.0, t2: 2.0 },
        },
    ]
}

pub fn find_preset(name: &str) -> Option<Preset> {
    channel_zoo().into_iter().chain(building_blocks()).find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::quantum::{apply_chi, apply_kraus, check_physicality, kraus_to_chi, Polarization};

    fn state_grid() -> Vec<DensityMatrix> {
        let mut v: Vec<DensityMatrix> = Polarization::ALL.iter().map(|p| p.density()).collect();
        v.push(DensityMatrix::maximally_mixed(2));
        let m = Polarization::L.projector().scale(0.3) + Polarization::D.projector().scale(0.6);
        v.push(DensityMatrix::new(m).unwrap());
        v
    }

    #[test]
    fn full_dephasing_chi() {
        let b = build_channel(&ChannelSpec::PartialDephasing { q: 1.0 }).unwrap();
        assert!(b.chi.max_abs_diff(&ChiMatrix::from_diagonal([0.5, 0.0, 0.0, 0.5])) < 1e-15);
        // Kraus {Π_H, Π_V} expanded in the Pauli basis
        assert!(kraus_to_chi(&b.kraus).unwrap().max_abs_diff(&b.chi) < 1e-15);
        let b = build_channel(&ChannelSpec::PartialDephasing { q: 0.5 }).unwrap();
        assert!(b.chi.max_abs_diff(&ChiMatrix::from_diagonal([0.75, 0.0, 0.0, 0.25])) < 1e-15);
    }

    #[test]
    fn depolarizing_zero_is_identity() {
        let b = build_channel(&ChannelSpec::Depolarizing { p: 0.0 }).unwrap();
        assert_eq!(b.chi, ChiMatrix::identity());
    }

    #[test]
    fn relaxation_matches_kraus_composition_and_closed_form() {
        for (alpha, beta) in [(0.5, 0.5), (0.3, 0.3), (0.8, 0.6), (0.25, 0.5), (0.9, 0.2)] {
            let spec = ChannelSpec::relaxation_from_decay(alpha, beta).unwrap();
            let (a, b) = spec.decay_factors().unwrap();
            assert!((a - alpha).abs() < 1e-14 && (b - beta).abs() < 1e-14);
            let built = build_channel(&spec).unwrap();
            let oracle = kraus_to_chi(&relaxation_kraus(alpha, beta)).unwrap();
            assert!(built.chi.max_abs_diff(&oracle) < 1e-12, "alpha={alpha} beta={beta}");
            let d = built.chi.diagonal();
            let expected = [(1.0 + 2.0 * beta + alpha) / 4.0, (1.0 - alpha) / 4.0, (1.0 - alpha) / 4.0, (1.0 - 2.0 * beta + alpha) / 4.0];
            for k in 0..4 {
                assert!((d[k] - expected[k]).abs() < 1e-12);
            }
            // non-unital term pairs χ03 with χ30*
            assert!((built.chi.get(0, 3) - built.chi.get(3, 0).conj()).norm() < 1e-15);
            assert!(built.chi.get(0, 3).norm() > 1e-3);
        }
    }

    #[test]
    fn relaxation_rejects_non_cp() {
        // β² > α
        let spec = ChannelSpec::Relaxation { t: 1.0, t1: 1.0, t2: 5.0 };
        let err = build_channel(&spec).unwrap_err();
        assert!(matches!(err, Error::NotCompletelyPositive { .. }));
        assert!(err.to_string().contains("violates complete positivity"));
    }

    #[test]
    fn relaxation_at_time_zero_is_exact_identity() {
        let b = build_channel(&ChannelSpec::Relaxation { t: 0.0, t1: 1.0, t2: 1.5 }).unwrap();
        assert_eq!(b.chi, ChiMatrix::identity());
    }

    #[test]
    fn probabilities_out_of_range() {
        let err = build_channel(&ChannelSpec::Depolarizing { p: 1.5 }).unwrap_err();
        assert!(err.to_string().contains("`p`"));
        assert!(build_channel(&ChannelSpec::PartialPolarizer { q: -0.1, axis: PolarizerAxis::H }).is_err());
    }

    #[test]
    fn zoo_has_six_physical_presets() {
        let zoo = channel_zoo();
        assert_eq!(zoo.len(), 6);
        let names: Vec<_> = zoo.iter().map(|p| p.name).collect();
        assert_eq!(names, ["fig3a", "fig3b", "fig3c", "fig3d", "fig3e", "fig3f"]);
        for p in zoo.iter().chain(building_blocks().iter()) {
            let b = build_channel(&p.spec).unwrap();
            assert!(check_physicality(&b.chi).physical, "{}", p.name);
        }
        let (alpha, beta) = zoo[5].spec.decay_factors().unwrap();
        assert!(beta * beta <= alpha);
        assert!((alpha - 0.5).abs() < 1e-15 && (beta - 0.5).abs() < 1e-15);
    }

    #[test]
    fn chi_and_kraus_agree_on_state_grid() {
        for p in channel_zoo().into_iter().chain(building_blocks()) {
            let b = build_channel(&p.spec).unwrap();
            for rho in state_grid() {
                let x = apply_chi(&b.chi, &rho).unwrap();
                let y = apply_kraus(&b.kraus, &rho).unwrap();
                assert!(max_abs_diff(x.matrix(), y.matrix()) < 1e-12, "{}", p.name);
            }
        }
    }

    #[test]
    fn trace_behavior() {
        for p in channel_zoo().into_iter().chain(building_blocks()) {
            let b = build_channel(&p.spec).unwrap();
            let sum = b.chi.kraus_sum();
            match p.spec {
                ChannelSpec::PartialPolarizer { q, .. } => {
                    let expected = identity(2).scale(1.0 - q) + Polarization::H.projector().scale(q);
                    assert!(max_abs_diff(&sum, &expected) < 1e-10);
                }
                _ => assert!(max_abs_diff(&sum, &identity(2)) < 1e-10, "{}", p.name),
            }
        }
    }

    #[test]
    fn mixture_is_linear_in_chi() {
        let a = ChannelSpec::Relaxation { t: 0.4, t1: 1.0, t2: 0.7 };
        let b = ChannelSpec::PauliRotation { axis: Axis::Y };
        let c3 = ChannelSpec::PartialPolarizer { q: 1.0, axis: PolarizerAxis::V };
        let weights = [0.2, 0.5, 0.3];
        let mix = ChannelSpec::Mixture {
            components: [a.clone(), b.clone(), c3.clone()]
                .into_iter()
                .zip(weights)
                .map(|(spec, weight)| MixtureComponent { weight, spec })
                .collect(),
        };
        let built = build_channel(&mix).unwrap();
        let parts: Vec<ChiMatrix> = [a, b, c3].iter().map(|s| build_channel(s).unwrap().chi).collect();
        let expected = ChiMatrix::combine(&parts.iter().zip(weights).map(|(c, w)| (w, c)).collect::<Vec<_>>());
        assert!(built.chi.max_abs_diff(&expected) < 1e-12);
        for rho in state_grid() {
            let x = apply_chi(&built.chi, &rho).unwrap();
            let y = apply_kraus(&built.kraus, &rho).unwrap();
            assert!(max_abs_diff(x.matrix(), y.matrix()) < 1e-12);
        }
    }

    #[test]
    fn mixture_weights_must_sum_to_one() {
        let mix = ChannelSpec::Mixture {
            components: vec![
                MixtureComponent { weight: 0.5, spec: ChannelSpec::Identity },
                MixtureComponent { weight: 0.4, spec: ChannelSpec::Identity },
            ],
        };
        assert!(build_channel(&mix).is_err());
    }

    #[test]
    fn spec_json_shape() {
        let s = serde_json::to_string(&ChannelSpec::Depolarizing { p: 0.25 }).unwrap();
        assert_eq!(s, r#"{"kind":"depolarizing","params":{"p":0.25}}"#);
        let id: ChannelSpec = serde_json::from_str(r#"{"kind":"identity"}"#).unwrap();
        assert_eq!(id, ChannelSpec::Identity);
        let pol: ChannelSpec = serde_json::from_str(r#"{"kind":"partial_polarizer","params":{"q":0.5}}"#).unwrap();
        assert_eq!(pol, ChannelSpec::PartialPolarizer { q: 0.5, axis: PolarizerAxis::H });
        for p in channel_zoo() {
            let s = serde_json::to_string(&p.spec).unwrap();
            assert_eq!(serde_json::from_str::<ChannelSpec>(&s).unwrap(), p.spec);
        }
    }
}
