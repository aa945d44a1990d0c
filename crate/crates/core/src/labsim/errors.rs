use crate::channels::{build_channel, Axis, ChannelSpec};
use crate::error::Result;
use crate::linalg::{identity, ComplexMatrix, I};
use crate::quantum::{pauli, KrausSet};
use serde::{Deserialize, Serialize};

/// Which photon of the pair an error acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Idler,
    Signal,
    /// Independently on each photon.
    Both,
}

/// A two-photon error channel.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ErrorMap {
    #[default]
    Identity,
    /// Polarization rotation `exp(−iθσ)` by `angle_deg` about `axis`.
    Rotation { target: Target, axis: Axis, angle_deg: f64 },
    /// `ρ → (1−p)ρ + p·I/2` on the target photon(s).
    Depolarize { target: Target, p: f64 },
    /// Any single-qubit channel on the target photon(s).
    Channel { target: Target, spec: ChannelSpec },
    /// Applied left to right.
    Sequence { maps: Vec<ErrorMap> },
}

fn rotation(axis: Axis, angle_deg: f64) -> ComplexMatrix {
    let th = angle_deg.to_radians();
    identity(2).scale(th.cos()) - pauli(axis.pauli_index()) * (I * th.sin())
}

fn lift(target: Target, single: &KrausSet) -> KrausSet {
    let id = KrausSet::identity(2);
    match target {
        Target::Idler => single.tensor(&id),
        Target::Signal => id.tensor(single),
        Target::Both => single.tensor(single),
    }
}

impl ErrorMap {
    pub fn is_identity(&self) -> bool {
        match self {
            ErrorMap::Identity => true,
            ErrorMap::Rotation { angle_deg, .. } => *angle_deg == 0.0,
            ErrorMap::Depolarize { p, .. } => *p == 0.0,
            ErrorMap::Channel { spec, .. } => *spec == ChannelSpec::Identity,
            ErrorMap::Sequence { maps } => maps.iter().all(ErrorMap::is_identity),
        }
    }

    /// Kraus operators on the 4-dimensional pair space.
    pub fn to_kraus(&self) -> Result<KrausSet> {
        Ok(match self {
            ErrorMap::Identity => KrausSet::identity(4),
            ErrorMap::Rotation { target, axis, angle_deg } => {
                lift(*target, &KrausSet::from_raw(vec![rotation(*axis, *angle_deg)])?)
            }
            ErrorMap::Depolarize { target, p } => {
                let single = build_channel(&ChannelSpec::Depolarizing { p: *p })?.kraus;
                lift(*target, &single)
            }
            ErrorMap::Channel { target, spec } => lift(*target, &build_channel(spec)?.kraus),
            ErrorMap::Sequence { maps } => {
                let mut acc = KrausSet::identity(4);
                for m in maps {
                    acc = m.to_kraus()?.compose_after(&acc);
                }
                acc
            }
        })
    }
}

/// Preparation error `ε_i` (before the process) and measurement error
/// `ε_f` (before the Bell analyzer).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ErrorModel {
    #[serde(default)]
    pub epsilon_i: ErrorMap,
    #[serde(default)]
    pub epsilon_f: ErrorMap,
}

impl ErrorModel {
    pub fn is_identity(&self) -> bool {
        self.epsilon_i.is_identity() && self.epsilon_f.is_identity()
    }

    /// Both maps must be completely positive (true by construction from
    /// Kraus operators) and trace non-increasing.
    pub fn check(&self) -> Result<()> {
        for map in [&self.epsilon_i, &self.epsilon_f] {
            let k = map.to_kraus()?;
            KrausSet::new(k.operators().to_vec())?;
        }
        Ok(())
    }
}

/// Preset systematics: a 12° polarization rotation about y on the signal at
/// preparation; an 8° rotation about x on the idler followed by 10%
/// depolarization of each photon before the Bell analyzer. Uncorrected
/// DCQD on the identity lands near F_J ≈ 0.89.
pub fn inject_default_systematics() -> ErrorModel {
    ErrorModel {
        epsilon_i: ErrorMap::Rotation { target: Target::Signal, axis: Axis::Y, angle_deg: 12.0 },
        epsilon_f: ErrorMap::Sequence {
            maps: vec![
                ErrorMap::Rotation { target: Target::Idler, axis: Axis::X, angle_deg: 8.0 },
                ErrorMap::Depolarize { target: Target::Both, p: 0.10 },
            ],
        },
    }
}
