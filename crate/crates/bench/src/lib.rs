//! Shared fixtures for the benchmarks.

use dcqd_core::channels::{build_channel, find_preset};
use dcqd_core::dcqd::{dcqd_design, dcqd_forward, flatten_table};
use dcqd_core::estimation::LikelihoodModel;
use dcqd_core::ChiMatrix;

pub fn zoo_chi(name: &str) -> ChiMatrix {
    let preset = find_preset(name).expect("zoo preset");
    build_channel(&preset.spec).expect("zoo channels are valid").chi
}

/// Expected DCQD counts for a zoo channel at `budget` pairs per config.
pub fn dcqd_model(name: &str, budget: f64) -> LikelihoodModel {
    let probs = flatten_table(&dcqd_forward(&zoo_chi(name)).expect("physical"));
    LikelihoodModel::noiseless(dcqd_design(None), &probs, budget).expect("valid model")
}
