//! Shared inputs for the criterion benchmarks.

use shotnoise_core::generators::{generate_snm, measured_mix_classes, SnmConfig};
use shotnoise_core::Trace;

/// Shot-noise workload with roughly `requests` requests over 30 days.
pub fn snm_config(requests: f64, seed: u64) -> SnmConfig {
    SnmConfig {
        classes: measured_mix_classes(requests, 30.0),
        horizon: 30.0,
        seed,
        daynight: false,
    }
}

pub fn snm_trace(requests: f64, seed: u64) -> Trace {
    generate_snm(&snm_config(requests, seed)).expect("valid preset")
}
