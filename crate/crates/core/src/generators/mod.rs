//! Synthetic request traces: the Independent Reference Model and the
//! Shot Noise Model.
//!
//! Under the SNM every content `m` is born at `tau_m` (contents of a class
//! arrive as a homogeneous Poisson process) and then receives requests as an
//! inhomogeneous Poisson process of rate `V_m lambda(t - tau_m)`, where the
//! profile `lambda` is normalised and causal.

mod config;
mod irm;
mod preset;
mod shape;
mod shot;
mod snm;
mod stream;

pub use config::{read_volumes, write_volumes, ConfigFile};
pub use irm::{generate_irm, IrmConfig, ZipfSampler};
pub use preset::measured_mix_classes;
pub use shape::{scale_for_lifespan, DayNight, PopularityShape, ShapeKind};
pub use shot::{sample_shot_requests, sample_shot_requests_modulated, ContentShot};
pub use snm::{
    classes_from_summary, generate_snm, ClassShape, SnmClassConfig, SnmConfig, VolumeSampler,
    MIN_FITTED_LIFESPAN,
};
pub use stream::SnmStream;
