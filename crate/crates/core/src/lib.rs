//! Content-request trace toolkit.
//!
//! The crate is organised around a single [`Trace`] type:
//!
//! - [`trace`]: the trace representation, its text file format and validation.
//! - [`analysis`]: per-content volume and effective life-span, sliced popularity,
//!   Zipf fitting, the volume/life-span density map and the six-class partition
//!   used to parameterise the shot-noise generator.
//! - [`shuffle`]: controlled destruction of temporal locality by permuting
//!   requests inside equal-count slices.
//! - [`generators`]: IRM and shot-noise (SNM) synthesis, including day/night
//!   modulation and a streaming scheduler.
//! - [`cache`]: LRU simulation, reuse distances and hit curves.
//! - [`report`]: CSV renderings of the analysis and cache results.

pub mod analysis;
pub mod cache;
mod error;
pub mod generators;
pub mod report;
mod rng;
pub mod shuffle;
pub mod trace;

pub use error::{Error, Result};
pub use trace::{read_trace, validate, write_trace, ContentId, RequestEvent, Trace, Violation};
