//! LRU cache evaluation on request traces.
//!
//! [`simulate_lru`] replays a trace through an object-counting LRU cache.
//! [`reuse_distances`] computes, in one pass, the stack distance of every
//! request; by the LRU inclusion property a request hits a cache of capacity
//! `C` iff its distance is at most `C`, so one pass yields the hit
//! probability at every capacity.

mod curve;
mod lru;
mod reuse;

pub use curve::{
    compare_required_sizes, hit_curve, size_for_hit_prob, HitCurve, RequiredSize, SizeRow,
};
pub use lru::{simulate_lru, LruResult};
pub use reuse::{reuse_distances, Distance};
