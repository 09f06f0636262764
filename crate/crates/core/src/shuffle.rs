//! Temporal-locality removal by slice-local permutation.

use rand::seq::SliceRandom;

use crate::analysis::slice_ranges;
use crate::rng::rng_for;
use crate::{ContentId, Result, Trace};

/// Randomly permutes the content ids inside each of `k` equal-count slices.
///
/// Timestamps stay in place and only ids move, so the output is sorted and
/// keeps the horizon, the per-content volumes and every slice's id multiset.
/// `k = 1` removes all temporal correlation; `k = trace.len()` is the
/// identity. Slice `i` is shuffled with a generator seeded from `(seed, i)`.
pub fn slice_shuffle(trace: &Trace, k: usize, seed: u64) -> Result<Trace> {
    let ranges = slice_ranges(trace.len(), k)?;
    let mut ids: Vec<ContentId> = trace.events.iter().map(|e| e.content_id.clone()).collect();
    for (i, range) in ranges.into_iter().enumerate() {
        let mut rng = rng_for(seed, &[i as u64]);
        ids[range].shuffle(&mut rng);
    }
    let events = trace
        .events
        .iter()
        .zip(ids)
        .map(|(e, content_id)| crate::RequestEvent {
            timestamp: e.timestamp,
            content_id,
        })
        .collect();
    Ok(Trace {
        events,
        horizon: trace.horizon,
    })
}
