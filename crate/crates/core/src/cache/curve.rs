use std::fmt;

use super::reuse::{reuse_distances, Distance};
use crate::{Error, Result, Trace};

/// Hit probability at each requested capacity.
#[derive(Clone, Debug, PartialEq)]
pub struct HitCurve {
    pub points: Vec<(usize, f64)>,
}

/// Number of requests with distance at most `c`, for every `c` in
/// `0..=max distance`.
fn cumulative_hits(distances: &[Distance]) -> Vec<u64> {
    let max = distances.iter().flatten().copied().max().unwrap_or(0) as usize;
    let mut hist = vec![0u64; max + 1];
    for d in distances.iter().flatten() {
        hist[*d as usize] += 1;
    }
    let mut acc = 0;
    hist.iter()
        .map(|h| {
            acc += h;
            acc
        })
        .collect()
}

/// `hit_prob(C) = |{requests with distance <= C}| / requests` at each
/// capacity.
pub fn hit_curve(distances: &[Distance], capacities: &[usize]) -> HitCurve {
    let cum = cumulative_hits(distances);
    let total = distances.len() as f64;
    let points = capacities
        .iter()
        .map(|&c| {
            let hits = cum[c.min(cum.len() - 1)];
            (
                c,
                if total > 0.0 {
                    hits as f64 / total
                } else {
                    0.0
                },
            )
        })
        .collect();
    HitCurve { points }
}

/// Smallest capacity reaching a target hit probability.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RequiredSize {
    Capacity(usize),
    /// Compulsory misses keep the hit probability below the target at every
    /// capacity.
    Unattainable,
}

impl fmt::Display for RequiredSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RequiredSize::Capacity(c) => write!(f, "{c}"),
            RequiredSize::Unattainable => f.write_str("unattainable"),
        }
    }
}

impl RequiredSize {
    pub fn capacity(self) -> Option<usize> {
        match self {
            RequiredSize::Capacity(c) => Some(c),
            RequiredSize::Unattainable => None,
        }
    }
}

/// Minimal capacity `C` with `hit_prob(C) >= target`, by binary search over
/// the cumulative distance histogram.
pub fn size_for_hit_prob(distances: &[Distance], target: f64) -> Result<RequiredSize> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::invalid(format!(
            "target hit probability {target} not in (0, 1)"
        )));
    }
    let cum = cumulative_hits(distances);
    let total = distances.len() as f64;
    // hit_prob(c) >= target  <=>  hits(c) >= target * total
    let c = cum.partition_point(|&h| (h as f64) < target * total);
    Ok(if c < cum.len() && total > 0.0 {
        RequiredSize::Capacity(c.max(1))
    } else {
        RequiredSize::Unattainable
    })
}

/// One cell of a required-size comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct SizeRow {
    pub label: String,
    pub target: f64,
    pub size: RequiredSize,
}

/// Required cache size for every (trace, target) pair.
pub fn compare_required_sizes(traces: &[(&str, &Trace)], targets: &[f64]) -> Result<Vec<SizeRow>> {
    let mut rows = Vec::with_capacity(traces.len() * targets.len());
    for &(label, trace) in traces {
        if trace.is_empty() {
            return Err(Error::invalid(format!("trace {label:?} has no requests")));
        }
        let d = reuse_distances(trace);
        for &target in targets {
            rows.push(SizeRow {
                label: label.to_string(),
                target,
                size: size_for_hit_prob(&d, target)?,
            });
        }
    }
    Ok(rows)
}
