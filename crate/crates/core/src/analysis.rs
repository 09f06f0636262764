//! Trace statistics: per-content volume and effective life-span, sliced
//! popularity, Zipf fits, density maps, and the class partition that feeds
//! the shot-noise generator.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Range, RangeInclusive};

use crate::{ContentId, Error, Result, Trace};

/// Measured quantities of one content inside a trace window.
#[derive(Clone, Debug, PartialEq)]
pub struct ContentStats {
    pub content_id: ContentId,
    /// Number of requests in the trace.
    pub volume: u64,
    /// Effective life-span in days, see [`effective_lifespan`].
    pub lifespan: f64,
    pub first_request: f64,
    pub last_request: f64,
}

/// Time between the `ceil(0.1 V)`-th and `ceil(0.9 V)`-th of `V` sorted
/// request times (1-based). Zero for fewer than two requests.
pub fn effective_lifespan(sorted_times: &[f64]) -> f64 {
    let v = sorted_times.len();
    if v < 2 {
        return 0.0;
    }
    let (lo, hi) = lifespan_indices(v);
    sorted_times[hi - 1] - sorted_times[lo - 1]
}

/// 1-based order-statistic indices used by [`effective_lifespan`].
pub fn lifespan_indices(volume: usize) -> (usize, usize) {
    // Integer form of ceil(0.1 v) / ceil(0.9 v), avoiding float rounding.
    let lo = volume.div_ceil(10).max(1);
    let hi = (9 * volume).div_ceil(10).max(1);
    (lo, hi)
}

/// Per-content statistics, keyed and ordered by content id.
pub fn content_stats(trace: &Trace) -> BTreeMap<ContentId, ContentStats> {
    let mut times: HashMap<&ContentId, Vec<f64>> = HashMap::new();
    for e in &trace.events {
        times.entry(&e.content_id).or_default().push(e.timestamp);
    }
    times
        .into_iter()
        .map(|(id, mut ts)| {
            // Already sorted for valid traces; sorting keeps the estimator
            // defined on arbitrary input.
            ts.sort_by(f64::total_cmp);
            let stats = ContentStats {
                content_id: id.clone(),
                volume: ts.len() as u64,
                lifespan: effective_lifespan(&ts),
                first_request: ts[0],
                last_request: ts[ts.len() - 1],
            };
            (id.clone(), stats)
        })
        .collect()
}

/// Sequence-index ranges of `k` consecutive slices over `len` requests.
///
/// Slice `i` covers `[floor(i len / k), floor((i + 1) len / k))`.
pub fn slice_ranges(len: usize, k: usize) -> Result<Vec<Range<usize>>> {
    if k == 0 || k > len {
        return Err(Error::invalid(format!(
            "slice count {k} must be in 1..={len} (the request count)"
        )));
    }
    let bound = |i: usize| ((i as u128 * len as u128) / k as u128) as usize;
    Ok((0..k).map(|i| bound(i)..bound(i + 1)).collect())
}

/// One rank position of a [`RankDistribution`].
#[derive(Clone, Debug, PartialEq)]
pub struct RankRow {
    pub rank: usize,
    pub mean: f64,
    pub p5: f64,
    pub p95: f64,
}

/// Relative frequency of each popularity rank, aggregated over `k` slices.
#[derive(Clone, Debug, PartialEq)]
pub struct RankDistribution {
    pub k: usize,
    pub rows: Vec<RankRow>,
}

impl RankDistribution {
    /// `(rank, mean frequency)` pairs, the input expected by [`fit_zipf`].
    pub fn mean_frequencies(&self) -> Vec<(usize, f64)> {
        self.rows.iter().map(|r| (r.rank, r.mean)).collect()
    }
}

/// Nearest-rank percentile of an ascending slice.
fn nearest_rank(sorted: &[f64], pct: f64) -> f64 {
    let n = sorted.len();
    let rank = ((pct / 100.0) * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

/// Splits the trace into `k` equal-count slices, ranks contents by their
/// frequency inside each slice, and reports per rank the mean and the 5/95
/// nearest-rank percentiles of the slice-relative frequency.
///
/// Ties inside a slice are ranked by content id. A slice with fewer distinct
/// contents than `top_ranks` contributes frequency 0 to the missing ranks.
pub fn sliced_popularity(trace: &Trace, k: usize, top_ranks: usize) -> Result<RankDistribution> {
    if top_ranks == 0 {
        return Err(Error::invalid("top_ranks must be positive"));
    }
    let ranges = slice_ranges(trace.len(), k)?;
    // per_rank[n][slice] = relative frequency of rank n+1 in that slice
    let mut per_rank = vec![Vec::with_capacity(k); top_ranks];
    for range in ranges {
        let slice = &trace.events[range];
        let mut counts: HashMap<&str, u64> = HashMap::new();
        for e in slice {
            *counts.entry(e.content_id.as_str()).or_default() += 1;
        }
        let mut ranked: Vec<(&str, u64)> = counts.into_iter().collect();
        ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        let total = slice.len() as f64;
        for (n, column) in per_rank.iter_mut().enumerate() {
            let f = ranked.get(n).map_or(0.0, |&(_, c)| c as f64 / total);
            column.push(f);
        }
    }
    let rows = per_rank
        .into_iter()
        .enumerate()
        .map(|(n, mut freqs)| {
            let mean = freqs.iter().sum::<f64>() / freqs.len() as f64;
            freqs.sort_by(f64::total_cmp);
            RankRow {
                rank: n + 1,
                mean,
                p5: nearest_rank(&freqs, 5.0),
                p95: nearest_rank(&freqs, 95.0),
            }
        })
        .collect();
    Ok(RankDistribution { k, rows })
}

/// Zipf exponent of the rank/frequency points inside `rank_range`: the
/// negated least-squares slope of `ln f` against `ln n`.
pub fn fit_zipf(rank_freqs: &[(usize, f64)], rank_range: RangeInclusive<usize>) -> Result<f64> {
    let points: Vec<(f64, f64)> = rank_freqs
        .iter()
        .filter(|(n, _)| rank_range.contains(n))
        .map(|&(n, f)| {
            if f > 0.0 {
                Ok(((n as f64).ln(), f.ln()))
            } else {
                Err(Error::invalid(format!(
                    "frequency at rank {n} is not positive"
                )))
            }
        })
        .collect::<Result<_>>()?;
    if points.len() < 3 {
        return Err(Error::invalid(format!(
            "zipf fit needs at least 3 ranks in range, found {}",
            points.len()
        )));
    }
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(sxy, sxx), &(x, y)| {
        (sxy + (x - mx) * (y - my), sxx + (x - mx) * (x - mx))
    });
    Ok(-(sxy / sxx))
}

/// Volume threshold and life-span boundaries of the content classes.
///
/// Contents below the volume threshold form class 0; the others are assigned
/// classes `1..=bounds.len() + 1` by life-span, upper edges inclusive.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassBounds {
    volume_threshold: u64,
    lifespan_bounds: Vec<f64>,
}

impl Default for ClassBounds {
    fn default() -> Self {
        ClassBounds {
            volume_threshold: 10,
            lifespan_bounds: vec![2.0, 5.0, 8.0, 13.0],
        }
    }
}

impl ClassBounds {
    pub fn new(volume_threshold: u64, lifespan_bounds: Vec<f64>) -> Result<Self> {
        if lifespan_bounds.iter().any(|b| !b.is_finite()) {
            return Err(Error::invalid("life-span bounds must be finite"));
        }
        if lifespan_bounds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(
                "life-span bounds must be strictly increasing",
            ));
        }
        Ok(ClassBounds {
            volume_threshold,
            lifespan_bounds,
        })
    }

    pub fn volume_threshold(&self) -> u64 {
        self.volume_threshold
    }

    pub fn lifespan_bounds(&self) -> &[f64] {
        &self.lifespan_bounds
    }

    /// Number of classes including class 0.
    pub fn class_count(&self) -> usize {
        self.lifespan_bounds.len() + 2
    }

    pub fn classify(&self, volume: u64, lifespan: f64) -> u8 {
        if volume < self.volume_threshold {
            return 0;
        }
        let idx = self.lifespan_bounds.partition_point(|&b| b < lifespan);
        (idx + 1) as u8
    }

    /// Life-span interval `(lo, hi]` of a class; class 0 spans everything.
    pub fn interval(&self, class: u8) -> (f64, f64) {
        let b = &self.lifespan_bounds;
        match class as usize {
            0 => (0.0, f64::INFINITY),
            c => {
                let lo = if c == 1 { 0.0 } else { b[c - 2] };
                let hi = b.get(c - 1).copied().unwrap_or(f64::INFINITY);
                (lo, hi)
            }
        }
    }
}

pub fn classify_contents(
    stats: &BTreeMap<ContentId, ContentStats>,
    bounds: &ClassBounds,
) -> BTreeMap<ContentId, u8> {
    stats
        .iter()
        .map(|(id, s)| (id.clone(), bounds.classify(s.volume, s.lifespan)))
        .collect()
}

/// Table-style summary of one content class.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassSummary {
    pub class_id: u8,
    pub lifespan_bounds: (f64, f64),
    pub pct_requests: f64,
    pub pct_videos: f64,
    /// Mean effective life-span over class members, days.
    pub mean_lifespan: f64,
    /// Unweighted mean volume over class members.
    pub mean_volume: f64,
    /// Class contents per day of horizon.
    pub arrival_rate: f64,
    /// Observed volumes of the class members, ascending.
    pub volume_samples: Vec<u64>,
}

impl ClassSummary {
    pub fn content_count(&self) -> usize {
        self.volume_samples.len()
    }
}

/// Summarises every class in `bounds`, including empty ones.
///
/// Means of an empty class are reported as 0.
pub fn class_summary(
    trace: &Trace,
    classes: &BTreeMap<ContentId, u8>,
    bounds: &ClassBounds,
) -> Result<Vec<ClassSummary>> {
    let stats = content_stats(trace);
    let n_classes = bounds.class_count();
    let mut members: Vec<Vec<&ContentStats>> = vec![Vec::new(); n_classes];
    for (id, s) in &stats {
        let class = *classes
            .get(id)
            .ok_or_else(|| Error::invalid(format!("content {id} has no class")))?;
        let slot = members
            .get_mut(class as usize)
            .ok_or_else(|| Error::invalid(format!("class {class} of content {id} out of range")))?;
        slot.push(s);
    }
    if !stats.is_empty() && trace.horizon <= 0.0 {
        return Err(Error::invalid("arrival rates need a positive horizon"));
    }

    let total_requests = trace.len() as f64;
    let total_contents = stats.len() as f64;
    let pct = |part: f64, whole: f64| {
        if whole > 0.0 {
            100.0 * part / whole
        } else {
            0.0
        }
    };

    Ok(members
        .into_iter()
        .enumerate()
        .map(|(class, m)| {
            let count = m.len() as f64;
            let requests: u64 = m.iter().map(|s| s.volume).sum();
            let mean = |f: &dyn Fn(&ContentStats) -> f64| {
                if m.is_empty() {
                    0.0
                } else {
                    m.iter().map(|s| f(s)).sum::<f64>() / count
                }
            };
            let mut volume_samples: Vec<u64> = m.iter().map(|s| s.volume).collect();
            volume_samples.sort_unstable();
            ClassSummary {
                class_id: class as u8,
                lifespan_bounds: bounds.interval(class as u8),
                pct_requests: pct(requests as f64, total_requests),
                pct_videos: pct(count, total_contents),
                mean_lifespan: mean(&|s| s.lifespan),
                mean_volume: mean(&|s| s.volume as f64),
                arrival_rate: if m.is_empty() {
                    0.0
                } else {
                    count / trace.horizon
                },
                volume_samples,
            }
        })
        .collect())
}

/// 2-D histogram of (life-span, volume) over contents above a volume
/// threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMap {
    pub lifespan_bins: Vec<f64>,
    pub volume_bins: Vec<f64>,
    /// `counts[i][j]`: contents in life-span bin `i` and volume bin `j`.
    pub counts: Vec<Vec<u64>>,
}

impl DensityMap {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }
}

fn check_edges(name: &str, edges: &[f64]) -> Result<()> {
    if edges.len() < 2 {
        return Err(Error::invalid(format!("{name} needs at least two edges")));
    }
    if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(format!(
            "{name} edges must be finite and strictly increasing"
        )));
    }
    Ok(())
}

/// Bin of `x` among half-open `[e_i, e_{i+1})` bins; values outside the edges
/// land in the first or last bin.
fn bin_of(edges: &[f64], x: f64) -> usize {
    let bins = edges.len() - 1;
    edges
        .partition_point(|&e| e <= x)
        .saturating_sub(1)
        .min(bins - 1)
}

pub fn density_map(
    stats: &BTreeMap<ContentId, ContentStats>,
    volume_threshold: u64,
    lifespan_bins: &[f64],
    volume_bins: &[f64],
) -> Result<DensityMap> {
    check_edges("lifespan_bins", lifespan_bins)?;
    check_edges("volume_bins", volume_bins)?;
    let mut counts = vec![vec![0u64; volume_bins.len() - 1]; lifespan_bins.len() - 1];
    for s in stats.values().filter(|s| s.volume >= volume_threshold) {
        let i = bin_of(lifespan_bins, s.lifespan);
        let j = bin_of(volume_bins, s.volume as f64);
        counts[i][j] += 1;
    }
    Ok(DensityMap {
        lifespan_bins: lifespan_bins.to_vec(),
        volume_bins: volume_bins.to_vec(),
        counts,
    })
}
