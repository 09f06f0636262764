//! CSV renderings for external plotting. Every table starts with a header
//! line naming its columns.

use std::collections::BTreeMap;
use std::io::Write;

use crate::analysis::{ClassSummary, ContentStats, DensityMap, RankDistribution};
use crate::cache::{HitCurve, LruResult, SizeRow};
use crate::{ContentId, Result, Trace};

pub fn write_content_stats<W: Write>(
    stats: &BTreeMap<ContentId, ContentStats>,
    mut w: W,
) -> Result<()> {
    writeln!(w, "content_id,volume,lifespan,first_request,last_request")?;
    for s in stats.values() {
        writeln!(
            w,
            "{},{},{},{},{}",
            s.content_id, s.volume, s.lifespan, s.first_request, s.last_request
        )?;
    }
    Ok(())
}

pub fn write_rank_distribution<W: Write>(d: &RankDistribution, mut w: W) -> Result<()> {
    writeln!(w, "rank,mean,p5,p95")?;
    for r in &d.rows {
        writeln!(w, "{},{},{},{}", r.rank, r.mean, r.p5, r.p95)?;
    }
    Ok(())
}

pub fn write_density_map<W: Write>(d: &DensityMap, mut w: W) -> Result<()> {
    writeln!(w, "l_bin_lo,l_bin_hi,v_bin_lo,v_bin_hi,count")?;
    for (i, row) in d.counts.iter().enumerate() {
        for (j, count) in row.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{}",
                d.lifespan_bins[i],
                d.lifespan_bins[i + 1],
                d.volume_bins[j],
                d.volume_bins[j + 1],
                count
            )?;
        }
    }
    Ok(())
}

pub fn write_class_summary<W: Write>(rows: &[ClassSummary], mut w: W) -> Result<()> {
    writeln!(
        w,
        "class,lmin_days,lmax_days,pct_reqs,pct_videos,mean_lifespan,mean_volume,arrival_rate"
    )?;
    for s in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            s.class_id,
            s.lifespan_bounds.0,
            s.lifespan_bounds.1,
            s.pct_requests,
            s.pct_videos,
            s.mean_lifespan,
            s.mean_volume,
            s.arrival_rate
        )?;
    }
    Ok(())
}

/// Per-request running count for each of `ids`, in trace order.
pub fn write_cumulative_requests<W: Write>(
    trace: &Trace,
    ids: &[ContentId],
    mut w: W,
) -> Result<()> {
    writeln!(w, "content_id,timestamp,cumulative_requests")?;
    let mut counts: BTreeMap<&str, u64> = ids.iter().map(|id| (id.as_str(), 0)).collect();
    for e in &trace.events {
        if let Some(c) = counts.get_mut(e.content_id.as_str()) {
            *c += 1;
            writeln!(w, "{},{},{}", e.content_id, e.timestamp, c)?;
        }
    }
    Ok(())
}

/// `capacity,hit_prob`, plus `mean_eviction_time` when LRU replays are given
/// (one per curve point, same order). Missing eviction times are left empty.
pub fn write_hit_curve<W: Write>(
    curve: &HitCurve,
    eviction: Option<&[LruResult]>,
    mut w: W,
) -> Result<()> {
    match eviction {
        None => {
            writeln!(w, "capacity,hit_prob")?;
            for (c, p) in &curve.points {
                writeln!(w, "{c},{p}")?;
            }
        }
        Some(sims) => {
            writeln!(w, "capacity,hit_prob,mean_eviction_time")?;
            for ((c, p), sim) in curve.points.iter().zip(sims) {
                let ev = sim
                    .mean_eviction_time
                    .map(|t| t.to_string())
                    .unwrap_or_default();
                writeln!(w, "{c},{p},{ev}")?;
            }
        }
    }
    Ok(())
}

pub fn write_required_sizes<W: Write>(rows: &[SizeRow], mut w: W) -> Result<()> {
    writeln!(w, "trace_label,target,required_size")?;
    for r in rows {
        writeln!(w, "{},{},{}", r.label, r.target, r.size)?;
    }
    Ok(())
}
