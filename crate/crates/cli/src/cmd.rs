use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use rayon::prelude::*;
use shotnoise_core::analysis::{
    class_summary, classify_contents, content_stats, density_map, sliced_popularity, ClassBounds,
};
use shotnoise_core::cache::{
    compare_required_sizes, hit_curve, reuse_distances, simulate_lru, LruResult,
};
use shotnoise_core::generators::{
    classes_from_summary, generate_irm, generate_snm, write_volumes, ConfigFile, IrmConfig,
    ShapeKind, VolumeSampler,
};
use shotnoise_core::shuffle::slice_shuffle;
use shotnoise_core::{report, write_trace, ContentId};

use crate::output::{load_trace, write_atomic};

#[derive(Subcommand)]
pub enum Command {
    /// Per-content statistics, sliced popularity, density map and
    /// cumulative request series.
    Analyze(AnalyzeArgs),
    /// Fit shot-noise class parameters and write a generation config.
    Fit(FitArgs),
    /// Generate a synthetic trace from a config file or IRM parameters.
    Generate(GenerateArgs),
    /// Permute requests inside equal-count slices.
    Shuffle(ShuffleArgs),
    /// LRU hit curves and required cache sizes.
    Evaluate(EvaluateArgs),
}

#[derive(Args)]
pub struct AnalyzeArgs {
    trace: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    slices: usize,
    #[arg(long, default_value_t = 100)]
    top: usize,
    /// Volume threshold of the density map.
    #[arg(long, default_value_t = 10)]
    threshold: u64,
    /// Life-span bin edges in days (default: whole days over the horizon).
    #[arg(long, value_delimiter = ',')]
    lifespan_bins: Option<Vec<f64>>,
    /// Volume bin edges (default: doubling from the threshold).
    #[arg(long, value_delimiter = ',')]
    volume_bins: Option<Vec<f64>>,
    /// Content ids whose cumulative request series is written.
    #[arg(long, value_delimiter = ',')]
    ids: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShotShape {
    Uniform,
    Exponential,
}

impl From<ShotShape> for ShapeKind {
    fn from(s: ShotShape) -> Self {
        match s {
            ShotShape::Uniform => ShapeKind::Uniform,
            ShotShape::Exponential => ShapeKind::Exponential,
        }
    }
}

#[derive(Args)]
pub struct FitArgs {
    trace: PathBuf,
    /// Output directory for snm.conf, class_summary.csv and volume files.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 10)]
    threshold: u64,
    /// Life-span class boundaries in days.
    #[arg(long, value_delimiter = ',', default_value = "2,5,8,13")]
    bounds: Vec<f64>,
    /// Profile of the non-stationary classes.
    #[arg(long, value_enum, default_value_t = ShotShape::Uniform)]
    shape: ShotShape,
    /// Seed recorded in the emitted config.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Switch::Off)]
    daynight: Switch,
}

#[derive(Args)]
pub struct GenerateArgs {
    /// SNM config file (omit with --irm).
    config: Option<PathBuf>,
    /// Output trace file.
    #[arg(long)]
    out: PathBuf,
    /// Overrides the config seed; required with --irm.
    #[arg(long)]
    seed: Option<u64>,
    /// IRM trace: catalogue size, alpha, request count, horizon in days.
    #[arg(
        long,
        value_delimiter = ',',
        num_args = 1,
        value_name = "N,ALPHA,R,HORIZON"
    )]
    irm: Option<Vec<String>>,
    /// Overrides the config daynight setting.
    #[arg(long, value_enum)]
    daynight: Option<Switch>,
    /// Overrides the config horizon, in days.
    #[arg(long)]
    horizon: Option<f64>,
}

#[derive(Args)]
pub struct ShuffleArgs {
    trace: PathBuf,
    #[arg(long)]
    slices: usize,
    #[arg(long)]
    seed: u64,
    /// Output trace file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
pub struct EvaluateArgs {
    #[arg(required = true)]
    traces: Vec<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.15,0.2,0.25")]
    targets: Vec<f64>,
    /// Cache sizes of the hit curves (default: 1-2-5 series up to the
    /// number of distinct contents).
    #[arg(long, value_delimiter = ',')]
    capacities: Option<Vec<usize>>,
    /// Trace labels (default: file stems).
    #[arg(long, value_delimiter = ',')]
    labels: Option<Vec<String>>,
    /// Add the mean eviction time of an LRU replay at every capacity.
    #[arg(long)]
    eviction_stats: bool,
}

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Analyze(a) => analyze(a),
        Command::Fit(a) => fit(a),
        Command::Generate(a) => generate(a),
        Command::Shuffle(a) => shuffle(a),
        Command::Evaluate(a) => evaluate(a),
    }
}

/// Default density-map edges: whole days and doubling volumes, both wide
/// enough to cover the observed range.
pub fn default_bins(horizon: f64, max_volume: u64, threshold: u64) -> (Vec<f64>, Vec<f64>) {
    let days = horizon.ceil().max(1.0) as usize;
    let lifespan: Vec<f64> = (0..=days).map(|d| d as f64).collect();
    let mut volume = vec![threshold.max(1) as f64];
    while *volume.last().unwrap() <= max_volume as f64 {
        let next = volume.last().unwrap() * 2.0;
        volume.push(next);
    }
    if volume.len() < 2 {
        volume.push(volume[0] * 2.0);
    }
    (lifespan, volume)
}

fn analyze(a: AnalyzeArgs) -> Result<()> {
    let trace = load_trace(&a.trace)?;
    let stats = content_stats(&trace);
    let max_volume = stats.values().map(|s| s.volume).max().unwrap_or(0);
    let (lb, vb) = default_bins(trace.horizon, max_volume, a.threshold);
    let lifespan_bins = a.lifespan_bins.unwrap_or(lb);
    let volume_bins = a.volume_bins.unwrap_or(vb);

    let ranks = sliced_popularity(&trace, a.slices, a.top)?;
    let density = density_map(&stats, a.threshold, &lifespan_bins, &volume_bins)?;

    write_atomic(&a.out.join("content_stats.csv"), |w| {
        report::write_content_stats(&stats, w)
    })?;
    write_atomic(&a.out.join("rank_distribution.csv"), |w| {
        report::write_rank_distribution(&ranks, w)
    })?;
    write_atomic(&a.out.join("density_map.csv"), |w| {
        report::write_density_map(&density, w)
    })?;
    if !a.ids.is_empty() {
        let ids: Vec<ContentId> = a.ids.iter().map(|s| ContentId::from(s.as_str())).collect();
        write_atomic(&a.out.join("cumulative_requests.csv"), |w| {
            report::write_cumulative_requests(&trace, &ids, w)
        })?;
    }
    Ok(())
}

fn fit(a: FitArgs) -> Result<()> {
    let trace = load_trace(&a.trace)?;
    ensure!(
        !trace.is_empty(),
        "{} has no contents to fit",
        a.trace.display()
    );
    let bounds = ClassBounds::new(a.threshold, a.bounds)?;
    let stats = content_stats(&trace);
    let classes = classify_contents(&stats, &bounds);
    let summary = class_summary(&trace, &classes, &bounds)?;
    let config = ConfigFile {
        horizon: trace.horizon,
        seed: a.seed,
        daynight: matches!(a.daynight, Switch::On),
        classes: classes_from_summary(&summary, &bounds, a.shape.into()),
    };

    write_atomic(&a.out.join("class_summary.csv"), |w| {
        report::write_class_summary(&summary, w)
    })?;
    for class in &config.classes {
        if let VolumeSampler::Empirical(samples) = &class.volumes {
            write_atomic(&a.out.join(volume_file(class.class_id)), |w| {
                write_volumes(samples, w)
            })?;
        }
    }
    let text = config.render(volume_file);
    write_atomic(&a.out.join("snm.conf"), |w| {
        Ok(w.write_all(text.as_bytes())?)
    })?;
    Ok(())
}

fn volume_file(class: u8) -> String {
    format!("{class}.volumes")
}

fn parse_irm(fields: &[String]) -> Result<IrmConfig> {
    let [n, alpha, r, h] = fields else {
        bail!("--irm expects N,ALPHA,R,HORIZON");
    };
    Ok(IrmConfig {
        catalogue_size: n
            .parse()
            .with_context(|| format!("--irm catalogue size {n:?}"))?,
        alpha: alpha
            .parse()
            .with_context(|| format!("--irm alpha {alpha:?}"))?,
        total_requests: r
            .parse()
            .with_context(|| format!("--irm request count {r:?}"))?,
        horizon: h.parse().with_context(|| format!("--irm horizon {h:?}"))?,
    })
}

fn generate(a: GenerateArgs) -> Result<()> {
    let trace = match (&a.irm, &a.config) {
        (Some(_), Some(_)) => bail!("give either a config file or --irm, not both"),
        (None, None) => bail!("a config file or --irm is required"),
        (Some(fields), None) => {
            let seed = a.seed.context("--seed is required with --irm")?;
            let mut cfg = parse_irm(fields)?;
            if let Some(h) = a.horizon {
                cfg.horizon = h;
            }
            generate_irm(&cfg, seed)?
        }
        (None, Some(path)) => {
            let mut file =
                ConfigFile::read(path).with_context(|| format!("config {}", path.display()))?;
            if let Some(h) = a.horizon {
                file.horizon = h;
            }
            if let Some(d) = a.daynight {
                file.daynight = matches!(d, Switch::On);
            }
            let cfg = file
                .into_config(a.seed)
                .with_context(|| format!("config {}", path.display()))?;
            generate_snm(&cfg)?
        }
    };
    write_atomic(&a.out, |w| write_trace(&trace, w))
}

fn shuffle(a: ShuffleArgs) -> Result<()> {
    let trace = load_trace(&a.trace)?;
    let shuffled = slice_shuffle(&trace, a.slices, a.seed)?;
    write_atomic(&a.out, |w| write_trace(&shuffled, w))
}

/// 1, 2, 5, 10, 20, 50, ... up to and including `max`.
pub fn default_capacities(max: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut decade = 1usize;
    'outer: loop {
        for m in [1, 2, 5] {
            let c = m * decade;
            if c >= max {
                break 'outer;
            }
            out.push(c);
        }
        decade *= 10;
    }
    out.push(max.max(1));
    out
}

fn label_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn evaluate(a: EvaluateArgs) -> Result<()> {
    let labels = match a.labels {
        Some(l) => {
            ensure!(
                l.len() == a.traces.len(),
                "expected {} labels, got {}",
                a.traces.len(),
                l.len()
            );
            l
        }
        None => a.traces.iter().map(|p| label_of(p)).collect(),
    };
    let mut seen = std::collections::HashSet::new();
    for l in &labels {
        ensure!(seen.insert(l.as_str()), "duplicate trace label {l:?}");
    }
    let traces = a
        .traces
        .iter()
        .map(|p| load_trace(p))
        .collect::<Result<Vec<_>>>()?;
    for (t, p) in traces.iter().zip(&a.traces) {
        ensure!(!t.is_empty(), "{} has no requests", p.display());
    }
    if let Some(caps) = &a.capacities {
        ensure!(caps.iter().all(|&c| c > 0), "capacities must be positive");
    }

    let per_trace: Vec<_> = traces
        .par_iter()
        .map(|t| -> Result<_> {
            let distances = reuse_distances(t);
            let caps = match &a.capacities {
                Some(c) => {
                    let mut c = c.clone();
                    c.sort_unstable();
                    c.dedup();
                    c
                }
                None => default_capacities(t.distinct_contents()),
            };
            let curve = hit_curve(&distances, &caps);
            let sims = if a.eviction_stats {
                Some(
                    caps.par_iter()
                        .map(|&c| simulate_lru(t, c))
                        .collect::<shotnoise_core::Result<Vec<LruResult>>>()?,
                )
            } else {
                None
            };
            Ok((curve, sims))
        })
        .collect::<Result<_>>()?;

    for (label, (curve, sims)) in labels.iter().zip(&per_trace) {
        write_atomic(&a.out.join(format!("hit_curve_{label}.csv")), |w| {
            report::write_hit_curve(curve, sims.as_deref(), w)
        })?;
    }
    let labelled: Vec<(&str, &shotnoise_core::Trace)> = labels
        .iter()
        .map(String::as_str)
        .zip(traces.iter())
        .collect();
    let rows = compare_required_sizes(&labelled, &a.targets)?;
    write_atomic(&a.out.join("required_sizes.csv"), |w| {
        report::write_required_sizes(&rows, w)
    })?;
    Ok(())
}
