mod common;

use rand::rngs::StdRng;
use rand::SeedableRng;
use shotnoise_core::analysis::content_stats;
use shotnoise_core::generators::*;
use shotnoise_core::{validate, write_trace, Trace};

fn shot(kind: ShapeKind, lifespan: f64, v: f64) -> ContentShot {
    ContentShot {
        content_id: "s".into(),
        birth: 0.0,
        mean_volume: v,
        shape: PopularityShape::with_lifespan(kind, lifespan).unwrap(),
    }
}

fn bytes(t: &Trace) -> Vec<u8> {
    let mut b = Vec::new();
    write_trace(t, &mut b).unwrap();
    b
}

fn single_class(
    shape: ClassShape,
    rate: f64,
    lifespan: f64,
    v: f64,
    horizon: f64,
    seed: u64,
) -> SnmConfig {
    SnmConfig {
        classes: vec![SnmClassConfig {
            class_id: 2,
            arrival_rate: rate,
            lifespan,
            shape,
            volumes: VolumeSampler::Constant(v),
        }],
        horizon,
        seed,
        daynight: false,
    }
}

#[test]
fn uniform_shot_passes_ks_test() {
    // scale 5 means support [0, 10)
    let s = ContentShot {
        shape: PopularityShape::new(ShapeKind::Uniform, 5.0).unwrap(),
        ..shot(ShapeKind::Uniform, 1.0, 1e5)
    };
    let mut rng = StdRng::seed_from_u64(1);
    let mut times = sample_shot_requests(&s, 12.0, &mut rng);
    let n = times.len();
    let d = common::ks_statistic(&mut times, |t| (t / 10.0).clamp(0.0, 1.0));
    assert!(d < common::ks_critical_1pct(n), "D = {d}, n = {n}");
}

#[test]
fn exponential_shot_passes_ks_test() {
    let s = ContentShot {
        shape: PopularityShape::new(ShapeKind::Exponential, 2.0).unwrap(),
        ..shot(ShapeKind::Exponential, 1.0, 5e4)
    };
    let mut rng = StdRng::seed_from_u64(2);
    let mut times = sample_shot_requests(&s, 1e6, &mut rng);
    let n = times.len();
    let d = common::ks_statistic(&mut times, |t| 1.0 - (-t / 2.0).exp());
    assert!(d < common::ks_critical_1pct(n), "D = {d}, n = {n}");
}

#[test]
fn exponential_pooled_lifespan_matches_target() {
    let mut rng = StdRng::seed_from_u64(3);
    for l in [1.0, 3.36, 10.5] {
        let s = shot(ShapeKind::Exponential, l, 2000.0);
        let lifespans: Vec<f64> = (0..200)
            .map(|_| {
                shotnoise_core::analysis::effective_lifespan(&sample_shot_requests(
                    &s, 1e6, &mut rng,
                ))
            })
            .collect();
        let mean = lifespans.iter().sum::<f64>() / lifespans.len() as f64;
        assert!((mean / l - 1.0).abs() < 0.02, "l = {l}: {mean}");
    }
}

#[test]
fn shot_volume_is_poisson_with_mean_v() {
    let v = 40.0;
    let n = 10_000;
    let mut rng = StdRng::seed_from_u64(4);
    for kind in [ShapeKind::Uniform, ShapeKind::Exponential] {
        let s = shot(kind, 3.0, v);
        let counts: Vec<f64> = (0..n)
            .map(|_| sample_shot_requests(&s, 1e6, &mut rng).len() as f64)
            .collect();
        let mean = counts.iter().sum::<f64>() / n as f64;
        let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        assert!(
            (mean - v).abs() <= 3.0 * v.sqrt() / (n as f64).sqrt(),
            "{kind}: mean {mean}"
        );
        // Poisson dispersion: variance equals the mean up to sampling noise
        assert!((var / v - 1.0).abs() < 0.1, "{kind}: var {var}");
    }
}

#[test]
fn shapes_integrate_to_one() {
    for kind in [ShapeKind::Uniform, ShapeKind::Exponential] {
        for scale in [0.1, 1.0, 5.0, 37.0] {
            let p = PopularityShape::new(kind, scale).unwrap();
            let end = 4000.0 * scale;
            let total = match kind {
                ShapeKind::Uniform => {
                    let edge = p.support_end();
                    common::simpson(|t| p.density(t), 0.0, edge, 1000)
                        + common::simpson(|t| p.density(t), edge * (1.0 + 1e-12), end, 1000)
                }
                ShapeKind::Exponential => {
                    common::simpson(|t| p.density(t), 0.0, 40.0 * scale, 100_000)
                        + common::simpson(|t| p.density(t), 40.0 * scale, end, 100_000)
                }
            };
            assert!((total - 1.0).abs() < 1e-6, "{kind} {scale}: {total}");
            assert_eq!(p.density(-1e-9), 0.0);
        }
    }
}

#[test]
fn daynight_keeps_expected_volume() {
    // support [0, 10) covers whole days, over which f averages to one
    let s = ContentShot {
        shape: PopularityShape::new(ShapeKind::Uniform, 5.0).unwrap(),
        ..shot(ShapeKind::Uniform, 1.0, 20.0)
    };
    let mut rng = StdRng::seed_from_u64(5);
    let trials = 100_000;
    let total: usize = (0..trials)
        .map(|_| sample_shot_requests_modulated(&s, 20.0, &mut rng).len())
        .sum();
    let mean = total as f64 / trials as f64;
    assert!((mean / 20.0 - 1.0).abs() < 0.01, "{mean}");
}

#[test]
fn class_two_recovered_from_its_own_trace() {
    let (rate, l, v, h) = (10.0, 3.36, 40.0, 100.0);
    let t = generate_snm(&single_class(ClassShape::Uniform, rate, l, v, h, 6)).unwrap();
    let stats = content_stats(&t);
    // skip contents whose shot may be cut by the horizon
    let full: Vec<_> = stats
        .values()
        .filter(|s| s.first_request < h - 10.0)
        .collect();
    let n = full.len() as f64;
    let mean_l = full.iter().map(|s| s.lifespan).sum::<f64>() / n;
    let mean_v = full.iter().map(|s| s.volume as f64).sum::<f64>() / n;
    let rate_hat = stats.len() as f64 / h;
    assert!((mean_l / l - 1.0).abs() < 0.1, "{mean_l}");
    assert!((mean_v / v - 1.0).abs() < 0.1, "{mean_v}");
    assert!((rate_hat / rate - 1.0).abs() < 0.1, "{rate_hat}");
}

#[test]
fn irm_first_rank_matches_zipf_probability() {
    let cfg = IrmConfig {
        catalogue_size: 100,
        alpha: 0.8,
        total_requests: 100_000,
        horizon: 10.0,
    };
    let t = generate_irm(&cfg, 7).unwrap();
    let p1 = ZipfSampler::new(100, 0.8).unwrap().probability(1);
    let oracle = 1.0 / (1..=100).map(|k| (k as f64).powf(-0.8)).sum::<f64>();
    assert!((p1 - oracle).abs() < 1e-12);
    let hits = t
        .events
        .iter()
        .filter(|e| e.content_id.as_str() == "r1")
        .count() as f64;
    let sd = (100_000.0 * p1 * (1.0 - p1)).sqrt();
    assert!((hits - 100_000.0 * p1).abs() < 4.0 * sd, "{hits}");
    assert!(t.events.iter().all(|e| e.timestamp <= 10.0));
}

#[test]
fn stream_pending_queue_stays_bounded() {
    let (gamma, v, l) = (10.0, 40.0, 3.4);
    let cfg = single_class(ClassShape::Exponential, gamma, l, v, 60.0, 8);
    let mut stream = SnmStream::new(&cfg).unwrap();
    let mut count = 0;
    while stream.next_event().is_some() {
        count += 1;
    }
    assert!(count > 0);
    let bound = 5.0 * gamma * v * l;
    assert!(
        (stream.peak_pending() as f64) <= bound,
        "{}",
        stream.peak_pending()
    );
}

#[test]
fn same_seed_gives_same_bytes() {
    let mk = |seed| SnmConfig {
        classes: measured_mix_classes(3e4, 10.0),
        horizon: 10.0,
        seed,
        daynight: true,
    };
    let a = bytes(&generate_snm(&mk(21)).unwrap());
    let b = bytes(&generate_snm(&mk(21)).unwrap());
    let c = bytes(&generate_snm(&mk(22)).unwrap());
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn generated_traces_have_no_violations() {
    for seed in 0..5 {
        for daynight in [false, true] {
            let cfg = SnmConfig {
                classes: measured_mix_classes(1e4, 7.5),
                horizon: 7.5,
                seed,
                daynight,
            };
            assert_eq!(validate(&generate_snm(&cfg).unwrap()), vec![]);
        }
    }
}
