#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use shotnoise_core::{RequestEvent, Trace};
use statrs::distribution::{ContinuousCDF, StudentsT};

/// Random sorted trace over ids `x0..x{ids}` with occasional equal timestamps.
pub fn random_trace(seed: u64, requests: usize, ids: usize) -> Trace {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut t = 0.0;
    let events = (0..requests)
        .map(|_| {
            if rng.random::<f64>() < 0.8 {
                t += rng.random::<f64>() * 0.01;
            }
            RequestEvent::new(t, format!("x{}", rng.random_range(0..ids)))
        })
        .collect();
    Trace::from_events(events).unwrap()
}

/// Textbook LRU stack: linear search for the id, move it to the top.
/// Returns the 1-based stack depth of every request (`None` on first use).
pub fn naive_stack_distances(trace: &Trace) -> Vec<Option<u64>> {
    let mut stack: Vec<&str> = Vec::new();
    trace
        .events
        .iter()
        .map(|e| {
            let id = e.content_id.as_str();
            let pos = stack.iter().position(|&s| s == id);
            if let Some(p) = pos {
                stack.remove(p);
            }
            stack.insert(0, id);
            pos.map(|p| p as u64 + 1)
        })
        .collect()
}

/// Lower end of the one-sided `level` confidence interval of the mean.
pub fn mean_lower_bound(xs: &[f64], level: f64) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let t = StudentsT::new(0.0, 1.0, n - 1.0)
        .unwrap()
        .inverse_cdf(level);
    mean - t * (var / n).sqrt()
}

/// Two-sided one-sample Kolmogorov-Smirnov statistic against `cdf`.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic 1% critical value of the KS statistic.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

/// Composite Simpson rule with `n` (even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let x = a + i as f64 * h;
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    s * h / 3.0
}
