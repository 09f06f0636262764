mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use shotnoise_core::analysis::slice_ranges;
use shotnoise_core::cache::simulate_lru;
use shotnoise_core::shuffle::slice_shuffle;
use shotnoise_core::{RequestEvent, Trace};

/// Wald-Wolfowitz z-score of a binary sequence.
fn runs_z(bits: &[bool]) -> f64 {
    let n1 = bits.iter().filter(|&&b| b).count() as f64;
    let n2 = bits.len() as f64 - n1;
    let n = n1 + n2;
    let runs = 1 + bits.windows(2).filter(|w| w[0] != w[1]).count();
    let mean = 2.0 * n1 * n2 / n + 1.0;
    let var = 2.0 * n1 * n2 * (2.0 * n1 * n2 - n) / (n * n * (n - 1.0));
    (runs as f64 - mean) / var.sqrt()
}

fn blocks(per_id: usize) -> Trace {
    let events = ["1", "2", "3"]
        .iter()
        .flat_map(|id| std::iter::repeat_n(*id, per_id))
        .enumerate()
        .map(|(i, id)| RequestEvent::new(i as f64, id))
        .collect();
    Trace::from_events(events).unwrap()
}

fn dichotomize(t: &Trace) -> Vec<bool> {
    t.events
        .iter()
        .map(|e| e.content_id.as_str() == "1")
        .collect()
}

fn multiset<'a>(events: impl Iterator<Item = &'a RequestEvent>) -> BTreeMap<&'a str, usize> {
    let mut m = BTreeMap::new();
    for e in events {
        *m.entry(e.content_id.as_str()).or_default() += 1;
    }
    m
}

const CRITICAL_1PCT: f64 = 2.576;

#[test]
fn single_slice_shuffle_passes_runs_test() {
    let t = blocks(100);
    assert!(runs_z(&dichotomize(&t)).abs() >= CRITICAL_1PCT);
    let passes = (0..100)
        .filter(|&seed| {
            runs_z(&dichotomize(&slice_shuffle(&t, 1, seed).unwrap())).abs() < CRITICAL_1PCT
        })
        .count();
    assert!(passes >= 95, "{passes}/100");
}

#[test]
fn one_request_per_slice_is_identity() {
    let t = common::random_trace(4, 2000, 50);
    let s = slice_shuffle(&t, t.len(), 99).unwrap();
    assert_eq!(s, t);
    for c in [1, 10, 40] {
        assert_eq!(simulate_lru(&s, c).unwrap(), simulate_lru(&t, c).unwrap());
    }
}

#[test]
fn slice_count_out_of_range_is_rejected() {
    let t = common::random_trace(4, 50, 5);
    assert!(slice_shuffle(&t, 0, 1).is_err());
    assert!(slice_shuffle(&t, 51, 1).is_err());
}

proptest! {
    #[test]
    fn shuffle_preserves_invariants(seed in any::<u64>(), n in 1usize..500, ids in 1usize..30, kf in 0.0f64..1.0) {
        let t = common::random_trace(seed, n, ids);
        let k = 1 + (kf * (n - 1) as f64) as usize;
        let s = slice_shuffle(&t, k, seed ^ 0x55).unwrap();
        prop_assert_eq!(s.horizon, t.horizon);
        let ts_a: Vec<f64> = t.events.iter().map(|e| e.timestamp).collect();
        let ts_b: Vec<f64> = s.events.iter().map(|e| e.timestamp).collect();
        prop_assert_eq!(ts_a, ts_b);
        prop_assert_eq!(multiset(t.events.iter()), multiset(s.events.iter()));
        for r in slice_ranges(n, k).unwrap() {
            prop_assert_eq!(multiset(t.events[r.clone()].iter()), multiset(s.events[r].iter()));
        }
    }
}
