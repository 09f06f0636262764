mod common;

use proptest::prelude::*;
use shotnoise_core::generators::{generate_snm, measured_mix_classes, SnmConfig};
use shotnoise_core::{read_trace, validate, write_trace, RequestEvent, Trace};

fn to_bytes(t: &Trace) -> Vec<u8> {
    let mut buf = Vec::new();
    write_trace(t, &mut buf).unwrap();
    buf
}

#[test]
fn thousand_row_round_trip() {
    for seed in 0..5 {
        let t = common::random_trace(seed, 1000, 40);
        let back = read_trace(to_bytes(&t).as_slice()).unwrap();
        assert_eq!(back, t);
    }
}

#[test]
fn second_cycle_is_byte_identical() {
    let t = common::random_trace(42, 10_000, 500);
    let first = to_bytes(&t);
    let second = to_bytes(&read_trace(first.as_slice()).unwrap());
    let third = to_bytes(&read_trace(second.as_slice()).unwrap());
    assert_eq!(first, second);
    assert_eq!(second, third);
}

#[test]
fn generated_traces_validate() {
    let cfg = SnmConfig {
        classes: measured_mix_classes(2e4, 10.0),
        horizon: 10.0,
        seed: 3,
        daynight: true,
    };
    let t = generate_snm(&cfg).unwrap();
    assert!(validate(&t).is_empty());
    let back = read_trace(to_bytes(&t).as_slice()).unwrap();
    assert_eq!(back, t);
}

fn arb_trace() -> impl Strategy<Value = Trace> {
    (
        prop::collection::vec((0.0f64..1e3, "[a-z0-9_]{1,8}"), 0..60),
        0.0f64..10.0,
    )
        .prop_map(|(mut rows, extra)| {
            rows.sort_by(|a, b| a.0.total_cmp(&b.0));
            let last = rows.last().map_or(0.0, |r| r.0);
            let events = rows
                .into_iter()
                .map(|(t, id)| RequestEvent::new(t, id))
                .collect();
            Trace {
                events,
                horizon: last + extra,
            }
        })
}

proptest! {
    #[test]
    fn read_inverts_write(t in arb_trace()) {
        prop_assert!(validate(&t).is_empty());
        let back = read_trace(to_bytes(&t).as_slice()).unwrap();
        prop_assert_eq!(back, t);
    }
}
