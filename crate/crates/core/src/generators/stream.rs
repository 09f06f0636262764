use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::shape::PopularityShape;
use super::snm::{
    shot_requests, BirthSource, Scheduled, SnmClassConfig, SnmConfig, StationarySource,
};
use crate::{Error, RequestEvent, Result};

struct ShotClass {
    config: SnmClassConfig,
    profile: PopularityShape,
    births: BirthSource,
}

/// Event-driven shot-noise generator.
///
/// Requests are scheduled ahead of time: when a content is born, all of its
/// requests go into a min-heap, and events are released in global time order
/// once no pending birth can precede them. Each event costs `O(log M)` for
/// `M` pending requests. The output equals [`generate_snm`](super::generate_snm)
/// for the same configuration.
pub struct SnmStream {
    seed: u64,
    horizon: f64,
    daynight: bool,
    shots: Vec<ShotClass>,
    stationary: Vec<StationarySource>,
    pending: BinaryHeap<Reverse<Scheduled>>,
    // index into `stationary` for heap entries that came from a stationary source
    stationary_slot: Vec<(u8, usize)>,
    peak_pending: usize,
}

impl SnmStream {
    /// Builds the scheduler. A zero horizon is accepted and yields no events.
    pub fn new(config: &SnmConfig) -> Result<Self> {
        if config.classes.is_empty() {
            return Err(Error::config("class", "at least one class is required"));
        }
        if !(config.horizon.is_finite() && config.horizon >= 0.0) {
            return Err(Error::config("horizon_days", "must be non-negative"));
        }
        if config.horizon > 0.0 {
            config.validate()?;
        }
        let mut stream = SnmStream {
            seed: config.seed,
            horizon: config.horizon,
            daynight: config.daynight,
            shots: Vec::new(),
            stationary: Vec::new(),
            pending: BinaryHeap::new(),
            stationary_slot: Vec::new(),
            peak_pending: 0,
        };
        if config.horizon == 0.0 {
            return Ok(stream);
        }
        for class in &config.classes {
            match class.profile() {
                Some(profile) => stream.shots.push(ShotClass {
                    births: BirthSource::new(config.seed, class, config.horizon),
                    config: class.clone(),
                    profile,
                }),
                None => {
                    let idx = stream.stationary.len();
                    stream.stationary_slot.push((class.class_id, idx));
                    stream.stationary.push(StationarySource::new(
                        config.seed,
                        class,
                        config.horizon,
                        config.daynight,
                    ));
                    stream.refill_stationary(idx);
                }
            }
        }
        Ok(stream)
    }

    /// Number of requests currently scheduled in the future.
    pub fn pending(&self) -> usize {
        self.pending.len()
    }

    /// Largest pending-queue size seen so far.
    pub fn peak_pending(&self) -> usize {
        self.peak_pending
    }

    fn push(&mut self, s: Scheduled) {
        self.pending.push(Reverse(s));
        self.peak_pending = self.peak_pending.max(self.pending.len());
    }

    fn refill_stationary(&mut self, idx: usize) {
        if let Some(s) = self.stationary[idx].next_request() {
            self.push(s);
        }
    }

    /// Shot class holding the earliest pending birth, ties to the lower class id.
    fn next_birth(&self) -> Option<(usize, f64)> {
        self.shots
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.births.peek().map(|t| (i, t, c.config.class_id)))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.2.cmp(&b.2)))
            .map(|(i, t, _)| (i, t))
    }

    fn admit_birth(&mut self, class_idx: usize) {
        let c = &mut self.shots[class_idx];
        let (birth, serial) = c.births.pop().expect("peeked birth");
        let (id, times) = shot_requests(
            self.seed,
            &c.config,
            c.profile,
            birth,
            serial,
            self.horizon,
            self.daynight,
        );
        let class = c.config.class_id;
        for (i, time) in times.into_iter().enumerate() {
            self.push(Scheduled {
                time,
                class,
                serial,
                seq: i as u64,
                id: id.clone(),
            });
        }
    }

    /// Next request in timestamp order, or `None` at end of stream.
    pub fn next_event(&mut self) -> Option<RequestEvent> {
        loop {
            let head = self.pending.peek().map(|r| r.0.time);
            match (self.next_birth(), head) {
                // a content born no later than the head may schedule earlier requests
                (Some((idx, birth)), Some(h)) if birth <= h => self.admit_birth(idx),
                (Some((idx, _)), None) => self.admit_birth(idx),
                (_, Some(_)) => {
                    let Reverse(s) = self.pending.pop().expect("peeked head");
                    if let Some(&(_, idx)) =
                        self.stationary_slot.iter().find(|(c, _)| *c == s.class)
                    {
                        self.refill_stationary(idx);
                    }
                    return Some(s.into_event());
                }
                (None, None) => return None,
            }
        }
    }
}

impl Iterator for SnmStream {
    type Item = RequestEvent;

    fn next(&mut self) -> Option<RequestEvent> {
        self.next_event()
    }
}
