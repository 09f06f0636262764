use crate::{Error, Result, Trace};

const NIL: u32 = u32::MAX;

/// Outcome of one LRU replay.
#[derive(Clone, Debug, PartialEq)]
pub struct LruResult {
    /// Objects.
    pub capacity: usize,
    pub requests: u64,
    pub hits: u64,
    pub hit_prob: f64,
    pub evictions: u64,
    /// Mean over evictions of (eviction time - last access of the evicted
    /// object), in days. `None` when nothing was evicted.
    pub mean_eviction_time: Option<f64>,
}

/// Recency list over dense content indices, most recent at the head.
struct Recency {
    prev: Vec<u32>,
    next: Vec<u32>,
    head: u32,
    tail: u32,
}

impl Recency {
    fn new(n: usize) -> Self {
        Recency {
            prev: vec![NIL; n],
            next: vec![NIL; n],
            head: NIL,
            tail: NIL,
        }
    }

    fn unlink(&mut self, x: u32) {
        let (p, n) = (self.prev[x as usize], self.next[x as usize]);
        if p == NIL {
            self.head = n;
        } else {
            self.next[p as usize] = n;
        }
        if n == NIL {
            self.tail = p;
        } else {
            self.prev[n as usize] = p;
        }
    }

    fn push_front(&mut self, x: u32) {
        self.prev[x as usize] = NIL;
        self.next[x as usize] = self.head;
        if self.head != NIL {
            self.prev[self.head as usize] = x;
        } else {
            self.tail = x;
        }
        self.head = x;
    }
}

/// Replays `trace` through an LRU cache holding `capacity` unit-size objects.
///
/// Every access moves the object to the most-recently-used position; a miss
/// inserts it and, when the cache is over capacity, evicts the least
/// recently used object.
pub fn simulate_lru(trace: &Trace, capacity: usize) -> Result<LruResult> {
    if capacity == 0 {
        return Err(Error::invalid("cache capacity must be at least 1"));
    }
    let (seq, names) = trace.dense_ids();
    let mut list = Recency::new(names.len());
    let mut resident = vec![false; names.len()];
    let mut last_access = vec![0.0f64; names.len()];
    let mut size = 0usize;
    let (mut hits, mut evictions) = (0u64, 0u64);
    let mut eviction_time_sum = 0.0;

    for (&x, e) in seq.iter().zip(&trace.events) {
        let now = e.timestamp;
        if resident[x as usize] {
            hits += 1;
            list.unlink(x);
        } else {
            resident[x as usize] = true;
            size += 1;
            if size > capacity {
                let victim = list.tail;
                list.unlink(victim);
                resident[victim as usize] = false;
                size -= 1;
                evictions += 1;
                eviction_time_sum += now - last_access[victim as usize];
            }
        }
        list.push_front(x);
        last_access[x as usize] = now;
    }

    let requests = seq.len() as u64;
    Ok(LruResult {
        capacity,
        requests,
        hits,
        hit_prob: if requests == 0 {
            0.0
        } else {
            hits as f64 / requests as f64
        },
        evictions,
        mean_eviction_time: (evictions > 0).then(|| eviction_time_sum / evictions as f64),
    })
}
