use crate::Trace;

/// LRU stack distance of one request; `None` for a first reference.
pub type Distance = Option<u64>;

/// Binary indexed tree over request positions.
struct Fenwick(Vec<i64>);

impl Fenwick {
    fn new(n: usize) -> Self {
        Fenwick(vec![0; n + 1])
    }

    fn add(&mut self, pos: usize, delta: i64) {
        let mut i = pos + 1;
        while i < self.0.len() {
            self.0[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum over positions `0..end`.
    fn prefix(&self, end: usize) -> i64 {
        let mut i = end;
        let mut s = 0;
        while i > 0 {
            s += self.0[i];
            i -= i & i.wrapping_neg();
        }
        s
    }
}

/// Stack distance of every request: the number of distinct contents
/// referenced since the previous request for the same content, itself
/// included.
///
/// Each position holding the latest reference of some content is marked in a
/// Fenwick tree, so a distance is a range count in `O(log n)`.
pub fn reuse_distances(trace: &Trace) -> Vec<Distance> {
    let (seq, names) = trace.dense_ids();
    let mut last: Vec<Option<usize>> = vec![None; names.len()];
    let mut marks = Fenwick::new(seq.len());
    seq.iter()
        .enumerate()
        .map(|(i, &x)| {
            let d = last[x as usize].map(|p| {
                marks.add(p, -1);
                (marks.prefix(i) - marks.prefix(p + 1)) as u64 + 1
            });
            marks.add(i, 1);
            last[x as usize] = Some(i);
            d
        })
        .collect()
}
