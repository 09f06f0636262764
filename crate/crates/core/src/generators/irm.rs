use rand::Rng;

use crate::rng::rng_for;
use crate::{ContentId, Error, RequestEvent, Result, Trace};

const IRM_STREAM: u64 = 0x1a4d;

/// Independent Reference Model: a fixed catalogue with Zipf popularity.
#[derive(Clone, Debug, PartialEq)]
pub struct IrmConfig {
    pub catalogue_size: usize,
    pub alpha: f64,
    pub total_requests: usize,
    /// Days.
    pub horizon: f64,
}

impl IrmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.catalogue_size == 0 {
            return Err(Error::invalid("catalogue size must be positive"));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::invalid("alpha must be finite and non-negative"));
        }
        if self.total_requests == 0 {
            return Err(Error::invalid("total requests must be positive"));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::invalid("horizon must be positive"));
        }
        Ok(())
    }
}

/// Inverse-transform sampler over ranks `1..=n` with `P(k) ∝ k^-alpha`.
#[derive(Clone, Debug)]
pub struct ZipfSampler {
    cumulative: Vec<f64>,
}

impl ZipfSampler {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("zipf catalogue must be non-empty"));
        }
        let mut acc = 0.0;
        let cumulative = (1..=n)
            .map(|k| {
                acc += (k as f64).powf(-alpha);
                acc
            })
            .collect();
        Ok(ZipfSampler { cumulative })
    }

    pub fn len(&self) -> usize {
        self.cumulative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumulative.is_empty()
    }

    /// Probability of rank `k` (1-based).
    pub fn probability(&self, k: usize) -> f64 {
        let total = self.cumulative[self.cumulative.len() - 1];
        let prev = if k > 1 { self.cumulative[k - 2] } else { 0.0 };
        (self.cumulative[k - 1] - prev) / total
    }

    /// Draws a 1-based rank.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = self.cumulative[self.cumulative.len() - 1];
        let u = rng.random::<f64>() * total;
        let idx = self.cumulative.partition_point(|&c| c <= u);
        idx.min(self.cumulative.len() - 1) + 1
    }
}

/// `total_requests` i.i.d. Zipf draws paired with sorted uniform timestamps.
///
/// Content ids are `r<rank>`.
pub fn generate_irm(config: &IrmConfig, seed: u64) -> Result<Trace> {
    config.validate()?;
    let zipf = ZipfSampler::new(config.catalogue_size, config.alpha)?;
    let mut rng = rng_for(seed, &[IRM_STREAM]);
    let ranks: Vec<usize> = (0..config.total_requests)
        .map(|_| zipf.sample(&mut rng))
        .collect();
    let mut times: Vec<f64> = (0..config.total_requests)
        .map(|_| rng.random::<f64>() * config.horizon)
        .collect();
    times.sort_by(f64::total_cmp);

    let mut names: Vec<Option<ContentId>> = vec![None; config.catalogue_size];
    let events = ranks
        .into_iter()
        .zip(times)
        .map(|(k, t)| {
            let id = names[k - 1].get_or_insert_with(|| ContentId::from(format!("r{k}")));
            RequestEvent {
                timestamp: t,
                content_id: id.clone(),
            }
        })
        .collect();
    Ok(Trace {
        events,
        horizon: config.horizon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probabilities_sum_to_one() {
        let z = ZipfSampler::new(1000, 0.8).unwrap();
        let s: f64 = (1..=1000).map(|k| z.probability(k)).sum();
        assert!((s - 1.0).abs() < 1e-12);
        assert!((z.probability(1) / z.probability(2) - 2f64.powf(0.8)).abs() < 1e-9);
    }

    #[test]
    fn single_content_catalogue() {
        let cfg = IrmConfig {
            catalogue_size: 1,
            alpha: 0.8,
            total_requests: 50,
            horizon: 1.0,
        };
        let t = generate_irm(&cfg, 1).unwrap();
        assert!(t.events.iter().all(|e| e.content_id.as_str() == "r1"));
        assert!(crate::validate(&t).is_empty());
    }

    #[test]
    fn flat_zipf_splits_evenly() {
        let cfg = IrmConfig {
            catalogue_size: 2,
            alpha: 0.0,
            total_requests: 1_000_000,
            horizon: 10.0,
        };
        let t = generate_irm(&cfg, 11).unwrap();
        let r1 = t
            .events
            .iter()
            .filter(|e| e.content_id.as_str() == "r1")
            .count();
        let share = r1 as f64 / t.len() as f64;
        assert!((share - 0.5).abs() < 0.002, "{share}");
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = IrmConfig {
            catalogue_size: 0,
            alpha: 1.0,
            total_requests: 1,
            horizon: 1.0,
        };
        assert!(generate_irm(&cfg, 0).is_err());
    }
}
