use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::shape::{DayNight, PopularityShape};
use crate::ContentId;

/// One content's request process: an inhomogeneous Poisson process with
/// rate `mean_volume * shape.density(t - birth)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContentShot {
    pub content_id: ContentId,
    /// Days.
    pub birth: f64,
    pub mean_volume: f64,
    pub shape: PopularityShape,
}

impl ContentShot {
    pub fn rate(&self, t: f64) -> f64 {
        self.mean_volume * self.shape.density(t - self.birth)
    }
}

pub(crate) fn poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    if mean.is_finite() && mean > 0.0 {
        Poisson::new(mean)
            .expect("finite positive mean")
            .sample(rng) as u64
    } else {
        0
    }
}

/// Draws `Poisson(rate_factor * V * F(window))` candidate offsets i.i.d. from
/// the profile truncated to the window, unsorted.
fn draw_offsets<R: Rng + ?Sized>(
    shot: &ContentShot,
    window: f64,
    rate_factor: f64,
    rng: &mut R,
) -> Vec<f64> {
    if window.is_nan() || window < 0.0 {
        return Vec::new();
    }
    let mass = shot.shape.cdf(window);
    let n = poisson(rng, rate_factor * shot.mean_volume * mass);
    (0..n)
        .map(|_| {
            let u: f64 = rng.random::<f64>() * mass;
            shot.shape.quantile(u).min(window)
        })
        .collect()
}

fn finish(shot: &ContentShot, horizon: f64, offsets: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut times: Vec<f64> = offsets.map(|d| (shot.birth + d).min(horizon)).collect();
    times.sort_by(f64::total_cmp);
    times
}

/// Request times of `shot` inside `[birth, horizon]`, ascending.
///
/// Uses the order-statistics construction: a Poisson count with mean
/// `V F(horizon - birth)`, then that many i.i.d. times from the truncated
/// profile. Requests after the horizon are never produced.
pub fn sample_shot_requests<R: Rng + ?Sized>(
    shot: &ContentShot,
    horizon: f64,
    rng: &mut R,
) -> Vec<f64> {
    let offsets = draw_offsets(shot, horizon - shot.birth, 1.0, rng);
    finish(shot, horizon, offsets.into_iter())
}

/// Like [`sample_shot_requests`] with the rate multiplied by the day/night
/// factor `f(t)`.
///
/// Candidates come from the dominating rate `2 V lambda(t - birth)` and are
/// kept with probability `f(t) / 2`.
pub fn sample_shot_requests_modulated<R: Rng + ?Sized>(
    shot: &ContentShot,
    horizon: f64,
    rng: &mut R,
) -> Vec<f64> {
    let candidates = draw_offsets(shot, horizon - shot.birth, DayNight::BOUND, rng);
    let kept: Vec<f64> = candidates
        .into_iter()
        .filter(|&d| rng.random::<f64>() < DayNight::acceptance(shot.birth + d))
        .collect();
    finish(shot, horizon, kept.into_iter())
}
