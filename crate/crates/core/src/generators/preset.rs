use super::snm::{ClassShape, SnmClassConfig, VolumeSampler};

/// Per-class `(share of contents %, mean life-span days, mean volume)` for
/// classes 1 to 5 of the first measured trace.
const MEASURED_MIX: [(f64, f64, f64); 5] = [
    (3.17, 1.14, 86.4),
    (4.9, 3.36, 41.9),
    (2.95, 6.40, 59.5),
    (4.45, 10.53, 36.9),
    (84.58, 24.61, 25.7),
];

/// Classes 1 to 5 with the measured per-class proportions, scaled so that
/// about `total_requests` requests fall in `horizon` days.
///
/// Classes 1 to 4 use the uniform profile with a constant volume equal to the
/// class mean; class 5 is stationary.
pub fn measured_mix_classes(total_requests: f64, horizon: f64) -> Vec<SnmClassConfig> {
    let share_sum: f64 = MEASURED_MIX.iter().map(|c| c.0).sum();
    let requests_per_content: f64 = MEASURED_MIX.iter().map(|c| c.0 / share_sum * c.2).sum();
    let contents = total_requests / requests_per_content;
    MEASURED_MIX
        .iter()
        .enumerate()
        .map(|(i, &(share, lifespan, volume))| SnmClassConfig {
            class_id: i as u8 + 1,
            arrival_rate: contents * share / share_sum / horizon,
            lifespan,
            shape: if i == 4 {
                ClassShape::Stationary
            } else {
                ClassShape::Uniform
            },
            volumes: VolumeSampler::Constant(volume),
        })
        .collect()
}
