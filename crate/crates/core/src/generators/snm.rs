use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp};

use super::shape::{DayNight, PopularityShape, ShapeKind};
use super::shot::{poisson, sample_shot_requests, sample_shot_requests_modulated, ContentShot};
use crate::analysis::{ClassBounds, ClassSummary};
use crate::rng::{rng_for, Rng as StdRng};
use crate::{ContentId, Error, RequestEvent, Result, Trace};

const BIRTHS: u64 = 1;
const CONTENT: u64 = 2;
const STATIONARY: u64 = 3;

/// Smallest life-span used when a fitted class reports zero.
pub const MIN_FITTED_LIFESPAN: f64 = 1e-6;

/// Temporal profile of the contents of a class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassShape {
    Exponential,
    Uniform,
    /// Requests spread uniformly over the whole horizon (IRM-like).
    Stationary,
}

impl ClassShape {
    pub fn shot_kind(self) -> Option<ShapeKind> {
        match self {
            ClassShape::Exponential => Some(ShapeKind::Exponential),
            ClassShape::Uniform => Some(ShapeKind::Uniform),
            ClassShape::Stationary => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassShape::Exponential => "exponential",
            ClassShape::Uniform => "uniform",
            ClassShape::Stationary => "stationary",
        }
    }
}

impl From<ShapeKind> for ClassShape {
    fn from(kind: ShapeKind) -> Self {
        match kind {
            ShapeKind::Exponential => ClassShape::Exponential,
            ShapeKind::Uniform => ClassShape::Uniform,
        }
    }
}

impl fmt::Display for ClassShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stationary" => Ok(ClassShape::Stationary),
            other => other.parse::<ShapeKind>().map(ClassShape::from),
        }
    }
}

/// Source of per-content mean volumes `V_m`.
#[derive(Clone, Debug, PartialEq)]
pub enum VolumeSampler {
    /// Uniform resampling of observed volumes.
    Empirical(Vec<u64>),
    Constant(f64),
}

impl VolumeSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            VolumeSampler::Empirical(v) => v[rng.random_range(0..v.len())] as f64,
            VolumeSampler::Constant(c) => *c,
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            VolumeSampler::Empirical(v) => v.iter().sum::<u64>() as f64 / v.len() as f64,
            VolumeSampler::Constant(c) => *c,
        }
    }
}

/// Generation parameters of one content class.
#[derive(Clone, Debug, PartialEq)]
pub struct SnmClassConfig {
    pub class_id: u8,
    /// New contents per day.
    pub arrival_rate: f64,
    /// Target effective life-span in days; ignored by stationary classes.
    pub lifespan: f64,
    pub shape: ClassShape,
    pub volumes: VolumeSampler,
}

impl SnmClassConfig {
    pub fn validate(&self) -> Result<()> {
        let field = |name: &str| format!("class {} {name}", self.class_id);
        if !(self.arrival_rate.is_finite() && self.arrival_rate > 0.0) {
            return Err(Error::config(field("arrival_rate"), "must be positive"));
        }
        if self.shape != ClassShape::Stationary
            && !(self.lifespan.is_finite() && self.lifespan > 0.0)
        {
            return Err(Error::config(field("lifespan_days"), "must be positive"));
        }
        match &self.volumes {
            VolumeSampler::Empirical(v) if v.is_empty() => {
                Err(Error::config(field("volumes"), "empty volume sample"))
            }
            VolumeSampler::Constant(c) if !(c.is_finite() && *c > 0.0) => Err(Error::config(
                field("volumes"),
                "constant volume must be positive",
            )),
            _ => Ok(()),
        }
    }

    pub(crate) fn profile(&self) -> Option<PopularityShape> {
        self.shape
            .shot_kind()
            .map(|k| PopularityShape::with_lifespan(k, self.lifespan).expect("validated life-span"))
    }
}

/// A complete shot-noise generation setup.
#[derive(Clone, Debug, PartialEq)]
pub struct SnmConfig {
    pub classes: Vec<SnmClassConfig>,
    /// Days.
    pub horizon: f64,
    pub seed: u64,
    pub daynight: bool,
}

impl SnmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.classes.is_empty() {
            return Err(Error::config("class", "at least one class is required"));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::config("horizon_days", "must be positive"));
        }
        let mut seen = Vec::new();
        for c in &self.classes {
            if seen.contains(&c.class_id) {
                return Err(Error::config(
                    "class",
                    format!("class {} listed twice", c.class_id),
                ));
            }
            seen.push(c.class_id);
            c.validate()?;
        }
        Ok(())
    }
}

pub(crate) fn content_id(class: u8, serial: u64) -> ContentId {
    ContentId::from(format!("c{class}_{serial}"))
}

/// Total order on generated requests: time, then class, content serial and
/// per-source sequence number. Batch and streaming generation both emit in
/// this order.
#[derive(Clone, Debug)]
pub(crate) struct Scheduled {
    pub time: f64,
    pub class: u8,
    pub serial: u64,
    pub seq: u64,
    pub id: ContentId,
}

impl Scheduled {
    pub fn into_event(self) -> RequestEvent {
        RequestEvent {
            timestamp: self.time,
            content_id: self.id,
        }
    }
}

impl PartialEq for Scheduled {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scheduled {}

impl PartialOrd for Scheduled {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scheduled {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.class.cmp(&other.class))
            .then(self.serial.cmp(&other.serial))
            .then(self.seq.cmp(&other.seq))
    }
}

/// Homogeneous Poisson content births of one shot class.
pub(crate) struct BirthSource {
    rng: StdRng,
    gap: Exp<f64>,
    horizon: f64,
    next: Option<f64>,
    serial: u64,
}

impl BirthSource {
    pub fn new(seed: u64, class: &SnmClassConfig, horizon: f64) -> Self {
        let mut src = BirthSource {
            rng: rng_for(seed, &[class.class_id as u64, BIRTHS]),
            gap: Exp::new(class.arrival_rate).expect("validated arrival rate"),
            horizon,
            next: None,
            serial: 0,
        };
        src.next = src.draw(0.0);
        src
    }

    fn draw(&mut self, from: f64) -> Option<f64> {
        let t = from + self.gap.sample(&mut self.rng);
        (t <= self.horizon).then_some(t)
    }

    pub fn peek(&self) -> Option<f64> {
        self.next
    }

    /// Returns the next `(birth, serial)` and advances.
    pub fn pop(&mut self) -> Option<(f64, u64)> {
        let t = self.next?;
        let serial = self.serial;
        self.serial += 1;
        self.next = self.draw(t);
        Some((t, serial))
    }
}

/// Samples the requests of the content born at `birth` with `serial`.
pub(crate) fn shot_requests(
    seed: u64,
    class: &SnmClassConfig,
    profile: PopularityShape,
    birth: f64,
    serial: u64,
    horizon: f64,
    daynight: bool,
) -> (ContentId, Vec<f64>) {
    let mut rng = rng_for(seed, &[class.class_id as u64, CONTENT, serial]);
    let shot = ContentShot {
        content_id: content_id(class.class_id, serial),
        birth,
        mean_volume: class.volumes.sample(&mut rng),
        shape: profile,
    };
    let times = if daynight {
        sample_shot_requests_modulated(&shot, horizon, &mut rng)
    } else {
        sample_shot_requests(&shot, horizon, &mut rng)
    };
    (shot.content_id, times)
}

/// Request stream of a stationary class.
///
/// Each content gets `Poisson(V_m)` requests uniform on the horizon. The
/// superposition is generated as one homogeneous Poisson stream of rate
/// `sum V_m / horizon` whose requests pick content `m` with probability
/// `V_m / sum V`, which has the same law and can be produced in time order.
pub(crate) struct StationarySource {
    rng: StdRng,
    class: u8,
    ids: Vec<ContentId>,
    cumulative: Vec<f64>,
    gap: Option<Exp<f64>>,
    horizon: f64,
    daynight: bool,
    now: f64,
    seq: u64,
}

impl StationarySource {
    pub fn new(seed: u64, class: &SnmClassConfig, horizon: f64, daynight: bool) -> Self {
        let mut rng = rng_for(seed, &[class.class_id as u64, STATIONARY]);
        let n = poisson(&mut rng, class.arrival_rate * horizon);
        let mut acc = 0.0;
        let cumulative: Vec<f64> = (0..n)
            .map(|_| {
                acc += class.volumes.sample(&mut rng);
                acc
            })
            .collect();
        let ids = (0..n).map(|s| content_id(class.class_id, s)).collect();
        let bound = if daynight { DayNight::BOUND } else { 1.0 };
        let rate = bound * acc / horizon;
        let gap = (rate.is_finite() && rate > 0.0).then(|| Exp::new(rate).expect("positive rate"));
        StationarySource {
            rng,
            class: class.class_id,
            ids,
            cumulative,
            gap,
            horizon,
            daynight,
            now: 0.0,
            seq: 0,
        }
    }

    pub fn next_request(&mut self) -> Option<Scheduled> {
        let gap = self.gap.as_ref()?;
        loop {
            self.now += gap.sample(&mut self.rng);
            if self.now > self.horizon {
                self.gap = None;
                return None;
            }
            if self.daynight && self.rng.random::<f64>() >= DayNight::acceptance(self.now) {
                continue;
            }
            let total = self.cumulative[self.cumulative.len() - 1];
            let u = self.rng.random::<f64>() * total;
            let idx = self
                .cumulative
                .partition_point(|&c| c <= u)
                .min(self.cumulative.len() - 1);
            let seq = self.seq;
            self.seq += 1;
            return Some(Scheduled {
                time: self.now,
                class: self.class,
                serial: idx as u64,
                seq,
                id: self.ids[idx].clone(),
            });
        }
    }
}

/// Generates a complete shot-noise trace.
///
/// Shot classes: births follow a Poisson process of rate `arrival_rate`, each
/// content draws `V_m` from the class sampler and requests from the class
/// profile scaled to the class life-span. Stationary classes spread requests
/// uniformly over the horizon. Content ids are `c<class>_<serial>`.
pub fn generate_snm(config: &SnmConfig) -> Result<Trace> {
    config.validate()?;
    let (seed, horizon) = (config.seed, config.horizon);
    let mut all: Vec<Scheduled> = Vec::new();
    for class in &config.classes {
        match class.profile() {
            Some(profile) => {
                let mut births = BirthSource::new(seed, class, horizon);
                while let Some((birth, serial)) = births.pop() {
                    let (id, times) = shot_requests(
                        seed,
                        class,
                        profile,
                        birth,
                        serial,
                        horizon,
                        config.daynight,
                    );
                    all.extend(times.into_iter().enumerate().map(|(i, time)| Scheduled {
                        time,
                        class: class.class_id,
                        serial,
                        seq: i as u64,
                        id: id.clone(),
                    }));
                }
            }
            None => {
                let mut src = StationarySource::new(seed, class, horizon, config.daynight);
                while let Some(s) = src.next_request() {
                    all.push(s);
                }
            }
        }
    }
    all.sort_unstable();
    Ok(Trace {
        events: all.into_iter().map(Scheduled::into_event).collect(),
        horizon,
    })
}

/// Turns fitted class summaries into generation parameters.
///
/// Empty classes are dropped. Class 0 and the open-ended last class are
/// stationary; the others use `shot_shape` with the class mean life-span
/// (floored at [`MIN_FITTED_LIFESPAN`]) and resample the class volumes.
pub fn classes_from_summary(
    summaries: &[ClassSummary],
    bounds: &ClassBounds,
    shot_shape: ShapeKind,
) -> Vec<SnmClassConfig> {
    let last = (bounds.class_count() - 1) as u8;
    summaries
        .iter()
        .filter(|s| s.content_count() > 0 && s.arrival_rate > 0.0)
        .map(|s| {
            let stationary = s.class_id == 0 || s.class_id == last;
            SnmClassConfig {
                class_id: s.class_id,
                arrival_rate: s.arrival_rate,
                lifespan: s.mean_lifespan.max(MIN_FITTED_LIFESPAN),
                shape: if stationary {
                    ClassShape::Stationary
                } else {
                    shot_shape.into()
                },
                volumes: VolumeSampler::Empirical(s.volume_samples.clone()),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(id: u8, rate: f64, shape: ClassShape) -> SnmClassConfig {
        SnmClassConfig {
            class_id: id,
            arrival_rate: rate,
            lifespan: 3.0,
            shape,
            volumes: VolumeSampler::Constant(20.0),
        }
    }

    fn config(classes: Vec<SnmClassConfig>, horizon: f64) -> SnmConfig {
        SnmConfig {
            classes,
            horizon,
            seed: 17,
            daynight: false,
        }
    }

    #[test]
    fn content_count_is_poisson() {
        let cfg = config(vec![class(1, 10.0, ClassShape::Uniform)], 30.0);
        let t = generate_snm(&cfg).unwrap();
        let n = t.distinct_contents() as f64;
        // some contents born near the horizon may get zero requests
        assert!((n - 300.0).abs() < 3.0 * 300f64.sqrt(), "{n}");
        assert!(crate::validate(&t).is_empty());
    }

    #[test]
    fn empty_class_list_rejected() {
        assert!(generate_snm(&config(vec![], 10.0)).is_err());
    }

    #[test]
    fn invalid_class_rejected() {
        let mut c = class(1, 10.0, ClassShape::Uniform);
        c.lifespan = 0.0;
        assert!(generate_snm(&config(vec![c.clone()], 10.0)).is_err());
        c.shape = ClassShape::Stationary;
        assert!(generate_snm(&config(vec![c], 10.0)).is_ok());
        let dup = vec![
            class(1, 1.0, ClassShape::Uniform),
            class(1, 1.0, ClassShape::Uniform),
        ];
        assert!(generate_snm(&config(dup, 10.0)).is_err());
    }

    #[test]
    fn ids_and_causality() {
        let cfg = config(
            vec![
                class(2, 5.0, ClassShape::Exponential),
                class(5, 2.0, ClassShape::Stationary),
            ],
            20.0,
        );
        let t = generate_snm(&cfg).unwrap();
        assert!(t
            .events
            .iter()
            .all(|e| e.content_id.as_str().starts_with("c2_")
                || e.content_id.as_str().starts_with("c5_")));
        assert_eq!(t.horizon, 20.0);
        assert!(crate::validate(&t).is_empty());
    }

    #[test]
    fn deterministic() {
        let cfg = config(vec![class(1, 4.0, ClassShape::Uniform)], 10.0);
        assert_eq!(generate_snm(&cfg).unwrap(), generate_snm(&cfg).unwrap());
        let mut other = cfg.clone();
        other.seed += 1;
        assert_ne!(generate_snm(&cfg).unwrap(), generate_snm(&other).unwrap());
    }

    #[test]
    fn class_shape_parsing() {
        assert_eq!(
            "stationary".parse::<ClassShape>().unwrap(),
            ClassShape::Stationary
        );
        assert_eq!(
            "uniform".parse::<ClassShape>().unwrap(),
            ClassShape::Uniform
        );
        assert!("gaussian".parse::<ClassShape>().is_err());
    }
}
