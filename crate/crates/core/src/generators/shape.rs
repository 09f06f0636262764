use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Family of a content popularity profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShapeKind {
    /// `(1/L) e^{-t/L}` for `t >= 0`.
    Exponential,
    /// `1/(2L)` on `[0, 2L]`.
    Uniform,
}

impl ShapeKind {
    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::Exponential => "exponential",
            ShapeKind::Uniform => "uniform",
        }
    }
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ShapeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exponential" => Ok(ShapeKind::Exponential),
            "uniform" => Ok(ShapeKind::Uniform),
            _ => Err(Error::invalid(format!("unknown shape {s:?}"))),
        }
    }
}

/// Scale `L` whose profile has the requested effective life-span, i.e. the
/// distance between its 0.1 and 0.9 quantiles.
///
/// Uniform on `[0, 2L]` spans `1.6 L`; exponential spans `L ln 9`.
pub fn scale_for_lifespan(kind: ShapeKind, lifespan: f64) -> Result<f64> {
    if !(lifespan.is_finite() && lifespan > 0.0) {
        return Err(Error::invalid(format!(
            "life-span must be positive, got {lifespan}"
        )));
    }
    Ok(match kind {
        ShapeKind::Uniform => 0.5 * lifespan / 0.8,
        ShapeKind::Exponential => lifespan / 9f64.ln(),
    })
}

/// Normalised, causal popularity profile `lambda(t)` with scale `L` in days.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PopularityShape {
    kind: ShapeKind,
    scale: f64,
}

impl PopularityShape {
    pub fn new(kind: ShapeKind, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::invalid(format!(
                "shape scale must be positive, got {scale}"
            )));
        }
        Ok(PopularityShape { kind, scale })
    }

    /// Shape whose effective life-span is `lifespan` days.
    pub fn with_lifespan(kind: ShapeKind, lifespan: f64) -> Result<Self> {
        PopularityShape::new(kind, scale_for_lifespan(kind, lifespan)?)
    }

    pub fn kind(&self) -> ShapeKind {
        self.kind
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn density(&self, t: f64) -> f64 {
        let l = self.scale;
        if t < 0.0 {
            return 0.0;
        }
        match self.kind {
            ShapeKind::Exponential => (-t / l).exp() / l,
            ShapeKind::Uniform if t <= 2.0 * l => 1.0 / (2.0 * l),
            ShapeKind::Uniform => 0.0,
        }
    }

    /// `integral_0^t lambda`.
    pub fn cdf(&self, t: f64) -> f64 {
        let l = self.scale;
        if t <= 0.0 {
            return 0.0;
        }
        match self.kind {
            ShapeKind::Exponential => -(-t / l).exp_m1(),
            ShapeKind::Uniform => (t / (2.0 * l)).min(1.0),
        }
    }

    /// Inverse of [`cdf`](Self::cdf) for `u` in `[0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        let l = self.scale;
        match self.kind {
            ShapeKind::Exponential => -l * (-u).ln_1p(),
            ShapeKind::Uniform => 2.0 * l * u,
        }
    }

    /// End of the support (`inf` for the exponential).
    pub fn support_end(&self) -> f64 {
        match self.kind {
            ShapeKind::Exponential => f64::INFINITY,
            ShapeKind::Uniform => 2.0 * self.scale,
        }
    }
}

/// Day/night rate modulation `f(t) = 1 + sin(2 pi t)`, `t` in days.
///
/// Phase 0 is at the trace origin, so the peak `f = 2` falls at `t = 0.25`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DayNight;

impl DayNight {
    /// Upper bound of `f`, the dominating factor used for thinning.
    pub const BOUND: f64 = 2.0;

    pub fn factor(t: f64) -> f64 {
        1.0 + (2.0 * PI * t).sin()
    }

    /// Thinning acceptance probability `f(t) / 2`.
    pub fn acceptance(t: f64) -> f64 {
        (DayNight::factor(t) / DayNight::BOUND).clamp(0.0, 1.0)
    }
}
