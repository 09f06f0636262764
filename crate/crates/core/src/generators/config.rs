//! Text configuration for shot-noise generation.
//!
//! ```text
//! horizon_days=30
//! seed=7
//! daynight=off
//! class=1, arrival_rate=7.1, lifespan_days=1.14, shape=uniform, volumes=1.volumes
//! class=5, arrival_rate=190, lifespan_days=24.6, shape=stationary, volumes=const:25.7
//! ```
//!
//! Lines starting with `#` are comments. `volumes` is either `const:<real>`
//! or a path, relative to the config file, of a file holding one integer
//! per line.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use super::snm::{ClassShape, SnmClassConfig, SnmConfig, VolumeSampler};
use crate::{Error, Result};

/// Parsed configuration file. The seed is optional here so that it can be
/// supplied on the command line instead.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigFile {
    pub horizon: f64,
    pub seed: Option<u64>,
    pub daynight: bool,
    pub classes: Vec<SnmClassConfig>,
}

impl ConfigFile {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        ConfigFile::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Parses `text`, resolving volume files against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut horizon = None;
        let mut seed = None;
        let mut daynight = false;
        let mut classes = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let at = |field: &str| format!("line {}: {field}", i + 1);
            let mut pairs = Vec::new();
            for part in line.split(',') {
                let part = part.trim();
                let (k, v) = part
                    .split_once('=')
                    .ok_or_else(|| Error::config(at(part), "expected key=value"))?;
                pairs.push((k.trim(), v.trim()));
            }
            if pairs.iter().any(|(k, _)| *k == "class") {
                classes.push(parse_class(&pairs, base_dir, &at)?);
                continue;
            }
            for (k, v) in pairs {
                match k {
                    "horizon_days" => horizon = Some(parse_real(v, &at(k))?),
                    "seed" => {
                        seed =
                            Some(v.parse().map_err(|_| {
                                Error::config(at(k), format!("not an integer: {v:?}"))
                            })?)
                    }
                    "daynight" => {
                        daynight = match v {
                            "on" => true,
                            "off" => false,
                            _ => {
                                return Err(Error::config(
                                    at(k),
                                    format!("expected on|off, got {v:?}"),
                                ))
                            }
                        }
                    }
                    _ => return Err(Error::config(at(k), "unknown field")),
                }
            }
        }
        let horizon = horizon.ok_or_else(|| Error::config("horizon_days", "missing"))?;
        Ok(ConfigFile {
            horizon,
            seed,
            daynight,
            classes,
        })
    }

    /// Resolves the seed (an explicit override wins) and validates.
    pub fn into_config(self, seed_override: Option<u64>) -> Result<SnmConfig> {
        let seed = seed_override
            .or(self.seed)
            .ok_or_else(|| Error::config("seed", "missing; set seed= or pass a seed"))?;
        let config = SnmConfig {
            classes: self.classes,
            horizon: self.horizon,
            seed,
            daynight: self.daynight,
        };
        config.validate()?;
        Ok(config)
    }

    /// Renders the file. Empirical volume samplers are written as a reference
    /// to `volume_file(class_id)`; the caller writes those files.
    pub fn render(&self, volume_file: impl Fn(u8) -> String) -> String {
        let mut out = String::from("# snm-config-v1\n");
        let _ = writeln!(out, "horizon_days={}", self.horizon);
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed={seed}");
        }
        let _ = writeln!(out, "daynight={}", if self.daynight { "on" } else { "off" });
        for c in &self.classes {
            let volumes = match &c.volumes {
                VolumeSampler::Constant(v) => format!("const:{v}"),
                VolumeSampler::Empirical(_) => volume_file(c.class_id),
            };
            let _ = writeln!(
                out,
                "class={}, arrival_rate={}, lifespan_days={}, shape={}, volumes={}",
                c.class_id, c.arrival_rate, c.lifespan, c.shape, volumes
            );
        }
        out
    }
}

fn parse_real(v: &str, field: &str) -> Result<f64> {
    let x: f64 = v
        .parse()
        .map_err(|_| Error::config(field, format!("not a number: {v:?}")))?;
    if !x.is_finite() {
        return Err(Error::config(field, format!("not finite: {v:?}")));
    }
    Ok(x)
}

fn parse_class(
    pairs: &[(&str, &str)],
    base_dir: &Path,
    at: &dyn Fn(&str) -> String,
) -> Result<SnmClassConfig> {
    let mut class_id = None;
    let mut arrival_rate = None;
    let mut lifespan = None;
    let mut shape = None;
    let mut volumes = None;
    for &(k, v) in pairs {
        match k {
            "class" => {
                class_id = Some(
                    v.parse::<u8>()
                        .map_err(|_| Error::config(at(k), format!("not a class id: {v:?}")))?,
                )
            }
            "arrival_rate" => arrival_rate = Some(parse_real(v, &at(k))?),
            "lifespan_days" => lifespan = Some(parse_real(v, &at(k))?),
            "shape" => {
                shape = Some(
                    v.parse::<ClassShape>()
                        .map_err(|e| Error::config(at(k), e.to_string()))?,
                )
            }
            "volumes" => {
                volumes = Some(match v.strip_prefix("const:") {
                    Some(c) => VolumeSampler::Constant(parse_real(c, &at(k))?),
                    None => {
                        let path = base_dir.join(v);
                        let file = fs::File::open(&path).map_err(|e| {
                            Error::config(at(k), format!("{}: {e}", path.display()))
                        })?;
                        VolumeSampler::Empirical(read_volumes(std::io::BufReader::new(file))?)
                    }
                })
            }
            _ => return Err(Error::config(at(k), "unknown field")),
        }
    }
    let missing = |name: &str| Error::config(at(name), "missing");
    let class = SnmClassConfig {
        class_id: class_id.ok_or_else(|| missing("class"))?,
        arrival_rate: arrival_rate.ok_or_else(|| missing("arrival_rate"))?,
        lifespan: lifespan.ok_or_else(|| missing("lifespan_days"))?,
        shape: shape.ok_or_else(|| missing("shape"))?,
        volumes: volumes.ok_or_else(|| missing("volumes"))?,
    };
    class.validate()?;
    Ok(class)
}

/// Reads a volume sample file: one non-negative integer per line.
pub fn read_volumes<R: BufRead>(reader: R) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        out.push(line.parse().map_err(|_| Error::Parse {
            line: i + 1,
            message: format!("not an integer volume: {line:?}"),
        })?);
    }
    Ok(out)
}

pub fn write_volumes<W: Write>(samples: &[u64], mut writer: W) -> Result<()> {
    for v in samples {
        writeln!(writer, "{v}")?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_classes_and_top_level() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("2.volumes"), "10\n12\n\n40\n").unwrap();
        let text = "# comment\nhorizon_days=30\nseed=5\ndaynight=on\n\
                    class=1, arrival_rate=7.5, lifespan_days=1.14, shape=uniform, volumes=const:86.4\n\
                    class=2, arrival_rate=2, lifespan_days=3.36, shape=exponential, volumes=2.volumes\n";
        let f = ConfigFile::parse(text, dir.path()).unwrap();
        assert_eq!(f.horizon, 30.0);
        assert_eq!(f.seed, Some(5));
        assert!(f.daynight);
        assert_eq!(f.classes.len(), 2);
        assert_eq!(f.classes[0].volumes, VolumeSampler::Constant(86.4));
        assert_eq!(
            f.classes[1].volumes,
            VolumeSampler::Empirical(vec![10, 12, 40])
        );
        assert_eq!(f.classes[1].shape, ClassShape::Exponential);

        let rendered = f.render(|c| format!("{c}.volumes"));
        let again = ConfigFile::parse(&rendered, dir.path()).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn errors_name_the_field() {
        let base = Path::new(".");
        let err = ConfigFile::parse("horizon_days=x\n", base).unwrap_err();
        assert!(err.to_string().contains("horizon_days"), "{err}");
        let err = ConfigFile::parse(
            "horizon_days=3\nclass=1, arrival_rate=-1, lifespan_days=1, shape=uniform, volumes=const:3\n",
            base,
        )
        .unwrap_err();
        assert!(err.to_string().contains("arrival_rate"), "{err}");
        let err = ConfigFile::parse("horizon_days=3\nclass=1, shape=uniform\n", base).unwrap_err();
        assert!(err.to_string().contains("arrival_rate"), "{err}");
        let err = ConfigFile::parse("horizon_days=3\nclass=1, arrival_rate=1, lifespan_days=1, shape=uniform, volumes=nope.volumes\n", base).unwrap_err();
        assert!(err.to_string().contains("volumes"), "{err}");
        let err = ConfigFile::parse("horizon_days=3\nbogus=1\n", base).unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn seed_is_required_somewhere() {
        let f = ConfigFile::parse(
            "horizon_days=3\nclass=1, arrival_rate=1, lifespan_days=1, shape=uniform, volumes=const:3\n",
            Path::new("."),
        )
        .unwrap();
        assert!(f.clone().into_config(None).is_err());
        assert_eq!(f.into_config(Some(4)).unwrap().seed, 4);
    }
}
