//! Plain-text `key=value` configuration.

use std::str::FromStr;

use crate::prg::Lambda;
use crate::sim::{Deployment, PpDelivery, SimError};
use crate::spatial::GridConfig;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub lat: (f64, f64),
    pub lon: (f64, f64),
    pub alt: (f64, f64),
    /// Grid resolution per axis.
    pub bits: u32,
    pub lambda: Lambda,
    pub reps: usize,
    pub seed: Option<u64>,
    pub pp_delivery: PpDelivery,
}

impl Default for Config {
    /// Greater Beijing, where the Geolife and T-Drive traces live.
    fn default() -> Self {
        Config {
            lat: (39.4, 41.1),
            lon: (115.4, 117.6),
            alt: (-100.0, 1000.0),
            bits: 5,
            lambda: Lambda::L128,
            reps: 5,
            seed: None,
            pp_delivery: PpDelivery::PerServer,
        }
    }
}

fn value<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse().map_err(|_| ConfigError::Syntax {
        line,
        message: format!("bad value {v:?} for {key}"),
    })
}

impl FromStr for Config {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut c = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let s = raw.split('#').next().unwrap_or("").trim();
            if s.is_empty() {
                continue;
            }
            let (k, v) = s.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                message: format!("expected key=value, found {s:?}"),
            })?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "lat_min" => c.lat.0 = value(line, k, v)?,
                "lat_max" => c.lat.1 = value(line, k, v)?,
                "lon_min" => c.lon.0 = value(line, k, v)?,
                "lon_max" => c.lon.1 = value(line, k, v)?,
                "alt_min" => c.alt.0 = value(line, k, v)?,
                "alt_max" => c.alt.1 = value(line, k, v)?,
                "bits" => c.bits = value(line, k, v)?,
                "lambda" => {
                    let bits: u32 = value(line, k, v)?;
                    c.lambda = Lambda::new(bits).map_err(|e| ConfigError::Syntax {
                        line,
                        message: e.to_string(),
                    })?;
                }
                "reps" => c.reps = value(line, k, v)?,
                "seed" => c.seed = Some(value(line, k, v)?),
                "pp_delivery" => {
                    c.pp_delivery = v.parse().map_err(|message| ConfigError::Syntax { line, message })?
                }
                _ => {
                    return Err(ConfigError::Syntax {
                        line,
                        message: format!("unknown key {k:?}"),
                    })
                }
            }
        }
        if c.reps < 5 {
            return Err(ConfigError::Invalid(format!("reps must be at least 5, got {}", c.reps)));
        }
        c.grid()?;
        Ok(c)
    }
}

impl Config {
    pub fn grid(&self) -> Result<GridConfig, ConfigError> {
        GridConfig::new(
            [self.lat.0, self.lon.0, self.alt.0],
            [self.lat.1, self.lon.1, self.alt.1],
            self.bits,
        )
        .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn deployment(&self) -> Result<Deployment, ConfigError> {
        let dep = Deployment::new(self.grid()?, self.lambda).map_err(|e: SimError| ConfigError::Invalid(e.to_string()))?;
        Ok(dep.with_delivery(self.pp_delivery))
    }
}
