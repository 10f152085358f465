//! Analysis settings: defaults, an optional `key = value` file, then
//! command-line overrides.
//!
//! Keys are dotted paths into the serialized [`Config`], e.g.
//! `quadrature.eps = 0.05` or `singular.grid = 96`. The top-level `seed`
//! drives every randomized step.

use std::path::Path;

use rif_core::integrab::QuadratureConfig;
use rif_core::singular::SingularConfig;
use rif_core::stability::StabilityConfig;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub const SEED_ENV: &str = "RIF_LAB_SEED";
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("{origin}: unknown key `{key}`")]
    UnknownKey { origin: String, key: String },
    #[error("{origin}: bad value `{value}` for `{key}`: {message}")]
    BadValue { origin: String, key: String, value: String, message: String },
    #[error("{origin}: expected `key = value`, got `{text}`")]
    Malformed { origin: String, text: String },
    #[error("cannot read config file {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub seed: u64,
    pub stability: StabilityConfig,
    pub singular: SingularConfig,
    pub quadrature: QuadratureConfig,
    /// Outer grid per angle for the direct `L^p` norm.
    pub lp_grid: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: DEFAULT_SEED,
            stability: StabilityConfig::default(),
            singular: SingularConfig::default(),
            quadrature: QuadratureConfig::default(),
            lp_grid: 64,
        }
    }
}

impl Config {
    /// Sets one dotted key. The value is read with the type of the current
    /// entry, so integers stay integers.
    pub fn set(&mut self, key: &str, value: &str, origin: &str) -> Result<(), ConfigError> {
        let bad = |message: String| ConfigError::BadValue {
            origin: origin.into(),
            key: key.into(),
            value: value.into(),
            message,
        };
        if matches!(key, "singular.seed" | "quadrature.seed") {
            return Err(bad("component seeds follow `seed`".into()));
        }
        let mut tree = serde_json::to_value(&*self).expect("config serializes");
        let slot = key
            .split('.')
            .try_fold(&mut tree, |node, part| node.get_mut(part))
            .filter(|v| !v.is_object())
            .ok_or_else(|| ConfigError::UnknownKey { origin: origin.into(), key: key.into() })?;
        *slot = match slot {
            Value::Bool(_) => Value::Bool(value.parse().map_err(|e| bad(format!("{e}")))?),
            Value::Number(n) if n.is_u64() => Value::from(value.parse::<u64>().map_err(|e| bad(format!("{e}")))?),
            Value::Number(_) => {
                let x: f64 = value.parse().map_err(|e| bad(format!("{e}")))?;
                if !x.is_finite() {
                    return Err(bad("not finite".into()));
                }
                Value::from(x)
            }
            _ => Value::String(value.into()),
        };
        *self = serde_json::from_value(tree).map_err(|e| bad(e.to_string()))?;
        self.sync_seeds();
        Ok(())
    }

    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<(), ConfigError> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let here = format!("{origin}:{}", no + 1);
            let (k, v) = line.split_once('=').ok_or(ConfigError::Malformed { origin: here.clone(), text: line.into() })?;
            self.set(k.trim(), v.trim(), &here)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
        self.apply_text(&text, &path.display().to_string())
    }

    /// Seed for the component configs.
    pub fn sync_seeds(&mut self) {
        self.singular.seed = self.seed;
        self.quadrature.seed = self.seed;
    }

    /// Layers settings in order: defaults, the environment seed, the file,
    /// `--set` pairs, then an explicit `--seed`.
    pub fn resolve(
        file: Option<&Path>,
        sets: &[String],
        seed: Option<u64>,
        env_seed: Option<String>,
    ) -> Result<Config, ConfigError> {
        let mut cfg = Config::default();
        if let Some(s) = env_seed {
            cfg.set("seed", s.trim(), SEED_ENV)?;
        }
        if let Some(p) = file {
            cfg.apply_file(p)?;
        }
        for kv in sets {
            let (k, v) = kv.split_once('=').ok_or(ConfigError::Malformed { origin: "--set".into(), text: kv.clone() })?;
            cfg.set(k.trim(), v.trim(), "--set")?;
        }
        if let Some(s) = seed {
            cfg.seed = s;
        }
        cfg.sync_seeds();
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dotted_keys_keep_types() {
        let mut c = Config::default();
        c.set("quadrature.eps", "0.05", "t").unwrap();
        c.set("singular.grid", "96", "t").unwrap();
        c.set("lp_grid", "32", "t").unwrap();
        assert_eq!((c.quadrature.eps, c.singular.grid, c.lp_grid), (0.05, 96, 32));
        assert!(matches!(c.set("singular.grid", "1.5", "t"), Err(ConfigError::BadValue { .. })));
        assert!(matches!(c.set("singular", "1", "t"), Err(ConfigError::UnknownKey { .. })));
        assert!(matches!(c.set("nope.x", "1", "t"), Err(ConfigError::UnknownKey { .. })));
    }

    #[test]
    fn file_format_and_precedence() {
        let mut c = Config::default();
        c.apply_text("# budgets\nquadrature.samples = 20000\n\nseed=7  # fixed\n", "f").unwrap();
        assert_eq!((c.quadrature.samples, c.seed, c.quadrature.seed), (20000, 7, 7));
        assert!(matches!(c.apply_text("oops", "f"), Err(ConfigError::Malformed { .. })));

        let r = Config::resolve(None, &["seed=9".into()], None, Some("3".into())).unwrap();
        assert_eq!(r.seed, 9);
        let r = Config::resolve(None, &[], Some(11), Some("3".into())).unwrap();
        assert_eq!((r.seed, r.singular.seed), (11, 11));
        let r = Config::resolve(None, &[], None, Some("3".into())).unwrap();
        assert_eq!(r.seed, 3);
        assert_eq!(Config::resolve(None, &[], None, None).unwrap().seed, DEFAULT_SEED);
    }
}
