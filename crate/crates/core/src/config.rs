//! Study configuration: a flat TOML table resolved into meshes, problems and
//! test functions. Unknown keys are rejected so typos do not pass silently.

use crate::data::{Bump, Constant, Coordinate, Datum, Sine, Step};
use crate::flux::{parse_flux, NumericalFlux};
use crate::mesh::{BoxDomain, DualPolicy, MeshFamily};
use crate::solver::{BoundaryPolicy, Problem, TimeStepping};
use sha2::{Digest, Sha256};
use std::path::PathBuf;
use std::sync::Arc;
use thiserror::Error;
use toml::{Table, Value};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config syntax: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("config key `{key}`: {message}")]
    Key { key: String, message: String },
    #[error("unknown config key `{0}`")]
    Unknown(String),
}

fn key_err(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Key {
        key: key.into(),
        message: message.into(),
    }
}

/// Accepted keys with their defaults, as TOML literals.
pub const DEFAULTS: &[(&str, &str)] = &[
    ("family", "\"uniform_1d\""),
    ("n", "50"),
    ("ny", "0"),
    ("domain", "[0.0, 1.0]"),
    ("ratio", "2.0"),
    ("jitter", "0.3"),
    ("seed", "42"),
    ("dual", "\"cones\""),
    ("levels", "4"),
    ("flux", "\"upwind(1)\""),
    ("u0", "\"bump(0.4, 0.25, 4)\""),
    ("T", "0.5"),
    ("cfl", "0.5"),
    ("stepping", "\"uniform\""),
    ("boundary", "\"periodic\""),
    ("phi", "0"),
    ("out", "\"out\""),
    ("history", "false"),
    ("mesh", "\"\""),
];

/// A resolved configuration table.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    table: Table,
}

impl Default for Config {
    fn default() -> Self {
        let mut table = Table::new();
        for (k, v) in DEFAULTS {
            let parsed: Table = format!("{k} = {v}").parse().expect("defaults are valid TOML");
            table.insert((*k).into(), parsed[*k].clone());
        }
        Self { table }
    }
}

impl Config {
    /// Defaults overlaid with the keys of `text`.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let user: Table = text.parse()?;
        let mut cfg = Self::default();
        for (k, v) in user {
            cfg.set(&k, v)?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> Result<(), ConfigError> {
        if !self.table.contains_key(key) {
            return Err(ConfigError::Unknown(key.into()));
        }
        self.table.insert(key.into(), value.into());
        Ok(())
    }

    /// The sorted table as TOML.
    pub fn canonical(&self) -> String {
        toml::to_string(&self.table).expect("plain table serializes")
    }

    /// SHA-256 of [`Config::canonical`] without `out`, hex encoded. Where
    /// results land does not change them.
    pub fn hash(&self) -> String {
        let mut table = self.table.clone();
        table.remove("out");
        let text = toml::to_string(&table).expect("plain table serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    fn get(&self, key: &str) -> &Value {
        &self.table[key]
    }

    pub fn string(&self, key: &str) -> Result<&str, ConfigError> {
        self.get(key)
            .as_str()
            .ok_or_else(|| key_err(key, "expected a string"))
    }

    pub fn real(&self, key: &str) -> Result<f64, ConfigError> {
        match self.get(key) {
            Value::Float(v) => Ok(*v),
            Value::Integer(v) => Ok(*v as f64),
            _ => Err(key_err(key, "expected a number")),
        }
    }

    pub fn count(&self, key: &str) -> Result<usize, ConfigError> {
        self.get(key)
            .as_integer()
            .and_then(|v| usize::try_from(v).ok())
            .ok_or_else(|| key_err(key, "expected a non-negative integer"))
    }

    pub fn flag(&self, key: &str) -> Result<bool, ConfigError> {
        self.get(key)
            .as_bool()
            .ok_or_else(|| key_err(key, "expected true or false"))
    }

    fn reals(&self, key: &str) -> Result<Vec<f64>, ConfigError> {
        let arr = self
            .get(key)
            .as_array()
            .ok_or_else(|| key_err(key, "expected an array of numbers"))?;
        arr.iter()
            .map(|v| match v {
                Value::Float(x) => Ok(*x),
                Value::Integer(x) => Ok(*x as f64),
                _ => Err(key_err(key, "expected an array of numbers")),
            })
            .collect()
    }

    pub fn levels(&self) -> Result<usize, ConfigError> {
        let levels = self.count("levels")?;
        if levels < 2 {
            return Err(key_err("levels", format!("need at least 2, got {levels}")));
        }
        Ok(levels)
    }

    pub fn out_dir(&self) -> Result<PathBuf, ConfigError> {
        Ok(PathBuf::from(self.string("out")?))
    }

    pub fn family(&self) -> Result<MeshFamily, ConfigError> {
        let name = self.string("family")?;
        let n = self.count("n")?;
        if n == 0 {
            return Err(key_err("n", "must be positive"));
        }
        let domain = self.reals("domain")?;
        let interval = || -> Result<(f64, f64), ConfigError> {
            match domain.as_slice() {
                [a, b, ..] => Ok((*a, *b)),
                _ => Err(key_err("domain", "expected [a, b]")),
            }
        };
        let rect = || -> Result<BoxDomain, ConfigError> {
            match domain.as_slice() {
                [a, b] => BoxDomain::rectangle((*a, *b), (*a, *b)),
                [a, b, c, d] => BoxDomain::rectangle((*a, *b), (*c, *d)),
                _ => return Err(key_err("domain", "expected [a, b] or [x0, x1, y0, y1]")),
            }
            .map_err(|e| key_err("domain", e.to_string()))
        };
        let family = match name {
            "uniform_1d" => MeshFamily::uniform_1d(n, interval()?),
            "nonuniform_1d" => MeshFamily::nonuniform_1d(n, interval()?, self.real("ratio")?),
            "cartesian_2d" => {
                let ny = match self.count("ny")? {
                    0 => n,
                    ny => ny,
                };
                MeshFamily::cartesian_2d(n, ny, rect()?)
            }
            "triangles_2d" => MeshFamily::triangles_2d(
                n,
                rect()?,
                self.real("jitter")?,
                self.count("seed")? as u64,
            ),
            other => {
                return Err(key_err(
                    "family",
                    format!(
                        "unknown family `{other}` (uniform_1d | nonuniform_1d | cartesian_2d | triangles_2d)"
                    ),
                ))
            }
        };
        let dual: DualPolicy = self
            .string("dual")?
            .parse()
            .map_err(|e: crate::mesh::MeshError| key_err("dual", e.to_string()))?;
        Ok(family.with_dual(dual))
    }

    pub fn flux(&self, dim: usize) -> Result<Arc<dyn NumericalFlux>, ConfigError> {
        parse_flux(self.string("flux")?, dim)
            .map(Arc::from)
            .map_err(|e| key_err("flux", e.to_string()))
    }

    pub fn initial(&self, dim: usize) -> Result<Arc<dyn Datum>, ConfigError> {
        parse_datum(self.string("u0")?, dim).map_err(|m| key_err("u0", m))
    }

    pub fn problem(&self, dim: usize) -> Result<Problem, ConfigError> {
        let boundary: BoundaryPolicy = self
            .string("boundary")?
            .parse()
            .map_err(|e: crate::solver::SolverError| key_err("boundary", e.to_string()))?;
        let stepping = match self.string("stepping")? {
            "uniform" => TimeStepping::Uniform,
            "adaptive" => TimeStepping::Adaptive,
            other => {
                return Err(key_err(
                    "stepping",
                    format!("unknown stepping `{other}` (uniform | adaptive)"),
                ))
            }
        };
        Ok(Problem::new(
            self.flux(dim)?,
            self.initial(dim)?,
            self.real("T")?,
            self.real("cfl")?,
        )
        .with_boundary(boundary)
        .with_stepping(stepping))
    }
}

/// Parses `constant(c)`, `sine(offset, amplitude)`, `bump(center, radius, k)`,
/// `step(threshold)` (alias `riemann`) and `linear`; scalar parameters apply
/// to every axis.
pub fn parse_datum(spec: &str, dim: usize) -> Result<Arc<dyn Datum>, String> {
    let spec = spec.trim();
    let (name, args) = match spec.find('(') {
        Some(i) if spec.ends_with(')') => (spec[..i].trim(), &spec[i + 1..spec.len() - 1]),
        None => (spec, ""),
        _ => return Err(format!("malformed datum `{spec}`")),
    };
    let nums: Vec<f64> = args
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| format!("bad number `{s}` in `{spec}`")))
        .collect::<Result<_, _>>()?;
    let arity = |n: usize| -> Result<(), String> {
        if nums.len() == n {
            Ok(())
        } else {
            Err(format!("`{name}` takes {n} arguments, got {}", nums.len()))
        }
    };
    Ok(match name {
        "constant" => {
            arity(1)?;
            Arc::new(Constant(nums[0]))
        }
        "sine" => {
            arity(2)?;
            Arc::new(Sine::diagonal(dim, nums[0], nums[1]))
        }
        "bump" => {
            arity(3)?;
            let k = nums[2];
            if k.fract() != 0.0 || k < 1.0 {
                return Err(format!("bump exponent must be a positive integer, got {k}"));
            }
            Arc::new(Bump::new(vec![nums[0]; dim], vec![nums[1]; dim], k as i32))
        }
        "step" | "riemann" => {
            arity(1)?;
            Arc::new(Step::new(0, nums[0]))
        }
        "linear" => {
            arity(0)?;
            Arc::new(Coordinate(0))
        }
        other => {
            return Err(format!(
                "unknown datum `{other}` (constant | sine | bump | step | linear)"
            ))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve() {
        let c = Config::default();
        let fam = c.family().unwrap();
        assert_eq!(fam.dim(), 1);
        let p = c.problem(1).unwrap();
        assert_eq!(p.final_time, 0.5);
        assert_eq!(c.levels().unwrap(), 4);
    }

    #[test]
    fn overrides_and_comments() {
        let c = Config::parse(
            "# a triangle study\nfamily = \"triangles_2d\"\nn = 8 # coarsest\ndomain = [0, 2, 0, 1]\nflux = \"rusanov(burgers;1,1)\"\n",
        )
        .unwrap();
        let fam = c.family().unwrap();
        assert_eq!(fam.dim(), 2);
        assert_eq!(fam.domain().extent(0), 2.0);
        assert_eq!(c.flux(2).unwrap().name(), "rusanov(burgers)");
    }

    #[test]
    fn unknown_and_invalid_keys_are_rejected() {
        assert!(matches!(Config::parse("colour = 3"), Err(ConfigError::Unknown(_))));
        assert!(Config::parse("levels = 1").unwrap().levels().is_err());
        assert!(Config::parse("family = \"hexagons\"").unwrap().family().is_err());
        assert!(Config::parse("n = ").is_err());
    }

    #[test]
    fn hash_ignores_layout_but_not_values() {
        let a = Config::parse("n = 8\nT = 0.5").unwrap();
        let b = Config::parse("# same\nT = 0.5\n\nn = 8").unwrap();
        let c = Config::parse("n = 9").unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 64);
        let d = Config::parse("n = 8\nT = 0.5\nout = \"elsewhere\"").unwrap();
        assert_eq!(a.hash(), d.hash());
    }

    #[test]
    fn datum_specs() {
        let u = parse_datum("bump(0.5, 0.25, 3)", 2).unwrap();
        assert_eq!(u.value(&[0.5, 0.5]), 1.0);
        assert_eq!(parse_datum("step(0.3)", 1).unwrap().value(&[0.2]), 1.0);
        assert_eq!(parse_datum("linear", 1).unwrap().value(&[0.7]), 0.7);
        assert!(parse_datum("bump(0.5, 0.2)", 1).is_err());
        assert!(parse_datum("bump(0.5, 0.2, 1.5)", 1).is_err());
        assert!(parse_datum("wave", 1).is_err());
    }
}
