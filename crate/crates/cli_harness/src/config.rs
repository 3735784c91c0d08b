//! Run configuration: flat `section.key = value` lines.
//!
//! ```text
//! # Laguerre weight, m = 1
//! laguerre.m = 1
//! laguerre.alpha = 0
//! laguerre.q = 1
//! approx.p = 1
//! grid.n_list = 50, 100, 200, 400
//! grid.variable = z
//! grid.t_list = 0.5
//! ```
//!
//! Exactly one of the `system`, `laguerre` or `constant` sections describes
//! the recurrence. Unknown or repeated keys are errors.

use std::collections::BTreeMap;
use std::path::PathBuf;

use recurrence_oracle::{LaguerreTypeWeight, MIN_PRECISION_DIGITS};
use transition_map::RecurrenceSystem;

use crate::HarnessError;

pub const KNOWN_KEYS: &[&str] = &[
    "system.theta",
    "system.alpha",
    "system.beta",
    "laguerre.m",
    "laguerre.alpha",
    "laguerre.q",
    "constant.a",
    "constant.b",
    "frame.sigma",
    "frame.t_lo",
    "approx.p",
    "grid.n_list",
    "grid.variable",
    "grid.t_lo",
    "grid.t_hi",
    "grid.t_count",
    "grid.t_list",
    "oracle.precision_digits",
    "output.csv",
    "output.cache",
];

/// Largest supported expansion order.
pub const P_MAX: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub enum SystemSpec {
    Series(RecurrenceSystem),
    Laguerre(LaguerreTypeWeight),
    /// `A_n ≡ a`, `B_n ≡ b`: no transition point at finite t.
    Constant {
        a: f64,
        b: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridVariable {
    /// Scaled variable t itself.
    T,
    /// `z = t/t₂`.
    Z,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TGrid {
    Range { lo: f64, hi: f64, count: usize },
    List(Vec<f64>),
}

impl TGrid {
    pub fn points(&self) -> Vec<f64> {
        match self {
            TGrid::List(v) => v.clone(),
            TGrid::Range { lo, hi, count } => (0..*count)
                .map(|i| lo + (hi - lo) * i as f64 / (*count - 1) as f64)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemSpec,
    pub sigma: Option<f64>,
    pub t_lo: Option<f64>,
    pub order_p: usize,
    pub n_list: Vec<u64>,
    pub variable: GridVariable,
    pub grid: TGrid,
    pub precision_digits: u32,
    pub output_csv: Option<PathBuf>,
    pub cache: Option<PathBuf>,
}

fn invalid(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

struct Raw {
    map: BTreeMap<String, (String, usize)>,
}

impl Raw {
    fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| invalid(format!("line {lineno}: expected `section.key = value`")))?;
            let key = key.trim();
            if key.split('.').count() != 2 || key.split('.').any(str::is_empty) {
                return Err(invalid(format!(
                    "line {lineno}: key `{key}` must have the form section.key (one dot)"
                )));
            }
            if !KNOWN_KEYS.contains(&key) {
                return Err(invalid(format!("line {lineno}: unknown key `{key}`")));
            }
            if map
                .insert(key.to_string(), (value.trim().to_string(), lineno))
                .is_some()
            {
                return Err(invalid(format!("line {lineno}: key `{key}` given twice")));
            }
        }
        Ok(Self { map })
    }

    fn has_section(&self, section: &str) -> bool {
        self.map
            .keys()
            .any(|k| k.starts_with(&format!("{section}.")))
    }

    fn str(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|(v, _)| v.as_str())
    }

    fn f64(&self, key: &str) -> Result<Option<f64>, HarnessError> {
        self.map
            .get(key)
            .map(|(v, line)| {
                v.parse::<f64>().map_err(|_| {
                    invalid(format!(
                        "line {line}: `{key}` must be a real number, got `{v}`"
                    ))
                })
            })
            .transpose()
    }

    fn int<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, HarnessError> {
        self.map
            .get(key)
            .map(|(v, line)| {
                v.parse::<T>().map_err(|_| {
                    invalid(format!(
                        "line {line}: `{key}` must be a non-negative integer, got `{v}`"
                    ))
                })
            })
            .transpose()
    }

    fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, HarnessError> {
        self.map
            .get(key)
            .map(|(v, line)| {
                v.split(',')
                    .map(|s| {
                        s.trim().parse::<T>().map_err(|_| {
                            invalid(format!("line {line}: bad entry `{}` in `{key}`", s.trim()))
                        })
                    })
                    .collect()
            })
            .transpose()
    }

    fn require<T>(&self, key: &str, v: Option<T>) -> Result<T, HarnessError> {
        v.ok_or_else(|| invalid(format!("missing required key `{key}`")))
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let raw = Raw::parse(text)?;

        let sections: Vec<&str> = ["system", "laguerre", "constant"]
            .into_iter()
            .filter(|s| raw.has_section(s))
            .collect();
        let system = match sections.as_slice() {
            ["system"] => {
                let theta = raw.require("system.theta", raw.f64("system.theta")?)?;
                let alpha = raw.require("system.alpha", raw.list::<f64>("system.alpha")?)?;
                let beta = raw.require("system.beta", raw.list::<f64>("system.beta")?)?;
                let sys = RecurrenceSystem::new(theta, alpha, beta)
                    .map_err(|e| invalid(format!("system: {e}")))?;
                SystemSpec::Series(sys)
            }
            ["laguerre"] => {
                let m = raw.require("laguerre.m", raw.int::<u32>("laguerre.m")?)?;
                let alpha = raw.f64("laguerre.alpha")?.unwrap_or(0.0);
                let q = raw.f64("laguerre.q")?.unwrap_or(1.0);
                SystemSpec::Laguerre(
                    LaguerreTypeWeight::new(m, alpha, q)
                        .map_err(|e| invalid(format!("laguerre: {e}")))?,
                )
            }
            ["constant"] => {
                let a = raw.f64("constant.a")?.unwrap_or(0.0);
                let b = raw.require("constant.b", raw.f64("constant.b")?)?;
                if !(a.is_finite() && b.is_finite()) {
                    return Err(invalid("constant: coefficients must be finite"));
                }
                SystemSpec::Constant { a, b }
            }
            [] => {
                return Err(invalid(
                    "no recurrence given: add a `system`, `laguerre` or `constant` section",
                ))
            }
            _ => {
                return Err(invalid(format!(
                    "exactly one of the system, laguerre, constant sections is allowed, got {}",
                    sections.join(", ")
                )))
            }
        };

        let sigma = raw.f64("frame.sigma")?;
        if let Some(s) = sigma {
            if !(s > 0.0 && s.is_finite()) {
                return Err(invalid(format!("frame.sigma must be > 0, got {s}")));
            }
        }
        let t_lo = raw.f64("frame.t_lo")?;
        if let Some(v) = t_lo {
            if !(v < 0.0 && v.is_finite()) {
                return Err(invalid(format!("frame.t_lo must be < 0, got {v}")));
            }
        }

        let order_p = raw.int::<usize>("approx.p")?.unwrap_or(1);
        if order_p > P_MAX {
            return Err(invalid(format!(
                "approx.p must be <= {P_MAX}, got {order_p}"
            )));
        }

        let n_list = raw
            .list::<u64>("grid.n_list")?
            .unwrap_or_else(|| vec![50, 100, 200, 400]);
        if n_list.is_empty() || n_list.contains(&0) {
            return Err(invalid("grid.n_list entries must be >= 1"));
        }

        let variable = match raw.str("grid.variable").unwrap_or("t") {
            "t" => GridVariable::T,
            "z" => GridVariable::Z,
            other => {
                return Err(invalid(format!(
                    "grid.variable must be `t` or `z`, got `{other}`"
                )))
            }
        };

        let range_keys = ["grid.t_lo", "grid.t_hi", "grid.t_count"];
        let has_range = range_keys.iter().any(|k| raw.map.contains_key(*k));
        let grid = match (raw.list::<f64>("grid.t_list")?, has_range) {
            (Some(_), true) => {
                return Err(invalid(
                    "grid.t_list and grid.t_lo/t_hi/t_count are exclusive",
                ))
            }
            (Some(v), false) => {
                if v.iter().any(|t| !t.is_finite()) {
                    return Err(invalid("grid.t_list entries must be finite"));
                }
                TGrid::List(v)
            }
            (None, true) => {
                let lo = raw.require("grid.t_lo", raw.f64("grid.t_lo")?)?;
                let hi = raw.require("grid.t_hi", raw.f64("grid.t_hi")?)?;
                let count = raw.require("grid.t_count", raw.int::<usize>("grid.t_count")?)?;
                if count < 2 {
                    return Err(invalid(format!("grid.t_count must be >= 2, got {count}")));
                }
                if !(lo < hi) {
                    return Err(invalid(format!(
                        "grid.t_lo must be < grid.t_hi, got {lo} and {hi}"
                    )));
                }
                TGrid::Range { lo, hi, count }
            }
            (None, false) => TGrid::List(vec![0.5]),
        };

        let precision_digits = raw.int::<u32>("oracle.precision_digits")?.unwrap_or(60);
        if precision_digits < MIN_PRECISION_DIGITS {
            return Err(invalid(format!(
                "oracle.precision_digits must be >= {MIN_PRECISION_DIGITS}, got {precision_digits}"
            )));
        }

        Ok(Self {
            system,
            sigma,
            t_lo,
            order_p,
            n_list,
            variable,
            grid,
            precision_digits,
            output_csv: raw.str("output.csv").map(PathBuf::from),
            cache: raw.str("output.cache").map(PathBuf::from),
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}
