use std::path::Path;

use asymptotic_evaluator::Approximant;
use recurrence_oracle::{laguerre_system, LaguerreTypeWeight};
use serde::{Deserialize, Serialize};
use transition_map::{FrameOptions, RecurrenceSystem};

use crate::config::{GridVariable, RunConfig, SystemSpec};
use crate::HarnessError;

/// Series terms read off exact Laguerre coefficients.
pub const LAGUERRE_SERIES_TERMS: usize = 5;
pub const CACHE_VERSION: u32 = 1;

/// The recurrence as series data. Constant coefficients are declined: A_n
/// does not decay, so there is no transition point at finite t.
pub fn system_of(system: &SystemSpec) -> Result<RecurrenceSystem, HarnessError> {
    match system {
        SystemSpec::Series(s) => Ok(s.clone()),
        SystemSpec::Laguerre(w) => Ok(laguerre_system(w, LAGUERRE_SERIES_TERMS)?),
        SystemSpec::Constant { a, b } => Err(HarnessError::Declined(format!(
            "constant coefficients (A = {a}, B = {b}) have theta = 0, so t2 lies at infinity and the transition machinery does not apply"
        ))),
    }
}

pub fn frame_options(cfg: &RunConfig) -> FrameOptions {
    FrameOptions {
        sigma: cfg.sigma,
        t_lo: cfg.t_lo,
        ..FrameOptions::default()
    }
}

/// Everything that determines a cached approximant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheKey {
    pub system: RecurrenceSystem,
    pub sigma: Option<f64>,
    pub t_lo: Option<f64>,
    pub order_p: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheFile {
    pub version: u32,
    pub key: CacheKey,
    pub approximant: Approximant,
}

pub fn build(cfg: &RunConfig) -> Result<Approximant, HarnessError> {
    let system = system_of(&cfg.system)?;
    Approximant::build(&system, frame_options(cfg), cfg.order_p).map_err(HarnessError::from_build)
}

pub fn write_cache(path: &Path, key: CacheKey, ap: &Approximant) -> Result<(), HarnessError> {
    let file = CacheFile {
        version: CACHE_VERSION,
        key,
        approximant: ap.clone(),
    };
    let text =
        serde_json::to_string(&file).map_err(|e| HarnessError::Io(std::io::Error::other(e)))?;
    std::fs::write(path, text)?;
    Ok(())
}

pub fn read_cache(path: &Path) -> Result<CacheFile, HarnessError> {
    let text = std::fs::read_to_string(path)?;
    let file: CacheFile = serde_json::from_str(&text).map_err(|e| {
        HarnessError::Validation(format!("cache {} is not readable: {e}", path.display()))
    })?;
    if file.version != CACHE_VERSION {
        return Err(HarnessError::Validation(format!(
            "cache version {} differs from {CACHE_VERSION}",
            file.version
        )));
    }
    Ok(file)
}

/// Loads the approximant from `cache` when its key matches the config,
/// otherwise builds it and, if a cache path is given, stores it.
pub fn load_or_build(cfg: &RunConfig, cache: Option<&Path>) -> Result<Approximant, HarnessError> {
    let system = system_of(&cfg.system)?;
    let key = CacheKey {
        system: system.clone(),
        sigma: cfg.sigma,
        t_lo: cfg.t_lo,
        order_p: cfg.order_p,
    };
    if let Some(path) = cache {
        if path.exists() {
            match read_cache(path) {
                Ok(file) if file.key == key => {
                    log::info!("using cached frame {}", path.display());
                    return Ok(file.approximant);
                }
                Ok(_) => log::info!(
                    "cache {} belongs to another run; rebuilding",
                    path.display()
                ),
                Err(e) => log::warn!("{e}; rebuilding"),
            }
        }
    }
    let ap = Approximant::build(&system, frame_options(cfg), cfg.order_p)
        .map_err(HarnessError::from_build)?;
    if let Some(path) = cache {
        write_cache(path, key, &ap)?;
        log::info!("wrote cache {}", path.display());
    }
    Ok(ap)
}

/// Grid points as user-side t values.
pub fn grid_t(cfg: &RunConfig, ap: &Approximant) -> Vec<f64> {
    let pts = cfg.grid.points();
    match cfg.variable {
        GridVariable::T => pts,
        GridVariable::Z => pts
            .into_iter()
            .map(|z| ap.case_transform.map_x(z * ap.frame.t2))
            .collect(),
    }
}

/// The weight when the config has an exact reference.
pub fn reference_weight(cfg: &RunConfig) -> Result<LaguerreTypeWeight, HarnessError> {
    match &cfg.system {
        SystemSpec::Laguerre(w) => {
            if !w.is_exact() {
                log::warn!("m = {} coefficients are truncated expansions; the reference is consistency-grade", w.m);
            }
            Ok(*w)
        }
        SystemSpec::Constant { .. } => Err(system_of(&cfg.system).unwrap_err()),
        SystemSpec::Series(_) => Err(HarnessError::Validation(
            "this command needs exact recurrence coefficients; only laguerre systems provide them"
                .into(),
        )),
    }
}
