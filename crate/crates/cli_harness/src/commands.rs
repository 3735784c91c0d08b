use std::f64::consts::FRAC_2_PI;
use std::path::{Path, PathBuf};

use asymptotic_evaluator::Approximant;
use bessel_kernel::{bessel_jy, modified_pair};
use rayon::prelude::*;

use crate::config::{RunConfig, SystemSpec};
use crate::metrics::{self, Reference};
use crate::model;
use crate::HarnessError;

/// A tolerance check that fails the run with exit code 4.
pub const BUDGET_FACTOR: f64 = 10.0;
/// Allowed shortfall of the observed order below `p + 1`.
pub const ORDER_SLACK: f64 = 0.3;
/// The connection constant is fitted around this multiple of the largest n.
pub const CONNECTION_N_FACTOR: u64 = 4;
pub const SELFTEST_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Build the frame and print its constants.
    Frame,
    /// Asymptotic P against the high-precision reference on the grid.
    Compare,
    /// Observed order of the error decay in n.
    Convergence,
    /// Casoratian of the pair on the grid.
    Wronskian,
    /// Wronskian identities of the Bessel kernel.
    BesselSelftest,
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub config: Option<PathBuf>,
    /// Overrides `output.csv`.
    pub out: Option<PathBuf>,
    /// Overrides `output.cache`.
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub report: Vec<String>,
    /// Set when a tolerance check failed.
    pub violation: Option<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.violation.is_some() {
            crate::EXIT_ACCEPTANCE
        } else {
            crate::EXIT_OK
        }
    }
}

pub fn run(cmd: Command, opts: &Options) -> Result<Outcome, HarnessError> {
    if cmd == Command::BesselSelftest {
        return bessel_selftest(opts.out.as_deref());
    }
    let path = opts
        .config
        .as_deref()
        .ok_or_else(|| HarnessError::Config("--config is required for this command".into()))?;
    let cfg = RunConfig::load(path)?;
    run_with(cmd, &cfg, opts)
}

/// As [`run`] with an already parsed config.
pub fn run_with(cmd: Command, cfg: &RunConfig, opts: &Options) -> Result<Outcome, HarnessError> {
    let out = opts.out.clone().or_else(|| cfg.output_csv.clone());
    let cache = opts.cache.clone().or_else(|| cfg.cache.clone());
    match cmd {
        Command::Frame => frame(cfg, cache.as_deref()),
        Command::Compare => compare(cfg, cache.as_deref(), out.as_deref()),
        Command::Convergence => convergence(cfg, cache.as_deref(), out.as_deref()),
        Command::Wronskian => wronskian(cfg, cache.as_deref(), out.as_deref()),
        Command::BesselSelftest => bessel_selftest(out.as_deref()),
    }
}

fn frame(cfg: &RunConfig, cache: Option<&Path>) -> Result<Outcome, HarnessError> {
    let ap = model::load_or_build(cfg, cache)?;
    let f = &ap.frame;
    let mut report = vec![
        format!("theta = {}", f.theta),
        format!("tau0 = {}", f.tau0),
        format!("nu = {}", f.nu),
        format!("t1 = {}", f.t1 + 0.0),
        format!("t2 = {}", f.t2),
        format!("sigma = {}", f.sigma),
        format!("t_lo = {}", f.t_lo),
        format!("order_p = {}", ap.order_p),
        format!(
            "case_transform = parity_flip:{} axis_flip:{}",
            ap.case_transform.parity_flip, ap.case_transform.axis_flip
        ),
    ];
    if let SystemSpec::Laguerre(w) = &cfg.system {
        report.push(format!("r_m = {}", w.r_m()));
    }
    Ok(Outcome {
        report,
        violation: None,
    })
}

fn n_bounds(cfg: &RunConfig) -> (u64, u64) {
    let lo = *cfg.n_list.iter().min().expect("n_list is non-empty");
    let hi = *cfg.n_list.iter().max().expect("n_list is non-empty");
    (lo, hi)
}

/// `C₁` from a window well above the largest n of the run, so that its own
/// error is small next to the errors being measured.
fn connection(
    cfg: &RunConfig,
    ap: &Approximant,
    w: &recurrence_oracle::LaguerreTypeWeight,
) -> Result<f64, HarnessError> {
    let (_, hi) = n_bounds(cfg);
    let fit = metrics::fit_c1(
        ap,
        w,
        CONNECTION_N_FACTOR * hi.max(20),
        cfg.precision_digits,
    )?;
    log::info!(
        "connection fit: c1 = {}, c2 = {}, residual = {:.2e}",
        fit.c1,
        fit.c2,
        fit.rel_residual
    );
    Ok(fit.c1)
}

struct Cell {
    n: u64,
    t: f64,
    x: f64,
    log_scale: f64,
    asymptotic: f64,
    oracle: f64,
    abs_err: f64,
    rel_err: f64,
    budget: f64,
}

fn compare(
    cfg: &RunConfig,
    cache: Option<&Path>,
    out: Option<&Path>,
) -> Result<Outcome, HarnessError> {
    let w = model::reference_weight(cfg)?;
    let mut ap = model::load_or_build(cfg, cache)?;
    let c1 = connection(cfg, &ap, &w)?;
    let reference = Reference {
        weight: &w,
        c1,
        digits: cfg.precision_digits,
    };

    let (n_min, _) = n_bounds(cfg);
    let half = 0.5 * ap.frame.t2;
    let samples = [-half, 0.5 * half, half, 1.5 * half]
        .iter()
        .map(|&tc| reference.calibration_sample(&ap, n_min, ap.case_transform.map_x(tc)))
        .collect::<Result<Vec<_>, _>>()?;
    let m_hat = ap.calibrate(&samples).map_err(HarnessError::from_eval)?;

    let ts = model::grid_t(cfg, &ap);
    let jobs: Vec<(u64, f64)> = cfg
        .n_list
        .iter()
        .flat_map(|&n| ts.iter().map(move |&t| (n, t)))
        .collect();
    let cells = jobs
        .par_iter()
        .map(|&(n, t)| {
            let r = ap.evaluate(n, t).map_err(HarnessError::from_eval)?;
            let oracle = reference.scaled(&ap, n, t, r.log_scale)?;
            Ok(Cell {
                n,
                t,
                x: ap
                    .big_n(n)
                    .map_err(HarnessError::from_eval)?
                    .powf(ap.frame.theta)
                    * t,
                log_scale: r.log_scale,
                asymptotic: r.p_value,
                oracle,
                abs_err: (r.p_value - oracle).abs(),
                rel_err: metrics::local_rel_error(&ap, &reference, n, t)?,
                budget: r.budget.unwrap_or(f64::NAN),
            })
        })
        .collect::<Result<Vec<Cell>, HarnessError>>()?;

    if let Some(path) = out {
        let mut wtr = csv::Writer::from_path(path)?;
        wtr.write_record([
            "n",
            "t",
            "x",
            "log_scale",
            "asymptotic_p",
            "oracle_p",
            "abs_err",
            "rel_err",
            "budget",
        ])?;
        for c in &cells {
            wtr.write_record([
                c.n.to_string(),
                format!("{:.16e}", c.t),
                format!("{:.16e}", c.x),
                format!("{:.16e}", c.log_scale),
                format!("{:.16e}", c.asymptotic),
                format!("{:.16e}", c.oracle),
                format!("{:.16e}", c.abs_err),
                format!("{:.16e}", c.rel_err),
                format!("{:.16e}", c.budget),
            ])?;
        }
        wtr.flush()?;
    }

    let mut report = vec![format!("c1 = {c1}"), format!("m_hat = {m_hat:.6e}")];
    for &n in &cfg.n_list {
        let worst = cells
            .iter()
            .filter(|c| c.n == n)
            .map(|c| c.rel_err)
            .fold(0.0f64, f64::max);
        report.push(format!("n = {n}: max rel_err = {worst:.3e}"));
    }
    let bad: Vec<&Cell> = cells
        .iter()
        .filter(|c| !(c.abs_err <= BUDGET_FACTOR * c.budget))
        .collect();
    let violation = (!bad.is_empty()).then(|| {
        let c = bad[0];
        format!(
            "{} cell(s) exceed {BUDGET_FACTOR} x budget, first at n = {}, t = {}: {:.3e} > {:.3e}",
            bad.len(),
            c.n,
            c.t,
            c.abs_err,
            BUDGET_FACTOR * c.budget
        )
    });
    Ok(Outcome { report, violation })
}

fn convergence(
    cfg: &RunConfig,
    cache: Option<&Path>,
    out: Option<&Path>,
) -> Result<Outcome, HarnessError> {
    let w = model::reference_weight(cfg)?;
    let ap = model::load_or_build(cfg, cache)?;
    if cfg.n_list.len() < 2 {
        return Err(HarnessError::Validation(
            "convergence needs at least two values in grid.n_list".into(),
        ));
    }
    let c1 = connection(cfg, &ap, &w)?;
    let reference = Reference {
        weight: &w,
        c1,
        digits: cfg.precision_digits,
    };

    let mut report = Vec::new();
    let (lo, hi) = n_bounds(cfg);
    let octaves = (hi as f64 / lo as f64).log2();
    if octaves < 3.0 {
        log::warn!("n spans {octaves:.2} octaves; at least 3 give a reliable slope");
        report.push(format!("warning: n spans {octaves:.2} octaves (< 3)"));
    }

    let ts = model::grid_t(cfg, &ap);
    let want = cfg.order_p as f64 + 1.0;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for &t in &ts {
        let errs = cfg
            .n_list
            .par_iter()
            .map(|&n| metrics::local_rel_error(&ap, &reference, n, t))
            .collect::<Result<Vec<f64>, HarnessError>>()?;
        let ln_n = cfg
            .n_list
            .iter()
            .map(|&n| ap.big_n(n).map(f64::ln).map_err(HarnessError::from_eval))
            .collect::<Result<Vec<f64>, _>>()?;
        let ln_e: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
        let q_hat = -metrics::fit_slope(&ln_n, &ln_e);
        let pass = q_hat >= want - ORDER_SLACK;
        report.push(format!(
            "t = {t}: q_hat = {q_hat:.3} (expected {want}) {}",
            if pass { "PASS" } else { "FAIL" }
        ));
        if !pass {
            failures.push(format!(
                "t = {t}: q_hat = {q_hat:.3} < {}",
                want - ORDER_SLACK
            ));
        }
        for (&n, &e) in cfg.n_list.iter().zip(&errs) {
            rows.push((n, t, e, q_hat));
        }
    }

    if let Some(path) = out {
        let mut wtr = csv::Writer::from_path(path)?;
        wtr.write_record(["n", "t", "rel_err", "q_hat"])?;
        for (n, t, e, q) in rows {
            wtr.write_record([
                n.to_string(),
                format!("{t:.16e}"),
                format!("{e:.16e}"),
                format!("{q:.6}"),
            ])?;
        }
        wtr.flush()?;
    }
    let violation = (!failures.is_empty()).then(|| failures.join("; "));
    Ok(Outcome { report, violation })
}

fn wronskian(
    cfg: &RunConfig,
    cache: Option<&Path>,
    out: Option<&Path>,
) -> Result<Outcome, HarnessError> {
    let ap = model::load_or_build(cfg, cache)?;
    let ts = model::grid_t(cfg, &ap);
    let mut rows = Vec::new();
    for &n in &cfg.n_list {
        for &t in &ts {
            if ap.case_transform.map_x(t) == 0.0 {
                log::warn!("skipping t = 0, where Q_n is singular");
                continue;
            }
            let w = ap.wronskian(n, t).map_err(HarnessError::from_eval)?;
            rows.push((n, t, w, w / FRAC_2_PI));
        }
    }
    if let Some(path) = out {
        let mut wtr = csv::Writer::from_path(path)?;
        wtr.write_record(["n", "t", "wronskian", "two_over_pi", "ratio"])?;
        for &(n, t, w, ratio) in &rows {
            wtr.write_record([
                n.to_string(),
                format!("{t:.16e}"),
                format!("{w:.16e}"),
                format!("{FRAC_2_PI:.16e}"),
                format!("{ratio:.16e}"),
            ])?;
        }
        wtr.flush()?;
    }
    let worst = rows
        .iter()
        .map(|r| (r.3.abs() - 1.0).abs())
        .fold(0.0f64, f64::max);
    let mean_ratio = rows.iter().map(|r| r.3).sum::<f64>() / rows.len().max(1) as f64;
    let report = vec![
        format!("points = {}", rows.len()),
        format!("mean W/(2/pi) = {mean_ratio:.12}"),
        format!("max ||W|/(2/pi) - 1| = {worst:.3e}"),
    ];
    Ok(Outcome {
        report,
        violation: None,
    })
}

/// Orders and arguments of the kernel self-test.
pub fn selftest_grid() -> (Vec<f64>, Vec<f64>) {
    let nus = (0..5).map(|i| 1.25 * i as f64).collect();
    let xs = (0..5).map(|i| 0.1 * 400f64.powf(i as f64 / 4.0)).collect();
    (nus, xs)
}

fn bessel_selftest(out: Option<&Path>) -> Result<Outcome, HarnessError> {
    let (nus, xs) = selftest_grid();
    let mut rows = Vec::new();
    for &nu in &nus {
        for &x in &xs {
            let num = |e: bessel_kernel::BesselError| HarnessError::Numerical(e.to_string());
            let jy = bessel_jy(nu, x).map_err(num)?;
            let ik = modified_pair(nu, x, true).map_err(num)?;
            let ej = (jy.wronskian() * x / FRAC_2_PI - 1.0).abs();
            let ei = (ik.wronskian() * x - 1.0).abs();
            rows.push((nu, x, ej, ei));
        }
    }
    if let Some(path) = out {
        let mut wtr = csv::Writer::from_path(path)?;
        wtr.write_record(["nu", "x", "jy_rel_err", "ik_rel_err"])?;
        for &(nu, x, ej, ei) in &rows {
            wtr.write_record([
                format!("{nu}"),
                format!("{x:.16e}"),
                format!("{ej:.3e}"),
                format!("{ei:.3e}"),
            ])?;
        }
        wtr.flush()?;
    }
    let worst = rows.iter().map(|r| r.2.max(r.3)).fold(0.0f64, f64::max);
    let bad: Vec<String> = rows
        .iter()
        .filter(|r| !(r.2 <= SELFTEST_TOL && r.3 <= SELFTEST_TOL))
        .map(|r| format!("nu = {}, x = {:.4}", r.0, r.1))
        .collect();
    let report = vec![
        format!("points = {}", rows.len()),
        format!("max relative Wronskian error = {worst:.3e}"),
    ];
    let violation = (!bad.is_empty()).then(|| {
        format!(
            "Wronskian identity off by more than {SELFTEST_TOL:e} at {}",
            bad.join("; ")
        )
    });
    Ok(Outcome { report, violation })
}
