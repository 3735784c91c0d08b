//! Globally adaptive 21-point Gauss-Kronrod quadrature.
//!
//! Endpoint singularities are the caller's business: substitute first so the
//! integrand handed in here is bounded.

use thiserror::Error;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("quadrature did not reach tolerance: estimate {value:e}, error {error:e} after {intervals} intervals")]
    NotConverged {
        value: f64,
        error: f64,
        intervals: usize,
    },
    #[error("integrand returned a non-finite value at x = {0}")]
    NonFinite(f64),
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-13,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// Roundoff floor of `error`; splitting cannot push below it.
    floor: f64,
}

fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Panel, QuadError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    if !fc.is_finite() {
        return Err(QuadError::NonFinite(center));
    }
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut res_abs = (fc * WGK[10]).abs();
    let mut samples = [(0.0, 0.0); 10];
    for (j, &x) in XGK.iter().take(10).enumerate() {
        let dx = half * x;
        let (x1, x2) = (center - dx, center + dx);
        let (f1, f2) = (f(x1), f(x2));
        if !f1.is_finite() {
            return Err(QuadError::NonFinite(x1));
        }
        if !f2.is_finite() {
            return Err(QuadError::NonFinite(x2));
        }
        samples[j] = (f1, f2);
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for (j, &(f1, f2)) in samples.iter().enumerate() {
        res_asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let mut floor = 0.0;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        floor = 50.0 * f64::EPSILON * res_abs;
        error = error.max(floor);
    }
    Ok(Panel {
        a,
        b,
        value,
        error,
        floor,
    })
}

/// Integrates `f` over `[a, b]`, splitting the panel with the largest error
/// estimate until the total estimate meets `max(abs_tol, rel_tol·|I|)`, or
/// until every panel sits at its roundoff floor.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    opts: QuadOptions,
) -> Result<QuadResult, QuadError> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let mut panels = vec![gk21(&mut f, a, b)?];
    let mut evaluations = 21;
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let roundoff_limited = panels.iter().all(|p| p.error <= p.floor);
        if roundoff_limited || error <= opts.abs_tol.max(opts.rel_tol * value.abs()) {
            return Ok(QuadResult {
                value,
                error,
                evaluations,
            });
        }
        if panels.len() >= opts.max_intervals {
            return Err(QuadError::NotConverged {
                value,
                error,
                intervals: panels.len(),
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("non-empty");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a.min(p.b) || mid >= p.a.max(p.b) {
            return Err(QuadError::NotConverged {
                value,
                error,
                intervals: panels.len() + 1,
            });
        }
        panels.push(gk21(&mut f, p.a, mid)?);
        panels.push(gk21(&mut f, mid, p.b)?);
        evaluations += 42;
    }
}

/// `∫₀¹ v^a F(v) dv` for `a > −1`, via `v = w^{1/(a+1)}` which removes the
/// algebraic endpoint behaviour.
pub fn integrate_power_weight<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    opts: QuadOptions,
) -> Result<QuadResult, QuadError> {
    assert!(a > -1.0, "power weight exponent must exceed -1");
    let k = 1.0 / (a + 1.0);
    let r = integrate(|w| f(w.powf(k)), 0.0, 1.0, opts)?;
    Ok(QuadResult {
        value: r.value * k,
        error: r.error * k,
        evaluations: r.evaluations,
    })
}
