//! Gamma function (Lanczos, g = 7) and the reciprocal-gamma Taylor series used
//! by the Temme expansions.

use crate::{c, BesselFloat};

#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Taylor coefficients of `1/Γ(z) = Σ_{k≥1} r_k z^k`, index k.
#[allow(clippy::excessive_precision)]
const RGAMMA: [f64; 31] = [
    0.0,
    1.0,
    0.577_215_664_901_532_860_61,
    -0.655_878_071_520_253_881_08,
    -0.042_002_635_034_095_235_529,
    0.166_538_611_382_291_489_5,
    -0.042_197_734_555_544_336_748,
    -0.009_621_971_527_876_973_562_1,
    0.007_218_943_246_663_099_542_4,
    -0.001_165_167_591_859_065_112_1,
    -0.000_215_241_674_114_950_972_82,
    0.000_128_050_282_388_116_186_15,
    -0.000_020_134_854_780_788_238_656,
    -1.250_493_482_142_670_657_3e-6,
    1.133_027_231_981_695_882_4e-6,
    -2.056_338_416_977_607_103_5e-7,
    6.116_095_104_481_415_817_9e-9,
    5.002_007_644_469_222_930_1e-9,
    -1.181_274_570_487_020_144_6e-9,
    1.043_426_711_691_100_510_5e-10,
    7.782_263_439_905_071_254e-12,
    -3.696_805_618_642_205_708_2e-12,
    5.100_370_287_454_475_979e-13,
    -2.058_326_053_566_506_783_2e-14,
    -5.348_122_539_423_017_982_4e-15,
    1.226_778_628_238_260_790_2e-15,
    -1.181_259_301_697_458_769_5e-16,
    1.186_692_254_751_600_332_6e-18,
    1.412_380_655_318_031_781_6e-18,
    -2.298_745_684_435_370_206_6e-19,
    1.714_406_321_927_337_433_4e-20,
];

/// Γ(x) for real x away from the non-positive integers.
pub fn gamma<T: BesselFloat>(x: T) -> T {
    let half = c::<T>(0.5);
    if x < half {
        let pi = T::PI();
        return pi / ((pi * x).sin() * gamma(T::one() - x));
    }
    let x = x - T::one();
    let mut a = c::<T>(LANCZOS[0]);
    let t = x + c::<T>(7.5);
    for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
        a = a + c::<T>(p) / (x + c::<T>(i as f64));
    }
    (T::PI() + T::PI()).sqrt() * t.powf(x + half) * (-t).exp() * a
}

/// ln|Γ(x)|.
pub fn ln_gamma<T: BesselFloat>(x: T) -> T {
    let half = c::<T>(0.5);
    if x < half {
        let pi = T::PI();
        return (pi / (pi * x).sin().abs()).ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let mut a = c::<T>(LANCZOS[0]);
    let t = x + c::<T>(7.5);
    for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
        a = a + c::<T>(p) / (x + c::<T>(i as f64));
    }
    half * (T::PI() + T::PI()).ln() + (x + half) * t.ln() - t + a.ln()
}

/// Temme's auxiliary values for |μ| ≤ ½:
/// `(Γ₁, Γ₂, 1/Γ(1+μ), 1/Γ(1−μ))` with
/// `Γ₁ = (1/Γ(1−μ) − 1/Γ(1+μ))/(2μ)` and `Γ₂ = (1/Γ(1−μ) + 1/Γ(1+μ))/2`.
pub(crate) fn temme_gammas<T: BesselFloat>(mu: T) -> (T, T, T, T) {
    let mu2 = mu * mu;
    // Γ₂ = Σ_j r_{2j+1} μ^{2j},  Γ₁ = −Σ_{j≥1} r_{2j} μ^{2j−2}
    let mut gam2 = T::zero();
    let mut gam1 = T::zero();
    let top = RGAMMA.len() - 1;
    for k in (1..=top).rev() {
        let r = c::<T>(RGAMMA[k]);
        if k % 2 == 1 {
            gam2 = gam2 * mu2 + r;
        } else {
            gam1 = gam1 * mu2 - r;
        }
    }
    (gam1, gam2, gam2 - mu * gam1, gam2 + mu * gam1)
}
