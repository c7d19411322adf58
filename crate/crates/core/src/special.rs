//! Internal numeric kernel: error function, normal tail and quantile,
//! log-gamma / digamma / trigamma, regularized incomplete gamma with its
//! quantile, and an adaptive quadrature rule. Everything here is pure f64
//! with no external dependencies; public surfaces re-export what the module
//! contracts require.

// Rational-kernel coefficients are transcribed digit-for-digit from their
// published tables.
#![allow(clippy::excessive_precision)]

/// Euler-Mascheroni constant.
pub(crate) const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub(crate) const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

// ---------------------------------------------------------------------------
// Error function (Cody-style rational approximations, |rel err| < 1e-14).
// ---------------------------------------------------------------------------

const ERF_A: [f64; 5] = [
    3.161_123_743_870_565_6e0,
    1.138_641_541_510_501_6e2,
    3.774_852_376_853_020_2e2,
    3.209_377_589_138_469_5e3,
    1.857_777_061_846_031_5e-1,
];
const ERF_B: [f64; 4] = [
    2.360_129_095_234_412_1e1,
    2.440_246_379_344_441_7e2,
    1.282_616_526_077_372_3e3,
    2.844_236_833_439_170_6e3,
];
const ERFC_C: [f64; 9] = [
    5.641_884_969_886_700_9e-1,
    8.883_149_794_388_376e0,
    6.611_919_063_714_163e1,
    2.986_351_381_974_001_3e2,
    8.819_522_212_417_69e2,
    1.712_047_612_634_070_6e3,
    2.051_078_377_826_071_5e3,
    1.230_339_354_797_997_2e3,
    2.153_115_354_744_038_5e-8,
];
const ERFC_D: [f64; 8] = [
    1.574_492_611_070_983_5e1,
    1.176_939_508_913_125e2,
    5.371_811_018_620_098_5e2,
    1.621_389_574_566_690_2e3,
    3.290_799_235_733_459_7e3,
    4.362_619_090_143_247e3,
    3.439_367_674_143_721_6e3,
    1.230_339_354_803_749_4e3,
];
const ERFC_P: [f64; 6] = [
    3.053_266_349_612_323_4e-1,
    3.603_448_999_498_044_4e-1,
    1.257_817_261_112_292_5e-1,
    1.608_378_514_874_227_7e-2,
    6.587_491_615_298_378e-4,
    1.631_538_713_730_209_8e-2,
];
const ERFC_Q: [f64; 5] = [
    2.568_520_192_289_822_4e0,
    1.872_952_849_923_460_5e0,
    5.279_051_029_514_284e-1,
    6.051_834_131_244_132e-2,
    2.335_204_976_268_691_8e-3,
];
const INV_SQRT_PI: f64 = 5.641_895_835_477_563e-1;

fn erf_small(x: f64) -> f64 {
    let z = x * x;
    let mut xnum = ERF_A[4] * z;
    let mut xden = z;
    for i in 0..3 {
        xnum = (xnum + ERF_A[i]) * z;
        xden = (xden + ERF_B[i]) * z;
    }
    x * (xnum + ERF_A[3]) / (xden + ERF_B[3])
}

// exp(-x^2) computed as exp(-ysq^2) * exp(-del) with ysq a short float, to
// keep the relative error of the scale factor near machine precision.
fn exp_neg_sq(x: f64) -> f64 {
    let ysq = (x * 16.0).trunc() / 16.0;
    let del = (x - ysq) * (x + ysq);
    (-ysq * ysq).exp() * (-del).exp()
}

fn erfc_mid(x: f64) -> f64 {
    let mut xnum = ERFC_C[8] * x;
    let mut xden = x;
    for i in 0..7 {
        xnum = (xnum + ERFC_C[i]) * x;
        xden = (xden + ERFC_D[i]) * x;
    }
    exp_neg_sq(x) * (xnum + ERFC_C[7]) / (xden + ERFC_D[7])
}

fn erfc_large(x: f64) -> f64 {
    let z = 1.0 / (x * x);
    let mut xnum = ERFC_P[5] * z;
    let mut xden = z;
    for i in 0..4 {
        xnum = (xnum + ERFC_P[i]) * z;
        xden = (xden + ERFC_Q[i]) * z;
    }
    let poly = z * (xnum + ERFC_P[4]) / (xden + ERFC_Q[4]);
    exp_neg_sq(x) * (INV_SQRT_PI - poly) / x
}

/// Complementary error function.
pub(crate) fn erfc(x: f64) -> f64 {
    let ax = x.abs();
    let pos = if ax <= 0.46875 {
        return 1.0 - erf_small(x);
    } else if ax <= 4.0 {
        erfc_mid(ax)
    } else {
        erfc_large(ax)
    };
    if x >= 0.0 {
        pos
    } else {
        2.0 - pos
    }
}

// ---------------------------------------------------------------------------
// Standard normal tail, density, upper quantile.
// ---------------------------------------------------------------------------

pub(crate) fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / SQRT_2PI
}

/// Upper tail of the standard normal law, `P(Z >= z)`.
pub(crate) fn normal_tail(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

// Rational initial guess for the normal quantile (Acklam), polished below.
fn normal_quantile_guess(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239e0,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838e0,
        -2.549_732_539_343_734e0,
        4.374_664_141_464_968e0,
        2.938_163_982_698_783e0,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996e0,
        3.754_408_661_907_416e0,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// Upper quantile of the standard normal law: the `z` with `P(Z >= z) = p`.
pub(crate) fn normal_upper_quantile(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    if p == 0.5 {
        return 0.0;
    }
    if p > 0.5 {
        return -normal_upper_quantile(1.0 - p);
    }
    // Acklam's lower-tail value of Phi^{-1}(p) is -z for the upper quantile.
    let mut z = -normal_quantile_guess(p);
    for _ in 0..2 {
        let err = normal_tail(z) - p;
        z += err / normal_pdf(z);
    }
    z
}

// ---------------------------------------------------------------------------
// Log-gamma (Lanczos, g = 7, 9 coefficients), digamma, trigamma.
// ---------------------------------------------------------------------------

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

/// Natural log of the gamma function for `x > 0`; relative error below 1e-13.
///
/// Lanczos approximation for `x >= 0.5`, upward recurrence
/// `ln G(x) = ln G(x+1) - ln x` below.
pub(crate) fn log_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        return log_gamma(x + 1.0) - x.ln();
    }
    let z = x - 1.0;
    let mut a = LANCZOS[0];
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + k as f64);
    }
    let t = z + 7.5;
    0.5 * SQRT_2PI.powi(2).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

/// Digamma function for `x > 0`; absolute error below 1e-12.
///
/// Recurrence `psi(x) = psi(x+1) - 1/x` up to `x >= 8`, then the asymptotic
/// Bernoulli series.
pub(crate) fn digamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut result = 0.0;
    let mut z = x;
    while z < 8.0 {
        result -= 1.0 / z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    result + z.ln()
        - 0.5 * inv
        - inv2
            * (1.0 / 12.0
                + inv2
                    * (-1.0 / 120.0
                        + inv2
                            * (1.0 / 252.0
                                + inv2
                                    * (-1.0 / 240.0
                                        + inv2
                                            * (1.0 / 132.0
                                                + inv2
                                                    * (-691.0 / 32760.0 + inv2 * (1.0 / 12.0)))))))
}

/// Trigamma function for `x > 0` (used as the Newton derivative when solving
/// the rate equation).
pub(crate) fn trigamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut result = 0.0;
    let mut z = x;
    while z < 8.0 {
        result += 1.0 / (z * z);
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    result
        + inv
            * (1.0
                + inv * 0.5
                + inv2
                    * (1.0 / 6.0
                        + inv2
                            * (-1.0 / 30.0
                                + inv2
                                    * (1.0 / 42.0 + inv2 * (-1.0 / 30.0 + inv2 * (5.0 / 66.0))))))
}

// ---------------------------------------------------------------------------
// Regularized lower incomplete gamma and its quantile.
// ---------------------------------------------------------------------------

/// Regularized lower incomplete gamma `P(a, x)`.
pub(crate) fn lower_gamma_reg(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0);
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        // Series expansion.
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut k = 1.0;
        while term.abs() > sum.abs() * 1e-17 && k < 10_000.0 {
            term *= x / (a + k);
            sum += term;
            k += 1.0;
        }
        sum * (-x + a * x.ln() - log_gamma(a)).exp()
    } else {
        // Continued fraction for Q(a, x) (modified Lentz).
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        let q = (-x + a * x.ln() - log_gamma(a)).exp() * h;
        1.0 - q
    }
}

/// Quantile of the Gamma(shape `a`, scale 1) law: the `x` with `P(a, x) = u`.
///
/// Safeguarded Newton on the regularized incomplete gamma; the bracket is
/// grown by doubling before the polish.
pub(crate) fn gamma_quantile(a: f64, u: f64) -> f64 {
    debug_assert!(a > 0.0 && u > 0.0 && u < 1.0);

    let mut x = if a > 1.0 {
        // Wilson-Hilferty.
        let z = -normal_upper_quantile(u);
        let w = 1.0 - 1.0 / (9.0 * a) + z / (3.0 * a.sqrt());
        (a * w * w * w).max(1e-300)
    } else if u < 0.5 {
        // P(a, x) ~ x^a / Gamma(a+1) near zero.
        ((u.ln() + log_gamma(a + 1.0)) / a).exp()
    } else {
        -(1.0 - u).ln() + a - a.min(1.0)
    };
    if !x.is_finite() || x <= 0.0 {
        x = a;
    }

    // Bracket the root.
    let mut lo = 0.0;
    let mut hi = x.max(a) + 1.0;
    while lower_gamma_reg(a, hi) < u {
        hi *= 2.0;
        if hi > 1e300 {
            return hi;
        }
    }
    x = x.clamp(lo + 1e-300, hi);

    let ln_gamma_a = log_gamma(a);
    for _ in 0..64 {
        let f = lower_gamma_reg(a, x) - u;
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        // Gamma density at x.
        let pdf = (-x + (a - 1.0) * x.ln() - ln_gamma_a).exp();
        let step = if pdf > 0.0 { f / pdf } else { 0.0 };
        let mut next = x - step;
        if !(next > lo && next < hi) || step == 0.0 {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-14 * x.abs() {
            return next;
        }
        x = next;
    }
    x
}

// ---------------------------------------------------------------------------
// Adaptive Simpson quadrature.
// ---------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    fm: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, fa, m, fm, flm, left, 0.5 * eps, depth - 1)
            + simpson_step(f, m, fm, b, fb, frm, right, 0.5 * eps, depth - 1)
    }
}

/// Adaptive Simpson integral of `f` over `[a, b]` to absolute tolerance `eps`.
pub(crate) fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, fa, b, fb, fm, whole, eps, 48)
}
