//! Adaptive Gauss–Kronrod quadrature and small one-dimensional search helpers.
//!
//! Every finite-interval integral in the crate goes through [`integrate`]: a
//! 10/21-point Gauss–Kronrod rule with global adaptive bisection, in the
//! style of QUADPACK's `qag`. Oscillatory integrands are handled by the caller
//! passing an initial subdivision (`pieces`) that keeps each piece below one
//! oscillation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{ApxError, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_059,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_114,
    0.562_757_134_668_604_683_339_000_099_272,
    0.433_395_394_129_247_190_799_265_943_165,
    0.294_392_862_701_460_198_131_126_603_103,
    0.148_874_338_981_631_210_884_826_001_129,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_244,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_325,
    0.123_491_976_262_065_851_077_600_525_867,
    0.134_709_217_311_473_325_928_054_001_771,
    0.142_775_938_577_060_080_797_094_273_138,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_389,
];

// Weights of the embedded 10-point Gauss rule, paired with XGK[1], XGK[3], ..
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_657,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

const MAX_SUBDIVISIONS: usize = 4000;

/// Absolute and relative stopping targets; the integration stops once the
/// estimated error is below `max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    pub const fn relative(rel: f64) -> Self {
        Tolerance { abs: 1e-300, rel }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    magnitude: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = fc.abs() * WGK[10];
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    if !res_k.is_finite() {
        return Err(ApxError::NumericInstability(format!(
            "non-finite integrand on [{a}, {b}]"
        )));
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let h = half.abs();
    let error = rescale_error((res_k - res_g) * half, res_abs * h, res_asc * h);
    Ok(Segment {
        a,
        b,
        value: res_k * half,
        error,
        magnitude: res_abs * h,
    })
}

/// Integrates `f` over `[a, b]`, starting from `pieces` equal sub-intervals.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: Tolerance, pieces: usize) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(ApxError::NonFinite("integration bound"));
    }
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            evals: 0,
        });
    }
    let pieces = pieces.max(1);
    let width = (b - a) / pieces as f64;
    let mut heap = BinaryHeap::with_capacity(pieces + 64);
    for i in 0..pieces {
        let lo = a + width * i as f64;
        let hi = if i + 1 == pieces { b } else { lo + width };
        heap.push(kronrod21(&f, lo, hi)?);
    }
    let mut evals = 21 * pieces;
    let mut splits = 0;
    let (mut value, mut error, mut magnitude) =
        heap.iter().fold((0.0, 0.0, 0.0), |(v, e, m), s: &Segment| {
            (v + s.value, e + s.error, m + s.magnitude)
        });
    // Below this floor the error estimate is pure rounding.
    let floor = |m: f64| 100.0 * f64::EPSILON * m;
    while error > tol.target(value).max(floor(magnitude)) {
        if splits >= MAX_SUBDIVISIONS {
            let worst = heap.peek().copied().expect("non-empty heap");
            return Err(ApxError::QuadratureFailure {
                panel: 0,
                start: worst.a,
                end: worst.b,
                error,
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at machine precision
            error -= worst.error;
            heap.push(Segment {
                error: 0.0,
                ..worst
            });
            continue;
        }
        let left = kronrod21(&f, worst.a, mid)?;
        let right = kronrod21(&f, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        magnitude += left.magnitude + right.magnitude - worst.magnitude;
        heap.push(left);
        heap.push(right);
        evals += 42;
        splits += 1;
    }
    // Final sums are taken by position so the result does not depend on heap order.
    let mut segments = heap.into_vec();
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = segments.iter().map(|s| s.value).sum();
    let error = segments.iter().map(|s| s.error).sum();
    Ok(Estimate {
        value,
        error,
        evals,
    })
}

/// Number of initial pieces that keeps each piece within half a period of the
/// fastest oscillation `frequency` (radians per unit).
pub fn oscillation_pieces(a: f64, b: f64, frequency: f64) -> usize {
    if frequency <= 0.0 {
        return 1;
    }
    let n = ((b - a).abs() * frequency / std::f64::consts::PI).ceil();
    (n as usize).clamp(1, 1 << 22)
}

/// Integrals of `f` over consecutive cells `[breaks[i], breaks[i+1]]`.
pub fn cell_integrals<F>(f: &F, breaks: &[f64], tol: Tolerance, frequency: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64 + Sync,
{
    use rayon::prelude::*;
    breaks
        .par_windows(2)
        .map(|w| {
            integrate(
                f,
                w[0],
                w[1],
                tol,
                oscillation_pieces(w[0], w[1], frequency),
            )
            .map(|e| e.value)
        })
        .collect()
}

/// Golden-section maximisation of `g` on `[lo, hi]`. Runs at least
/// `min_iters` reductions and stops once the bracket is narrower than
/// `width`. Returns the best abscissa seen together with its value.
pub fn golden_max<G>(g: G, lo: f64, hi: f64, min_iters: usize, width: f64) -> Result<(f64, f64)>
where
    G: Fn(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut gc = g(c)?;
    let mut gd = g(d)?;
    let (mut best_x, mut best) = if gc >= gd { (c, gc) } else { (d, gd) };
    let mut iters = 0;
    while iters < min_iters || (b - a) > width {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c)?;
            if gc > best {
                best = gc;
                best_x = c;
            }
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d)?;
            if gd > best {
                best = gd;
                best_x = d;
            }
        }
        iters += 1;
        if iters > 200 {
            break;
        }
    }
    Ok((best_x, best))
}

/// Log-spaced grid of `n` points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Integrates `g` over `[a, b]` (`0 < a < b`) after the substitution
/// `t = e^s`, which tames integrands that behave like powers of `t`.
pub fn integrate_log<F>(g: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    let (la, lb) = (a.ln(), b.ln());
    let pieces = ((lb - la) / 2.0).ceil().max(1.0) as usize;
    integrate(
        |s| {
            let t = s.exp();
            g(t) * t
        },
        la,
        lb,
        tol,
        pieces,
    )
}
