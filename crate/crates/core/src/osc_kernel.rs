//! The kernel
//!
//! ```text
//! Psi_{l,e}(t) = 2 sin((e - l) t / 2) sin((e + l) t / 2) / (pi (e - l) t^2)
//! ```
//!
//! and the improper integral `\int_0^inf phi_x(t) Psi(t) dt`, which equals
//! `S_l f(x) - f(x)` whenever no exponent of `f` lies in `(l, e)`.
//!
//! The integral is split into panels between consecutive zeros of the two
//! sine factors. Beyond the last panel the remainder is bounded by
//! `|Psi(t)| <= 2 / (pi (e - l) t^2)` and `|phi_x| <= 4 sup|f|`. The default
//! [`TailTreatment::Spectral`] stops after a few slow periods and integrates
//! the remainder exactly from the spectrum of `f` using the sine integral;
//! [`TailTreatment::Bound`] pushes the panels far enough that the bound
//! alone meets the tolerance.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::ap_model::{APPolynomial, SymmetricDifference};
use crate::error::{ApxError, Result};
use crate::quad::{integrate, oscillation_pieces, Tolerance};
use crate::special::cos_over_t2_tail;

/// Below this `|t|` the kernel switches to its even Taylor expansion.
const SERIES_RADIUS: f64 = 1e-6;
const MAX_TAIL_START: f64 = 1e9;
const MAX_PANELS: usize = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelParams {
    lower: f64,
    upper: f64,
}

impl KernelParams {
    /// `Psi_{lambda, eta}` with `0 <= lambda < eta`.
    pub fn new(lambda: f64, eta: f64) -> Result<Self> {
        if !(lambda.is_finite() && eta.is_finite() && lambda >= 0.0 && eta > lambda) {
            return Err(ApxError::param(format!(
                "kernel needs 0 <= lambda < eta, got lambda = {lambda}, eta = {eta}"
            )));
        }
        Ok(KernelParams {
            lower: lambda,
            upper: eta,
        })
    }

    /// `Psi_k = Psi_{alpha k / 2, alpha (k + 1) / 2}`.
    pub fn indexed(k: usize, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(ApxError::param(format!("alpha must be > 0, got {alpha}")));
        }
        KernelParams::new(alpha * k as f64 / 2.0, alpha * (k + 1) as f64 / 2.0)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

// (b^n - a^n) / (b - a) without cancellation
fn divided_power(a: f64, b: f64, n: i32) -> f64 {
    (0..n).map(|i| b.powi(i) * a.powi(n - 1 - i)).sum()
}

pub fn psi_eval(params: &KernelParams, t: f64) -> f64 {
    let (a, b) = (params.lower, params.upper);
    if t.abs() < SERIES_RADIUS {
        // (cos at - cos bt) / (pi (b - a) t^2), four even Taylor terms
        let t2 = t * t;
        let c1 = divided_power(a, b, 2) / 2.0;
        let c2 = -divided_power(a, b, 4) / 24.0;
        let c3 = divided_power(a, b, 6) / 720.0;
        let c4 = -divided_power(a, b, 8) / 40320.0;
        return (c1 + t2 * (c2 + t2 * (c3 + t2 * c4))) / PI;
    }
    let w = b - a;
    2.0 * (0.5 * w * t).sin() * (0.5 * (a + b) * t).sin() / (PI * w * t * t)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraturePlan {
    /// Consecutive `(start, end)` pairs covering `(0, tail_start]`.
    pub panels: Vec<(f64, f64)>,
    pub tail_start: f64,
    /// Bound on `|\int_{tail_start}^inf phi_x Psi|`.
    pub tail_bound: f64,
}

fn tail_bound(params: &KernelParams, f_bound: f64, start: f64) -> f64 {
    8.0 * f_bound / (PI * params.width() * start)
}

/// Plan whose tail bound alone is at most `tol / 2`.
pub fn plan_quadrature(params: &KernelParams, f_bound: f64, tol: f64) -> Result<QuadraturePlan> {
    if !(tol > 0.0) {
        return Err(ApxError::param(format!("tolerance must be > 0, got {tol}")));
    }
    if !(f_bound >= 0.0 && f_bound.is_finite()) {
        return Err(ApxError::param(format!(
            "f_bound must be finite and >= 0, got {f_bound}"
        )));
    }
    let needed = 16.0 * f_bound / (PI * params.width() * tol);
    if needed > MAX_TAIL_START {
        return Err(ApxError::Capacity { tol, needed });
    }
    // Never stop before the first zero of either factor.
    let first_zero = 2.0 * PI / (params.lower + params.upper);
    plan_to(
        params,
        f_bound,
        needed.max(first_zero).max(f64::MIN_POSITIVE),
    )
}

/// Panels aligned to the sine zeros up to `tail_start`.
pub fn plan_to(params: &KernelParams, f_bound: f64, tail_start: f64) -> Result<QuadraturePlan> {
    let slow = 2.0 * PI / params.width();
    let fast = 2.0 * PI / (params.lower + params.upper);
    let estimate = tail_start / slow + tail_start / fast;
    if estimate > MAX_PANELS as f64 {
        return Err(ApxError::Capacity {
            tol: f64::NAN,
            needed: tail_start,
        });
    }
    let mut cuts = Vec::with_capacity(estimate as usize + 2);
    let (mut i, mut j) = (1u64, 1u64);
    loop {
        let zs = slow * i as f64;
        let zf = fast * j as f64;
        let next = zs.min(zf);
        if next >= tail_start {
            break;
        }
        if zs <= zf {
            i += 1;
        }
        if zf <= zs {
            j += 1;
        }
        if cuts.last().is_none_or(|&c: &f64| next - c > 1e-12 * next) {
            cuts.push(next);
        }
    }
    cuts.push(tail_start);
    let mut panels = Vec::with_capacity(cuts.len());
    let mut start = 0.0;
    for c in cuts {
        panels.push((start, c));
        start = c;
    }
    Ok(QuadraturePlan {
        panels,
        tail_start,
        tail_bound: tail_bound(params, f_bound, tail_start),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TailTreatment {
    /// Push the panels out until the tail bound meets `tol / 2`; drop the tail.
    Bound,
    /// Stop after a few slow periods and integrate the tail from the spectrum.
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOptions {
    pub tol: f64,
    pub tail: TailTreatment,
    /// Slow-factor periods covered by panels in spectral mode.
    pub spectral_periods: usize,
}

impl KernelOptions {
    pub fn new(tol: f64) -> Self {
        KernelOptions {
            tol,
            tail: TailTreatment::Spectral,
            spectral_periods: 2,
        }
    }

    pub fn with_tail(self, tail: TailTreatment) -> Self {
        KernelOptions { tail, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelSum {
    /// `f(x) + \int_0^inf phi_x Psi`.
    pub value: f64,
    /// Panel part `\int_0^T phi_x Psi`.
    pub panel_integral: f64,
    /// Tail part `\int_T^inf phi_x Psi` that was added (zero in bound mode).
    pub tail: f64,
    pub tail_start: f64,
    pub tail_bound: f64,
    pub panels: usize,
    pub evals: usize,
}

/// `S*_k f(x)` through the kernel `Psi_k`.
pub fn partial_sum_via_kernel(f: &APPolynomial, k: usize, x: f64, tol: f64) -> Result<KernelSum> {
    let params = KernelParams::indexed(k, f.alpha())?;
    partial_sum_via_kernel_with(f, &params, x, &KernelOptions::new(tol))
}

pub fn partial_sum_via_kernel_with(
    f: &APPolynomial,
    params: &KernelParams,
    x: f64,
    opts: &KernelOptions,
) -> Result<KernelSum> {
    if !(opts.tol >= 1e-12) {
        return Err(ApxError::param(format!(
            "tolerance too small: {}",
            opts.tol
        )));
    }
    let phi = SymmetricDifference::new(f, x)?;
    let fx = f.eval(x)?;
    let f_bound = f.sup_bound();
    if f.is_zero() {
        return Ok(KernelSum {
            value: 0.0,
            panel_integral: 0.0,
            tail: 0.0,
            tail_start: 0.0,
            tail_bound: 0.0,
            panels: 0,
            evals: 0,
        });
    }
    let plan = match opts.tail {
        TailTreatment::Bound => plan_quadrature(params, f_bound, opts.tol)?,
        TailTreatment::Spectral => {
            let start = opts.spectral_periods.max(1) as f64 * 2.0 * PI / params.width();
            if start > 1e6 {
                return Err(ApxError::Capacity {
                    tol: opts.tol,
                    needed: start,
                });
            }
            plan_to(params, f_bound, start)?
        }
    };
    let (panel_integral, evals) = integrate_panels(&phi, params, &plan, opts.tol / 4.0)?;
    let tail = match opts.tail {
        TailTreatment::Bound => 0.0,
        TailTreatment::Spectral => spectral_tail(f, fx, x, params, plan.tail_start),
    };
    Ok(KernelSum {
        value: fx + panel_integral + tail,
        panel_integral,
        tail,
        tail_start: plan.tail_start,
        tail_bound: plan.tail_bound,
        panels: plan.panels.len(),
        evals,
    })
}

/// `\int_0^T phi_x Psi` over the plan's panels with total absolute
/// tolerance `abs_tol`. Panels are summed in order.
pub fn integrate_panels(
    phi: &SymmetricDifference<'_>,
    params: &KernelParams,
    plan: &QuadraturePlan,
    abs_tol: f64,
) -> Result<(f64, usize)> {
    let per_panel = Tolerance::new(abs_tol / plan.panels.len().max(1) as f64, 1e-13);
    let freq = phi.base().max_exponent() + params.upper;
    let parts: Vec<(f64, usize)> = plan
        .panels
        .par_iter()
        .enumerate()
        .map(|(id, &(a, b))| {
            integrate(
                |t| phi.value(t) * psi_eval(params, t),
                a,
                b,
                per_panel,
                oscillation_pieces(a, b, freq),
            )
            .map(|e| (e.value, e.evals))
            .map_err(|err| match err {
                ApxError::QuadratureFailure { error, .. } => ApxError::QuadratureFailure {
                    panel: id,
                    start: a,
                    end: b,
                    error,
                },
                other => other,
            })
        })
        .collect::<Result<_>>()?;
    Ok(parts
        .iter()
        .fold((0.0, 0), |(s, n), &(v, e)| (s + v, n + e)))
}

// \int_T^inf phi_x(t) Psi(t) dt from the spectrum:
// phi_x(t) = sum_l d_l cos(l t) + d_0 with d_l = 4 Re(A_l e^{i l x}),
// d_0 = 2 A_0 - 2 f(x), and Psi(t) = (cos at - cos bt) / (pi (b - a) t^2).
fn spectral_tail(f: &APPolynomial, fx: f64, x: f64, params: &KernelParams, start: f64) -> f64 {
    let (a, b) = (params.lower, params.upper);
    let c = |w: f64| cos_over_t2_tail(w, start);
    let mut constant = -2.0 * fx;
    let mut sum = 0.0;
    for t in f.terms() {
        if t.lambda == 0.0 {
            constant += 2.0 * t.coef.re;
            continue;
        }
        let (s, co) = (t.lambda * x).sin_cos();
        let d = 4.0 * (t.coef.re * co - t.coef.im * s);
        let l = t.lambda;
        sum += d * 0.5 * (c(l - a) + c(l + a) - c(l - b) - c(l + b));
    }
    sum += constant * (c(a) - c(b));
    sum / (PI * (b - a))
}

/// Transform weight of `Psi_{a,b}`: 1 on `[0, a]`, linear down to 0 on
/// `[a, b]`, 0 beyond.
pub fn trapezoid_weight(params: &KernelParams, lambda: f64) -> f64 {
    let l = lambda.abs();
    if l <= params.lower {
        1.0
    } else if l >= params.upper {
        0.0
    } else {
        (params.upper - l) / params.width()
    }
}

/// Exact value of `f(x) + \int_0^inf phi_x Psi`: every term weighted by
/// [`trapezoid_weight`]. Equals the truncated sum when no exponent lies
/// strictly inside `(a, b)`.
pub fn trapezoid_sum(f: &APPolynomial, params: &KernelParams, x: f64) -> f64 {
    f.terms()
        .iter()
        .map(|t| {
            let w = trapezoid_weight(params, t.lambda);
            if t.lambda == 0.0 {
                w * t.coef.re
            } else {
                let (s, c) = (t.lambda * x).sin_cos();
                2.0 * w * (t.coef.re * c - t.coef.im * s)
            }
        })
        .fold(0.0, |a, v| a + v)
}

/// `(1/delta) \int_nu^{nu + delta} phi_x(u) du`.
pub fn averaged_difference(f: &APPolynomial, x: f64, delta: f64, nu: f64) -> Result<f64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(ApxError::param(format!("delta must be > 0, got {delta}")));
    }
    if !nu.is_finite() {
        return Err(ApxError::NonFinite("nu"));
    }
    let phi = SymmetricDifference::new(f, x)?;
    let e = integrate(
        |u| phi.value(u),
        nu,
        nu + delta,
        Tolerance::new(1e-14, 1e-10),
        oscillation_pieces(nu, nu + delta, f.max_exponent()),
    )?;
    Ok(e.value / delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cos_x() -> APPolynomial {
        APPolynomial::cosines(1.0, &[(1.0, 1.0)]).unwrap()
    }

    #[test]
    fn kernel_values() {
        let p = KernelParams::new(1.0, 2.0).unwrap();
        assert!((psi_eval(&p, 0.0) - 3.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((psi_eval(&p, 0.477465e-7) - 0.477_465).abs() < 1e-6);
        assert!(psi_eval(&p, 2.0 * PI).abs() < 1e-15);
        let idx = KernelParams::indexed(0, 1.0).unwrap();
        let direct = KernelParams::new(0.0, 0.5).unwrap();
        assert!((psi_eval(&idx, 1.0) - psi_eval(&direct, 1.0)).abs() < 1e-12);
        // index form 4 sin(at/4) sin(a(2k+1)t/4) / (a pi t^2)
        let (alpha, k, t) = (0.7, 5usize, 2.3f64);
        let closed = 4.0 * (alpha * t / 4.0).sin() * (alpha * (2 * k + 1) as f64 * t / 4.0).sin()
            / (alpha * PI * t * t);
        let got = psi_eval(&KernelParams::indexed(k, alpha).unwrap(), t);
        assert!((got - closed).abs() < 1e-15);
        assert!(KernelParams::new(1.0, 1.0).is_err());
        assert!(KernelParams::new(-0.5, 1.0).is_err());
    }

    #[test]
    fn series_branch_is_continuous() {
        let p = KernelParams::new(3.0, 7.5).unwrap();
        let inside = psi_eval(&p, 0.999e-6);
        let outside = psi_eval(&p, 1.001e-6);
        assert!((inside - outside).abs() < 1e-9);
        assert!((psi_eval(&p, 0.3) - psi_eval(&p, -0.3)).abs() < 1e-16);
    }

    #[test]
    fn plan_arithmetic() {
        let p = KernelParams::indexed(0, 1.0).unwrap();
        let plan = plan_quadrature(&p, 1.0, 1e-4).unwrap();
        let expected = 8.0 / (PI * 0.5 * 5e-5);
        assert!((plan.tail_start - expected).abs() < 1e-6 * expected);
        assert!((plan.tail_start - 1.0186e5).abs() < 1e1);
        assert_eq!(plan.panels.first().unwrap().0, 0.0);
        assert_eq!(plan.panels.last().unwrap().1, plan.tail_start);
        for w in plan.panels.windows(2) {
            assert_eq!(w[0].1, w[1].0);
        }
        assert!(plan.tail_bound <= 0.5e-4 * (1.0 + 1e-12));

        let loose = plan_quadrature(&p, 1.0, 1e3).unwrap();
        assert_eq!(loose.panels.len(), 1);

        let t0 = plan_quadrature(&KernelParams::indexed(0, 1.0).unwrap(), 1.0, 1e-2).unwrap();
        let t9 = plan_quadrature(&KernelParams::indexed(9, 1.0).unwrap(), 1.0, 1e-2).unwrap();
        assert_eq!(t0.tail_start, t9.tail_start);

        assert!(matches!(
            plan_quadrature(&p, 1.0, 1e-12),
            Err(ApxError::Capacity { .. })
        ));
    }

    #[test]
    fn kernel_reproduces_truncation() {
        let f = cos_x();
        let s2 = partial_sum_via_kernel(&f, 2, 0.0, 1e-6).unwrap();
        assert!((s2.value - 1.0).abs() < 1e-6, "{s2:?}");
        let s0 = partial_sum_via_kernel(&f, 0, 0.0, 1e-6).unwrap();
        assert!(s0.value.abs() < 1e-6, "{s0:?}");
        let z = partial_sum_via_kernel(&APPolynomial::zero(1.0), 3, 0.4, 1e-6).unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn bound_mode_meets_loose_tolerance() {
        let f = cos_x();
        let params = KernelParams::indexed(2, 1.0).unwrap();
        let opts = KernelOptions::new(1e-2).with_tail(TailTreatment::Bound);
        let s = partial_sum_via_kernel_with(&f, &params, 0.3, &opts).unwrap();
        let truth = f.star_partial_sum(2, 0.3).unwrap().value;
        assert!((s.value - truth).abs() <= 1e-2, "{s:?} vs {truth}");
    }

    #[test]
    fn averaged_difference_closed_form() {
        let f = cos_x();
        let v = averaged_difference(&f, 0.0, 2.0 * PI, 0.0).unwrap();
        assert!((v + 2.0).abs() < 1e-10);
        let phi = SymmetricDifference::new(&f, 0.7).unwrap();
        let small = averaged_difference(&f, 0.7, 1e-7, 1.3).unwrap();
        assert!((small - phi.value(1.3)).abs() < 1e-6);
        assert_eq!(
            averaged_difference(&APPolynomial::zero(1.0), 0.1, 1.0, 0.2).unwrap(),
            0.0
        );
        assert!(averaged_difference(&f, 0.0, 0.0, 0.0).is_err());
    }
}
