//! Norms and moduli of continuity used to measure approximation.
//!
//! Suprema over translates `u in R` are taken over a covering window: one
//! common period when the exponents are commensurable, otherwise the
//! quasi-period window `2 pi (1 + 1 / min_gap)`. The window is sampled on a
//! uniform grid (at least 512 points and dense enough for the highest
//! frequency), and the best grid points are refined by golden-section search
//! down to a step of `1e-4`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::ap_model::{APPolynomial, SymmetricDifference};
use crate::error::{ApxError, Result};
use crate::quad::{self, cell_integrals, golden_max, integrate, oscillation_pieces, Tolerance};
use crate::verify::model::Majorant;

/// Relative tolerance for finite-interval integrals of this module.
const WINDOW_TOL: Tolerance = Tolerance::new(1e-14, 1e-10);

/// Anything whose translates can be searched for a Stepanov supremum.
pub trait Signal: Sync {
    fn sample(&self, t: f64) -> f64;
    /// Largest angular frequency present; sets grid density.
    fn bandwidth(&self) -> f64;
    /// Length of a translate window covering a period or quasi-period.
    fn search_window(&self) -> f64;
}

impl Signal for APPolynomial {
    fn sample(&self, t: f64) -> f64 {
        self.value(t)
    }

    fn bandwidth(&self) -> f64 {
        self.max_exponent()
    }

    fn search_window(&self) -> f64 {
        let exps: Vec<f64> = self.exponents().collect();
        search_window(&exps)
    }
}

/// Covering window for the exponents `exps` (positive, increasing).
pub fn search_window(exps: &[f64]) -> f64 {
    let Some(&base) = exps.first() else {
        return PI;
    };
    if let Some(period) = common_period(base, exps) {
        return period;
    }
    let mut prev = 0.0;
    let mut gap = f64::INFINITY;
    for &l in exps {
        gap = gap.min(l - prev);
        prev = l;
    }
    2.0 * PI * (1.0 + 1.0 / gap)
}

fn common_period(base: f64, exps: &[f64]) -> Option<f64> {
    const MAX_DEN: u64 = 64;
    let mut lcm_den: u64 = 1;
    let mut fracs = Vec::with_capacity(exps.len());
    for &l in exps {
        let r = l / base;
        let (num, den) = (1..=MAX_DEN).find_map(|q| {
            let scaled = r * q as f64;
            let rounded = scaled.round();
            ((scaled - rounded).abs() <= 1e-9 * scaled.max(1.0)).then_some((rounded as u64, q))
        })?;
        fracs.push((num, den));
        lcm_den = lcm(lcm_den, den);
    }
    let mut g = 0;
    for (num, den) in fracs {
        g = gcd(g, num * (lcm_den / den));
    }
    // exponents are integer multiples of base * g / lcm_den
    let unit = base * g as f64 / lcm_den as f64;
    let period = 2.0 * PI / unit;
    (period <= 4096.0).then_some(period)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Grid and refinement settings for suprema over translates.
#[derive(Debug, Clone, Copy)]
pub struct SearchGrid {
    pub min_points: usize,
    /// Golden-section refinement stops below this step.
    pub refine_step: f64,
    /// Number of best grid points that are refined.
    pub candidates: usize,
}

impl Default for SearchGrid {
    fn default() -> Self {
        SearchGrid {
            min_points: 512,
            refine_step: 1e-4,
            candidates: 2,
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        Err(ApxError::param(format!(
            "Stepanov exponent must satisfy 1 < p < inf, got {p}"
        )))
    }
}

/// `sup_u { (1/pi) \int_u^{u+pi} |f|^p }^{1/p}`.
pub fn stepanov_norm<S: Signal + ?Sized>(f: &S, p: f64) -> Result<f64> {
    stepanov_norm_with(f, p, &SearchGrid::default())
}

pub fn stepanov_norm_with<S: Signal + ?Sized>(f: &S, p: f64, grid: &SearchGrid) -> Result<f64> {
    check_p(p)?;
    let window = f.search_window();
    let freq = f.bandwidth() * p.max(2.0);
    let h_target = (window / grid.min_points as f64).min(PI / (4.0 * (freq + 1.0)));
    let per_window = (PI / h_target).ceil() as usize;
    let h = PI / per_window as f64;
    let count = (window / h).ceil() as usize;
    let breaks: Vec<f64> = (0..=count + per_window).map(|i| i as f64 * h).collect();
    let integrand = |t: f64| f.sample(t).abs().powf(p);
    // Cells are tiny, so their targets are set against the typical window mass.
    let scale = breaks.iter().map(|&t| integrand(t)).sum::<f64>() / breaks.len() as f64;
    let cell_tol = Tolerance::new(
        WINDOW_TOL.rel * h * scale.max(f64::MIN_POSITIVE),
        WINDOW_TOL.rel,
    );
    let cells = cell_integrals(&integrand, &breaks, cell_tol, freq)?;
    let mut prefix = Vec::with_capacity(cells.len() + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for c in &cells {
        acc += c;
        prefix.push(acc);
    }
    let means: Vec<f64> = (0..count)
        .map(|i| (prefix[i + per_window] - prefix[i]) / PI)
        .collect();
    let top = breaks[breaks.len() - 1];
    let cumulative = |u: f64| -> Result<f64> {
        let u = u.clamp(0.0, top);
        let i = ((u / h).floor() as usize).min(cells.len() - 1);
        let part = integrate(
            integrand,
            breaks[i],
            u,
            cell_tol,
            oscillation_pieces(breaks[i], u, freq),
        )?;
        Ok(prefix[i] + part.value)
    };
    let window_mean = |u: f64| -> Result<f64> { Ok((cumulative(u + PI)? - cumulative(u)?) / PI) };
    let mut best = means.iter().copied().fold(0.0, f64::max);
    if best > 0.0 {
        for i in top_local_maxima(&means, grid.candidates) {
            let u = i as f64 * h;
            let (_, v) = golden_max(window_mean, (u - h).max(0.0), u + h, 0, grid.refine_step)?;
            best = best.max(v);
        }
    }
    Ok(best.max(0.0).powf(1.0 / p))
}

// Indices of the `k` largest local maxima (cyclic neighbours), best first.
fn top_local_maxima(values: &[f64], k: usize) -> Vec<usize> {
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    let mut idx: Vec<usize> = (0..n)
        .filter(|&i| {
            let left = values[(i + n - 1) % n];
            let right = values[(i + 1) % n];
            values[i] >= left && values[i] >= right
        })
        .collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}

/// `sup_u |f(u)|`, with at least 20 golden-section steps on each candidate.
pub fn sup_norm<S: Signal + ?Sized>(f: &S) -> Result<f64> {
    let window = f.search_window();
    let h = (window / 512.0).min(PI / (8.0 * (f.bandwidth() + 1.0)));
    let count = (window / h).ceil() as usize;
    let samples: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|i| f.sample(i as f64 * h).abs())
        .collect();
    let mut best = samples.iter().copied().fold(0.0, f64::max);
    for i in top_local_maxima(&samples, 4) {
        let u = i as f64 * h;
        let (_, v) = golden_max(|t| Ok(f.sample(t).abs()), u - h, u + h, 20, 1e-10)?;
        best = best.max(v);
    }
    Ok(best)
}

/// Besicovitch mean `lim (1/2L) \int_{-L}^{L} |f|^p` for `p >= 1`.
///
/// The mean is taken with a `cos^2` taper over `[-L, L]`, `L` = 64 covering
/// windows, and accepted when doubling `L` moves the norm by less than
/// `1e-4`. For `p = 2` the result must also agree with Parseval's value.
pub fn besicovitch_norm(f: &APPolynomial, p: f64) -> Result<f64> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(ApxError::param(format!(
            "Besicovitch exponent must be >= 1, got {p}"
        )));
    }
    if f.is_zero() {
        return Ok(0.0);
    }
    let span = 64.0 * f.search_window();
    let freq = f.max_exponent() * p.max(2.0) + 1.0;
    let mean = |half: f64| -> Result<f64> {
        let taper = |t: f64| {
            let c = (0.5 * PI * t / half).cos();
            c * c
        };
        // Independent chunks so the kinks of |f|^p at zeros of f do not
        // compete for one subdivision budget.
        let chunks = (oscillation_pieces(-half, half, freq) / 16).max(1);
        let width = 2.0 * half / chunks as f64;
        let parts: Vec<f64> = (0..chunks)
            .into_par_iter()
            .map(|i| {
                let lo = -half + width * i as f64;
                let hi = if i + 1 == chunks { half } else { lo + width };
                integrate(
                    |t| f.value(t).abs().powf(p) * taper(t),
                    lo,
                    hi,
                    Tolerance::new(1e-13 * width, 1e-10),
                    16,
                )
                .map(|e| e.value)
            })
            .collect::<Result<_>>()?;
        let total = parts.iter().fold(0.0, |a, v| a + v);
        Ok((total / half).max(0.0).powf(1.0 / p))
    };
    let coarse = mean(span)?;
    let fine = mean(2.0 * span)?;
    if (fine - coarse).abs() >= 1e-4 {
        return Err(ApxError::NumericInstability(format!(
            "Besicovitch mean not converged: {coarse} at L, {fine} at 2L"
        )));
    }
    if p == 2.0 {
        let parseval = parseval_norm(f);
        if (fine - parseval).abs() >= 1e-4 {
            return Err(ApxError::NumericInstability(format!(
                "Besicovitch B2 {fine} disagrees with Parseval {parseval}"
            )));
        }
    }
    Ok(fine)
}

/// `(sum |A_v|^2)^{1/2}` over the full symmetric spectrum.
pub fn parseval_norm(f: &APPolynomial) -> f64 {
    f.terms()
        .iter()
        .map(|t| {
            let a2 = t.coef.norm_sqr();
            if t.lambda == 0.0 {
                a2
            } else {
                2.0 * a2
            }
        })
        .sum::<f64>()
        .sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModulusKind {
    OmegaSp { p: f64 },
    WxP { x: f64, p: f64 },
}

/// One point of an emitted modulus profile. `value` is the least
/// nondecreasing majorant of the raw values up to `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModulusEstimate {
    pub delta: f64,
    pub value: f64,
    pub raw: f64,
    pub kind: ModulusKind,
}

fn check_delta(delta: f64) -> Result<()> {
    if delta.is_finite() && delta > 0.0 {
        Ok(())
    } else {
        Err(ApxError::param(format!("delta must be > 0, got {delta}")))
    }
}

/// `sup_{|t| <= delta} || f(. + t) - f(.) ||_{S^p}` over a 129-point grid
/// in `t` followed by golden-section refinement.
pub fn omega_modulus(f: &APPolynomial, delta: f64, p: f64) -> Result<f64> {
    check_delta(delta)?;
    check_p(p)?;
    const POINTS: usize = 129;
    let h = 2.0 * delta / (POINTS - 1) as f64;
    let values: Vec<f64> = (0..POINTS)
        .into_par_iter()
        .map(|j| stepanov_norm(&f.shifted_difference(-delta + j as f64 * h), p))
        .collect::<Result<_>>()?;
    let (best_j, mut best) = values
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |acc, (j, v)| if v > acc.1 { (j, v) } else { acc });
    if best > 0.0 {
        let t = -delta + best_j as f64 * h;
        let (lo, hi) = ((t - h).max(-delta), (t + h).min(delta));
        let (_, v) = golden_max(
            |s| stepanov_norm(&f.shifted_difference(s), p),
            lo,
            hi,
            0,
            1e-4,
        )?;
        best = best.max(v);
    }
    Ok(best)
}

/// `omega f(delta)_{S^p}` tabulated at increasing `deltas`.
///
/// Uses `||f(. - t) - f||_{S^p} = ||f(. + t) - f||_{S^p}` and evaluates the
/// shifted norm on the union of a 129-point log grid and `deltas`.
pub fn omega_profile(f: &APPolynomial, p: f64, deltas: &[f64]) -> Result<Vec<ModulusEstimate>> {
    check_p(p)?;
    for &d in deltas {
        check_delta(d)?;
    }
    let Some(&top) = deltas.last() else {
        return Ok(Vec::new());
    };
    let lo = deltas[0].min(top);
    let mut ts: Vec<f64> = if top > lo {
        quad::log_grid(lo, top, 129)
    } else {
        vec![top]
    };
    ts.extend_from_slice(deltas);
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let norms: Vec<f64> = ts
        .par_iter()
        .map(|&t| stepanov_norm(&f.shifted_difference(t), p))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(deltas.len());
    let mut running = 0.0f64;
    let mut i = 0;
    for &d in deltas {
        while i < ts.len() && ts[i] <= d {
            running = running.max(norms[i]);
            i += 1;
        }
        let raw = norms[ts.partition_point(|&t| t < d).min(ts.len() - 1)];
        out.push(ModulusEstimate {
            delta: d,
            value: running,
            raw,
            kind: ModulusKind::OmegaSp { p },
        });
    }
    Ok(out)
}

/// `{ (1/delta) \int_0^delta |phi_x(t)|^p dt }^{1/p}`.
pub fn wx_modulus(f: &APPolynomial, x: f64, delta: f64, p: f64) -> Result<f64> {
    check_delta(delta)?;
    check_p(p)?;
    let phi = SymmetricDifference::new(f, x)?;
    let e = integrate(
        |t| phi.value(t).abs().powf(p),
        0.0,
        delta,
        WINDOW_TOL,
        oscillation_pieces(0.0, delta, f.max_exponent() * p.max(2.0)),
    )?;
    Ok((e.value / delta).max(0.0).powf(1.0 / p))
}

/// `w_x f(delta)_p` at increasing `deltas`, computed from one cumulative pass.
pub fn wx_profile(
    f: &APPolynomial,
    x: f64,
    p: f64,
    deltas: &[f64],
) -> Result<Vec<ModulusEstimate>> {
    check_p(p)?;
    for &d in deltas {
        check_delta(d)?;
    }
    if deltas.windows(2).any(|w| w[1] < w[0]) {
        return Err(ApxError::param("deltas must be nondecreasing"));
    }
    let phi = SymmetricDifference::new(f, x)?;
    let mut breaks = Vec::with_capacity(deltas.len() + 1);
    breaks.push(0.0);
    breaks.extend_from_slice(deltas);
    let cells = cell_integrals(
        &|t: f64| phi.value(t).abs().powf(p),
        &breaks,
        WINDOW_TOL,
        f.max_exponent() * p.max(2.0),
    )?;
    let mut acc = 0.0;
    let mut running = 0.0f64;
    Ok(deltas
        .iter()
        .zip(&cells)
        .map(|(&d, c)| {
            acc += c;
            let raw = (acc / d).max(0.0).powf(1.0 / p);
            running = running.max(raw);
            ModulusEstimate {
                delta: d,
                value: running,
                raw,
                kind: ModulusKind::WxP { x, p },
            }
        })
        .collect())
}

/// Computable bracket around `E_sigma(f)_{S^p}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracket {
    /// Largest coefficient modulus beyond `sigma`.
    pub lower: f64,
    /// Stepanov norm of the spectral tail beyond `sigma`.
    pub upper: f64,
}

pub fn best_approx_bracket(f: &APPolynomial, sigma: f64, p: f64) -> Result<Bracket> {
    if !(sigma >= 0.0) {
        return Err(ApxError::param(format!("sigma must be >= 0, got {sigma}")));
    }
    let tail = f.tail(sigma);
    let lower = tail
        .terms()
        .iter()
        .map(|t| t.coef.norm())
        .fold(0.0, f64::max);
    let upper = if tail.is_zero() {
        0.0
    } else {
        stepanov_norm(&tail, p)?
    };
    Ok(Bracket { lower, upper })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership {
    /// Smallest admissible constant on the finer grid.
    pub constant: f64,
    /// Same quantity on the 32 x 32 grid.
    pub coarse: f64,
    pub pass: bool,
}

/// Estimates the smallest `C` with
/// `[(1/d) \int_0^d |phi_x(t) - phi_x(t +- g)|^p dt]^{1/p} <= C w(g)` and
/// `w_x f(d)_p <= C w(d)` for `g, d` on a log grid in `[1e-3, pi]`.
/// Passes when `C` is finite and moves by at most 25% from a 32-point to a
/// 64-point grid.
pub fn class_membership_check(
    f: &APPolynomial,
    x: f64,
    w: &Majorant,
    p: f64,
) -> Result<Membership> {
    check_p(p)?;
    w.validate()?;
    let coarse = membership_constant(f, x, w, p, 32)?;
    let fine = membership_constant(f, x, w, p, 64)?;
    let stable = if coarse == 0.0 {
        fine == 0.0
    } else {
        (fine - coarse).abs() <= 0.25 * coarse
    };
    Ok(Membership {
        constant: fine,
        coarse,
        pass: fine.is_finite() && stable,
    })
}

fn membership_constant(
    f: &APPolynomial,
    x: f64,
    w: &Majorant,
    p: f64,
    points: usize,
) -> Result<f64> {
    let grid = quad::log_grid(1e-3, PI, points);
    for &g in &grid {
        if w.eval(g) == 0.0 {
            return Err(ApxError::DegenerateModulus(g));
        }
    }
    let phi = SymmetricDifference::new(f, x)?;
    let freq = f.max_exponent() * p.max(2.0);
    let mut breaks = Vec::with_capacity(points + 1);
    breaks.push(0.0);
    breaks.extend_from_slice(&grid);

    let ratio_max =
        |integrand: &(dyn Fn(f64) -> f64 + Sync), scale: &dyn Fn(f64) -> f64| -> Result<f64> {
            let cells = cell_integrals(&|t| integrand(t), &breaks, WINDOW_TOL, freq)?;
            let mut acc = 0.0;
            let mut best = 0.0f64;
            for (&d, c) in grid.iter().zip(&cells) {
                acc += c;
                let v = (acc / d).max(0.0).powf(1.0 / p);
                best = best.max(v / scale(d));
            }
            Ok(best)
        };

    let own = ratio_max(&|t| phi.value(t).abs().powf(p), &|d| w.eval(d))?;
    let shifted: Vec<f64> = grid
        .par_iter()
        .flat_map(|&g| [g, -g])
        .map(|shift| {
            let wg = w.eval(shift.abs());
            ratio_max(
                &|t| (phi.value(t) - phi.value(t + shift)).abs().powf(p),
                &|_| wg,
            )
        })
        .collect::<Result<_>>()?;
    Ok(shifted.into_iter().fold(own, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ap_model::Term;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn cos_x() -> APPolynomial {
        APPolynomial::cosines(1.0, &[(1.0, 1.0)]).unwrap()
    }

    fn sin_x() -> APPolynomial {
        APPolynomial::new(1.0, vec![Term::cosine(1.0, 1.0, -PI / 2.0)]).unwrap()
    }

    #[test]
    fn windows() {
        assert!((search_window(&[1.0]) - 2.0 * PI).abs() < 1e-12);
        assert!((search_window(&[1.0, 2.0, 4.0, 256.0]) - 2.0 * PI).abs() < 1e-12);
        assert!((search_window(&[0.5, 1.5]) - 4.0 * PI).abs() < 1e-12);
        let quasi = search_window(&[1.0, SQRT_2]);
        assert!((quasi - 2.0 * PI * (1.0 + 1.0 / (SQRT_2 - 1.0))).abs() < 1e-9);
    }

    #[test]
    fn stepanov_closed_forms() {
        assert!((stepanov_norm(&sin_x(), 2.0).unwrap() - FRAC_1_SQRT_2).abs() < 1e-6);
        assert_eq!(stepanov_norm(&APPolynomial::zero(1.0), 2.0).unwrap(), 0.0);
        let c = APPolynomial::new(1.0, vec![Term::cosine(0.0, -3.0, 0.0)]).unwrap();
        assert!((stepanov_norm(&c, 2.0).unwrap() - 3.0).abs() < 1e-9);
        assert!(stepanov_norm(&sin_x(), 1.0).is_err());
        assert!(stepanov_norm(&sin_x(), f64::INFINITY).is_err());
    }

    #[test]
    fn sup_norms() {
        assert!((sup_norm(&sin_x()).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(sup_norm(&APPolynomial::zero(1.0)).unwrap(), 0.0);
        let two = APPolynomial::cosines(0.4, &[(1.0, 1.0), (SQRT_2, 1.0)]).unwrap();
        let s = sup_norm(&two).unwrap();
        assert!((1.99..=2.0).contains(&s), "{s}");
    }

    #[test]
    fn besicovitch_parseval() {
        assert!((besicovitch_norm(&cos_x(), 2.0).unwrap() - FRAC_1_SQRT_2).abs() < 1e-4);
        assert_eq!(
            besicovitch_norm(&APPolynomial::zero(1.0), 2.0).unwrap(),
            0.0
        );
        let s = stepanov_norm(&cos_x(), 2.0).unwrap();
        assert!(besicovitch_norm(&cos_x(), 2.0).unwrap() <= s + 1e-6);
    }

    #[test]
    fn omega_of_sine() {
        for &d in &[0.1, 0.5, 1.0] {
            let v = omega_modulus(&sin_x(), d, 2.0).unwrap();
            assert!(
                (v - SQRT_2 * (d / 2.0).sin()).abs() < 1e-5,
                "delta {d}: {v}"
            );
        }
        let c = APPolynomial::new(1.0, vec![Term::cosine(0.0, 2.0, 0.0)]).unwrap();
        assert_eq!(omega_modulus(&c, 0.5, 2.0).unwrap(), 0.0);
        assert!(omega_modulus(&sin_x(), 0.0, 2.0).is_err());
    }

    #[test]
    fn wx_closed_forms() {
        let v = wx_modulus(&cos_x(), 0.0, PI, 2.0).unwrap();
        assert!((v - 6f64.sqrt()).abs() < 1e-8);
        let z = wx_modulus(&cos_x(), PI / 2.0, 1.0, 2.0).unwrap();
        assert!(z < 1e-12);
        let small = wx_modulus(&cos_x(), 0.3, 1e-4, 2.0).unwrap();
        assert!(small < 1e-7);
        assert!(wx_modulus(&cos_x(), 0.0, -1.0, 2.0).is_err());
    }

    #[test]
    fn wx_profile_matches_pointwise() {
        let f = cos_x();
        let deltas = quad::log_grid(0.01, PI, 12);
        let prof = wx_profile(&f, 0.4, 2.0, &deltas).unwrap();
        for e in &prof {
            let direct = wx_modulus(&f, 0.4, e.delta, 2.0).unwrap();
            assert!((e.raw - direct).abs() < 1e-9 * direct.max(1.0));
            assert!(e.value >= e.raw);
        }
    }

    #[test]
    fn brackets() {
        let f = cos_x();
        assert_eq!(
            best_approx_bracket(&f, 2.0, 2.0).unwrap(),
            Bracket {
                lower: 0.0,
                upper: 0.0
            }
        );
        let b = best_approx_bracket(&f, 0.5, 2.0).unwrap();
        assert_eq!(b.lower, 0.5);
        assert!((b.upper - FRAC_1_SQRT_2).abs() < 1e-6);
        let g = APPolynomial::cosines(1.0, &[(1.0, 1.0), (3.0, 0.25)]).unwrap();
        let b = best_approx_bracket(&g, 2.0, 2.0).unwrap();
        assert_eq!(b.lower, 0.125);
        assert!((b.upper - 0.25 * FRAC_1_SQRT_2).abs() < 1e-6);
        assert!(b.lower <= b.upper);
    }

    #[test]
    fn membership() {
        let m = class_membership_check(&cos_x(), 0.0, &Majorant::power(1.0, 0.4), 2.0).unwrap();
        assert!(m.pass, "{m:?}");
        let z = class_membership_check(
            &APPolynomial::zero(1.0),
            0.0,
            &Majorant::power(1.0, 0.4),
            2.0,
        )
        .unwrap();
        assert_eq!(z.constant, 0.0);
        assert!(z.pass);
        assert!(matches!(
            class_membership_check(&cos_x(), 0.0, &Majorant::power(1.0, 2.0), 2.0),
            Err(ApxError::ModulusValidation(_))
        ));
        assert!(matches!(
            class_membership_check(&cos_x(), 0.0, &Majorant::power(0.0, 0.5), 2.0),
            Err(ApxError::DegenerateModulus(_))
        ));
    }
}
