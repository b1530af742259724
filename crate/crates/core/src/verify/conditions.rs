//! Integral hypotheses on the majorant `w` and the rate `H`, and the two
//! auxiliary inequalities.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ap_model::{APPolynomial, Term, EXPONENT_MATCH};
use crate::error::{ApxError, Condition, Result};
use crate::quad::{integrate, integrate_log, log_grid, oscillation_pieces, Tolerance};
use crate::verify::model::{Majorant, RateFunction};

const TOL: Tolerance = Tolerance::new(1e-300, 1e-10);

/// Below this point `H` is replaced by its local power law.
pub const EXTRAPOLATION_FLOOR: f64 = 1e-6;

/// Smallest grid point of the default `u` grids.
pub const GRID_FLOOR: f64 = 1e-4;

/// A ratio stays stable when its value at the smallest `u` is within this
/// factor of its value one decade higher.
pub const STABILITY_FACTOR: f64 = 1.1;

/// 49-point log grid on `[1e-4, pi]`.
pub fn default_grid() -> Vec<f64> {
    log_grid(GRID_FLOOR, PI, 49)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionCheck {
    /// Largest ratio over the grid.
    pub constant: f64,
    pub pass: bool,
    /// Set when the left side is infinite.
    pub divergent: bool,
    /// `(u, ratio)` in grid order.
    pub ratios: Vec<(f64, f64)>,
}

impl ConditionCheck {
    fn from_ratios(ratios: Vec<(f64, f64)>) -> Self {
        let constant = ratios.iter().map(|r| r.1).fold(0.0, f64::max);
        let pass = constant.is_finite() && stable(&ratios);
        ConditionCheck {
            constant,
            pass,
            divergent: false,
            ratios,
        }
    }

    fn divergent(ratios: Vec<(f64, f64)>) -> Self {
        ConditionCheck {
            constant: f64::INFINITY,
            pass: false,
            divergent: true,
            ratios,
        }
    }
}

/// The ratio at the smallest `u` may not exceed `STABILITY_FACTOR` times the
/// ratio at the grid point closest to ten times that `u`.
fn stable(ratios: &[(f64, f64)]) -> bool {
    let Some(&(u0, r0)) = ratios.iter().min_by(|a, b| a.0.total_cmp(&b.0)) else {
        return true;
    };
    let target = (10.0 * u0).ln();
    let &(_, r1) = ratios
        .iter()
        .min_by(|a, b| {
            (a.0.ln() - target)
                .abs()
                .total_cmp(&(b.0.ln() - target).abs())
        })
        .expect("nonempty");
    r0 <= STABILITY_FACTOR * r1 + 1e-12
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid.iter().any(|&u| !(u > 0.0 && u <= PI)) {
        return Err(ApxError::param("grid points must lie in (0, pi]"));
    }
    Ok(())
}

fn ratio(left: f64, right: f64, u: f64) -> Result<f64> {
    if right > 0.0 && right.is_finite() {
        Ok(left / right)
    } else if left == 0.0 {
        Ok(0.0)
    } else {
        Err(ApxError::DegenerateRate(u))
    }
}

/// `{u^{p/q} \int_u^pi w(t)^p / t^{1+p/q} dt}^{1/p}` against `u H(u)`.
pub fn check_condition_6(
    w: &Majorant,
    h: &RateFunction,
    p: f64,
    q: f64,
    u_grid: &[f64],
) -> Result<ConditionCheck> {
    if !(p > 1.0 && p <= q && q.is_finite()) {
        return Err(ApxError::param(format!(
            "need 1 < p <= q, got p = {p}, q = {q}"
        )));
    }
    check_grid(u_grid)?;
    let s = p / q;
    let mut ratios = Vec::with_capacity(u_grid.len());
    for &u in u_grid {
        let integral = if u < PI {
            integrate_log(|t| w.eval(t).powf(p) / t.powf(1.0 + s), u, PI, TOL)?.value
        } else {
            0.0
        };
        let left = (u.powf(s) * integral).max(0.0).powf(1.0 / p);
        ratios.push((u, ratio(left, u * h.eval(u), u)?));
    }
    Ok(ConditionCheck::from_ratios(ratios))
}

/// Local exponent `e` with `g(t) ~ t^e` near `floor`.
fn local_exponent(g: impl Fn(f64) -> f64, floor: f64) -> f64 {
    let (a, b) = (g(floor), g(floor / 10.0));
    if a > 0.0 && b > 0.0 {
        (a / b).log10()
    } else {
        0.0
    }
}

/// `\int_0^t g` with `g` taken as a power law below `EXTRAPOLATION_FLOOR`.
/// `None` when that power law is not integrable at zero.
fn integral_from_zero(g: impl Fn(f64) -> f64, t: f64) -> Result<Option<f64>> {
    let floor = EXTRAPOLATION_FLOOR.min(t);
    let e = local_exponent(&g, floor);
    let g0 = g(floor);
    let head = if g0 == 0.0 {
        0.0
    } else if e <= -1.0 {
        return Ok(None);
    } else {
        g0 * floor / (e + 1.0)
    };
    let body = if t > floor {
        integrate_log(&g, floor, t, TOL)?.value
    } else {
        0.0
    };
    Ok(Some(head + body))
}

/// `\int_0^t H(u) du` against `t H(t)`.
pub fn check_condition_7(h: &RateFunction, t_grid: &[f64]) -> Result<ConditionCheck> {
    check_grid(t_grid)?;
    let mut ratios = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let Some(left) = integral_from_zero(|u| h.eval(u), t)? else {
            ratios.push((t, f64::INFINITY));
            return Ok(ConditionCheck::divergent(ratios));
        };
        ratios.push((t, ratio(left, t * h.eval(t), t)?));
    }
    Ok(ConditionCheck::from_ratios(ratios))
}

/// `\int_0^u w(t)/t dt` against `u H(u)`, after confirming the two
/// hypotheses it rests on.
pub fn check_lemma_1(
    w: &Majorant,
    h: &RateFunction,
    p: f64,
    q: f64,
    u_grid: &[f64],
) -> Result<ConditionCheck> {
    let six = check_condition_6(w, h, p, q, u_grid)?;
    if !six.pass {
        return Err(ApxError::refuse(
            Condition::Six,
            format!("ratio not stable as u -> 0 (max {:.4e})", six.constant),
        ));
    }
    let seven = check_condition_7(h, u_grid)?;
    if !seven.pass {
        return Err(ApxError::refuse(
            Condition::Seven,
            "ratio not stable or divergent",
        ));
    }
    let mut ratios = Vec::with_capacity(u_grid.len());
    for &u in u_grid {
        let left = match w {
            Majorant::Power { c, beta } => c * u.powf(*beta) / beta,
            _ => integral_from_zero(|t| w.eval(t) / t, u)?
                .ok_or_else(|| ApxError::Divergent(format!("w(t)/t near 0, u = {u}")))?,
        };
        ratios.push((u, ratio(left, u * h.eval(u), u)?));
    }
    Ok(ConditionCheck::from_ratios(ratios))
}

/// `1 < q/(q-1) <= p <= q`.
pub fn check_exponent_chain(p: f64, q: f64) -> Result<()> {
    let ok = q > 1.0 && q.is_finite() && q / (q - 1.0) <= p * (1.0 + 1e-12) && p <= q;
    if ok {
        Ok(())
    } else {
        Err(ApxError::refuse(
            Condition::ExponentChain,
            format!("need 1 < q/(q-1) <= p <= q, got p = {p}, q = {q}"),
        ))
    }
}

/// Real trigonometric coefficients `(a_0, [(a_k, b_k)])` of a 2 pi periodic
/// polynomial, `g = a_0/2 + sum a_k cos kt + b_k sin kt`.
pub fn trig_coefficients(g: &APPolynomial) -> Result<(f64, Vec<(f64, f64)>)> {
    let mut a0 = 0.0;
    let mut rest = Vec::new();
    for (i, t) in g.terms().iter().enumerate() {
        let k = t.lambda.round();
        if (t.lambda - k).abs() > EXPONENT_MATCH {
            return Err(ApxError::InvalidFunction {
                index: i,
                reason: format!("exponent {} is not an integer", t.lambda),
            });
        }
        if k == 0.0 {
            a0 = 2.0 * t.coef.re;
        } else {
            let k = k as usize;
            if rest.len() < k {
                rest.resize(k, (0.0, 0.0));
            }
            rest[k - 1] = (2.0 * t.coef.re, -2.0 * t.coef.im);
        }
    }
    Ok((a0, rest))
}

/// Ratio of the coefficient side to the weighted integral side,
/// `{|a_0|^q/2 + sum_{k>=1} |a_k|^q + |b_k|^q}^{1/q}` over
/// `{\int_{-pi}^{pi} |t^{-xi} g(t)|^p dt}^{1/p}`, `xi = 1/p + 1/q - 1`.
pub fn check_lemma_2(g: &APPolynomial, p: f64, q: f64) -> Result<f64> {
    check_exponent_chain(p, q)?;
    let (a0, rest) = trig_coefficients(g)?;
    let coeff_side = (a0.abs().powf(q) / 2.0
        + rest
            .iter()
            .map(|(a, b)| a.abs().powf(q) + b.abs().powf(q))
            .sum::<f64>())
    .powf(1.0 / q);
    if coeff_side == 0.0 {
        return Ok(0.0);
    }
    let xi = 1.0 / p + 1.0 / q - 1.0;
    let weighted = |t: f64| t.abs().powf(-xi * p) * g.value(t).abs().powf(p);
    let pieces = oscillation_pieces(0.0, PI, g.max_exponent() * p);
    let tol = Tolerance::new(1e-300, 1e-12);
    let integral = integrate(weighted, -PI, 0.0, tol, pieces)?.value
        + integrate(weighted, 0.0, PI, tol, pieces)?.value;
    Ok(coeff_side / integral.powf(1.0 / p))
}

/// 64 seeded trigonometric polynomials of degree at most 16 with real
/// coefficients drawn from `[-1, 1]`.
pub fn lemma_2_family(seed: u64) -> Vec<APPolynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..64)
        .map(|_| {
            let degree = rng.gen_range(1..=16usize);
            let mut terms = vec![Term::new(
                0.0,
                Complex64::new(rng.gen_range(-1.0..=1.0) / 2.0, 0.0),
            )];
            for k in 1..=degree {
                let (a, b): (f64, f64) = (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
                terms.push(Term::new(k as f64, Complex64::new(a / 2.0, -b / 2.0)));
            }
            terms.retain(|t| t.coef.norm() > 0.0);
            APPolynomial::new(1.0, terms).expect("integer spectrum")
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub seed: u64,
    pub max_ratio: f64,
    pub ratios: Vec<f64>,
}

pub fn check_lemma_2_family(seed: u64, p: f64, q: f64) -> Result<FamilyReport> {
    use rayon::prelude::*;
    let ratios: Vec<f64> = lemma_2_family(seed)
        .par_iter()
        .map(|g| check_lemma_2(g, p, q))
        .collect::<Result<_>>()?;
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(FamilyReport {
        seed,
        max_ratio,
        ratios,
    })
}
