//! Majorants of modulus-of-continuity type and their companion rate functions.

use serde::{Deserialize, Serialize};

use crate::error::{ApxError, Result};
use crate::quad::log_grid;

/// A function `w` of modulus-of-continuity type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Majorant {
    /// `w(d) = c d^beta`.
    Power { c: f64, beta: f64 },
    /// Piecewise log-log interpolation through `(delta, w)` samples with
    /// increasing `delta > 0`; power-law extrapolation below the first sample
    /// and constant beyond the last one.
    Tabulated { points: Vec<(f64, f64)> },
}

impl Majorant {
    pub fn power(c: f64, beta: f64) -> Self {
        Majorant::Power { c, beta }
    }

    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(ApxError::param("empty majorant table"));
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(ApxError::param("majorant table abscissae must increase"));
            }
        }
        if points
            .iter()
            .any(|&(d, v)| !(d > 0.0 && v >= 0.0 && v.is_finite()))
        {
            return Err(ApxError::param(
                "majorant table needs delta > 0 and finite w >= 0",
            ));
        }
        Ok(Majorant::Tabulated { points })
    }

    pub fn eval(&self, delta: f64) -> f64 {
        if delta <= 0.0 {
            return 0.0;
        }
        match self {
            Majorant::Power { c, beta } => c * delta.powf(*beta),
            Majorant::Tabulated { points } => table_eval(points, delta),
        }
    }

    /// Checks `w(0) = 0`, monotonicity and subadditivity on a fixed grid of
    /// 128 pairs in `[1e-3, pi]`.
    pub fn validate(&self) -> Result<()> {
        if let Majorant::Power { c, beta } = self {
            if !(c.is_finite() && *c >= 0.0 && beta.is_finite() && *beta > 0.0) {
                return Err(ApxError::ModulusValidation(format!(
                    "power majorant needs c >= 0 and beta > 0, got c = {c}, beta = {beta}"
                )));
            }
        }
        if self.eval(0.0) != 0.0 {
            return Err(ApxError::ModulusValidation("w(0) != 0".into()));
        }
        let fine = log_grid(1e-3, std::f64::consts::PI, 64);
        for w in fine.windows(2) {
            if self.eval(w[1]) < self.eval(w[0]) * (1.0 - 1e-12) {
                return Err(ApxError::ModulusValidation(format!(
                    "w decreases between {} and {}",
                    w[0], w[1]
                )));
            }
        }
        let rows = log_grid(1e-3, std::f64::consts::PI, 16);
        let cols = log_grid(1e-3, std::f64::consts::PI, 8);
        for &a in &rows {
            for &b in &cols {
                let lhs = self.eval(a + b);
                let rhs = self.eval(a) + self.eval(b);
                if lhs > rhs * (1.0 + 1e-12) + 1e-300 {
                    return Err(ApxError::ModulusValidation(format!(
                        "not subadditive: w({a} + {b}) = {lhs} > {rhs}"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn table_eval(points: &[(f64, f64)], delta: f64) -> f64 {
    let (d0, w0) = points[0];
    if delta <= d0 {
        if let Some(&(d1, w1)) = points.get(1) {
            if w0 > 0.0 && w1 > 0.0 && w1 >= w0 {
                let slope = (w1 / w0).ln() / (d1 / d0).ln();
                if slope > 0.0 {
                    return w0 * (delta / d0).powf(slope);
                }
            }
        }
        return w0 * delta / d0;
    }
    let last = points[points.len() - 1];
    if delta >= last.0 {
        return last.1;
    }
    let i = points.partition_point(|&(d, _)| d <= delta);
    let (da, wa) = points[i - 1];
    let (db, wb) = points[i];
    if wa > 0.0 && wb > 0.0 {
        let s = (delta / da).ln() / (db / da).ln();
        (wa.ln() + s * (wb / wa).ln()).exp()
    } else {
        wa + (wb - wa) * (delta - da) / (db - da)
    }
}

/// Companion rate `H(u) = c u^exponent`, `c >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateFunction {
    pub c: f64,
    pub exponent: f64,
}

impl RateFunction {
    pub fn power(c: f64, exponent: f64) -> Self {
        RateFunction { c, exponent }
    }

    pub fn eval(&self, u: f64) -> f64 {
        if self.c == 0.0 {
            0.0
        } else {
            self.c * u.powf(self.exponent)
        }
    }
}

/// A majorant `w` together with its rate function `H`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusModel {
    pub w: Majorant,
    pub h: RateFunction,
}

impl ModulusModel {
    /// `w(d) = c d^beta` paired with `H(u) = c u^(beta - 1)`.
    pub fn power_law(c: f64, beta: f64) -> Self {
        ModulusModel {
            w: Majorant::power(c, beta),
            h: RateFunction::power(c, beta - 1.0),
        }
    }

    /// `u H(u)`, the shape of the pointwise rate bound.
    pub fn rate(&self, u: f64) -> f64 {
        u * self.h.eval(u)
    }
}
