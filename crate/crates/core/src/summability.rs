//! Lower triangular summability matrices, their bounded-variation constants
//! and the strong mean
//!
//! ```text
//! H^q_{n,A,gamma} f(x) = { sum_{k<=n} a_{nk} |S_{gamma_k} f(x) - f(x)|^q }^{1/q}.
//! ```

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::ap_model::APPolynomial;
use crate::error::{ApxError, Result};
use crate::norms::Signal;
use crate::osc_kernel::{partial_sum_via_kernel_with, KernelOptions, KernelParams};

const ROW_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
enum Generator {
    Cesaro,
    /// `p_k = (k + 1)^s`, `a_{nk} = p_k / sum_{j<=n} p_j`.
    Riesz(f64),
    OneHot,
    /// `a_{nk} = 2 (k + 1) / ((n + 1)(n + 2))`.
    Increasing,
    Rows(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummabilityMatrix {
    name: String,
    generator: Generator,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    rows: Vec<Vec<f64>>,
}

impl SummabilityMatrix {
    /// `cesaro`, `one_hot`, `increasing`, `riesz` (`p_k = k + 1`) or
    /// `riesz:<s>` (`p_k = (k + 1)^s`).
    pub fn builtin(name: &str) -> Result<Self> {
        let generator = match name {
            "cesaro" => Generator::Cesaro,
            "one_hot" => Generator::OneHot,
            "increasing" => Generator::Increasing,
            "riesz" => Generator::Riesz(1.0),
            other => match other.strip_prefix("riesz:").map(str::parse::<f64>) {
                Some(Ok(s)) if s.is_finite() => Generator::Riesz(s),
                _ => return Err(ApxError::UnknownMatrix(name.to_string())),
            },
        };
        Ok(SummabilityMatrix {
            name: name.to_string(),
            generator,
        })
    }

    pub fn cesaro() -> Self {
        SummabilityMatrix::builtin("cesaro").expect("builtin")
    }

    pub fn one_hot() -> Self {
        SummabilityMatrix::builtin("one_hot").expect("builtin")
    }

    pub fn increasing() -> Self {
        SummabilityMatrix::builtin("increasing").expect("builtin")
    }

    pub fn riesz(s: f64) -> Self {
        SummabilityMatrix {
            name: format!("riesz:{s}"),
            generator: Generator::Riesz(s),
        }
    }

    /// Explicit rows, row `n` holding `a_{n0}, a_{n1}, ...`.
    pub fn from_rows(name: impl Into<String>, rows: Vec<Vec<f64>>) -> Self {
        SummabilityMatrix {
            name: name.into(),
            generator: Generator::Rows(rows),
        }
    }

    /// Matrix file `{ "rows": [[1.0], [0.5, 0.5], ...] }`.
    pub fn from_json(name: impl Into<String>, text: &str) -> Result<Self> {
        let file: MatrixFile = serde_json::from_str(text)?;
        Ok(SummabilityMatrix::from_rows(name, file.rows))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Largest row index available, `None` for generated matrices.
    pub fn materialized_rows(&self) -> Option<usize> {
        match &self.generator {
            Generator::Rows(rows) => Some(rows.len()),
            _ => None,
        }
    }

    /// Row `n` up to a positive factor. Builtins use exact integer weights
    /// where they can so variation ratios come out exact.
    pub fn weights(&self, n: usize) -> Result<Vec<f64>> {
        Ok(match &self.generator {
            Generator::Cesaro => vec![1.0; n + 1],
            Generator::Riesz(s) => (0..=n).map(|k| ((k + 1) as f64).powf(*s)).collect(),
            Generator::Increasing => (0..=n).map(|k| (k + 1) as f64).collect(),
            Generator::OneHot => {
                let mut row = vec![0.0; n + 1];
                row[n] = 1.0;
                row
            }
            Generator::Rows(rows) => rows
                .get(n)
                .cloned()
                .ok_or(ApxError::IndexOutOfRange { n, m: 0 })?,
        })
    }

    /// Row `n`, normalized for builtins and verbatim for explicit rows.
    pub fn row(&self, n: usize) -> Result<Vec<f64>> {
        let w = self.weights(n)?;
        if let Generator::Rows(_) = self.generator {
            return Ok(w);
        }
        let total: f64 = w.iter().sum();
        Ok(w.into_iter().map(|v| v / total).collect())
    }

    pub fn entry(&self, n: usize, k: usize) -> Result<f64> {
        Ok(self.row(n)?.get(k).copied().unwrap_or(0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowClause {
    Nonnegative,
    LowerTriangular,
    RowSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RowViolation {
    pub n: usize,
    pub k: usize,
    pub clause: RowClause,
}

/// First violation of the row conditions for `n <= n_max`, if any.
pub fn validate_rows(a: &SummabilityMatrix, n_max: usize) -> Result<Option<RowViolation>> {
    for n in 0..=n_max {
        let row = a.row(n)?;
        for (k, &v) in row.iter().enumerate() {
            if !(v >= 0.0) {
                return Ok(Some(RowViolation {
                    n,
                    k,
                    clause: RowClause::Nonnegative,
                }));
            }
            if k > n && v != 0.0 {
                return Ok(Some(RowViolation {
                    n,
                    k,
                    clause: RowClause::LowerTriangular,
                }));
            }
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOL {
            return Ok(Some(RowViolation {
                n,
                k: row.len().saturating_sub(1),
                clause: RowClause::RowSum,
            }));
        }
    }
    Ok(None)
}

/// Minimal `K` of one variation inequality, or unbounded when the reference
/// entry is zero but the variation is not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VariationConstant {
    Finite(f64),
    Unbounded,
}

impl VariationConstant {
    fn ratio(variation: f64, reference: f64) -> Self {
        if reference > 0.0 {
            VariationConstant::Finite(variation / reference + 0.0)
        } else if variation > 0.0 {
            VariationConstant::Unbounded
        } else {
            VariationConstant::Finite(0.0)
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            VariationConstant::Finite(v) => Some(v),
            VariationConstant::Unbounded => None,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, VariationConstant::Unbounded)
    }

    fn max(self, other: Self) -> Self {
        match (self, other) {
            (VariationConstant::Finite(a), VariationConstant::Finite(b)) => {
                VariationConstant::Finite(a.max(b))
            }
            _ => VariationConstant::Unbounded,
        }
    }
}

impl Serialize for VariationConstant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            VariationConstant::Finite(v) => s.serialize_f64(*v),
            VariationConstant::Unbounded => s.serialize_str("UNBOUNDED"),
        }
    }
}

fn padded(a: &SummabilityMatrix, n: usize, m: usize) -> Result<Vec<f64>> {
    if m > n {
        return Err(ApxError::IndexOutOfRange { n, m });
    }
    let mut w = a.weights(n)?;
    w.resize(w.len().max(n + 1) + 1, 0.0);
    Ok(w)
}

/// `sum_{k>=m} |a_{nk} - a_{n,k+1}| / a_{nm}`.
pub fn rbvs_constant(a: &SummabilityMatrix, n: usize, m: usize) -> Result<VariationConstant> {
    let w = padded(a, n, m)?;
    let variation: f64 = w[m..].windows(2).map(|p| (p[0] - p[1]).abs()).sum();
    Ok(VariationConstant::ratio(variation, w[m]))
}

/// `sum_{k<m} |a_{nk} - a_{n,k+1}| / a_{nm}`.
pub fn hbvs_constant(a: &SummabilityMatrix, n: usize, m: usize) -> Result<VariationConstant> {
    let w = padded(a, n, m)?;
    let variation: f64 = w[..=m].windows(2).map(|p| (p[0] - p[1]).abs()).sum();
    Ok(VariationConstant::ratio(variation, w[m]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixClass {
    Both,
    Rbvs,
    Hbvs,
    Neither,
}

impl MatrixClass {
    pub fn has_rbvs(self) -> bool {
        matches!(self, MatrixClass::Both | MatrixClass::Rbvs)
    }

    pub fn has_hbvs(self) -> bool {
        matches!(self, MatrixClass::Both | MatrixClass::Hbvs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Bounded,
    Growing,
}

/// Above this ratio `K(n_max) / K(n_max / 2)` the row constants are taken to
/// grow without bound.
pub const GROWTH_LIMIT: f64 = 1.25;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct VariationReport {
    pub matrix: String,
    pub n_max: usize,
    pub class: MatrixClass,
    pub uniform_K_rbvs: VariationConstant,
    pub uniform_K_hbvs: VariationConstant,
    pub growth_rbvs: Option<f64>,
    pub growth_hbvs: Option<f64>,
    pub trend_rbvs: Trend,
    pub trend_hbvs: Trend,
    pub per_row_K_rbvs: Vec<VariationConstant>,
    pub per_row_K_hbvs: Vec<VariationConstant>,
}

fn row_max<F>(a: &SummabilityMatrix, n: usize, constant: F) -> Result<VariationConstant>
where
    F: Fn(&SummabilityMatrix, usize, usize) -> Result<VariationConstant>,
{
    let mut best = VariationConstant::Finite(0.0);
    for m in 0..=n {
        best = best.max(constant(a, n, m)?);
    }
    Ok(best)
}

fn growth(per_row: &[VariationConstant]) -> Option<f64> {
    let last = per_row.last()?.finite()?;
    let half = per_row[(per_row.len() - 1) / 2].finite()?;
    Some(if half == 0.0 {
        if last == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        last / half
    })
}

fn summarize(per_row: &[VariationConstant]) -> (VariationConstant, Option<f64>, Trend) {
    let uniform = per_row
        .iter()
        .copied()
        .fold(VariationConstant::Finite(0.0), VariationConstant::max);
    let g = growth(per_row);
    let trend = match (uniform, g) {
        (VariationConstant::Finite(_), Some(g)) if g <= GROWTH_LIMIT => Trend::Bounded,
        _ => Trend::Growing,
    };
    (uniform, g, trend)
}

/// Row constants for `n <= n_max` under both variation conditions.
pub fn classify(a: &SummabilityMatrix, n_max: usize) -> Result<VariationReport> {
    let rows: Vec<(VariationConstant, VariationConstant)> = (0..=n_max)
        .into_par_iter()
        .map(|n| Ok((row_max(a, n, rbvs_constant)?, row_max(a, n, hbvs_constant)?)))
        .collect::<Result<_>>()?;
    let (per_row_rbvs, per_row_hbvs): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    let (uniform_rbvs, growth_rbvs, trend_rbvs) = summarize(&per_row_rbvs);
    let (uniform_hbvs, growth_hbvs, trend_hbvs) = summarize(&per_row_hbvs);
    let class = match (trend_rbvs, trend_hbvs) {
        (Trend::Bounded, Trend::Bounded) => MatrixClass::Both,
        (Trend::Bounded, Trend::Growing) => MatrixClass::Rbvs,
        (Trend::Growing, Trend::Bounded) => MatrixClass::Hbvs,
        (Trend::Growing, Trend::Growing) => MatrixClass::Neither,
    };
    Ok(VariationReport {
        matrix: a.name().to_string(),
        n_max,
        class,
        uniform_K_rbvs: uniform_rbvs,
        uniform_K_hbvs: uniform_hbvs,
        growth_rbvs,
        growth_hbvs,
        trend_rbvs,
        trend_hbvs,
        per_row_K_rbvs: per_row_rbvs,
        per_row_K_hbvs: per_row_hbvs,
    })
}

/// First `(n, mu, m)` with `a_{n,mu} > (K + 1) a_{n,m} + 1e-12`, `mu <= m <= n`.
pub fn head_dominance_violation(
    a: &SummabilityMatrix,
    k_const: f64,
    n_max: usize,
) -> Result<Option<(usize, usize, usize)>> {
    for n in 0..=n_max {
        let row = a.row(n)?;
        let entry = |k: usize| row.get(k).copied().unwrap_or(0.0);
        // a_{n,mu} <= (K+1) a_{n,m} for all mu <= m reduces to a running max
        let mut head_max = 0.0f64;
        let mut arg = 0;
        for m in 0..=n {
            if entry(m) > head_max {
                head_max = entry(m);
                arg = m;
            }
            if head_max > (k_const + 1.0) * entry(m) + 1e-12 {
                return Ok(Some((n, arg, m)));
            }
        }
    }
    Ok(None)
}

/// Cutoff sequence `gamma_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
#[derive(Default)]
pub enum GammaSpec {
    /// `gamma_k = alpha k / 2`.
    #[default]
    HalfGap,
    /// `gamma_k = offset + slope k`.
    Linear {
        slope: f64,
        offset: f64,
    },
    Explicit(Vec<f64>),
}

impl GammaSpec {
    /// `gamma_0, ..., gamma_n`, checked nonnegative and nondecreasing.
    pub fn cutoffs(&self, n: usize, alpha: f64) -> Result<Vec<f64>> {
        let values: Vec<f64> = match self {
            GammaSpec::HalfGap => (0..=n).map(|k| alpha * k as f64 / 2.0).collect(),
            GammaSpec::Linear { slope, offset } => {
                (0..=n).map(|k| offset + slope * k as f64).collect()
            }
            GammaSpec::Explicit(v) => {
                if v.len() <= n {
                    return Err(ApxError::param(format!(
                        "gamma sequence has {} entries, need {}",
                        v.len(),
                        n + 1
                    )));
                }
                v[..=n].to_vec()
            }
        };
        if values.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
            return Err(ApxError::param("gamma_k must be finite and >= 0"));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(ApxError::param("gamma_k must be nondecreasing"));
        }
        Ok(values)
    }
}

/// How partial sums inside the strong mean are produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PartialSums {
    Direct,
    /// Through the kernel integral with the given absolute tolerance.
    Kernel {
        tol: f64,
    },
}

/// `x -> H^q_{n,A,gamma} f(x)` with the row and cutoffs fixed.
#[derive(Debug, Clone)]
pub struct StrongMean<'a> {
    f: &'a APPolynomial,
    row: Vec<f64>,
    cutoffs: Vec<f64>,
    /// Number of leading terms with `lambda <= gamma_k`.
    included: Vec<usize>,
    /// Row mass per cut: `mass[j] = sum of a_nk over k with included_k = j`.
    mass: Vec<f64>,
    q: f64,
}

impl<'a> StrongMean<'a> {
    pub fn new(
        f: &'a APPolynomial,
        a: &SummabilityMatrix,
        n: usize,
        q: f64,
        gamma: &GammaSpec,
    ) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) {
            return Err(ApxError::param(format!("q must be > 0, got {q}")));
        }
        let mut row = a.row(n)?;
        row.resize(n + 1, 0.0);
        let cutoffs = gamma.cutoffs(n, f.alpha())?;
        let included: Vec<usize> = cutoffs
            .iter()
            .map(|&g| f.terms().partition_point(|t| t.lambda <= g))
            .collect();
        let mut mass = vec![0.0; f.terms().len() + 1];
        for (a, &j) in row.iter().zip(&included) {
            mass[j] += a;
        }
        Ok(StrongMean {
            f,
            row,
            cutoffs,
            included,
            mass,
            q,
        })
    }

    pub fn cutoffs(&self) -> &[f64] {
        &self.cutoffs
    }

    pub fn row(&self) -> &[f64] {
        &self.row
    }

    /// Direct evaluation at `x`.
    pub fn value(&self, x: f64) -> f64 {
        let terms = self.f.terms();
        // walk the spectrum from the top so `rest` is f - S at each cut
        let mut rest = 0.0;
        let mut sum = 0.0;
        for j in (0..terms.len()).rev() {
            let t = &terms[j];
            rest += if t.lambda == 0.0 {
                t.coef.re
            } else {
                let (s, c) = (t.lambda * x).sin_cos();
                2.0 * (t.coef.re * c - t.coef.im * s)
            };
            if self.mass[j] != 0.0 {
                sum += self.mass[j] * rest.abs().powf(self.q);
            }
        }
        sum.powf(1.0 / self.q)
    }

    /// Evaluation with partial sums taken through the kernel integral. For a
    /// cutoff `gamma` the kernel is `Psi_{gamma, eta}` with `eta` the smaller
    /// of `gamma + alpha / 2` and the next exponent above `gamma`, so no
    /// exponent lies strictly between the two.
    pub fn value_via_kernel(&self, x: f64, tol: f64) -> Result<f64> {
        let fx = self.f.eval(x)?;
        let alpha = self.f.alpha();
        let mut sum = 0.0;
        for ((&a, &g), &j) in self.row.iter().zip(&self.cutoffs).zip(&self.included) {
            if a == 0.0 {
                continue;
            }
            let next = self.f.terms().get(j).map_or(f64::INFINITY, |t| t.lambda);
            let params = KernelParams::new(g, (g + alpha / 2.0).min(next))?;
            let s = partial_sum_via_kernel_with(self.f, &params, x, &KernelOptions::new(tol))?;
            sum += a * (s.value - fx).abs().powf(self.q);
        }
        Ok(sum.powf(1.0 / self.q))
    }
}

impl Signal for StrongMean<'_> {
    fn sample(&self, t: f64) -> f64 {
        self.value(t)
    }

    fn bandwidth(&self) -> f64 {
        self.f.max_exponent()
    }

    fn search_window(&self) -> f64 {
        self.f.search_window()
    }
}

pub fn strong_mean(
    f: &APPolynomial,
    a: &SummabilityMatrix,
    n: usize,
    q: f64,
    gamma: &GammaSpec,
    x: f64,
) -> Result<f64> {
    strong_mean_with(f, a, n, q, gamma, x, PartialSums::Direct)
}

pub fn strong_mean_with(
    f: &APPolynomial,
    a: &SummabilityMatrix,
    n: usize,
    q: f64,
    gamma: &GammaSpec,
    x: f64,
    mode: PartialSums,
) -> Result<f64> {
    if !x.is_finite() {
        return Err(ApxError::NonFinite("x"));
    }
    let mean = StrongMean::new(f, a, n, q, gamma)?;
    match mode {
        PartialSums::Direct => Ok(mean.value(x)),
        PartialSums::Kernel { tol } => mean.value_via_kernel(x, tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn builtin_rows() {
        assert_eq!(SummabilityMatrix::cesaro().row(3).unwrap(), vec![0.25; 4]);
        assert_eq!(
            SummabilityMatrix::one_hot().row(3).unwrap(),
            vec![0.0, 0.0, 0.0, 1.0]
        );
        let r = SummabilityMatrix::riesz(1.0).row(3).unwrap();
        for (k, v) in r.iter().enumerate() {
            assert!((v - (k + 1) as f64 / 10.0).abs() < 1e-15);
        }
        assert!(SummabilityMatrix::builtin("nope").is_err());
        assert_eq!(
            SummabilityMatrix::builtin("riesz:0.5").unwrap().name(),
            "riesz:0.5"
        );
    }

    #[test]
    fn row_validation() {
        assert_eq!(
            validate_rows(&SummabilityMatrix::cesaro(), 64).unwrap(),
            None
        );
        let bad_sum = SummabilityMatrix::from_rows("x", vec![vec![1.0], vec![0.5, 0.6]]);
        assert_eq!(
            validate_rows(&bad_sum, 1).unwrap(),
            Some(RowViolation {
                n: 1,
                k: 1,
                clause: RowClause::RowSum
            })
        );
        let negative = SummabilityMatrix::from_rows("x", vec![vec![1.0], vec![1.1, -0.1]]);
        assert_eq!(
            validate_rows(&negative, 1).unwrap().unwrap().clause,
            RowClause::Nonnegative
        );
        let upper = SummabilityMatrix::from_rows("x", vec![vec![0.5, 0.5]]);
        assert_eq!(
            validate_rows(&upper, 0).unwrap().unwrap().clause,
            RowClause::LowerTriangular
        );
        let short = SummabilityMatrix::from_rows("x", vec![vec![1.0]]);
        assert!(validate_rows(&short, 3).is_err());
    }

    #[test]
    fn variation_constants() {
        let c = SummabilityMatrix::cesaro();
        for n in [0, 1, 5, 20] {
            for m in 0..=n {
                assert_eq!(
                    rbvs_constant(&c, n, m).unwrap(),
                    VariationConstant::Finite(1.0)
                );
                assert_eq!(
                    hbvs_constant(&c, n, m).unwrap(),
                    VariationConstant::Finite(0.0)
                );
            }
        }
        let inc = SummabilityMatrix::increasing();
        assert_eq!(
            rbvs_constant(&inc, 8, 0).unwrap(),
            VariationConstant::Finite(17.0)
        );
        let oh = SummabilityMatrix::one_hot();
        assert_eq!(
            hbvs_constant(&oh, 5, 5).unwrap(),
            VariationConstant::Finite(1.0)
        );
        assert_eq!(
            rbvs_constant(&oh, 5, 0).unwrap(),
            VariationConstant::Unbounded
        );
        assert_eq!(
            hbvs_constant(&oh, 5, 2).unwrap(),
            VariationConstant::Finite(0.0)
        );
        assert!(rbvs_constant(&c, 3, 4).is_err());
    }

    #[test]
    fn classification() {
        let r = classify(&SummabilityMatrix::cesaro(), 64).unwrap();
        assert_eq!(r.class, MatrixClass::Both);
        assert_eq!(r.uniform_K_rbvs, VariationConstant::Finite(1.0));
        assert_eq!(r.uniform_K_hbvs, VariationConstant::Finite(0.0));

        let inc = classify(&SummabilityMatrix::increasing(), 256).unwrap();
        assert_eq!(inc.trend_rbvs, Trend::Growing);
        assert!(inc.class.has_hbvs() && !inc.class.has_rbvs());
        assert_eq!(inc.per_row_K_rbvs[8], VariationConstant::Finite(17.0));

        let oh = classify(&SummabilityMatrix::one_hot(), 16).unwrap();
        assert!(oh.uniform_K_rbvs.is_unbounded());
        assert_eq!(oh.uniform_K_hbvs, VariationConstant::Finite(1.0));
        assert_eq!(oh.class, MatrixClass::Hbvs);

        let json = serde_json::to_value(&oh).unwrap();
        assert_eq!(json["uniform_K_rbvs"], "UNBOUNDED");
        assert_eq!(json["class"], "hbvs");
    }

    #[test]
    fn head_dominance() {
        for a in [
            SummabilityMatrix::cesaro(),
            SummabilityMatrix::increasing(),
            SummabilityMatrix::one_hot(),
        ] {
            let r = classify(&a, 64).unwrap();
            if r.class.has_hbvs() {
                let k = r.uniform_K_hbvs.finite().unwrap();
                assert_eq!(
                    head_dominance_violation(&a, k, 64).unwrap(),
                    None,
                    "{}",
                    a.name()
                );
            }
        }
        let decreasing = SummabilityMatrix::from_rows("dec", vec![vec![1.0], vec![0.9, 0.1]]);
        assert_eq!(
            head_dominance_violation(&decreasing, 1.0, 1).unwrap(),
            Some((1, 0, 1))
        );
    }

    #[test]
    fn strong_mean_arithmetic() {
        let f = APPolynomial::cosines(1.0, &[(1.0, 1.0)]).unwrap();
        let c = SummabilityMatrix::cesaro();
        let v = strong_mean(&f, &c, 3, 2.0, &GammaSpec::HalfGap, 0.0).unwrap();
        assert!((v - FRAC_1_SQRT_2).abs() < 1e-12);
        let covered = GammaSpec::Linear {
            slope: 0.0,
            offset: 5.0,
        };
        assert_eq!(strong_mean(&f, &c, 3, 2.0, &covered, 0.3).unwrap(), 0.0);
        let q1 = strong_mean(&f, &c, 3, 1.0, &GammaSpec::HalfGap, 0.4).unwrap();
        let expected: f64 = (0..=3)
            .map(|k| {
                0.25 * (f.partial_sum_direct(k as f64 / 2.0, 0.4).unwrap() - f.value(0.4)).abs()
            })
            .sum();
        assert!((q1 - expected).abs() < 1e-15);
        assert!(strong_mean(&f, &c, 3, 0.0, &GammaSpec::HalfGap, 0.0).is_err());
        let decreasing = GammaSpec::Explicit(vec![1.0, 0.5, 2.0, 3.0]);
        assert!(strong_mean(&f, &c, 3, 2.0, &decreasing, 0.0).is_err());
    }

    #[test]
    fn kernel_mode_agrees() {
        let f = APPolynomial::cosines(0.4, &[(1.0, 1.0), (std::f64::consts::SQRT_2, 1.0)]).unwrap();
        let c = SummabilityMatrix::cesaro();
        let direct = strong_mean(&f, &c, 8, 2.0, &GammaSpec::HalfGap, 0.7).unwrap();
        let kernel = strong_mean_with(
            &f,
            &c,
            8,
            2.0,
            &GammaSpec::HalfGap,
            0.7,
            PartialSums::Kernel { tol: 1e-6 },
        )
        .unwrap();
        assert!(
            (direct - kernel).abs() <= 8.0 * 1e-6,
            "{direct} vs {kernel}"
        );
    }
}
