//! Rate-bound harnesses: the pointwise theorems pair the strong mean at a
//! point with `a H(a) + E-term`, the norm theorems pair the Stepanov norm of
//! the strong mean with `a H(a)`. Here `a` is the diagonal entry `a_nn` for
//! head-variation matrices and the first entry `a_n0` for rest-variation
//! matrices.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ap_model::APPolynomial;
use crate::error::{ApxError, Condition, Result};
use crate::norms::{
    best_approx_bracket, class_membership_check, omega_profile, stepanov_norm_with, SearchGrid,
};
use crate::quad::log_grid;
use crate::summability::{
    classify, validate_rows, GammaSpec, StrongMean, SummabilityMatrix, VariationConstant,
};
use crate::verify::conditions::{
    check_condition_6, check_condition_7, check_exponent_chain, default_grid,
};
use crate::verify::model::{Majorant, ModulusModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremKind {
    /// Pointwise, head variation, diagonal entry.
    T1,
    /// Pointwise, rest variation, first entry.
    T2,
    /// Stepanov norm, head variation, diagonal entry.
    T3,
    /// Stepanov norm, rest variation, first entry.
    T4,
}

impl TheoremKind {
    pub fn is_pointwise(self) -> bool {
        matches!(self, TheoremKind::T1 | TheoremKind::T2)
    }

    fn uses_diagonal(self) -> bool {
        matches!(self, TheoremKind::T1 | TheoremKind::T3)
    }

    /// Entry of row `n` that drives the rate term.
    pub fn rate_entry(self, a: &SummabilityMatrix, n: usize) -> Result<f64> {
        a.entry(n, if self.uses_diagonal() { n } else { 0 })
    }
}

/// Default `n_list`: 2, 4, ..., 512.
pub fn default_n_list() -> Vec<usize> {
    (1..=9).map(|j| 1usize << j).collect()
}

/// `n_list` in increasing order without repeats, and its largest entry.
fn ordered(n_list: &[usize]) -> Result<(Vec<usize>, usize)> {
    let mut list = n_list.to_vec();
    list.sort_unstable();
    list.dedup();
    let top = *list.last().ok_or_else(|| ApxError::param("empty n_list"))?;
    Ok((list, top))
}

/// Rows, variation class of the matrix for `kind`.
fn gate_matrix(kind: TheoremKind, a: &SummabilityMatrix, n_max: usize) -> Result<f64> {
    if let Some(v) = validate_rows(a, n_max)? {
        return Err(ApxError::refuse(
            Condition::Rows,
            format!("row {} entry {} violates {:?}", v.n, v.k, v.clause),
        ));
    }
    let report = classify(a, n_max)?;
    let (condition, uniform, trend_ok) = if kind.uses_diagonal() {
        (
            Condition::Hbvs,
            report.uniform_K_hbvs,
            report.class.has_hbvs(),
        )
    } else {
        (
            Condition::Rbvs,
            report.uniform_K_rbvs,
            report.class.has_rbvs(),
        )
    };
    match uniform {
        VariationConstant::Finite(k) if trend_ok => Ok(k),
        VariationConstant::Finite(k) => Err(ApxError::refuse(
            condition,
            format!("row constants grow with n (K = {k:.4e} at n <= {n_max})"),
        )),
        VariationConstant::Unbounded => Err(ApxError::refuse(condition, "constant is unbounded")),
    }
}

fn gate_rate(
    w: &Majorant,
    model: &ModulusModel,
    p: f64,
    q: f64,
    condition: Condition,
) -> Result<()> {
    let six = check_condition_6(w, &model.h, p, q, &default_grid())?;
    if !six.pass {
        return Err(ApxError::refuse(
            condition,
            format!(
                "ratio to u H(u) is not stable as u -> 0 (max {:.4e})",
                six.constant
            ),
        ));
    }
    let seven = check_condition_7(&model.h, &default_grid())?;
    if !seven.pass {
        let detail = if seven.divergent {
            "H is not integrable at 0"
        } else {
            "ratio is not stable as t -> 0"
        };
        return Err(ApxError::refuse(Condition::Seven, detail));
    }
    Ok(())
}

/// Hypotheses of the pointwise theorems in the order they are checked.
pub fn gate_pointwise(
    kind: TheoremKind,
    f: &APPolynomial,
    x: f64,
    a: &SummabilityMatrix,
    n_max: usize,
    p: f64,
    q: f64,
    model: &ModulusModel,
) -> Result<()> {
    if !kind.is_pointwise() {
        return Err(ApxError::param(format!("{kind:?} is a norm theorem")));
    }
    check_exponent_chain(p, q)?;
    gate_matrix(kind, a, n_max)?;
    model.w.validate()?;
    gate_rate(&model.w, model, p, q, Condition::Six)?;
    let m = class_membership_check(f, x, &model.w, p)?;
    if !m.pass {
        return Err(ApxError::refuse(
            Condition::Membership,
            format!(
                "constant {:.4e} on the fine grid, {:.4e} on the coarse grid",
                m.constant, m.coarse
            ),
        ));
    }
    Ok(())
}

/// Tabulated Stepanov modulus `omega f(.)_{S^p_tilde}` on 49 log-spaced
/// points of `[1e-4, pi]`, usable as a majorant.
pub fn omega_majorant(f: &APPolynomial, p_tilde: f64) -> Result<Majorant> {
    let deltas = log_grid(1e-4, PI, 49);
    let profile = omega_profile(f, p_tilde, &deltas)?;
    if profile.iter().all(|e| e.value == 0.0) {
        return Ok(Majorant::power(0.0, 1.0));
    }
    Majorant::tabulated(profile.iter().map(|e| (e.delta, e.value)).collect())
}

/// Hypotheses of the norm theorems in the order they are checked. `omega`
/// is the Stepanov modulus of `f` in `S^p_tilde`, see [`omega_majorant`].
#[allow(clippy::too_many_arguments)]
pub fn gate_norm(
    kind: TheoremKind,
    a: &SummabilityMatrix,
    n_max: usize,
    p: f64,
    q: f64,
    q_prime: f64,
    p_tilde: f64,
    model: &ModulusModel,
    omega: &Majorant,
) -> Result<()> {
    if kind.is_pointwise() {
        return Err(ApxError::param(format!("{kind:?} is a pointwise theorem")));
    }
    if !(q_prime > 0.0 && q_prime <= q) {
        return Err(ApxError::refuse(
            Condition::QPrimeRange,
            format!("q' = {q_prime} is outside (0, {q}]"),
        ));
    }
    check_exponent_chain(p, q)?;
    if !(q <= p_tilde && p_tilde.is_finite()) {
        return Err(ApxError::refuse(
            Condition::ExponentChain,
            format!("need q <= p_tilde, got q = {q}, p_tilde = {p_tilde}"),
        ));
    }
    gate_matrix(kind, a, n_max)?;
    gate_rate(omega, model, p, q, Condition::ElevenA)
}

/// Parts of a pointwise bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundParts {
    /// `a H(a)` with `a` the entry selected by the theorem.
    pub rate: f64,
    /// `{sum_k a_nk E_{alpha k / 2}(f)^q}^{1/q}`.
    pub e_term: f64,
}

impl BoundParts {
    pub fn total(&self) -> f64 {
        self.rate + self.e_term
    }
}

fn rate_term(model: &ModulusModel, entry: f64) -> f64 {
    if entry > 0.0 {
        model.rate(entry)
    } else {
        0.0
    }
}

/// Upper brackets of `E_{alpha k / 2}(f)_{S^p}`, shared between all `k`
/// that cut the spectrum at the same place.
pub struct BestApproximations<'a> {
    f: &'a APPolynomial,
    p: f64,
    by_cut: BTreeMap<usize, f64>,
}

impl<'a> BestApproximations<'a> {
    pub fn new(f: &'a APPolynomial, p: f64) -> Self {
        BestApproximations {
            f,
            p,
            by_cut: BTreeMap::new(),
        }
    }

    fn cut(&self, k: usize) -> usize {
        let sigma = self.f.alpha() * k as f64 / 2.0;
        self.f.terms().partition_point(|t| t.lambda <= sigma)
    }

    /// Fills the cache for `k <= k_max`.
    pub fn prepare(&mut self, k_max: usize) -> Result<()> {
        let mut missing: Vec<(usize, usize)> = Vec::new();
        for k in 0..=k_max {
            let c = self.cut(k);
            if !self.by_cut.contains_key(&c) && !missing.iter().any(|m| m.0 == c) {
                missing.push((c, k));
            }
        }
        let values: Vec<f64> = missing
            .par_iter()
            .map(|&(_, k)| {
                best_approx_bracket(self.f, self.f.alpha() * k as f64 / 2.0, self.p)
                    .map(|b| b.upper)
            })
            .collect::<Result<_>>()?;
        for ((c, _), v) in missing.into_iter().zip(values) {
            self.by_cut.insert(c, v);
        }
        Ok(())
    }

    /// Cached value; `prepare` must cover `k`.
    pub fn get(&self, k: usize) -> f64 {
        self.by_cut[&self.cut(k)]
    }

    pub fn e_term(&self, row: &[f64], q: f64) -> f64 {
        row.iter()
            .enumerate()
            .filter(|(_, a)| **a != 0.0)
            .map(|(k, a)| a * self.get(k).powf(q))
            .fold(0.0, |acc, v| acc + v)
            .powf(1.0 / q)
    }
}

fn bound_parts(
    kind: TheoremKind,
    a: &SummabilityMatrix,
    n: usize,
    q: f64,
    model: &ModulusModel,
    e: &BestApproximations<'_>,
) -> Result<BoundParts> {
    let row = a.row(n)?;
    Ok(BoundParts {
        rate: rate_term(model, kind.rate_entry(a, n)?),
        e_term: e.e_term(&row, q),
    })
}

/// Right side of the pointwise theorems at row `n` after checking their
/// hypotheses.
#[allow(clippy::too_many_arguments)]
pub fn theorem_bound(
    kind: TheoremKind,
    f: &APPolynomial,
    x: f64,
    a: &SummabilityMatrix,
    n: usize,
    p: f64,
    q: f64,
    model: &ModulusModel,
) -> Result<BoundParts> {
    gate_pointwise(kind, f, x, a, n, p, q, model)?;
    let mut e = BestApproximations::new(f, p);
    e.prepare(n)?;
    bound_parts(kind, a, n, q, model, &e)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReportRow {
    pub n: usize,
    pub value: f64,
    pub bound: f64,
    pub e_term: f64,
    pub ratio: f64,
}

impl ReportRow {
    fn new(n: usize, value: f64, bound: f64, e_term: f64) -> Self {
        let denom = bound + e_term;
        let ratio = if value == 0.0 {
            0.0
        } else if denom > 0.0 {
            value / denom
        } else {
            f64::INFINITY
        };
        ReportRow {
            n,
            value,
            bound,
            e_term,
            ratio,
        }
    }
}

/// Finite-sample reading of an `O(.)` claim: the ratios stay below twice
/// their first value and do not rise over each of the last three doublings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub ratio_sup: f64,
    pub ratio_first: f64,
    pub trend_up: bool,
    pub pass: bool,
}

impl Verdict {
    pub fn from_rows(rows: &[ReportRow]) -> Self {
        let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
        let ratio_first = ratios.first().copied().unwrap_or(0.0);
        let ratio_sup = ratios.iter().copied().fold(0.0, f64::max);
        let tail = &ratios[ratios.len().saturating_sub(4)..];
        let trend_up = tail.len() == 4 && tail.windows(2).all(|w| w[1] > w[0] * (1.0 + 1e-12));
        let bounded = ratios.iter().all(|r| r.is_finite())
            && (ratio_sup == 0.0 || ratio_sup <= 2.0 * ratio_first);
        Verdict {
            ratio_sup,
            ratio_first,
            trend_up,
            pass: bounded && !trend_up,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub kind: TheoremKind,
    pub rows: Vec<ReportRow>,
    pub verdict: Verdict,
    pub config: serde_json::Value,
}

impl ExperimentReport {
    fn new(kind: TheoremKind, rows: Vec<ReportRow>, config: serde_json::Value) -> Self {
        let verdict = Verdict::from_rows(&rows);
        ExperimentReport {
            kind,
            rows,
            verdict,
            config,
        }
    }

    /// `n,value,bound,e_term,ratio` with six significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,value,bound,e_term,ratio\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{:.5e},{:.5e},{:.5e},{:.5e}\n",
                r.n, r.value, r.bound, r.e_term, r.ratio
            ));
        }
        out
    }
}

/// Settings shared by both experiment families.
#[derive(Debug)]
pub struct Experiment<'a> {
    pub f: &'a APPolynomial,
    pub a: &'a SummabilityMatrix,
    pub p: f64,
    pub q: f64,
    pub model: ModulusModel,
    pub gamma: GammaSpec,
    pub n_list: Vec<usize>,
    omega: Mutex<Vec<(f64, Majorant)>>,
}

impl<'a> Experiment<'a> {
    /// `p = q = 2`, `w = d^beta`, `H = u^{beta - 1}`, default cutoffs and
    /// `n = 2, 4, ..., 512`.
    pub fn new(f: &'a APPolynomial, a: &'a SummabilityMatrix, beta: f64) -> Self {
        Experiment {
            f,
            a,
            p: 2.0,
            q: 2.0,
            model: ModulusModel::power_law(1.0, beta),
            gamma: GammaSpec::HalfGap,
            n_list: default_n_list(),
            omega: Mutex::new(Vec::new()),
        }
    }

    /// Stepanov modulus of `f` in `S^p_tilde`, computed once per exponent.
    pub fn omega(&self, p_tilde: f64) -> Result<Majorant> {
        let mut cache = self.omega.lock().expect("omega cache");
        if let Some((_, m)) = cache.iter().find(|(p, _)| *p == p_tilde) {
            return Ok(m.clone());
        }
        let m = omega_majorant(self.f, p_tilde)?;
        cache.push((p_tilde, m.clone()));
        Ok(m)
    }

    fn echo(&self, kind: TheoremKind) -> serde_json::Map<String, serde_json::Value> {
        let mut m = serde_json::Map::new();
        m.insert("kind".into(), serde_json::json!(kind));
        m.insert("matrix".into(), self.a.name().into());
        m.insert("p".into(), self.p.into());
        m.insert("q".into(), self.q.into());
        m.insert(
            "model".into(),
            serde_json::to_value(&self.model).unwrap_or_default(),
        );
        m.insert(
            "gamma".into(),
            serde_json::to_value(&self.gamma).unwrap_or_default(),
        );
        m.insert("n_list".into(), serde_json::json!(self.n_list));
        m
    }
}

/// Strong mean at `x` against the pointwise bound for every `n` in the list.
pub fn run_pointwise_experiment(
    kind: TheoremKind,
    exp: &Experiment<'_>,
    x: f64,
) -> Result<ExperimentReport> {
    let (n_list, top) = ordered(&exp.n_list)?;
    gate_pointwise(kind, exp.f, x, exp.a, top, exp.p, exp.q, &exp.model)?;
    let mut e = BestApproximations::new(exp.f, exp.p);
    e.prepare(top)?;
    let rows: Vec<ReportRow> = n_list
        .par_iter()
        .map(|&n| {
            let value = StrongMean::new(exp.f, exp.a, n, exp.q, &exp.gamma)?.value(x);
            let parts = bound_parts(kind, exp.a, n, exp.q, &exp.model, &e)?;
            Ok(ReportRow::new(n, value, parts.rate, parts.e_term))
        })
        .collect::<Result<_>>()?;
    let mut echo = exp.echo(kind);
    echo.insert("x".into(), x.into());
    Ok(ExperimentReport::new(kind, rows, echo.into()))
}

/// Sample count of the `x` grid used for the norm of the strong mean.
pub const MIN_X_POINTS: usize = 64;

/// `||H^{q'} f||_{S^p_tilde}` against `a H(a)` for every `n` in the list.
pub fn run_norm_experiment(
    kind: TheoremKind,
    exp: &Experiment<'_>,
    q_prime: f64,
    p_tilde: f64,
    x_points: usize,
) -> Result<ExperimentReport> {
    let (n_list, top) = ordered(&exp.n_list)?;
    if !(p_tilde > 1.0 && p_tilde.is_finite()) {
        return Err(ApxError::refuse(
            Condition::ExponentChain,
            format!("need 1 < p_tilde < inf, got {p_tilde}"),
        ));
    }
    let omega = exp.omega(p_tilde)?;
    gate_norm(
        kind, exp.a, top, exp.p, exp.q, q_prime, p_tilde, &exp.model, &omega,
    )?;
    let grid = SearchGrid {
        min_points: x_points.max(MIN_X_POINTS),
        ..SearchGrid::default()
    };
    let rows: Vec<ReportRow> = n_list
        .par_iter()
        .map(|&n| {
            let mean = StrongMean::new(exp.f, exp.a, n, q_prime, &exp.gamma)?;
            let value = stepanov_norm_with(&mean, p_tilde, &grid)?;
            let rate = rate_term(&exp.model, kind.rate_entry(exp.a, n)?);
            Ok(ReportRow::new(n, value, rate, 0.0))
        })
        .collect::<Result<_>>()?;
    let mut echo = exp.echo(kind);
    echo.insert("q_prime".into(), q_prime.into());
    echo.insert("p_tilde".into(), p_tilde.into());
    echo.insert("x_points".into(), grid.min_points.into());
    Ok(ExperimentReport::new(kind, rows, echo.into()))
}
