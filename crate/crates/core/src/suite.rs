//! Regression checks run by `apx all`. Every check records what it measured
//! so the summary can be compared byte for byte between runs.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::ap_model::{make_test_corpus, APPolynomial, CorpusMember, Term};
use crate::error::{ApxError, Condition, Result};
use crate::norms::{besicovitch_norm, omega_modulus, stepanov_norm};
use crate::osc_kernel::{partial_sum_via_kernel, trapezoid_sum, KernelParams};
use crate::summability::{
    classify, head_dominance_violation, strong_mean, GammaSpec, SummabilityMatrix,
    VariationConstant,
};
use crate::verify::conditions::{
    check_condition_6, check_condition_7, check_lemma_1, check_lemma_2, check_lemma_2_family,
    default_grid,
};
use crate::verify::model::{Majorant, RateFunction};
use crate::verify::theorems::{
    run_norm_experiment, run_pointwise_experiment, Experiment, TheoremKind,
};

/// Evaluation points shared by the kernel checks.
pub const KERNEL_POINTS: [f64; 8] = [0.0, 0.5, 1.0, 1.7, 2.3, PI, 4.1, 5.5];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub details: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<CheckResult>,
}

fn check(name: &str, pass: bool, details: Value) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        pass,
        details,
    }
}

/// Largest `|kernel - oracle|` over `k <= k_max` and [`KERNEL_POINTS`]. The
/// oracle is the truncated sum, or the transform-weighted sum when an
/// exponent falls strictly inside the kernel's transition band.
pub fn kernel_sweep(
    corpus: &[CorpusMember],
    k_max: usize,
    tol: f64,
) -> Result<(f64, usize, usize)> {
    let cases: Vec<(usize, usize, f64)> = (0..corpus.len())
        .flat_map(|i| (0..=k_max).flat_map(move |k| KERNEL_POINTS.iter().map(move |&x| (i, k, x))))
        .collect();
    let errors: Vec<(f64, bool)> = cases
        .par_iter()
        .map(|&(i, k, x)| {
            let f = &corpus[i].f;
            let star = f.star_partial_sum(k, x)?;
            let oracle = if star.interior_exponent {
                trapezoid_sum(f, &KernelParams::indexed(k, f.alpha())?, x)
            } else {
                star.value
            };
            let kernel = partial_sum_via_kernel(f, k, x, tol)?;
            Ok(((kernel.value - oracle).abs(), star.interior_exponent))
        })
        .collect::<Result<_>>()?;
    let max_err = errors.iter().map(|e| e.0).fold(0.0, f64::max);
    let flagged = errors.iter().filter(|e| e.1).count();
    Ok((max_err, cases.len(), flagged))
}

fn kernel_check(corpus: &[CorpusMember]) -> Result<CheckResult> {
    let (max_err, cases, flagged) = kernel_sweep(corpus, 16, 1e-6)?;
    Ok(check(
        "kernel-truncation",
        max_err <= 1e-5,
        json!({ "cases": cases, "flagged": flagged, "max_abs_err": max_err }),
    ))
}

fn sine() -> APPolynomial {
    APPolynomial::new(1.0, vec![Term::cosine(1.0, 1.0, -PI / 2.0)]).expect("valid")
}

fn norms_check() -> Result<CheckResult> {
    let cos = APPolynomial::cosines(1.0, &[(1.0, 1.0)])?;
    let s2 = stepanov_norm(&sine(), 2.0)?;
    let b2 = besicovitch_norm(&cos, 2.0)?;
    let mut pass = (s2 - FRAC_1_SQRT_2).abs() <= 1e-6 && (b2 - FRAC_1_SQRT_2).abs() <= 1e-4;
    let mut omegas = Vec::new();
    for d in [0.1, 0.5, 1.0] {
        let v = omega_modulus(&sine(), d, 2.0)?;
        pass &= (v - SQRT_2 * (d / 2.0).sin()).abs() <= 1e-5;
        omegas.push(json!({ "delta": d, "value": v }));
    }
    Ok(check(
        "closed-form-norms",
        pass,
        json!({ "stepanov_sin": s2, "besicovitch_cos": b2, "omega_sin": omegas }),
    ))
}

fn classifier_check() -> Result<CheckResult> {
    let cesaro = classify(&SummabilityMatrix::cesaro(), 64)?;
    let one_hot = classify(&SummabilityMatrix::one_hot(), 64)?;
    let increasing = classify(&SummabilityMatrix::increasing(), 64)?;
    let mut pass = cesaro.class.has_rbvs()
        && cesaro.class.has_hbvs()
        && cesaro.uniform_K_rbvs == VariationConstant::Finite(1.0)
        && one_hot.uniform_K_rbvs.is_unbounded()
        && increasing.per_row_K_rbvs[8] == VariationConstant::Finite(17.0);
    let mut dominance = Vec::new();
    for name in ["cesaro", "riesz", "increasing", "one_hot"] {
        let a = SummabilityMatrix::builtin(name)?;
        let r = classify(&a, 64)?;
        if let (true, Some(k)) = (r.class.has_hbvs(), r.uniform_K_hbvs.finite()) {
            let violation = head_dominance_violation(&a, k, 64)?;
            pass &= violation.is_none();
            dominance.push(json!({ "matrix": name, "K": k, "violation": violation }));
        }
    }
    Ok(check(
        "classifier",
        pass,
        json!({
            "cesaro_class": cesaro.class,
            "cesaro_K_rbvs": cesaro.uniform_K_rbvs,
            "one_hot_K_rbvs": one_hot.uniform_K_rbvs,
            "increasing_K_rbvs_n8": increasing.per_row_K_rbvs[8],
            "head_dominance": dominance,
        }),
    ))
}

fn strong_mean_check() -> Result<CheckResult> {
    let cos = APPolynomial::cosines(1.0, &[(1.0, 1.0)])?;
    let v = strong_mean(
        &cos,
        &SummabilityMatrix::cesaro(),
        3,
        2.0,
        &GammaSpec::HalfGap,
        0.0,
    )?;
    Ok(check(
        "strong-mean",
        (v - FRAC_1_SQRT_2).abs() <= 1e-12,
        json!({ "value": v }),
    ))
}

fn conditions_check(seed: u64) -> Result<CheckResult> {
    let w = Majorant::power(1.0, 0.25);
    let h = RateFunction::power(1.0, -0.75);
    let grid = default_grid();
    let six = check_condition_6(&w, &h, 2.0, 2.0, &grid)?;
    let seven = check_condition_7(&h, &grid)?;
    let lemma1 = check_lemma_1(&w, &h, 2.0, 2.0, &grid)?;
    let mut lemma2 = Vec::new();
    let mut pass = six.pass
        && seven.pass
        && (seven.constant - 4.0).abs() <= 1e-3
        && lemma1.pass
        && (lemma1.constant - 4.0).abs() <= 1e-3;
    for m in 1..=8 {
        let g = APPolynomial::cosines(1.0, &[(m as f64, 1.0)])?;
        let r = check_lemma_2(&g, 2.0, 2.0)?;
        pass &= (r - 1.0 / PI.sqrt()).abs() <= 1e-6;
        lemma2.push(r);
    }
    let family = check_lemma_2_family(seed, 3.0, 4.0)?;
    pass &= family.max_ratio.is_finite();
    Ok(check(
        "conditions",
        pass,
        json!({
            "C6": six.constant,
            "C7": seven.constant,
            "C12": lemma1.constant,
            "lemma2_cos": lemma2,
            "lemma2_family_max_ratio_p3_q4": family.max_ratio,
        }),
    ))
}

fn theorem_members(corpus: &[CorpusMember]) -> Vec<&CorpusMember> {
    corpus
        .iter()
        .filter(|m| m.name == "cos" || m.name == "lacunary-0.2")
        .collect()
}

fn pointwise_check(corpus: &[CorpusMember]) -> Result<CheckResult> {
    let cesaro = SummabilityMatrix::cesaro();
    let mut pass = true;
    let mut runs = Vec::new();
    for m in theorem_members(corpus) {
        let exp = Experiment::new(&m.f, &cesaro, 0.25);
        for kind in [TheoremKind::T1, TheoremKind::T2] {
            let r = run_pointwise_experiment(kind, &exp, 0.0)?;
            pass &= r.verdict.pass;
            runs.push(json!({ "function": m.name, "kind": kind, "verdict": r.verdict }));
        }
    }
    let cos = &corpus[0].f;
    let one_hot = SummabilityMatrix::one_hot();
    let refusal =
        match run_pointwise_experiment(TheoremKind::T2, &Experiment::new(cos, &one_hot, 0.25), 0.0)
        {
            Err(ApxError::Hypothesis { condition, .. }) => Some(condition),
            Err(e) => return Err(e),
            Ok(_) => None,
        };
    pass &= refusal == Some(Condition::Rbvs);
    Ok(check(
        "pointwise-theorems",
        pass,
        json!({ "runs": runs, "one_hot_T2_refused": refusal.map(|c| c.label()) }),
    ))
}

fn norm_check(corpus: &[CorpusMember]) -> Result<CheckResult> {
    let cesaro = SummabilityMatrix::cesaro();
    let mut pass = true;
    let mut runs = Vec::new();
    for m in theorem_members(corpus) {
        let exp = Experiment::new(&m.f, &cesaro, 0.25);
        for q_prime in [0.5, 2.0] {
            let t3 = run_norm_experiment(TheoremKind::T3, &exp, q_prime, 2.0, 64)?;
            let t4 = run_norm_experiment(TheoremKind::T4, &exp, q_prime, 2.0, 64)?;
            let identical = t3.rows.iter().zip(&t4.rows).all(|(a, b)| {
                (a.value - b.value).abs() <= 1e-12 && (a.ratio - b.ratio).abs() <= 1e-12
            });
            pass &= t3.verdict.pass && t4.verdict.pass && identical;
            runs.push(json!({
                "function": m.name,
                "q_prime": q_prime,
                "T3": t3.verdict,
                "T4": t4.verdict,
                "rows_identical": identical,
            }));
        }
    }
    Ok(check("norm-theorems", pass, json!({ "runs": runs })))
}

/// Matrices drawn by the seeded samplers.
pub const SAMPLED_MATRICES: [&str; 5] = ["cesaro", "riesz", "riesz:0.5", "increasing", "one_hot"];

fn power_mean_check(corpus: &[CorpusMember], seed: u64) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..100 {
        let f = &corpus[rng.gen_range(0..corpus.len())].f;
        let a =
            SummabilityMatrix::builtin(SAMPLED_MATRICES[rng.gen_range(0..SAMPLED_MATRICES.len())])?;
        let n = rng.gen_range(0..=64);
        let x = rng.gen_range(-10.0..10.0);
        let q1 = rng.gen_range(0.25..4.0);
        let q2 = rng.gen_range(q1..=4.0);
        let low = strong_mean(f, &a, n, q1, &GammaSpec::HalfGap, x)?;
        let high = strong_mean(f, &a, n, q2, &GammaSpec::HalfGap, x)?;
        worst = worst.max(low - high);
    }
    Ok(check(
        "power-mean-monotonicity",
        worst <= 1e-12,
        json!({ "samples": 100, "max_excess": worst }),
    ))
}

/// Runs every check. Numerical failures inside a check are reported as a
/// failed check carrying the error text.
pub fn run_suite(seed: u64) -> Summary {
    let corpus = make_test_corpus(seed);
    let outcome = |name: &str, r: Result<CheckResult>| {
        r.unwrap_or_else(|e| check(name, false, json!({ "error": e.to_string() })))
    };
    let checks = vec![
        outcome("kernel-truncation", kernel_check(&corpus)),
        outcome("closed-form-norms", norms_check()),
        outcome("classifier", classifier_check()),
        outcome("strong-mean", strong_mean_check()),
        outcome("conditions", conditions_check(seed)),
        outcome("pointwise-theorems", pointwise_check(&corpus)),
        outcome("norm-theorems", norm_check(&corpus)),
        outcome("power-mean-monotonicity", power_mean_check(&corpus, seed)),
    ];
    Summary {
        seed,
        pass: checks.iter().all(|c| c.pass),
        checks,
    }
}
