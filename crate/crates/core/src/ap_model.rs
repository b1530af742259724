//! Almost periodic trigonometric sums with a spectral gap.
//!
//! A function is stored by its one-sided spectrum: exponents `0 <= lambda_0 <
//! lambda_1 < ...` with complex coefficients. The mirrored half of the
//! spectrum (`lambda_{-v} = -lambda_v`, `A_{-v} = conj(A_v)`) is implied, so
//! every stored function is real-valued.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ApxError, Result};

/// Exponent match tolerance for coefficient lookup and endpoint detection.
pub const EXPONENT_MATCH: f64 = 1e-9;

// Slack for the gap test so exactly representable gaps like 2^j - 2^(j-1)
// are never rejected by rounding.
const GAP_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub lambda: f64,
    pub coef: Complex64,
}

impl Term {
    pub fn new(lambda: f64, coef: Complex64) -> Self {
        Term { lambda, coef }
    }

    /// The term of `amplitude * cos(lambda x + phase)`.
    pub fn cosine(lambda: f64, amplitude: f64, phase: f64) -> Self {
        if lambda == 0.0 {
            return Term::new(0.0, Complex64::new(amplitude * phase.cos(), 0.0));
        }
        Term::new(lambda, Complex64::from_polar(0.5 * amplitude, phase))
    }

    // Contribution of the term and its mirror at x.
    #[inline]
    fn real_value(&self, x: f64) -> f64 {
        if self.lambda == 0.0 {
            return self.coef.re;
        }
        let (s, c) = (self.lambda * x).sin_cos();
        2.0 * (self.coef.re * c - self.coef.im * s)
    }
}

/// A real almost periodic trigonometric polynomial whose positive exponents
/// are at least `alpha` apart.
#[derive(Debug, Clone, PartialEq)]
pub struct APPolynomial {
    alpha: f64,
    terms: Vec<Term>,
}

impl APPolynomial {
    pub fn new(alpha: f64, terms: Vec<Term>) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(ApxError::param(format!(
                "alpha must be finite and > 0, got {alpha}"
            )));
        }
        for (i, t) in terms.iter().enumerate() {
            let bad = |reason: String| Err(ApxError::InvalidFunction { index: i, reason });
            if !(t.lambda.is_finite() && t.lambda >= 0.0) {
                return bad(format!("exponent {} must be finite and >= 0", t.lambda));
            }
            if !(t.coef.re.is_finite() && t.coef.im.is_finite()) {
                return bad("coefficient is not finite".into());
            }
            if t.coef.norm() == 0.0 {
                return bad("zero coefficient".into());
            }
            if t.lambda == 0.0 {
                if i != 0 {
                    return bad("exponent 0 must come first".into());
                }
                if t.coef.im != 0.0 {
                    return bad(format!(
                        "A_0 must be real, has imaginary part {}",
                        t.coef.im
                    ));
                }
            }
            if i > 0 {
                let prev = terms[i - 1].lambda;
                if t.lambda <= prev {
                    return bad(format!(
                        "exponents not strictly increasing ({prev} then {})",
                        t.lambda
                    ));
                }
                if t.lambda - prev < alpha * (1.0 - GAP_SLACK) {
                    return bad(format!(
                        "gap {} between {prev} and {} is below alpha = {alpha}",
                        t.lambda - prev,
                        t.lambda
                    ));
                }
            }
        }
        Ok(APPolynomial { alpha, terms })
    }

    /// `sum_j amplitude_j cos(lambda_j x)`.
    pub fn cosines(alpha: f64, parts: &[(f64, f64)]) -> Result<Self> {
        APPolynomial::new(
            alpha,
            parts
                .iter()
                .map(|&(l, a)| Term::cosine(l, a, 0.0))
                .collect(),
        )
    }

    pub fn zero(alpha: f64) -> Self {
        APPolynomial {
            alpha,
            terms: Vec::new(),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_exponent(&self) -> f64 {
        self.terms.last().map_or(0.0, |t| t.lambda)
    }

    /// Positive exponents.
    pub fn exponents(&self) -> impl Iterator<Item = f64> + '_ {
        self.terms.iter().map(|t| t.lambda).filter(|&l| l > 0.0)
    }

    /// Smallest distance between consecutive exponents of `{0} ∪ spectrum`.
    pub fn min_gap(&self) -> Option<f64> {
        let mut prev = 0.0;
        let mut gap: Option<f64> = None;
        for l in self.exponents() {
            let d = l - prev;
            gap = Some(gap.map_or(d, |g| g.min(d)));
            prev = l;
        }
        gap
    }

    /// `sum |A_v|` over the full symmetric spectrum, an upper bound for `sup |f|`.
    pub fn sup_bound(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                if t.lambda == 0.0 {
                    t.coef.norm()
                } else {
                    2.0 * t.coef.norm()
                }
            })
            .fold(0.0, |a, v| a + v)
    }

    /// Point value, without argument checks. Hot loops use this.
    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.real_value(x))
            .fold(0.0, |a, v| a + v)
    }

    /// `sum_v A_v e^{i lambda_v x}` over the full symmetric spectrum.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(ApxError::NonFinite("x"));
        }
        let mut total = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let e = Complex64::from_polar(1.0, t.lambda * x);
            if t.lambda == 0.0 {
                total += t.coef;
            } else {
                total += t.coef * e + t.coef.conj() * e.conj();
            }
        }
        if total.im.abs() >= 1e-12 {
            return Err(ApxError::ImaginaryResidue(total.im));
        }
        Ok(total.re)
    }

    /// Bohr coefficient at `lambda`; zero when `lambda` is not an exponent.
    pub fn bohr_coefficient(&self, lambda: f64) -> Complex64 {
        let target = lambda.abs();
        match self
            .terms
            .iter()
            .find(|t| (t.lambda - target).abs() <= EXPONENT_MATCH)
        {
            Some(t) if lambda < 0.0 => t.coef.conj(),
            Some(t) => t.coef,
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// `S_gamma f(x)`: the terms with `|lambda_v| <= gamma`.
    pub fn partial_sum_direct(&self, gamma: f64, x: f64) -> Result<f64> {
        if !(gamma >= 0.0) {
            return Err(ApxError::param(format!(
                "cutoff gamma must be >= 0, got {gamma}"
            )));
        }
        if !x.is_finite() {
            return Err(ApxError::NonFinite("x"));
        }
        Ok(self
            .terms
            .iter()
            .take_while(|t| t.lambda <= gamma)
            .map(|t| t.real_value(x))
            .fold(0.0, |a, v| a + v))
    }

    /// `S_{alpha k / 2} f(x)` together with the emptiness test for
    /// `(alpha k / 2, alpha (k + 1) / 2)`.
    pub fn star_partial_sum(&self, k: usize, x: f64) -> Result<StarSum> {
        let lo = self.alpha * k as f64 / 2.0;
        let hi = self.alpha * (k + 1) as f64 / 2.0;
        let value = self.partial_sum_direct(lo, x)?;
        let interior_exponent = self
            .exponents()
            .any(|l| l > lo + EXPONENT_MATCH && l < hi - EXPONENT_MATCH);
        let endpoint_exponent = self
            .exponents()
            .any(|l| (l - lo).abs() <= EXPONENT_MATCH || (l - hi).abs() <= EXPONENT_MATCH);
        Ok(StarSum {
            value,
            interior_exponent,
            endpoint_exponent,
        })
    }

    /// Terms with `lambda > sigma`.
    pub fn tail(&self, sigma: f64) -> APPolynomial {
        APPolynomial {
            alpha: self.alpha,
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|t| t.lambda > sigma)
                .collect(),
        }
    }

    pub fn scaled(&self, c: f64) -> APPolynomial {
        if c == 0.0 {
            return APPolynomial::zero(self.alpha);
        }
        APPolynomial {
            alpha: self.alpha,
            terms: self
                .terms
                .iter()
                .map(|t| Term::new(t.lambda, t.coef * c))
                .collect(),
        }
    }

    /// `a f + b g`, with gap `min(alpha_f, alpha_g)`. Terms that cancel are dropped.
    pub fn combine(&self, a: f64, other: &APPolynomial, b: f64) -> Result<APPolynomial> {
        let mut merged: Vec<Term> = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let next = match (self.terms.get(i), other.terms.get(j)) {
                (Some(s), Some(o)) if (s.lambda - o.lambda).abs() <= EXPONENT_MATCH => {
                    i += 1;
                    j += 1;
                    Term::new(s.lambda, s.coef * a + o.coef * b)
                }
                (Some(s), Some(o)) if s.lambda < o.lambda => {
                    i += 1;
                    Term::new(s.lambda, s.coef * a)
                }
                (Some(s), None) => {
                    i += 1;
                    Term::new(s.lambda, s.coef * a)
                }
                (_, Some(o)) => {
                    j += 1;
                    Term::new(o.lambda, o.coef * b)
                }
                (None, None) => unreachable!(),
            };
            if next.coef.norm() != 0.0 {
                merged.push(next);
            }
        }
        APPolynomial::new(self.alpha.min(other.alpha), merged)
    }

    /// `f(. + t) - f(.)`, itself a polynomial with coefficients `A_v (e^{i lambda_v t} - 1)`.
    pub fn shifted_difference(&self, t: f64) -> APPolynomial {
        let terms = self
            .terms
            .iter()
            .filter(|term| term.lambda > 0.0)
            .map(|term| {
                let rot = Complex64::from_polar(1.0, term.lambda * t) - 1.0;
                Term::new(term.lambda, term.coef * rot)
            })
            .filter(|term| term.coef.norm() > 1e-300)
            .collect();
        APPolynomial {
            alpha: self.alpha,
            terms,
        }
    }

    /// Loads the JSON function format and validates it.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: FunctionConfig = serde_json::from_str(text)?;
        cfg.build()
    }

    pub fn to_config(&self) -> FunctionConfig {
        FunctionConfig {
            alpha: self.alpha,
            terms: self
                .terms
                .iter()
                .map(|t| TermConfig {
                    lambda: t.lambda,
                    re: t.coef.re,
                    im: t.coef.im,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarSum {
    pub value: f64,
    /// An exponent lies strictly inside `(alpha k / 2, alpha (k + 1) / 2)`.
    pub interior_exponent: bool,
    /// An exponent coincides with one of the interval ends (within 1e-9).
    pub endpoint_exponent: bool,
}

/// `phi_x(t) = f(x + t) + f(x - t) - 2 f(x)`.
#[derive(Debug, Clone)]
pub struct SymmetricDifference<'a> {
    base: &'a APPolynomial,
    x: f64,
    fx: f64,
}

impl<'a> SymmetricDifference<'a> {
    pub fn new(base: &'a APPolynomial, x: f64) -> Result<Self> {
        let fx = base.eval(x)?;
        Ok(SymmetricDifference { base, x, fx })
    }

    pub fn center(&self) -> f64 {
        self.x
    }

    pub fn base(&self) -> &APPolynomial {
        self.base
    }

    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        self.base.value(self.x + t) + self.base.value(self.x - t) - 2.0 * self.fx
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub lambda: f64,
    #[serde(default)]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// JSON function file: `{ "alpha": 1.0, "terms": [ { "lambda": 1.0, "re": 0.5, "im": 0.0 } ] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionConfig {
    pub alpha: f64,
    pub terms: Vec<TermConfig>,
}

impl FunctionConfig {
    pub fn build(&self) -> Result<APPolynomial> {
        APPolynomial::new(
            self.alpha,
            self.terms
                .iter()
                .map(|t| Term::new(t.lambda, Complex64::new(t.re, t.im)))
                .collect(),
        )
    }
}

#[derive(Debug, Clone)]
pub struct CorpusMember {
    pub name: String,
    pub f: APPolynomial,
}

/// `sum_{j=0}^{depth} 2^{-j beta} cos(2^j alpha x)`.
pub fn lacunary(alpha: f64, beta: f64, depth: u32) -> Result<APPolynomial> {
    let parts: Vec<(f64, f64)> = (0..=depth)
        .map(|j| (alpha * 2f64.powi(j as i32), 2f64.powf(-(j as f64) * beta)))
        .collect();
    APPolynomial::cosines(alpha, &parts)
}

/// Deterministic test corpus. The fixed members do not depend on `seed`;
/// two extra members are drawn from it.
pub fn make_test_corpus(seed: u64) -> Vec<CorpusMember> {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let mut out = vec![
        member("cos", APPolynomial::cosines(1.0, &[(1.0, 1.0)])),
        member(
            "sin",
            APPolynomial::new(
                1.0,
                vec![Term::cosine(1.0, 1.0, -std::f64::consts::FRAC_PI_2)],
            ),
        ),
        member(
            "two-tone-sqrt2",
            APPolynomial::cosines(0.4, &[(1.0, 1.0), (SQRT_2, 1.0)]),
        ),
        member(
            "two-tone-golden",
            APPolynomial::new(
                0.6,
                vec![
                    Term::cosine(1.0, 1.0, -std::f64::consts::FRAC_PI_2),
                    Term::cosine(golden, 0.5, 0.0),
                ],
            ),
        ),
        member("lacunary-0.2", lacunary(1.0, 0.2, 8)),
        member("lacunary-0.4", lacunary(1.0, 0.4, 8)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..2 {
        let alpha = 0.5;
        let count = rng.gen_range(2..=4);
        let mut terms = Vec::with_capacity(count + 1);
        if rng.gen_bool(0.5) {
            terms.push(Term::new(
                0.0,
                Complex64::new(rng.gen_range(-1.0..1.0), 0.0),
            ));
        }
        let mut lambda = 0.0;
        for _ in 0..count {
            lambda += alpha * (1.0 + rng.gen_range(0.0..1.0));
            let amp = rng.gen_range(0.1..1.0);
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            terms.push(Term::cosine(lambda, amp, phase));
        }
        out.push(member(
            &format!("seeded-{i}"),
            APPolynomial::new(alpha, terms),
        ));
    }
    out
}

fn member(name: &str, f: Result<APPolynomial>) -> CorpusMember {
    CorpusMember {
        name: name.to_string(),
        f: f.expect("corpus members are valid by construction"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cos_x() -> APPolynomial {
        APPolynomial::cosines(1.0, &[(1.0, 1.0)]).unwrap()
    }

    #[test]
    fn eval_cosine() {
        let f = cos_x();
        assert_eq!(f.eval(0.0).unwrap(), 1.0);
        assert!((f.eval(PI).unwrap() + 1.0).abs() < 1e-15);
        let g = APPolynomial::cosines(0.4, &[(1.0, 1.0), (SQRT_2, 1.0)]).unwrap();
        let expected = 1f64.cos() + SQRT_2.cos();
        assert!((g.eval(1.0).unwrap() - expected).abs() < 1e-14);
        assert!((g.eval(1.0).unwrap() - 0.696_2).abs() < 1e-3);
        assert!(f.eval(f64::NAN).is_err());
    }

    #[test]
    fn coefficient_lookup() {
        let f = cos_x();
        assert_eq!(f.bohr_coefficient(1.0), Complex64::new(0.5, 0.0));
        assert_eq!(f.bohr_coefficient(-1.0), Complex64::new(0.5, 0.0));
        assert_eq!(f.bohr_coefficient(2.0), Complex64::new(0.0, 0.0));
        assert_eq!(f.bohr_coefficient(1.0 + 5e-10), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn partial_sums() {
        let f = cos_x();
        assert_eq!(f.partial_sum_direct(0.5, 0.3).unwrap(), 0.0);
        assert_eq!(f.partial_sum_direct(1.0, 0.0).unwrap(), 1.0);
        assert!(f.partial_sum_direct(-0.1, 0.0).is_err());
        let g = APPolynomial::cosines(1.0, &[(1.0, 1.0), (3.0, 0.25)]).unwrap();
        assert_eq!(g.partial_sum_direct(2.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn star_sums_and_flags() {
        let f = cos_x();
        let s2 = f.star_partial_sum(2, 0.0).unwrap();
        assert_eq!(s2.value, 1.0);
        assert!(!s2.interior_exponent);
        assert!(s2.endpoint_exponent);
        let s1 = f.star_partial_sum(1, 0.0).unwrap();
        assert_eq!(s1.value, 0.0);
        assert!(!s1.interior_exponent);
        let g = APPolynomial::cosines(0.4, &[(1.0, 1.0), (SQRT_2, 1.0)]).unwrap();
        // sqrt 2 sits inside (1.4, 1.6)
        assert!(g.star_partial_sum(7, 0.0).unwrap().interior_exponent);
        assert!(!g.star_partial_sum(8, 0.0).unwrap().interior_exponent);
    }

    #[test]
    fn gap_violation_rejected() {
        let err = APPolynomial::cosines(1.0, &[(1.0, 1.0), (1.2, 0.25)]).unwrap_err();
        match err {
            ApxError::InvalidFunction { index, .. } => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn loader_reports_first_violation() {
        let bad_order =
            r#"{"alpha":1.0,"terms":[{"lambda":2.0,"re":0.5},{"lambda":1.0,"re":0.5}]}"#;
        assert!(matches!(
            APPolynomial::from_json(bad_order),
            Err(ApxError::InvalidFunction { index: 1, .. })
        ));
        let zero = r#"{"alpha":1.0,"terms":[{"lambda":1.0,"re":0.0,"im":0.0}]}"#;
        assert!(matches!(
            APPolynomial::from_json(zero),
            Err(ApxError::InvalidFunction { index: 0, .. })
        ));
        let complex_dc = r#"{"alpha":1.0,"terms":[{"lambda":0.0,"re":1.0,"im":0.5}]}"#;
        assert!(APPolynomial::from_json(complex_dc).is_err());
        let unknown = r#"{"alpha":1.0,"terms":[],"beta":2}"#;
        assert!(APPolynomial::from_json(unknown).is_err());
        let ok = r#"{ "alpha": 1.0, "terms": [ { "lambda": 1.0, "re": 0.5, "im": 0.0 } ] }"#;
        assert_eq!(APPolynomial::from_json(ok).unwrap(), cos_x());
    }

    #[test]
    fn first_exponent_respects_gap_when_dc_present() {
        let terms = vec![
            Term::new(0.0, Complex64::new(1.0, 0.0)),
            Term::cosine(0.5, 1.0, 0.0),
        ];
        assert!(APPolynomial::new(1.0, terms).is_err());
    }

    #[test]
    fn corpus_contents() {
        let corpus = make_test_corpus(0);
        assert_eq!(corpus[0].f, cos_x());
        let lac = corpus.iter().find(|m| m.name == "lacunary-0.2").unwrap();
        assert_eq!(lac.f.terms().len(), 9);
        for (j, t) in lac.f.terms().iter().enumerate() {
            assert_eq!(t.lambda, 2f64.powi(j as i32));
            // cosine amplitude 2^{-0.2 j}
            assert!((2.0 * t.coef.re - 2f64.powf(-0.2 * j as f64)).abs() < 1e-15);
        }
        for m in &corpus {
            let rebuilt = APPolynomial::new(m.f.alpha(), m.f.terms().to_vec());
            assert!(rebuilt.is_ok(), "{}", m.name);
        }
        assert_eq!(
            make_test_corpus(7)
                .iter()
                .map(|m| m.f.clone())
                .collect::<Vec<_>>(),
            make_test_corpus(7)
                .iter()
                .map(|m| m.f.clone())
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn shifted_difference_matches_pointwise() {
        let f = make_test_corpus(3)[3].f.clone();
        let d = f.shifted_difference(0.7);
        for &x in &[0.0, 1.3, -2.2] {
            let expected = f.value(x + 0.7) - f.value(x);
            assert!((d.value(x) - expected).abs() < 1e-13);
        }
    }
}
