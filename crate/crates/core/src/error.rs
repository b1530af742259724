use std::fmt;

use thiserror::Error;

/// Named hypothesis of the rate theorems. Gate refusals carry one of these so
/// callers can report which assumption failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Condition {
    /// Row conditions: nonnegative, lower triangular, rows summing to one.
    Rows,
    /// Rest bounded variation of the rows.
    Rbvs,
    /// Head bounded variation of the rows.
    Hbvs,
    /// Integral condition linking the majorant `w` to the rate `H`.
    Six,
    /// Integrability of `H` near zero.
    Seven,
    /// Integral condition on the Stepanov modulus `omega`.
    ElevenA,
    /// Membership of `f` in the class controlled by `w`.
    Membership,
    /// The exponent chain `1 < q/(q-1) <= p <= q` (with `q <= p_tilde` for norms).
    ExponentChain,
    /// `q'` must lie in `(0, q]`.
    QPrimeRange,
}

impl Condition {
    pub fn label(self) -> &'static str {
        match self {
            Condition::Rows => "(1)",
            Condition::Rbvs => "(4)",
            Condition::Hbvs => "(5)",
            Condition::Six => "(6)",
            Condition::Seven => "(7)",
            Condition::ElevenA => "(11a)",
            Condition::Membership => "membership",
            Condition::ExponentChain => "exponent-chain",
            Condition::QPrimeRange => "q-prime-range",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Membership | Condition::ExponentChain | Condition::QPrimeRange => {
                write!(f, "{}", self.label())
            }
            _ => write!(f, "condition {}", self.label()),
        }
    }
}

#[derive(Debug, Error)]
pub enum ApxError {
    #[error("invalid function at term {index}: {reason}")]
    InvalidFunction { index: usize, reason: String },

    #[error("non-finite argument: {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index out of range: n = {n}, m = {m}")]
    IndexOutOfRange { n: usize, m: usize },

    #[error("imaginary residue {0:e} exceeds 1e-12")]
    ImaginaryResidue(f64),

    #[error("quadrature failed on panel {panel} [{start}, {end}] (error estimate {error:e})")]
    QuadratureFailure {
        panel: usize,
        start: f64,
        end: f64,
        error: f64,
    },

    #[error("tolerance {tol:e} needs tail start {needed:e} > 1e9")]
    Capacity { tol: f64, needed: f64 },

    #[error("numeric instability: {0}")]
    NumericInstability(String),

    #[error("degenerate modulus: w({0}) = 0")]
    DegenerateModulus(f64),

    #[error("not a modulus of continuity: {0}")]
    ModulusValidation(String),

    #[error("degenerate rate function: H({0}) = 0 with nonzero left side")]
    DegenerateRate(f64),

    #[error("divergent integral: {0}")]
    Divergent(String),

    #[error("hypothesis refused, {condition}: {detail}")]
    Hypothesis {
        condition: Condition,
        detail: String,
    },

    #[error("unknown matrix `{0}`")]
    UnknownMatrix(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl ApxError {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        ApxError::InvalidParameter(msg.into())
    }

    pub(crate) fn refuse(condition: Condition, detail: impl Into<String>) -> Self {
        ApxError::Hypothesis {
            condition,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, ApxError>;
