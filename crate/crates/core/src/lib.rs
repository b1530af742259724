//! Strong approximation of almost periodic functions in the Stepanov sense.
//!
//! The crate works with finite almost periodic trigonometric sums whose
//! positive exponents are separated by a gap `alpha`, and provides:
//!
//! * [`ap_model`]: the function model, partial sums and a seeded corpus;
//! * [`norms`]: Stepanov, sup and Besicovitch norms, the two moduli of
//!   continuity and best-approximation brackets;
//! * [`osc_kernel`]: the kernel `Psi` and the improper integral that
//!   reproduces partial sums;
//! * [`summability`]: lower triangular summability matrices, their
//!   rest/head bounded variation constants and the strong mean;
//! * [`verify`]: hypothesis checks and rate-bound harnesses for the four
//!   approximation theorems;
//! * [`cli`]: the `apx` command line front end.

pub mod ap_model;
pub mod cli;
pub mod error;
pub mod norms;
pub mod osc_kernel;
pub mod quad;
pub mod special;
pub mod suite;
pub mod summability;
pub mod verify;

pub use ap_model::{make_test_corpus, APPolynomial, StarSum, SymmetricDifference, Term};
pub use error::{ApxError, Condition, Result};
pub use summability::SummabilityMatrix;
pub use verify::model::{Majorant, ModulusModel, RateFunction};
