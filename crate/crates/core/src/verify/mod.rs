//! Hypothesis checks and rate-bound harnesses.

pub mod conditions;
pub mod model;
pub mod theorems;

pub use conditions::{
    check_condition_6, check_condition_7, check_lemma_1, check_lemma_2, check_lemma_2_family,
    ConditionCheck,
};
pub use theorems::{
    run_norm_experiment, run_pointwise_experiment, theorem_bound, BoundParts, Experiment,
    ExperimentReport, ReportRow, TheoremKind, Verdict,
};
