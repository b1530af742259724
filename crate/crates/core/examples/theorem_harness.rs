//! Pointwise rate experiments: the strong mean at a point against
//! `a H(a) + E-term`, plus a refused run.
//!
//! Run with `cargo run --example theorem_harness`.

use apx::verify::theorems::{run_pointwise_experiment, Experiment, TheoremKind};
use apx::{make_test_corpus, ApxError, Result, SummabilityMatrix};

fn main() -> Result<()> {
    let corpus = make_test_corpus(0);
    let cesaro = SummabilityMatrix::cesaro();
    for name in ["cos", "lacunary-0.2"] {
        let f = &corpus
            .iter()
            .find(|m| m.name == name)
            .expect("corpus member")
            .f;
        let exp = Experiment::new(f, &cesaro, 0.25);
        let report = run_pointwise_experiment(TheoremKind::T1, &exp, 0.0)?;
        println!("{name}, head variation form");
        println!("    n   value        bound        e_term       ratio");
        for r in &report.rows {
            println!(
                "{:>5}   {:<12.6e} {:<12.6e} {:<12.6e} {:.4}",
                r.n, r.value, r.bound, r.e_term, r.ratio
            );
        }
        println!("verdict: {:?}\n", report.verdict);
    }

    let one_hot = SummabilityMatrix::one_hot();
    let exp = Experiment::new(&corpus[0].f, &one_hot, 0.25);
    match run_pointwise_experiment(TheoremKind::T2, &exp, 0.0) {
        Err(e @ ApxError::Hypothesis { .. }) => println!("one_hot, rest variation form: {e}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
