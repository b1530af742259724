//! Stepanov norm of the strong mean against `a H(a)`, and best
//! approximation brackets.
//!
//! Run with `cargo run --example norm_approximation`.

use apx::norms::best_approx_bracket;
use apx::verify::theorems::{run_norm_experiment, Experiment, TheoremKind};
use apx::{make_test_corpus, Result, SummabilityMatrix};

fn main() -> Result<()> {
    let corpus = make_test_corpus(0);
    let cos = &corpus[0].f;
    let cesaro = SummabilityMatrix::cesaro();
    let mut exp = Experiment::new(cos, &cesaro, 0.25);
    exp.n_list = vec![2, 4, 8, 16, 32, 64];
    for q_prime in [0.5, 2.0] {
        let report = run_norm_experiment(TheoremKind::T3, &exp, q_prime, 2.0, 64)?;
        println!("cos x, q' = {q_prime}");
        for r in &report.rows {
            println!(
                "  n = {:>3}  norm {:.6}  a H(a) {:.6}  ratio {:.4}",
                r.n, r.value, r.bound, r.ratio
            );
        }
        println!("  pass = {}", report.verdict.pass);
    }

    let f = &corpus
        .iter()
        .find(|m| m.name == "lacunary-0.4")
        .expect("corpus member")
        .f;
    println!("\nlacunary-0.4, brackets around E_sigma in S^2");
    for sigma in [0.5, 3.0, 20.0, 300.0] {
        let b = best_approx_bracket(f, sigma, 2.0)?;
        println!("  sigma {sigma:>6}: [{:.6}, {:.6}]", b.lower, b.upper);
    }
    Ok(())
}
