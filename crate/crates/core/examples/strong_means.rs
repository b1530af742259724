//! Strong means of partial-sum deviations for several matrices and powers.
//!
//! Run with `cargo run --example strong_means`.

use apx::summability::{strong_mean, strong_mean_with, GammaSpec, PartialSums};
use apx::{make_test_corpus, Result, SummabilityMatrix};

fn main() -> Result<()> {
    let corpus = make_test_corpus(0);
    let cos = &corpus[0].f;
    let v = strong_mean(
        cos,
        &SummabilityMatrix::cesaro(),
        3,
        2.0,
        &GammaSpec::HalfGap,
        0.0,
    )?;
    println!(
        "cos x, Cesaro, n = 3, q = 2, x = 0: {v:.15} (1/sqrt 2 = {:.15})",
        0.5f64.sqrt()
    );

    let f = &corpus
        .iter()
        .find(|m| m.name == "two-tone-golden")
        .expect("corpus member")
        .f;
    let x = 1.3;
    println!("\ntwo-tone-golden at x = {x}");
    println!("matrix       n    q=0.5      q=1        q=2        q=4");
    for name in ["cesaro", "riesz", "increasing", "one_hot"] {
        let a = SummabilityMatrix::builtin(name)?;
        for n in [4, 16, 64] {
            let row: Vec<f64> = [0.5, 1.0, 2.0, 4.0]
                .iter()
                .map(|&q| strong_mean(f, &a, n, q, &GammaSpec::HalfGap, x))
                .collect::<Result<_>>()?;
            println!(
                "{name:<11} {n:>3}  {:<10.6} {:<10.6} {:<10.6} {:<10.6}",
                row[0], row[1], row[2], row[3]
            );
        }
    }

    let direct = strong_mean(
        f,
        &SummabilityMatrix::cesaro(),
        6,
        2.0,
        &GammaSpec::HalfGap,
        x,
    )?;
    let kernel = strong_mean_with(
        f,
        &SummabilityMatrix::cesaro(),
        6,
        2.0,
        &GammaSpec::HalfGap,
        x,
        PartialSums::Kernel { tol: 1e-8 },
    )?;
    println!("\nn = 6 direct {direct:.10}, through the kernel {kernel:.10}");
    Ok(())
}
