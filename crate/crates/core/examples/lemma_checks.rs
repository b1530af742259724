//! Integral conditions on `w` and `H`, and the weighted coefficient
//! inequality for trigonometric polynomials.
//!
//! Run with `cargo run --example lemma_checks`.

use apx::verify::conditions::{
    check_condition_6, check_condition_7, check_lemma_1, check_lemma_2, check_lemma_2_family,
    default_grid,
};
use apx::{APPolynomial, Majorant, RateFunction, Result};

fn main() -> Result<()> {
    let grid = default_grid();
    for beta in [0.25, 0.4, 0.75] {
        let w = Majorant::power(1.0, beta);
        let h = RateFunction::power(1.0, beta - 1.0);
        let six = check_condition_6(&w, &h, 2.0, 2.0, &grid)?;
        let seven = check_condition_7(&h, &grid)?;
        print!(
            "beta {beta}: C6 {:.4} ({}), C7 {:.4} ({})",
            six.constant,
            if six.pass { "stable" } else { "grows" },
            seven.constant,
            if seven.pass { "stable" } else { "grows" }
        );
        match check_lemma_1(&w, &h, 2.0, 2.0, &grid) {
            Ok(r) => println!(", C12 {:.4}", r.constant),
            Err(e) => println!(", {e}"),
        }
    }
    let divergent = check_condition_7(&RateFunction::power(1.0, -1.0), &grid)?;
    println!("H(u) = 1/u: divergent = {}", divergent.divergent);

    for m in [1, 4, 8] {
        let g = APPolynomial::cosines(1.0, &[(m as f64, 1.0)])?;
        println!(
            "cos({m}t), p = q = 2: ratio {:.8}",
            check_lemma_2(&g, 2.0, 2.0)?
        );
    }
    for (p, q) in [(2.0, 2.0), (2.0, 3.0), (3.0, 4.0)] {
        let r = check_lemma_2_family(0, p, q)?;
        println!(
            "64 random polynomials, p = {p}, q = {q}: max ratio {:.6}",
            r.max_ratio
        );
    }
    Ok(())
}
