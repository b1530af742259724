//! The Stepanov modulus `omega f(delta)_{S^2}` and the pointwise integral
//! modulus `w_x f(delta)_2`, and a membership check against `delta^0.4`.
//!
//! Run with `cargo run --example moduli_of_continuity`.

use std::f64::consts::PI;

use apx::norms::{class_membership_check, omega_profile, wx_profile};
use apx::quad::log_grid;
use apx::{make_test_corpus, Majorant, Result};

fn main() -> Result<()> {
    let corpus = make_test_corpus(0);
    let sin = &corpus
        .iter()
        .find(|m| m.name == "sin")
        .expect("corpus member")
        .f;
    let cos = &corpus
        .iter()
        .find(|m| m.name == "cos")
        .expect("corpus member")
        .f;

    let deltas = log_grid(0.05, PI, 8);
    println!("delta      omega(sin)  sqrt2 sin(d/2)  w_0(cos)");
    let omega = omega_profile(sin, 2.0, &deltas)?;
    let wx = wx_profile(cos, 0.0, 2.0, &deltas)?;
    for ((d, o), w) in deltas.iter().zip(&omega).zip(&wx) {
        println!(
            "{d:<10.4} {:<11.6} {:<15.6} {:.6}",
            o.value,
            2f64.sqrt() * (d / 2.0).sin(),
            w.value
        );
    }

    let m = class_membership_check(cos, 0.0, &Majorant::power(1.0, 0.4), 2.0)?;
    println!(
        "cos x at x = 0 under delta^0.4: C = {:.4} (coarse {:.4}), pass = {}",
        m.constant, m.coarse, m.pass
    );
    match class_membership_check(cos, 0.0, &Majorant::power(1.0, 2.0), 2.0) {
        Err(e) => println!("delta^2 is rejected: {e}"),
        Ok(_) => println!("delta^2 unexpectedly accepted"),
    }
    Ok(())
}
