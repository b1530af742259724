//! Stepanov, sup and Besicovitch norms of a few functions.
//!
//! Run with `cargo run --example stepanov_norms`.

use apx::norms::{besicovitch_norm, parseval_norm, stepanov_norm, sup_norm};
use apx::{make_test_corpus, Result};

fn main() -> Result<()> {
    println!(
        "{:<18} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "function", "S^2", "S^3", "sup", "B^2", "Parseval"
    );
    for member in make_test_corpus(0) {
        let f = &member.f;
        println!(
            "{:<18} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            member.name,
            stepanov_norm(f, 2.0)?,
            stepanov_norm(f, 3.0)?,
            sup_norm(f)?,
            besicovitch_norm(f, 2.0)?,
            parseval_norm(f),
        );
    }
    Ok(())
}
