//! Rest and head bounded variation constants of the builtin matrices and of
//! a matrix read from JSON rows.
//!
//! Run with `cargo run --example summability_classes`.

use apx::summability::{classify, head_dominance_violation, rbvs_constant, validate_rows};
use apx::{Result, SummabilityMatrix};

fn main() -> Result<()> {
    for name in ["cesaro", "riesz", "riesz:2", "increasing", "one_hot"] {
        let a = SummabilityMatrix::builtin(name)?;
        let r = classify(&a, 64)?;
        println!(
            "{name:<11} class {:<8} K_rbvs {:<12} K_hbvs {:<8} growth {:?}",
            serde_json::to_string(&r.class)?,
            serde_json::to_string(&r.uniform_K_rbvs)?,
            serde_json::to_string(&r.uniform_K_hbvs)?,
            r.growth_rbvs
        );
        if let Some(k) = r.uniform_K_hbvs.finite().filter(|_| r.class.has_hbvs()) {
            let v = head_dominance_violation(&a, k, 64)?;
            println!(
                "            a_(n,mu) <= (K+1) a_(n,m) for mu <= m <= n <= 64: {}",
                v.is_none()
            );
        }
    }

    let inc = SummabilityMatrix::increasing();
    println!(
        "increasing rows, K at n = 8, m = 0: {:?}",
        rbvs_constant(&inc, 8, 0)?
    );

    let custom = SummabilityMatrix::from_json("two-rows", r#"{ "rows": [[1.0], [0.25, 0.75]] }"#)?;
    println!(
        "custom rows valid: {:?}",
        validate_rows(&custom, 1)?.is_none()
    );
    let broken = SummabilityMatrix::from_json("broken", r#"{ "rows": [[1.0], [0.5, 0.6]] }"#)?;
    println!("broken rows: {:?}", validate_rows(&broken, 1)?);
    Ok(())
}
