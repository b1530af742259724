//! Partial sums of a two-tone almost periodic function, once by cutting the
//! spectrum and once through the oscillatory kernel integral.
//!
//! Run with `cargo run --example kernel_partial_sums`.

use apx::osc_kernel::{partial_sum_via_kernel, plan_quadrature, trapezoid_sum, KernelParams};
use apx::{APPolynomial, Result};

fn main() -> Result<()> {
    // cos x + cos(sqrt(2) x), exponents at least 0.4 apart
    let f = APPolynomial::cosines(0.4, &[(1.0, 1.0), (2f64.sqrt(), 1.0)])?;
    let x = 0.7;

    println!("  k  band            kernel        truncated     |diff|");
    for k in 0..10 {
        let params = KernelParams::indexed(k, f.alpha())?;
        let star = f.star_partial_sum(k, x)?;
        let kernel = partial_sum_via_kernel(&f, k, x, 1e-8)?;
        // With an exponent inside the band the kernel weights it linearly.
        let reference = if star.interior_exponent {
            trapezoid_sum(&f, &params, x)
        } else {
            star.value
        };
        println!(
            "{k:>3}  [{:.2}, {:.2}]  {:>12.9}  {:>12.9}  {:.1e}{}",
            params.lower(),
            params.upper(),
            kernel.value,
            star.value,
            (kernel.value - reference).abs(),
            if star.interior_exponent {
                "  (exponent inside band)"
            } else {
                ""
            }
        );
    }

    // The conservative plan pushes panels out until the crude tail bound
    // alone meets the tolerance.
    let params = KernelParams::indexed(3, f.alpha())?;
    for tol in [1e-2, 1e-3, 1e-4] {
        let plan = plan_quadrature(&params, f.sup_bound(), tol)?;
        println!(
            "tol {tol:.0e}: {} panels up to T = {:.1}, tail bound {:.2e}",
            plan.panels.len(),
            plan.tail_start,
            plan.tail_bound
        );
    }
    Ok(())
}
