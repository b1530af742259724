//! Sine-integral tail used to close off improper integrals of `cos(w t)/t^2`.

use std::f64::consts::FRAC_PI_2;

/// `pi/2 - Si(y)` for `y >= 0`.
pub fn sine_integral_complement(y: f64) -> f64 {
    debug_assert!(y >= 0.0);
    if y < 4.0 {
        FRAC_PI_2 - sine_integral_series(y)
    } else {
        sine_integral_complement_cf(y)
    }
}

fn sine_integral_series(y: f64) -> f64 {
    // Si(y) = sum (-1)^n y^(2n+1) / ((2n+1) (2n+1)!)
    let y2 = y * y;
    let mut power = y; // y^(2n+1) / (2n+1)!
    let mut sum = y;
    let mut n = 0usize;
    loop {
        n += 1;
        let k = (2 * n) as f64;
        power *= -y2 / (k * (k + 1.0));
        let term = power / (k + 1.0);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) || n > 60 {
            break;
        }
    }
    sum
}

// Modified Lentz evaluation of E1(i y) = -Ci(y) + i (Si(y) - pi/2).
fn sine_integral_complement_cf(y: f64) -> f64 {
    use num_complex::Complex64;
    let tiny = 1e-300;
    let mut b = Complex64::new(1.0, y);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = Complex64::new(1.0, 0.0) / b;
    let mut h = d;
    for i in 2..200 {
        let a = -((i - 1) * (i - 1)) as f64;
        b += 2.0;
        d = Complex64::new(1.0, 0.0) / (d * a + b);
        c = b + Complex64::new(a, 0.0) / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h *= Complex64::new(y.cos(), -y.sin());
    -h.im
}

/// `\int_T^\infty cos(w t) / t^2 dt` for `T > 0`.
pub fn cos_over_t2_tail(omega: f64, start: f64) -> f64 {
    let y = omega.abs() * start;
    (y.cos() - y * sine_integral_complement(y)) / start
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        // Si(1), Si(5), Si(10) from standard tables
        assert!(
            (FRAC_PI_2 - sine_integral_complement(1.0) - 0.946_083_070_367_183_0).abs() < 1e-14
        );
        assert!(
            (FRAC_PI_2 - sine_integral_complement(5.0) - 1.549_931_244_944_674_1).abs() < 1e-13
        );
        assert!(
            (FRAC_PI_2 - sine_integral_complement(10.0) - 1.658_347_594_218_874_0).abs() < 1e-13
        );
        assert_eq!(sine_integral_complement(0.0), FRAC_PI_2);
    }

    #[test]
    fn branches_agree_at_switch() {
        let a = FRAC_PI_2 - sine_integral_series(4.0);
        let b = sine_integral_complement_cf(4.0);
        assert!((a - b).abs() < 1e-13, "{a} vs {b}");
    }

    #[test]
    fn tail_matches_quadrature() {
        use crate::quad::{integrate, oscillation_pieces, Tolerance};
        for &(w, t0) in &[(0.0, 3.0), (0.7, 5.0), (3.3, 20.0), (0.01, 40.0)] {
            let closed = cos_over_t2_tail(w, t0);
            // finite part + crude remainder below 1e-9
            let end = 4e5;
            let numeric = integrate(
                |t: f64| (w * t).cos() / (t * t),
                t0,
                end,
                Tolerance::new(1e-13, 1e-12),
                oscillation_pieces(t0, end, w).max(2000),
            )
            .unwrap()
            .value;
            // remainder of the non-oscillating part is cos-weighted 1/end
            let rem = if w == 0.0 { 1.0 / end } else { 0.0 };
            assert!(
                (closed - numeric - rem).abs() < 1e-8,
                "w={w} {closed} {numeric}"
            );
        }
    }
}
