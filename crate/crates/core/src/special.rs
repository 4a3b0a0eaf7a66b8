//! Small special-function helpers.

use std::f64::consts::PI;

/// Bessel function `J_n(x)` for small integer order.
///
/// Uses `J_n(x) = (1/π)∫₀^π cos(nτ − x sin τ) dτ` with the trapezoid rule;
/// the integrand is smooth and periodic, so the error falls off like
/// `J_{2M−n}(x)` and is at round-off once `2M > |x| + 60`.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let m = ((x.abs().ceil() as usize + 60) / 2).max(24);
    let h = PI / m as f64;
    let nf = n as f64;
    let term = |tau: f64| (nf * tau - x * tau.sin()).cos();
    let mut sum = 0.5 * (term(0.0) + term(PI));
    for j in 1..m {
        sum += term(j as f64 * h);
    }
    sum * h / PI
}

pub fn bessel_j0(x: f64) -> f64 {
    bessel_j(0, x)
}

pub fn bessel_j1(x: f64) -> f64 {
    bessel_j(1, x)
}

/// `x cos x − sin x` without cancellation for small `x`.
pub fn xcos_minus_sin(x: f64) -> f64 {
    if x.abs() < 0.2 {
        // −x³/3 + x⁵/30 − x⁷/840 + x⁹/45360 − x¹¹/3991680
        let x2 = x * x;
        -x * x2
            * (1.0 / 3.0
                - x2 * (1.0 / 30.0 - x2 * (1.0 / 840.0 - x2 * (1.0 / 45360.0 - x2 / 3991680.0))))
    } else {
        x * x.cos() - x.sin()
    }
}
