use std::f64::consts::PI;

use approx::assert_relative_eq;
use photonmodes::quadrature::{integrate, Tolerance};
use photonmodes::thermo::{
    box_free_energy, finite_box_density, integral_free_energy, planck_integral_density,
    subtraction_identity_check, ThermalParams, DEFAULT_MODE_GUARD,
};
use proptest::prelude::*;

/// Independent route: ∫₀^∞ κ² ln(1-e^{-κ}) dκ = -2 Σ_n 1/n⁴ after expanding
/// the logarithm and integrating term by term.
fn series_oracle() -> f64 {
    let zeta4: f64 = (1..200_000u64).rev().map(|n| (n as f64).powi(-4)).sum();
    -2.0 * zeta4 / (2.0 * PI * PI)
}

#[test]
fn unit_density_against_series_and_plain_quadrature() {
    let d = planck_integral_density(1.0).unwrap();
    assert!((d - series_oracle()).abs() < 1e-12);
    // t = κ/(1+κ) maps [0, ∞) to [0, 1).
    let mapped = integrate(
        |t: f64| {
            if t >= 1.0 {
                return 0.0;
            }
            let k = t / (1.0 - t);
            k * k * (1.0 - (-k).exp()).ln() / ((1.0 - t) * (1.0 - t))
        },
        0.0,
        1.0,
        Tolerance::new(1e-13, 1e-12).with_budget(4000),
    )
    .unwrap()
    .value
        / (2.0 * PI * PI);
    assert!((d - mapped).abs() < 1e-9);
}

#[test]
fn box_sum_converges_with_shrinking_ratio() {
    let d = planck_integral_density(1.0).unwrap();
    let errors: Vec<f64> = [1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|f| {
            ((finite_box_density(2.0 * PI * f, 1.0, DEFAULT_MODE_GUARD).unwrap() - d) / d).abs()
        })
        .collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
    assert!(errors[3] / errors[2] < 0.6);
    assert!(errors[3] < 0.01);
    let l50 = finite_box_density(50.0, 1.0, DEFAULT_MODE_GUARD).unwrap();
    assert!(((l50 - d) / d).abs() < 0.01);
}

#[test]
fn box_free_energy_is_linear_in_channels() {
    let one = box_free_energy(10.0, 1.0, 1, DEFAULT_MODE_GUARD).unwrap();
    let three = box_free_energy(10.0, 1.0, 3, DEFAULT_MODE_GUARD).unwrap();
    assert_eq!(three.total, 3.0 * 1000.0 * one.per_mode_density);
    let cont = integral_free_energy(&ThermalParams::cube(1.0, 10.0).unwrap(), 3).unwrap();
    assert!(cont.paper_sign() > 0.0 && cont.standard_sign() < 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn density_scales_cubically(theta in 0.05..20.0f64) {
        let d1 = planck_integral_density(1.0).unwrap();
        assert_relative_eq!(planck_integral_density(theta).unwrap(), theta.powi(3) * d1, max_relative = 1e-10);
    }

    #[test]
    fn subtraction_is_exact(l in 0.5..30.0f64, theta in 0.1..2.0f64) {
        let r = subtraction_identity_check(l, theta, DEFAULT_MODE_GUARD).unwrap();
        prop_assert!(r.rel_deviation < 1e-12);
    }

    #[test]
    fn box_density_lies_between_continuum_and_zero(l in 1.0..20.0f64) {
        let d = planck_integral_density(1.0).unwrap();
        let b = finite_box_density(l, 1.0, DEFAULT_MODE_GUARD).unwrap();
        prop_assert!(b < 0.0 && b > d);
    }
}
