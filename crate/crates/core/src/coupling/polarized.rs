//! Polarized coupling functions `h^i_λ(y)`.
//!
//! With `y = (ρ cos ψ, ρ sin ψ, y₃)` and `k` in spherical coordinates, the
//! standard polarization vectors are `ε₁ = (sin φ, −cos φ, 0)` and
//! `ε₂ = (cos θ cos φ, cos θ sin φ, −sin θ)`. Their azimuthal integrals
//! against `e^{−iκ sin θ ρ cos(φ−ψ)}` are Bessel functions of
//! `a = κρ sin θ`:
//!
//! ```text
//! (1/2π)∫ e^{−ia cos(φ−ψ)}       dφ =  J₀(a)
//! (1/2π)∫ cos φ e^{−ia cos(φ−ψ)} dφ = −i J₁(a) cos ψ
//! (1/2π)∫ sin φ e^{−ia cos(φ−ψ)} dφ = −i J₁(a) sin ψ
//! ```
//!
//! which leaves a two-dimensional `(κ, θ)` integral for every `y`.
//!
//! `ε₁(−k) = −ε₁(k)` while `ε₂(−k) = ε₂(k)`, so `h^i_1` is purely imaginary
//! and `h^i_2` purely real. Both parts are computed; the one that must
//! vanish by symmetry is kept as a residual.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coupling::cutoff::CutoffSpec;
use crate::error::{Error, Result};
use crate::quadrature::{half_period_points, integrate, integrate_panels, Tolerance};
use crate::special::{bessel_j0, bessel_j1};
use crate::Vec3;

/// Largest `|y|·Λ` accepted by the polarized transforms and the 3D oracle.
pub const MAX_RADIUS_TIMES_LAMBDA: f64 = 50.0;

const KAPPA_TOL: Tolerance = Tolerance::new(1e-13, 1e-11).with_budget(400);
const THETA_TOL: Tolerance = Tolerance::new(1e-14, 1e-12).with_budget(400);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizedValue {
    pub value: Complex64,
    pub abs_error: f64,
}

impl PolarizedValue {
    /// The non-vanishing part: `Im h` for `λ = 1`, `Re h` for `λ = 2`.
    pub fn principal(&self, lambda_index: usize) -> f64 {
        if lambda_index == 1 {
            self.value.im
        } else {
            self.value.re
        }
    }

    /// The part that vanishes by the parity of `ε_λ`.
    pub fn residual(&self, lambda_index: usize) -> f64 {
        if lambda_index == 1 {
            self.value.re.abs()
        } else {
            self.value.im.abs()
        }
    }
}

pub(crate) fn check_indices(lambda_index: usize, component: usize) -> Result<()> {
    if !(1..=2).contains(&lambda_index) || !(1..=3).contains(&component) {
        return Err(Error::InvalidProfile(format!(
            "polarization index {lambda_index} / component {component} out of range"
        )));
    }
    Ok(())
}

pub(crate) fn check_y(spec: &CutoffSpec, y: &Vec3) -> Result<f64> {
    let r = y.norm();
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::NonPositiveRadius(r));
    }
    let limit = MAX_RADIUS_TIMES_LAMBDA / spec.lambda;
    if r > limit * (1.0 + 1e-12) {
        return Err(Error::RadiusOutOfRange { radius: r, limit });
    }
    Ok(r)
}

/// Azimuthal average `(1/2π)∫ε^i_λ e^{−ia cos(φ−ψ)} dφ` at polar angle θ.
fn azimuthal_factor(
    lambda_index: usize,
    component: usize,
    a: f64,
    psi: f64,
    theta: f64,
) -> Complex64 {
    let i = Complex64::i();
    match (lambda_index, component) {
        (1, 1) => -i * bessel_j1(a) * psi.sin(),
        (1, 2) => i * bessel_j1(a) * psi.cos(),
        (1, 3) => Complex64::new(0.0, 0.0),
        (2, 1) => -i * theta.cos() * bessel_j1(a) * psi.cos(),
        (2, 2) => -i * theta.cos() * bessel_j1(a) * psi.sin(),
        (2, 3) => Complex64::new(-theta.sin() * bessel_j0(a), 0.0),
        _ => unreachable!("indices validated"),
    }
}

/// `h^i_λ(y) = (1/2π)∫ χ̂(|k|)|k|^{−1/2} ε^i_λ(k) e^{−ik·y} dk`.
pub fn compute_h_polarized(
    spec: &CutoffSpec,
    lambda_index: usize,
    component: usize,
    y: &Vec3,
) -> Result<PolarizedValue> {
    check_indices(lambda_index, component)?;
    let r = check_y(spec, y)?;
    if lambda_index == 1 && component == 3 {
        return Ok(PolarizedValue {
            value: Complex64::new(0.0, 0.0),
            abs_error: 0.0,
        });
    }
    let rho = y[0].hypot(y[1]);
    let psi = y[1].atan2(y[0]);
    let y3 = y[2];

    // inner: ∫₀^π sin θ e^{−iκ y₃ cos θ} Φ(κρ sin θ, θ) dθ
    let theta_integral = |kappa: f64| -> Result<Complex64> {
        let f = |theta: f64| {
            let phase = Complex64::from_polar(1.0, -kappa * y3 * theta.cos());
            let a = kappa * rho * theta.sin();
            phase * azimuthal_factor(lambda_index, component, a, psi, theta) * theta.sin()
        };
        let panels = (kappa * r / PI).ceil().max(1.0) as usize;
        let pts: Vec<f64> = (0..=panels)
            .map(|j| PI * j as f64 / panels as f64)
            .collect();
        Ok(integrate_panels(f, &pts, THETA_TOL)?.value)
    };

    let mut failure = None;
    let mut outer = |kappa: f64| -> Complex64 {
        if kappa <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        match theta_integral(kappa) {
            Ok(v) => v * (spec.eval(kappa) * kappa.powf(1.5)),
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };

    let pts = half_period_points(spec.lambda, r, &spec.breakpoints());
    let head = integrate(
        |u: f64| {
            let v: Complex64 = outer(u * u);
            v * (2.0 * u)
        },
        0.0,
        pts[1].sqrt(),
        KAPPA_TOL,
    )?;
    let tail = integrate_panels(&mut outer, &pts[1..], KAPPA_TOL)?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(PolarizedValue {
        value: head.value + tail.value,
        abs_error: head.abs_error + tail.abs_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smooth() -> CutoffSpec {
        CutoffSpec::smooth(1.0).unwrap()
    }

    #[test]
    fn third_component_of_eps1_vanishes() {
        let v = compute_h_polarized(&smooth(), 1, 3, &Vec3::new(0.3, -1.0, 2.0)).unwrap();
        assert_eq!(v.value.norm(), 0.0);
    }

    #[test]
    fn lambda_one_vanishes_on_axis() {
        for c in 1..=3 {
            let v = compute_h_polarized(&smooth(), 1, c, &Vec3::new(0.0, 0.0, 3.0)).unwrap();
            assert!(v.value.norm() < 1e-8, "component {c}: {}", v.value);
        }
    }

    #[test]
    fn parity_fixes_the_phase() {
        let y = Vec3::new(1.0, 2.0, -0.5);
        for c in 1..=3 {
            let v1 = compute_h_polarized(&smooth(), 1, c, &y).unwrap();
            assert!(v1.residual(1) < 1e-10);
            let v2 = compute_h_polarized(&smooth(), 2, c, &y).unwrap();
            assert!(v2.residual(2) < 1e-10);
        }
    }

    #[test]
    fn radius_guard() {
        let err = compute_h_polarized(&smooth(), 1, 1, &Vec3::new(60.0, 0.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::RadiusOutOfRange { .. }));
        let err = compute_h_polarized(&smooth(), 1, 1, &Vec3::zeros()).unwrap_err();
        assert_eq!(err, Error::NonPositiveRadius(0.0));
        assert!(compute_h_polarized(&smooth(), 3, 1, &Vec3::new(1.0, 0.0, 0.0)).is_err());
    }
}
