//! Radially symmetric coupling functions.
//!
//! For a radial integrand the three-dimensional transform
//! `(1/2π)∫ χ̂(|k|)|k|^{−α} e^{−ik·y} dk` collapses, after the angular
//! integrals `∫ e^{−iκr cos θ} dΩ = 4π sin(κr)/(κr)`, to
//!
//! ```text
//! (2/r) ∫₀^Λ χ̂(κ) κ^{1−α} sin(κr) dκ ,   r = |y| .
//! ```
//!
//! `h` is the case `α = 1/2`, `h̃` the case `α = 3/2`. The sine integral is
//! evaluated panel by panel over half periods of `sin(κr)`, so the cost
//! grows only linearly with `r` and every panel is a smooth, sign-definite
//! integrand. The first panel is integrated in `u = √κ`, which removes the
//! `κ^{1−α}` endpoint singularity.

use crate::coupling::cutoff::CutoffSpec;
use crate::error::{Error, Result};
use crate::quadrature::{half_period_points, integrate, integrate_panels, Tolerance};
use crate::special::xcos_minus_sin;

pub const ALPHA_H: f64 = 0.5;
pub const ALPHA_HTILDE: f64 = 1.5;

const RADIAL_TOL: Tolerance = Tolerance::new(1e-18, 1e-13).with_budget(500);

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 3.0 {
        Ok(())
    } else {
        Err(Error::UnsupportedAlpha(alpha))
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveRadius(r))
    }
}

/// `∫₀^Λ χ̂(κ) κ^p w(κ) dκ` over half-period panels of frequency `omega`.
fn panel_integral<W>(spec: &CutoffSpec, p: f64, omega: f64, weight: W) -> Result<f64>
where
    W: Fn(f64) -> f64,
{
    let pts = half_period_points(spec.lambda, omega, &spec.breakpoints());
    let f = |kappa: f64| spec.eval(kappa) * kappa.powf(p) * weight(kappa);
    let first = pts[1];
    let head = integrate(
        |u: f64| {
            let kappa = u * u;
            2.0 * u * f(kappa)
        },
        0.0,
        first.sqrt(),
        RADIAL_TOL,
    )?;
    let tail = integrate_panels(f, &pts[1..], RADIAL_TOL)?;
    Ok(head.value + tail.value)
}

/// `(1/2π)∫ χ̂(|k|)|k|^{−α} e^{−ik·y} dk` at `|y| = r > 0`.
pub fn radial_transform(spec: &CutoffSpec, alpha: f64, r: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_radius(r)?;
    let s = panel_integral(spec, 1.0 - alpha, r, |kappa| (kappa * r).sin())?;
    Ok(2.0 * s / r)
}

/// The `r → 0⁺` limit of [`radial_transform`]: `2∫₀^Λ χ̂(κ) κ^{2−α} dκ`.
pub fn value_at_origin(spec: &CutoffSpec, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(2.0 * panel_integral(spec, 2.0 - alpha, 0.0, |_| 1.0)?)
}

/// `d/dr` of [`radial_transform`], differentiated under the integral:
/// `(2/r²)∫ χ̂ κ^{1−α} (κr cos κr − sin κr) dκ`.
pub fn radial_transform_derivative(spec: &CutoffSpec, alpha: f64, r: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_radius(r)?;
    let s = panel_integral(spec, 1.0 - alpha, r, |kappa| xcos_minus_sin(kappa * r))?;
    Ok(2.0 * s / (r * r))
}

/// Basic coupling function `h(r)`, decaying like `r^{−5/2}` for smooth cutoffs.
pub fn compute_h(spec: &CutoffSpec, r: f64) -> Result<f64> {
    radial_transform(spec, ALPHA_H, r)
}

/// Coupling function `h̃(r)` of the three-component field, decaying like `r^{−3/2}`.
pub fn compute_htilde(spec: &CutoffSpec, r: f64) -> Result<f64> {
    radial_transform(spec, ALPHA_HTILDE, r)
}

/// Radial derivative `dh̃/dr`, decaying like `r^{−5/2}`.
pub fn compute_htilde_gradient(spec: &CutoffSpec, r: f64) -> Result<f64> {
    radial_transform_derivative(spec, ALPHA_HTILDE, r)
}
