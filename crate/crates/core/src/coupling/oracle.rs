//! Brute-force three-dimensional quadrature of the defining Fourier
//! integrals. Nothing here uses the radial or azimuthal reductions; it is
//! the ground truth those reductions are checked against.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coupling::cutoff::CutoffSpec;
use crate::coupling::polarized::{check_indices, check_y};
use crate::error::{Error, Result};
use crate::polarization::make_polarization_basis;
use crate::quadrature::{integrate_panels, Tolerance};
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Integrand3d {
    /// `|k|^{−1/2}`, the kernel of `h`.
    InverseSqrt,
    /// `|k|^{−3/2}`, the kernel of `h̃`.
    InverseThreeHalves,
    /// `ε^i_λ(k)|k|^{−1/2}`, the kernel of `h^i_λ`.
    Polarized {
        lambda_index: usize,
        component: usize,
    },
    /// `(k̂ ∧ v)^i |k|^{−1/2}` for a fixed vector `v`.
    TransverseCross { v: Vec3, component: usize },
}

impl Integrand3d {
    fn alpha(&self) -> f64 {
        match self {
            Integrand3d::InverseThreeHalves => 1.5,
            _ => 0.5,
        }
    }
}

fn record(e: Error, failure: &mut Option<Error>) -> Complex64 {
    failure.get_or_insert(e);
    Complex64::new(0.0, 0.0)
}

const AXIS_FALLBACK: Vec3 = Vec3::new(1.0, 0.0, 0.0);

/// `(1/2π)∫ χ̂(|k|) w(k) e^{−ik·y} dk` by nested adaptive quadrature in
/// spherical coordinates `(κ, θ, φ)` about the x₃-axis.
///
/// `κ = u²` is used for the radial variable so the `κ^{2−α}` measure is
/// smooth. Requires `|y| ≤ 50/Λ`.
pub fn oracle_direct_3d(
    spec: &CutoffSpec,
    integrand: Integrand3d,
    y: &Vec3,
    abs_tol: f64,
) -> Result<Complex64> {
    if let Integrand3d::Polarized {
        lambda_index,
        component,
    } = integrand
    {
        check_indices(lambda_index, component)?;
    }
    if let Integrand3d::TransverseCross { component, .. } = integrand {
        check_indices(1, component)?;
    }
    let r = check_y(spec, y)?;
    let alpha = integrand.alpha();

    let inner_tol = Tolerance::new(abs_tol * 1e-3, 1e-10).with_budget(200);
    let mid_tol = Tolerance::new(abs_tol * 1e-2, 1e-9).with_budget(200);
    let outer_tol = Tolerance::new(abs_tol * 0.1, 1e-9).with_budget(400);

    let weight = |k: &Vec3| -> Result<f64> {
        match integrand {
            Integrand3d::Polarized {
                lambda_index,
                component,
            } => {
                let basis = make_polarization_basis(k, &AXIS_FALLBACK)?;
                Ok(basis.eps(lambda_index)[component - 1])
            }
            Integrand3d::TransverseCross { v, component } => {
                Ok((k / k.norm()).cross(&v)[component - 1])
            }
            _ => Ok(1.0),
        }
    };

    let mut failure: Option<Error> = None;

    // split each angular range so no panel spans more than about one
    // oscillation of e^{−ik·y}
    let angular_points = |kappa: f64, range: f64| -> Vec<f64> {
        let n = (kappa * r * range / (2.0 * PI)).ceil().max(1.0) as usize;
        (0..=n).map(|j| range * j as f64 / n as f64).collect()
    };

    let radial = |u: f64, failure: &mut Option<Error>| -> Complex64 {
        let kappa = u * u;
        if kappa <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let chi = spec.eval(kappa);
        if chi == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let mut inner_failure = None;
        let polar = |theta: f64| -> Complex64 {
            let (st, ct) = theta.sin_cos();
            let azimuthal = |phi: f64| -> Complex64 {
                let (sp, cp) = phi.sin_cos();
                let k = Vec3::new(kappa * st * cp, kappa * st * sp, kappa * ct);
                match weight(&k) {
                    Ok(w) => Complex64::from_polar(w, -k.dot(y)),
                    // k on the axis has measure zero; the fallback frame never fails there
                    Err(_) => Complex64::new(0.0, 0.0),
                }
            };
            match integrate_panels(azimuthal, &angular_points(kappa, 2.0 * PI), inner_tol) {
                Ok(e) => e.value * st,
                Err(e) => {
                    inner_failure.get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                }
            }
        };
        let v = match integrate_panels(polar, &angular_points(kappa, PI), mid_tol) {
            Ok(e) => e.value,
            Err(e) => return record(e, failure),
        };
        if let Some(e) = inner_failure {
            return record(e, failure);
        }
        // κ^{2−α} dκ = 2u·u^{4−2α} du
        v * (chi * 2.0 * u.powf(5.0 - 2.0 * alpha))
    };

    let mut pts = vec![0.0];
    pts.extend(spec.breakpoints().iter().map(|b| b.sqrt()));
    pts.push(spec.lambda.sqrt());
    let mut radial_mut = |u: f64| radial(u, &mut failure);
    let total = integrate_panels(&mut radial_mut, &pts, outer_tol);
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(total?.value / (2.0 * PI))
}
