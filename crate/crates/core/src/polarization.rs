//! Polarization frames and transverse geometry.
//!
//! The standard frame is `ε₁ = (k₂, −k₁, 0)/√(k₁² + k₂²)`, `ε₂ = k̂ ∧ ε₁`.
//! It is undefined on the x₃-axis and no choice can be continuous on a whole
//! sphere, so on the axis the caller supplies a fallback vector and the
//! resulting basis is flagged.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::{Mat3, Vec3};

/// Tolerance used when checking frame invariants.
pub const FRAME_TOL: f64 = 1e-12;

fn unit(k: &Vec3) -> Result<(Vec3, f64)> {
    let norm = k.norm();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroWavevector);
    }
    Ok((k / norm, norm))
}

/// `(ε₁, ε₂, k̂)` at one wavevector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationBasis {
    pub eps1: Vec3,
    pub eps2: Vec3,
    pub khat: Vec3,
    /// True when `k` was on the x₃-axis and the fallback vector was used.
    pub fallback: bool,
}

impl PolarizationBasis {
    pub fn eps(&self, lambda: usize) -> Vec3 {
        match lambda {
            1 => self.eps1,
            2 => self.eps2,
            _ => panic!("polarization index must be 1 or 2, got {lambda}"),
        }
    }

    /// Orthogonal matrix with rows `ε₁, ε₂, k̂`.
    pub fn frame_matrix(&self) -> Mat3 {
        Mat3::from_rows(&[
            self.eps1.transpose(),
            self.eps2.transpose(),
            self.khat.transpose(),
        ])
    }

    /// Largest violation of orthonormality and right-handedness.
    pub fn frame_defect(&self) -> f64 {
        let b = self.frame_matrix();
        let gram = (b * b.transpose() - Mat3::identity()).abs().max();
        let handed = (self.eps1.cross(&self.eps2) - self.khat).abs().max();
        gram.max(handed)
    }
}

/// Builds the standard polarization frame at `k`.
///
/// Off the x₃-axis this is exactly `(k₂, −k₁, 0)/ρ` and `k̂ ∧ ε₁`. On the
/// axis `axis_fallback` is projected onto the plane orthogonal to `k`,
/// normalized, and used as `ε₁`.
pub fn make_polarization_basis(k: &Vec3, axis_fallback: &Vec3) -> Result<PolarizationBasis> {
    let (khat, _) = unit(k)?;
    let rho = k[0].hypot(k[1]);
    let (eps1, fallback) = if rho > 0.0 {
        (Vec3::new(k[1] / rho, -k[0] / rho, 0.0), false)
    } else {
        let projected = axis_fallback - khat * khat.dot(axis_fallback);
        let n = projected.norm();
        if n <= 1e-12 * axis_fallback.norm() || n == 0.0 {
            return Err(Error::DegenerateFallback);
        }
        (projected / n, true)
    };
    let eps2 = khat.cross(&eps1);
    Ok(PolarizationBasis {
        eps1,
        eps2,
        khat,
        fallback,
    })
}

/// `I − k̂k̂ᵀ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projector3 {
    pub m: Mat3,
}

impl Projector3 {
    pub fn apply(&self, v: &Vec3) -> Vec3 {
        self.m * v
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    /// `max |P² − P|`.
    pub fn idempotency_defect(&self) -> f64 {
        (self.m * self.m - self.m).abs().max()
    }
}

pub fn transverse_projector(k: &Vec3) -> Result<Projector3> {
    let (khat, _) = unit(k)?;
    Ok(Projector3 {
        m: Mat3::identity() - khat * khat.transpose(),
    })
}

/// Max entrywise deviation between `Σ_λ ε_λ ε_λᵀ` and the transverse projector.
pub fn verify_completeness(k: &Vec3, axis_fallback: &Vec3) -> Result<f64> {
    let basis = make_polarization_basis(k, axis_fallback)?;
    let proj = transverse_projector(k)?;
    let sum = basis.eps1 * basis.eps1.transpose() + basis.eps2 * basis.eps2.transpose();
    Ok((sum - proj.m).abs().max())
}

/// `k̂ ∧ v`, the coupling map of the three-component field.
pub fn cross_coupling(k: &Vec3, v: &Vec3) -> Result<Vec3> {
    let (khat, _) = unit(k)?;
    Ok(khat.cross(v))
}

/// Components of a three-vector of mode amplitudes in the frame `(ε₁, ε₂, k̂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeAmplitudes {
    pub a1: Complex64,
    pub a2: Complex64,
    pub a0: Complex64,
}

fn cdot(e: &Vec3, a: &[Complex64; 3]) -> Complex64 {
    a[0] * e[0] + a[1] * e[1] + a[2] * e[2]
}

fn cscale(e: &Vec3, c: Complex64) -> [Complex64; 3] {
    [c * e[0], c * e[1], c * e[2]]
}

fn cadd(x: [Complex64; 3], y: [Complex64; 3]) -> [Complex64; 3] {
    [x[0] + y[0], x[1] + y[1], x[2] + y[2]]
}

impl ModeAmplitudes {
    /// `a₁ε₁ + a₂ε₂ + a₀k̂`.
    pub fn reconstruct(&self, basis: &PolarizationBasis) -> [Complex64; 3] {
        cadd(
            cadd(cscale(&basis.eps1, self.a1), cscale(&basis.eps2, self.a2)),
            cscale(&basis.khat, self.a0),
        )
    }

    /// `a₁ε₂ − a₂ε₁`, which equals `k̂ ∧ a`: the coupled field needs only the
    /// two transverse amplitudes.
    pub fn transverse_cross(&self, basis: &PolarizationBasis) -> [Complex64; 3] {
        cadd(cscale(&basis.eps2, self.a1), cscale(&basis.eps1, -self.a2))
    }
}

/// Splits `a` into `(ε₁·a, ε₂·a, k̂·a)`.
pub fn two_mode_reduction(
    k: &Vec3,
    axis_fallback: &Vec3,
    a: &[Complex64; 3],
) -> Result<(PolarizationBasis, ModeAmplitudes)> {
    let basis = make_polarization_basis(k, axis_fallback)?;
    let amps = ModeAmplitudes {
        a1: cdot(&basis.eps1, a),
        a2: cdot(&basis.eps2, a),
        a0: cdot(&basis.khat, a),
    };
    Ok((basis, amps))
}

/// `k̂ ∧ a` for complex amplitudes, evaluated directly.
pub fn cross_coupling_complex(k: &Vec3, a: &[Complex64; 3]) -> Result<[Complex64; 3]> {
    let (u, _) = unit(k)?;
    Ok([
        a[2] * u[1] - a[1] * u[2],
        a[0] * u[2] - a[2] * u[0],
        a[1] * u[0] - a[0] * u[1],
    ])
}

fn standard_eps1(k: &Vec3) -> Vec3 {
    let rho = k[0].hypot(k[1]);
    Vec3::new(k[1] / rho, -k[0] / rho, 0.0)
}

/// Frobenius norm of the Jacobian `∂ε₁/∂k` by central differences.
///
/// The exact value is `1/ρ` with `ρ = √(k₁² + k₂²)`; it blows up on the
/// x₃-axis, which is where the standard frame is discontinuous.
pub fn polarization_gradient_norm(k: &Vec3, step: f64) -> Result<f64> {
    unit(k)?;
    let rho = k[0].hypot(k[1]);
    if !(step > 0.0) || rho < 10.0 * step {
        return Err(Error::SingularAxis {
            rho,
            min: 10.0 * step,
        });
    }
    let mut sum = 0.0;
    for j in 0..3 {
        let mut dk = Vec3::zeros();
        dk[j] = step;
        let d = (standard_eps1(&(k + dk)) - standard_eps1(&(k - dk))) / (2.0 * step);
        sum += d.norm_squared();
    }
    Ok(sum.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ex() -> Vec3 {
        Vec3::new(1.0, 0.0, 0.0)
    }

    #[test]
    fn basis_along_x() {
        let b = make_polarization_basis(&ex(), &ex()).unwrap();
        assert_eq!(b.eps1, Vec3::new(0.0, -1.0, 0.0));
        assert_eq!(b.eps2, Vec3::new(0.0, 0.0, -1.0));
        assert!(!b.fallback);
    }

    #[test]
    fn basis_on_axis_uses_fallback() {
        let b = make_polarization_basis(&Vec3::new(0.0, 0.0, 1.0), &ex()).unwrap();
        assert!(b.fallback);
        assert_eq!(b.eps1, ex());
        assert_eq!(b.eps2, Vec3::new(0.0, 1.0, 0.0));
    }

    #[test]
    fn basis_three_four_zero() {
        let b = make_polarization_basis(&Vec3::new(3.0, 4.0, 0.0), &ex()).unwrap();
        assert_abs_diff_eq!(b.eps1[0], 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(b.eps1[1], -0.6, epsilon = 1e-15);
        assert_eq!(b.eps1[2], 0.0);
    }

    #[test]
    fn zero_wavevector_rejected() {
        assert_eq!(
            make_polarization_basis(&Vec3::zeros(), &ex()),
            Err(Error::ZeroWavevector)
        );
        assert_eq!(
            transverse_projector(&Vec3::zeros()),
            Err(Error::ZeroWavevector)
        );
        assert_eq!(
            cross_coupling(&Vec3::zeros(), &ex()),
            Err(Error::ZeroWavevector)
        );
    }

    #[test]
    fn fallback_parallel_to_axis_rejected() {
        let k = Vec3::new(0.0, 0.0, -2.0);
        assert_eq!(
            make_polarization_basis(&k, &Vec3::new(0.0, 0.0, 3.0)),
            Err(Error::DegenerateFallback)
        );
    }

    #[test]
    fn projector_examples() {
        let p = transverse_projector(&Vec3::new(0.0, 0.0, 2.0)).unwrap();
        assert_eq!(p.m, Mat3::from_diagonal(&Vec3::new(1.0, 1.0, 0.0)));

        let k = Vec3::new(1.0, 1.0, 1.0) / 3f64.sqrt();
        let p = transverse_projector(&k).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 2.0 / 3.0 } else { -1.0 / 3.0 };
                assert_abs_diff_eq!(p.m[(i, j)], want, epsilon = 1e-15);
            }
        }
        assert!(p.apply(&k).norm() < 1e-15);
        assert_abs_diff_eq!(p.trace(), 2.0, epsilon = 1e-14);
        assert!(p.idempotency_defect() < 1e-15);
    }

    #[test]
    fn completeness_examples() {
        assert_eq!(verify_completeness(&ex(), &ex()).unwrap(), 0.0);
        assert!(verify_completeness(&Vec3::new(3.0, 4.0, 12.0), &ex()).unwrap() < 1e-14);
        // on-axis fallback frame is complete too
        assert!(
            verify_completeness(&Vec3::new(0.0, 0.0, 5.0), &Vec3::new(1.0, 2.0, 0.3)).unwrap()
                < 1e-15
        );
    }

    #[test]
    fn cross_coupling_examples() {
        let z = Vec3::new(0.0, 0.0, 1.0);
        assert_eq!(cross_coupling(&z, &ex()).unwrap(), Vec3::new(0.0, 1.0, 0.0));
        assert_eq!(
            cross_coupling(&z, &Vec3::new(0.0, 0.0, 5.0)).unwrap(),
            Vec3::zeros()
        );
    }

    #[test]
    fn reduction_on_axis() {
        let a = [1.0, 2.0, 3.0].map(|x| Complex64::new(x, 0.0));
        let (_, amps) = two_mode_reduction(&Vec3::new(0.0, 0.0, 1.0), &ex(), &a).unwrap();
        assert_abs_diff_eq!(amps.a0.re, 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            amps.a1.norm_sqr() + amps.a2.norm_sqr(),
            5.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn reduction_of_longitudinal_vector() {
        let k = Vec3::new(1.0, -2.0, 0.5);
        let a_real = -k * 3.0;
        let a = [a_real[0], a_real[1], a_real[2]].map(|x| Complex64::new(x, 0.0));
        let (_, amps) = two_mode_reduction(&k, &ex(), &a).unwrap();
        assert!(amps.a1.norm() < 1e-14 && amps.a2.norm() < 1e-14);
        assert_abs_diff_eq!(amps.a0.re, -a_real.norm(), epsilon = 1e-14);
    }

    #[test]
    fn gradient_norm_examples() {
        let g = polarization_gradient_norm(&ex(), 1e-5).unwrap();
        assert_abs_diff_eq!(g, 1.0, epsilon = 1e-4);
        let g = polarization_gradient_norm(&Vec3::new(0.1, 0.0, 0.0), 1e-5).unwrap();
        assert_abs_diff_eq!(g, 10.0, epsilon = 1e-3);
        assert!(matches!(
            polarization_gradient_norm(&Vec3::new(0.0, 0.0, 1.0), 1e-5),
            Err(Error::SingularAxis { .. })
        ));
    }

    #[test]
    fn gradient_norm_scales_inverse_rho() {
        for rho in [1.0, 0.5, 0.1, 0.01] {
            let g = polarization_gradient_norm(&Vec3::new(rho, 0.0, 0.0), 1e-5).unwrap();
            assert!((g * rho - 1.0).abs() < 1e-3, "rho={rho}: {g}");
        }
    }
}
