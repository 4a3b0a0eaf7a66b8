//! Position-space kernel of the cross-product coupling `k̂ ∧ a(k)`.

use num_complex::Complex64;

use crate::coupling::cutoff::CutoffSpec;
use crate::coupling::radial::compute_htilde_gradient;
use crate::error::{Error, Result};
use crate::Vec3;

/// `(1/2π)∫ χ̂(|k|)|k|^{−1/2} (k̂ ∧ v) e^{−ik·y} dk` for a constant vector `v`.
///
/// Writing `k̂|k|^{−1/2} = k|k|^{−3/2}` and `k e^{−ik·y} = i∇_y e^{−ik·y}`
/// turns this into `i ∇h̃(y) ∧ v` with `∇h̃ = h̃'(|y|) ŷ`.
pub fn transverse_cross_kernel(spec: &CutoffSpec, v: &Vec3, y: &Vec3) -> Result<[Complex64; 3]> {
    let r = y.norm();
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::NonPositiveRadius(r));
    }
    let grad = y * (compute_htilde_gradient(spec, r)? / r);
    let c = grad.cross(v);
    Ok([0, 1, 2].map(|i| Complex64::new(0.0, c[i])))
}
