//! Adaptive Gauss–Kronrod quadrature and half-period panel layouts for
//! oscillatory integrands.
//!
//! Everything here is re-entrant: no state outlives a call, so the
//! integrators can be nested (the 3D oracle does this) and called from
//! several threads at once.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::Error;

/// Values that can be integrated: reals and complex numbers.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    /// Maximum number of bisections per call.
    pub max_subdivisions: usize,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self {
            abs,
            rel,
            max_subdivisions: 2000,
        }
    }

    pub const fn with_budget(mut self, max_subdivisions: usize) -> Self {
        self.max_subdivisions = max_subdivisions;
        self
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(0.0, 1e-12)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub abs_error: f64,
    pub evaluations: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

struct Rule<T> {
    value: T,
    error: f64,
    resabs: f64,
}

/// One 21-point Kronrod application with the embedded 10-point Gauss error.
fn gk21<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> Rule<T> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[10];
    let mut gauss = T::zero();
    let mut resabs = fc.magnitude() * WGK[10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let s = f1 + f2;
        kron = kron + s * WGK[j];
        resabs += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            gauss = gauss + s * WG[j / 2];
        }
    }
    let err = ((kron - gauss) * half).magnitude();
    let resabs = resabs * half.abs();
    // QUADPACK-style rescaling: the raw Kronrod–Gauss difference is very
    // pessimistic for smooth integrands.
    let scaled = if err > 0.0 && resabs > 0.0 {
        let s = (200.0 * err / resabs).powf(1.5);
        if s < 1.0 {
            resabs * s
        } else {
            err
        }
    } else {
        err
    };
    let floor = 50.0 * f64::EPSILON * resabs;
    Rule {
        value: kron * half,
        error: scaled.max(floor),
        resabs,
    }
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    resabs: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// Bisects the segment with the largest error estimate until the total
/// error is below `max(tol.abs, tol.rel·|I|)` or the total is limited by
/// round-off. Exceeding `tol.max_subdivisions` yields
/// [`Error::QuadratureBudgetExceeded`] carrying the best estimate.
pub fn integrate<T, F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate<T>, Error>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    if a == b {
        return Ok(Estimate {
            value: T::zero(),
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    let first = gk21(&mut f, a, b);
    let mut evaluations = 21;
    let mut heap = BinaryHeap::new();
    let mut total = first.value;
    let mut total_err = first.error;
    let mut total_abs = first.resabs;
    heap.push(Segment {
        a,
        b,
        value: first.value,
        error: first.error,
        resabs: first.resabs,
    });
    let mut splits = 0;
    loop {
        let target = tol.abs.max(tol.rel * total.magnitude());
        if total_err <= target || total_err <= 100.0 * f64::EPSILON * total_abs {
            break;
        }
        if splits >= tol.max_subdivisions {
            return Err(Error::QuadratureBudgetExceeded {
                estimate: total.magnitude(),
                abs_error: total_err,
            });
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // segment can no longer be bisected in f64
            heap.push(worst);
            break;
        }
        let left = gk21(&mut f, worst.a, mid);
        let right = gk21(&mut f, mid, worst.b);
        evaluations += 42;
        splits += 1;
        total = total - worst.value + left.value + right.value;
        total_err += left.error + right.error - worst.error;
        total_abs += left.resabs + right.resabs - worst.resabs;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: left.value,
            error: left.error,
            resabs: left.resabs,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: right.value,
            error: right.error,
            resabs: right.resabs,
        });
    }
    // re-sum from the segments to shed drift from the running updates
    let mut segs = heap.into_vec();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = segs.iter().fold(T::zero(), |acc, s| acc + s.value);
    let abs_error = segs.iter().map(|s| s.error).sum();
    Ok(Estimate {
        value,
        abs_error,
        evaluations,
    })
}

/// Integrates over consecutive panels `[p₀, p₁], [p₁, p₂], …`, each with its
/// own adaptive run at tolerance `tol`.
pub fn integrate_panels<T, F>(
    mut f: F,
    points: &[f64],
    tol: Tolerance,
) -> Result<Estimate<T>, Error>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    let mut value = T::zero();
    let mut abs_error = 0.0;
    let mut evaluations = 0;
    for w in points.windows(2) {
        let e = integrate(&mut f, w[0], w[1], tol)?;
        value = value + e.value;
        abs_error += e.abs_error;
        evaluations += e.evaluations;
    }
    Ok(Estimate {
        value,
        abs_error,
        evaluations,
    })
}

/// Panel breakpoints on `[0, upper]` at every half period `jπ/ω` of
/// `sin(ωκ)`, merged with `extra` breakpoints that lie inside the range.
pub fn half_period_points(upper: f64, omega: f64, extra: &[f64]) -> Vec<f64> {
    let mut pts = vec![0.0, upper];
    if omega > 0.0 {
        let step = PI / omega;
        let n = (upper / step).floor() as usize;
        pts.extend((1..=n).map(|j| j as f64 * step));
    }
    pts.extend(extra.iter().copied().filter(|&x| x > 0.0 && x < upper));
    pts.sort_by(f64::total_cmp);
    // drop near-duplicates so no panel is degenerate
    let scale = upper.abs().max(f64::MIN_POSITIVE);
    pts.dedup_by(|b, a| (*b - *a).abs() <= 1e-14 * scale);
    if let Some(last) = pts.last_mut() {
        *last = upper;
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomials_are_exact() {
        for n in 0..30 {
            let e = integrate(|x: f64| x.powi(n), 0.0, 1.0, Tolerance::default()).unwrap();
            assert_relative_eq!(e.value, 1.0 / (n as f64 + 1.0), max_relative = 1e-13);
        }
    }

    #[test]
    fn endpoint_singularity() {
        let e = integrate(
            |x: f64| x.sqrt().recip(),
            0.0,
            1.0,
            Tolerance::new(0.0, 1e-10),
        )
        .unwrap();
        assert_relative_eq!(e.value, 2.0, max_relative = 1e-10);
    }

    #[test]
    fn complex_integrand() {
        let e = integrate(
            |x: f64| Complex64::new(0.0, x).exp(),
            0.0,
            PI,
            Tolerance::default(),
        )
        .unwrap();
        assert!((e.value - Complex64::new(0.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn reversed_limits_change_sign() {
        let fwd = integrate(f64::exp, 0.0, 2.0, Tolerance::default())
            .unwrap()
            .value;
        let rev = integrate(f64::exp, 2.0, 0.0, Tolerance::default())
            .unwrap()
            .value;
        assert_relative_eq!(fwd, -rev, max_relative = 1e-15);
    }

    #[test]
    fn budget_is_reported() {
        let err = integrate(
            |x: f64| (1.0 / x).sin(),
            1e-6,
            1.0,
            Tolerance::new(0.0, 1e-14).with_budget(3),
        )
        .unwrap_err();
        assert!(matches!(err, Error::QuadratureBudgetExceeded { .. }));
    }

    #[test]
    fn panel_points_cover_range() {
        let pts = half_period_points(1.0, 10.0, &[0.5, 2.0]);
        assert_eq!(pts[0], 0.0);
        assert_eq!(*pts.last().unwrap(), 1.0);
        assert!(pts.windows(2).all(|w| w[1] > w[0]));
        assert!(pts.contains(&0.5));
        assert_eq!(pts.len(), 2 + 3 + 1);
    }

    #[test]
    fn sine_panels_match_closed_form() {
        let omega = 300.0;
        let pts = half_period_points(1.0, omega, &[]);
        let e =
            integrate_panels(|x: f64| x * (omega * x).sin(), &pts, Tolerance::default()).unwrap();
        let exact = (omega.sin() - omega * omega.cos()) / (omega * omega);
        assert_relative_eq!(e.value, exact, max_relative = 1e-11);
    }
}
