//! Free energy of a free bosonic field: continuum density and finite-box
//! mode sums.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_panels, Tolerance};

/// Summands below this magnitude are dropped from box sums.
pub const SUMMAND_FLOOR: f64 = 1e-16;

/// Default cap on the number of lattice modes visited by a box sum.
pub const DEFAULT_MODE_GUARD: u64 = 1_000_000_000;

const DENSITY_TOL: Tolerance = Tolerance::new(0.0, 1e-14).with_budget(400);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalParams {
    /// `k_B T / (ħc)`, an inverse length.
    pub theta: f64,
    pub volume: f64,
}

impl ThermalParams {
    pub fn new(theta: f64, volume: f64) -> Result<Self> {
        check_theta(theta)?;
        if !(volume > 0.0 && volume.is_finite()) {
            return Err(Error::NonPositiveBox(volume));
        }
        Ok(Self { theta, volume })
    }

    /// Cubic box of side `box_side`.
    pub fn cube(theta: f64, box_side: f64) -> Result<Self> {
        check_box(box_side)?;
        Self::new(theta, box_side.powi(3))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Integral,
    ModeSum,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Integral => "integral",
            Method::ModeSum => "mode_sum",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `F/(k_B T)` assembled from a per-channel density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreeEnergyResult {
    pub per_mode_density: f64,
    /// `n_channels · volume · density`; negative, the usual sign.
    pub total: f64,
    pub n_channels: u32,
    pub method: Method,
}

impl FreeEnergyResult {
    pub fn new(per_mode_density: f64, volume: f64, n_channels: u32, method: Method) -> Self {
        Self {
            per_mode_density,
            total: n_channels as f64 * volume * per_mode_density,
            n_channels,
            method,
        }
    }

    pub fn standard_sign(&self) -> f64 {
        self.total
    }

    /// The same magnitude with the opposite sign, `-n·V·d`.
    pub fn paper_sign(&self) -> f64 {
        -self.total
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveTemperature(theta))
    }
}

fn check_box(box_side: f64) -> Result<()> {
    if box_side > 0.0 && box_side.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveBox(box_side))
    }
}

/// `ln(1 - e^{-x})` for `x > 0`.
pub fn log_one_minus_exp(x: f64) -> f64 {
    if x < std::f64::consts::LN_2 {
        (-(-x).exp_m1()).ln()
    } else {
        (-(-x).exp()).ln_1p()
    }
}

/// `d(θ) = (1/2π²) ∫₀^∞ κ² ln(1 - e^{-κ/θ}) dκ`, which equals `-π²θ³/90`.
pub fn planck_integral_density(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    // Past 80θ the integrand is below e^{-80} relative to the bulk.
    let points: Vec<f64> = [0.0, 1.0, 5.0, 20.0, 40.0, 80.0]
        .iter()
        .map(|p| p * theta)
        .collect();
    let est = integrate_panels(
        |k: f64| k * k * log_one_minus_exp(k / theta),
        &points,
        DENSITY_TOL,
    )?;
    Ok(est.value / (2.0 * PI * PI))
}

/// Continuum free energy for `n_channels` independent channels.
pub fn integral_free_energy(params: &ThermalParams, n_channels: u32) -> Result<FreeEnergyResult> {
    let d = planck_integral_density(params.theta)?;
    Ok(FreeEnergyResult::new(
        d,
        params.volume,
        n_channels,
        Method::Integral,
    ))
}

/// Representation counts `r₃(m)` of `m = a² + b² + c²` for `m ≤ max`.
pub fn sum_of_three_squares_counts(max: usize) -> Vec<u64> {
    let root = (max as f64).sqrt() as usize + 1;
    let weight = |a: usize| if a == 0 { 1 } else { 2 };
    let mut r2 = vec![0u64; max + 1];
    for a in 0..=root {
        for b in 0..=root {
            let s = a * a + b * b;
            if s <= max {
                r2[s] += weight(a) * weight(b);
            }
        }
    }
    let mut r3 = vec![0u64; max + 1];
    for c in 0..=root {
        let c2 = c * c;
        if c2 > max {
            break;
        }
        for (m, slot) in r3.iter_mut().enumerate().skip(c2) {
            *slot += weight(c) * r2[m - c2];
        }
    }
    r3
}

/// Largest `|n|²` with a summand above [`SUMMAND_FLOOR`]; at least 1.
fn shell_limit(box_side: f64, theta: f64) -> f64 {
    let x_max = -SUMMAND_FLOOR.ln();
    (x_max * box_side * theta / (2.0 * PI))
        .powi(2)
        .floor()
        .max(1.0)
}

/// Sum of `ln(1 - e^{-|k|/θ})` over nonzero modes `k = 2πn/L`, for one
/// channel. Shells are added from the outside in with compensated
/// summation so the result is reproducible bit for bit.
pub fn box_mode_sum(box_side: f64, theta: f64, mode_guard: u64) -> Result<f64> {
    check_box(box_side)?;
    check_theta(theta)?;
    let limit = shell_limit(box_side, theta);
    let needed = 4.0 / 3.0 * PI * limit.powf(1.5);
    if needed > mode_guard as f64 {
        return Err(Error::ModeBudgetExceeded {
            needed: needed.ceil() as u64,
            budget: mode_guard,
        });
    }
    let limit = limit as usize;
    let counts = sum_of_three_squares_counts(limit);
    let scale = 2.0 * PI / (box_side * theta);
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for m in (1..=limit).rev() {
        if counts[m] == 0 {
            continue;
        }
        let term = counts[m] as f64 * log_one_minus_exp(scale * (m as f64).sqrt());
        let t = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
    }
    Ok(sum + comp)
}

/// Per-channel density `(1/L³) Σ_{k≠0} ln(1 - e^{-|k|/θ})`.
pub fn finite_box_density(box_side: f64, theta: f64, mode_guard: u64) -> Result<f64> {
    Ok(box_mode_sum(box_side, theta, mode_guard)? / box_side.powi(3))
}

/// Finite-box free energy for `n_channels` independent channels.
pub fn box_free_energy(
    box_side: f64,
    theta: f64,
    n_channels: u32,
    mode_guard: u64,
) -> Result<FreeEnergyResult> {
    let d = finite_box_density(box_side, theta, mode_guard)?;
    Ok(FreeEnergyResult::new(
        d,
        box_side.powi(3),
        n_channels,
        Method::ModeSum,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubtractionReport {
    pub three_channel: f64,
    pub two_channel: f64,
    pub scalar: f64,
    pub abs_deviation: f64,
    pub rel_deviation: f64,
}

/// Compares `F₃ - F₂` with `F_scalar`, where the three channels of `F₃`
/// carry the given weights and `F₂`, `F_scalar` carry unit weights.
pub fn subtraction_identity_check_weighted(
    box_side: f64,
    theta: f64,
    weights: [f64; 3],
    mode_guard: u64,
) -> Result<SubtractionReport> {
    let single = box_mode_sum(box_side, theta, mode_guard)?;
    let three_channel: f64 = weights.iter().map(|w| w * single).sum();
    let two_channel = single + single;
    let scalar = single;
    let abs_deviation = ((three_channel - two_channel) - scalar).abs();
    let rel_deviation = if scalar == 0.0 {
        abs_deviation
    } else {
        abs_deviation / scalar.abs()
    };
    Ok(SubtractionReport {
        three_channel,
        two_channel,
        scalar,
        abs_deviation,
        rel_deviation,
    })
}

pub fn subtraction_identity_check(
    box_side: f64,
    theta: f64,
    mode_guard: u64,
) -> Result<SubtractionReport> {
    subtraction_identity_check_weighted(box_side, theta, [1.0; 3], mode_guard)
}

pub const THERMO_CSV_HEADER: &str = "L,theta,channels,density,method,sign_convention";

/// Two rows, one per sign convention; `density` holds the signed `F/(k_B T)`
/// divided by the volume.
pub fn thermo_csv_rows(box_side: f64, theta: f64, result: &FreeEnergyResult) -> String {
    let volume = box_side.powi(3);
    [
        ("standard_sign", result.standard_sign()),
        ("paper_sign", result.paper_sign()),
    ]
    .iter()
    .map(|(label, value)| {
        format!(
            "{:e},{:e},{},{:e},{},{}\n",
            box_side,
            theta,
            result.n_channels,
            value / volume,
            result.method,
            label
        )
    })
    .collect()
}
