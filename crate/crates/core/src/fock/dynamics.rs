use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use super::rep::{Channel, FockRep, Oscillator};
use super::sparse::SparseMatrix;
use crate::error::{Error, Result};
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvolutionReport {
    /// Empirical `σ` in `a(t) = a·e^{iσωt}` for `U = exp(iHt)`.
    pub sign: i8,
    /// Deviation from `a·e^{iσωt}` with the empirical sign.
    pub deviation: f64,
    /// Deviation from `a·e^{+iωt}`, the positive-phase convention.
    pub positive_phase_deviation: f64,
}

/// Frobenius distance on protected columns between `U A U†` and
/// `A·e^{iσωt}`, with `U = exp(iHt)` and `H` diagonal with entries `energies`.
fn phase_deviation(
    energies: &[f64],
    op: &SparseMatrix,
    mask: &[bool],
    omega: f64,
    t: f64,
    sigma: f64,
) -> f64 {
    let target = Complex64::from_polar(1.0, sigma * omega * t);
    op.entries()
        .filter(|&(_, c, _)| mask[c])
        .map(|(r, c, v)| {
            let evolved = Complex64::from_polar(v, (energies[r] - energies[c]) * t);
            (evolved - target * v).norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

fn diagonal(h: &SparseMatrix) -> Vec<f64> {
    (0..h.dim()).map(|i| h.get(i, i)).collect()
}

fn report(rep: &FockRep, op: &SparseMatrix, omega: f64, t: f64) -> EvolutionReport {
    let mask = rep.protected_mask();
    let energies = diagonal(&rep.field_hamiltonian());
    // At a quarter period the two phase conventions differ by a factor -1.
    let probe = FRAC_PI_2 / omega;
    let minus = phase_deviation(&energies, op, &mask, omega, probe, -1.0);
    let plus = phase_deviation(&energies, op, &mask, omega, probe, 1.0);
    let sign: i8 = if minus <= plus { -1 } else { 1 };
    EvolutionReport {
        sign,
        deviation: phase_deviation(&energies, op, &mask, omega, t, sign as f64),
        positive_phase_deviation: phase_deviation(&energies, op, &mask, omega, t, 1.0),
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidLattice(format!(
            "frequency must be positive, got {omega}"
        )))
    }
}

/// Heisenberg evolution of a single truncated oscillator with `H = ω a†a`.
pub fn heisenberg_scalar_evolution(omega: f64, t: f64, n_max: u32) -> Result<EvolutionReport> {
    check_omega(omega)?;
    let rep = FockRep::new(
        vec![Oscillator {
            mode_id: 0,
            channel: Channel::Scalar,
            omega,
        }],
        n_max,
        None,
    )?;
    Ok(report(&rep, rep.lowering(0), omega, t))
}

/// Evolution of `a₀ = k̂·a` under the three-component field energy
/// `|k| Σ_j a_j† a_j` at a single mode.
pub fn scalar_mode_evolution(k: &Vec3, t: f64, n_max: u32) -> Result<EvolutionReport> {
    let omega = k.norm();
    if omega == 0.0 {
        return Err(Error::ZeroWavevector);
    }
    check_omega(omega)?;
    let oscillators = (1..=3)
        .map(|j| Oscillator {
            mode_id: 0,
            channel: Channel::Cartesian(j),
            omega,
        })
        .collect();
    let rep = FockRep::new(oscillators, n_max, None)?;
    let khat = k / omega;
    let a0 = rep.combination(khat.as_slice());
    Ok(report(&rep, &a0, omega, t))
}
