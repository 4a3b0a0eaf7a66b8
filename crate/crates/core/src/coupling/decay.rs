//! Power-law decay fits and directional integrability diagnostics.

use serde::Serialize;

use crate::coupling::profile::SampledProfile;
use crate::error::{Error, Result};

/// Minimum samples inside the window for a direct fit.
pub const MIN_FIT_SAMPLES: usize = 20;
/// Minimum local maxima inside the window for an envelope fit.
pub const MIN_ENVELOPE_PEAKS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    pub exponent: f64,
    pub amplitude: f64,
    pub r_window: (f64, f64),
    /// RMS residual of the log-log regression.
    pub residual: f64,
    pub envelope_used: bool,
    pub points_used: usize,
}

/// Least-squares slope of `ln|value|` against `ln r` over `r_window`.
///
/// With `envelope` set the fit runs over the local maxima of `|value|`,
/// which is the only meaningful choice for oscillating tails.
pub fn fit_decay_exponent(
    profile: &SampledProfile,
    r_window: (f64, f64),
    envelope: bool,
) -> Result<DecayFit> {
    let (lo, hi) = r_window;
    let radii = profile.radii();
    let values = profile.values();
    if radii.is_empty() {
        return Err(Error::InsufficientSamples {
            needed: MIN_FIT_SAMPLES,
            available: 0,
        });
    }
    let slack = 1e-9 * hi.abs();
    if !(lo < hi) || lo < radii[0] - slack || hi > radii[radii.len() - 1] + slack {
        return Err(Error::InvalidProfile(format!(
            "window [{lo}, {hi}] not inside sampled range [{}, {}]",
            radii[0],
            radii[radii.len() - 1]
        )));
    }
    let inside = |i: usize| radii[i] >= lo && radii[i] <= hi;

    let selected: Vec<usize> = if envelope {
        let peaks: Vec<usize> = (1..radii.len().saturating_sub(1))
            .filter(|&i| inside(i))
            .filter(|&i| {
                let a = values[i].abs();
                a > values[i - 1].abs() && a >= values[i + 1].abs()
            })
            .collect();
        if peaks.len() < MIN_ENVELOPE_PEAKS {
            return Err(Error::InsufficientSamples {
                needed: MIN_ENVELOPE_PEAKS,
                available: peaks.len(),
            });
        }
        peaks
    } else {
        let idx: Vec<usize> = (0..radii.len()).filter(|&i| inside(i)).collect();
        if idx.len() < MIN_FIT_SAMPLES {
            return Err(Error::InsufficientSamples {
                needed: MIN_FIT_SAMPLES,
                available: idx.len(),
            });
        }
        let positive = idx.iter().filter(|&&i| values[i] > 0.0).count();
        if positive != 0 && positive != idx.len() {
            return Err(Error::NonPositiveValues(
                "profile changes sign inside the window; use an envelope fit".into(),
            ));
        }
        idx
    };
    if let Some(&i) = selected.iter().find(|&&i| values[i] == 0.0) {
        return Err(Error::NonPositiveValues(format!(
            "zero value at r = {}",
            radii[i]
        )));
    }

    let xs: Vec<f64> = selected.iter().map(|&i| radii[i].ln()).collect();
    let ys: Vec<f64> = selected.iter().map(|&i| values[i].abs().ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(DecayFit {
        exponent: slope,
        amplitude: intercept.exp(),
        r_window,
        residual,
        envelope_used: envelope,
        points_used: selected.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailDiagnostic {
    pub gamma: f64,
    /// `(lower, upper, ∫ r^{2γ}|h|² r² dr)` for dyadic blocks, outermost first.
    pub blocks: Vec<(f64, f64, f64)>,
    /// Outermost block divided by the next one in; below 1 means the
    /// partial sums along this ray are converging.
    pub ratio: f64,
}

impl TailDiagnostic {
    pub fn converging(&self) -> bool {
        self.ratio < 1.0
    }
}

/// Directional spot check of `∫ |y|^{2γ} |h(y)|² dy` along one ray.
///
/// The radial integrand `r^{2γ}|h|² r²` is integrated over dyadic blocks
/// `[R/2, R]` counted down from the outermost sample, treating `|h|` as a
/// power law between neighbouring samples. This only probes one direction;
/// it says nothing definite about the full three-dimensional integral.
pub fn weighted_tail_diagnostic(profile: &SampledProfile, gamma: f64) -> Result<TailDiagnostic> {
    let radii = profile.radii();
    let values = profile.values();
    let n = radii.len();
    if n < 8 || radii[n - 1] < 4.0 * radii[0] {
        return Err(Error::InsufficientSamples {
            needed: 8,
            available: n,
        });
    }
    let weight: Vec<f64> = radii
        .iter()
        .zip(values)
        .map(|(r, v)| r.powf(2.0 * gamma + 2.0) * v * v)
        .collect();

    // ∫ over [a, b] ⊂ [r_i, r_{i+1}] with f a power law through the endpoints
    let piece = |i: usize, a: f64, b: f64| -> f64 {
        let (r0, r1, f0, f1) = (radii[i], radii[i + 1], weight[i], weight[i + 1]);
        if f0 > 0.0 && f1 > 0.0 {
            let s = (f1 / f0).ln() / (r1 / r0).ln();
            let c = f0 / r0.powf(s);
            if (s + 1.0).abs() < 1e-12 {
                c * (b / a).ln()
            } else {
                c * (b.powf(s + 1.0) - a.powf(s + 1.0)) / (s + 1.0)
            }
        } else {
            let lerp = |x: f64| f0 + (f1 - f0) * (x - r0) / (r1 - r0);
            0.5 * (lerp(a) + lerp(b)) * (b - a)
        }
    };
    let block = |lo: f64, hi: f64| -> f64 {
        (0..n - 1)
            .filter_map(|i| {
                let a = radii[i].max(lo);
                let b = radii[i + 1].min(hi);
                (b > a).then(|| piece(i, a, b))
            })
            .sum()
    };

    let mut blocks = Vec::new();
    let mut hi = radii[n - 1];
    while hi / 2.0 >= radii[0] * (1.0 - 1e-12) {
        let lo = hi / 2.0;
        blocks.push((lo, hi, block(lo, hi)));
        hi = lo;
    }
    let ratio = blocks[0].2 / blocks[1].2;
    Ok(TailDiagnostic {
        gamma,
        blocks,
        ratio,
    })
}
