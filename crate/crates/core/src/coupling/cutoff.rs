use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape of the ultraviolet cutoff between its plateau and `Λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Taper {
    /// Indicator of `[0, Λ]`.
    Sharp,
    /// Half-cosine transition, C¹.
    CosineTaper,
    /// `ψ(1−t)/(ψ(1−t)+ψ(t))` with `ψ(s) = e^{−1/s}`, C^∞.
    SmoothBump,
}

impl Taper {
    pub const ALL: [Taper; 3] = [Taper::Sharp, Taper::CosineTaper, Taper::SmoothBump];

    pub fn as_str(&self) -> &'static str {
        match self {
            Taper::Sharp => "sharp",
            Taper::CosineTaper => "cosine_taper",
            Taper::SmoothBump => "smooth_bump",
        }
    }
}

impl fmt::Display for Taper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Taper {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sharp" => Ok(Taper::Sharp),
            "cosine_taper" => Ok(Taper::CosineTaper),
            "smooth_bump" => Ok(Taper::SmoothBump),
            other => Err(Error::InvalidCutoff(format!("unknown taper `{other}`"))),
        }
    }
}

/// Radial ultraviolet cutoff `χ̂_Λ(κ)`: 1 on `[0, Λ(1−w)]`, 0 beyond `Λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec {
    pub lambda: f64,
    pub taper: Taper,
    /// Fraction of `Λ` spent in the transition; ignored for [`Taper::Sharp`].
    pub taper_width: f64,
}

pub const DEFAULT_TAPER_WIDTH: f64 = 0.5;

impl CutoffSpec {
    pub fn new(lambda: f64, taper: Taper, taper_width: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidCutoff(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        if taper != Taper::Sharp && !(taper_width > 0.0 && taper_width < 1.0) {
            return Err(Error::InvalidCutoff(format!(
                "taper_width must lie in (0, 1), got {taper_width}"
            )));
        }
        Ok(Self {
            lambda,
            taper,
            taper_width,
        })
    }

    pub fn sharp(lambda: f64) -> Result<Self> {
        Self::new(lambda, Taper::Sharp, DEFAULT_TAPER_WIDTH)
    }

    pub fn smooth(lambda: f64) -> Result<Self> {
        Self::new(lambda, Taper::SmoothBump, DEFAULT_TAPER_WIDTH)
    }

    /// End of the plateau where `χ̂ = 1`.
    pub fn plateau_end(&self) -> f64 {
        match self.taper {
            Taper::Sharp => self.lambda,
            _ => self.lambda * (1.0 - self.taper_width),
        }
    }

    /// Points where `χ̂` changes analytic form, inside `(0, Λ)`.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.taper {
            Taper::Sharp => vec![],
            _ => vec![self.plateau_end()],
        }
    }

    pub fn eval(&self, kappa: f64) -> f64 {
        cutoff_eval(self, kappa)
    }
}

fn psi(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// `χ̂_Λ(κ)`; exactly 1 on the plateau and exactly 0 at and beyond `Λ`.
pub fn cutoff_eval(spec: &CutoffSpec, kappa: f64) -> f64 {
    let start = spec.plateau_end();
    if kappa <= start && kappa < spec.lambda {
        return 1.0;
    }
    if kappa >= spec.lambda {
        return 0.0;
    }
    // Distances to both ends of the taper, each computed without cancellation.
    let width = spec.lambda - start;
    let t = (kappa - start) / width;
    let s = (spec.lambda - kappa) / width;
    match spec.taper {
        Taper::Sharp => 1.0,
        // 0.5(1 + cos πt) written as sin²(πs/2)
        Taper::CosineTaper => (std::f64::consts::FRAC_PI_2 * s).sin().powi(2),
        Taper::SmoothBump => {
            let a = psi(s);
            let b = psi(t);
            a / (a + b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_taper_keeps_relative_accuracy_near_lambda() {
        let s = CutoffSpec::new(1.0, Taper::CosineTaper, 0.5).unwrap();
        for delta in [1e-3, 1e-6, 1e-9] {
            let expected = (std::f64::consts::PI * delta).powi(2)
                * (1.0 - (std::f64::consts::PI * delta).powi(2) / 3.0);
            let v = cutoff_eval(&s, 1.0 - delta);
            assert!(
                (v / expected - 1.0).abs() < 1e-6,
                "{delta}: {v} vs {expected}"
            );
        }
    }

    #[test]
    fn sharp_is_an_indicator() {
        let s = CutoffSpec::sharp(1.0).unwrap();
        assert_eq!(cutoff_eval(&s, 0.5), 1.0);
        assert_eq!(cutoff_eval(&s, 1.5), 0.0);
        assert_eq!(cutoff_eval(&s, 0.0), 1.0);
    }

    #[test]
    fn smooth_bump_transition() {
        let s = CutoffSpec::smooth(1.0).unwrap();
        assert_eq!(cutoff_eval(&s, 0.5), 1.0);
        assert_eq!(cutoff_eval(&s, 1.0), 0.0);
        let mid = cutoff_eval(&s, 0.75);
        assert!(mid > 0.0 && mid < 1.0);
        assert!((mid - 0.5).abs() < 1e-15);
    }

    #[test]
    fn tapers_are_monotone() {
        for taper in Taper::ALL {
            let s = CutoffSpec::new(2.0, taper, 0.3).unwrap();
            let mut prev = 1.0;
            for i in 0..=2000 {
                let v = cutoff_eval(&s, 2.2 * i as f64 / 2000.0);
                assert!((0.0..=1.0).contains(&v));
                assert!(v <= prev, "{taper} not monotone");
                prev = v;
            }
        }
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(CutoffSpec::new(0.0, Taper::Sharp, 0.5).is_err());
        assert!(CutoffSpec::new(1.0, Taper::SmoothBump, 1.0).is_err());
        assert!(CutoffSpec::new(1.0, Taper::CosineTaper, 0.0).is_err());
        assert!(CutoffSpec::new(1.0, Taper::Sharp, 7.0).is_ok());
        assert!("smooth".parse::<Taper>().is_err());
        assert_eq!("cosine_taper".parse::<Taper>().unwrap(), Taper::CosineTaper);
    }
}
