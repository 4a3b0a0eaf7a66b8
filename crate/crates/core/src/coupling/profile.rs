use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coupling::cutoff::CutoffSpec;
use crate::coupling::polarized::compute_h_polarized;
use crate::coupling::radial::{compute_h, compute_htilde, compute_htilde_gradient};
use crate::error::{Error, Result};
use crate::Vec3;

pub const CSV_HEADER: &str = "r,value,kind,taper,lambda,taper_width";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    H,
    Htilde,
    HtildeGrad,
    HPolarized,
}

impl ProfileKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProfileKind::H => "h",
            ProfileKind::Htilde => "htilde",
            ProfileKind::HtildeGrad => "htilde_grad",
            ProfileKind::HPolarized => "h_polarized",
        }
    }

    /// Evaluates a radial kind at `r`; [`ProfileKind::HPolarized`] needs a
    /// direction and goes through [`sample_polarized_profile`] instead.
    pub fn eval(&self, spec: &CutoffSpec, r: f64) -> Result<f64> {
        match self {
            ProfileKind::H => compute_h(spec, r),
            ProfileKind::Htilde => compute_htilde(spec, r),
            ProfileKind::HtildeGrad => compute_htilde_gradient(spec, r),
            ProfileKind::HPolarized => Err(Error::InvalidProfile(
                "polarized profiles need a direction".into(),
            )),
        }
    }
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProfileKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h" => Ok(ProfileKind::H),
            "htilde" => Ok(ProfileKind::Htilde),
            "htilde_grad" => Ok(ProfileKind::HtildeGrad),
            "h_polarized" => Ok(ProfileKind::HPolarized),
            other => Err(Error::InvalidProfile(format!("unknown kind `{other}`"))),
        }
    }
}

/// Radial samples of one coupling function.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    radii: Vec<f64>,
    values: Vec<f64>,
    pub cutoff: CutoffSpec,
    pub kind: ProfileKind,
}

impl SampledProfile {
    pub fn new(
        radii: Vec<f64>,
        values: Vec<f64>,
        cutoff: CutoffSpec,
        kind: ProfileKind,
    ) -> Result<Self> {
        if radii.len() != values.len() {
            return Err(Error::InvalidProfile(format!(
                "{} radii but {} values",
                radii.len(),
                values.len()
            )));
        }
        if radii.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
            return Err(Error::InvalidProfile(
                "radii must be positive and finite".into(),
            ));
        }
        if radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidProfile(
                "radii must be strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile("values must be finite".into()));
        }
        Ok(Self {
            radii,
            values,
            cutoff,
            kind,
        })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Sign flips between consecutive nonzero samples.
    pub fn sign_changes(&self) -> usize {
        count_sign_changes(&self.values)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for (r, v) in self.radii.iter().zip(&self.values) {
            writeln!(
                out,
                "{:e},{:e},{},{},{:e},{:e}",
                r, v, self.kind, self.cutoff.taper, self.cutoff.lambda, self.cutoff.taper_width
            )
            .expect("writing to a String cannot fail");
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next() {
            Some(h) if h.trim() == CSV_HEADER => {}
            other => {
                return Err(Error::InvalidProfile(format!(
                    "expected header `{CSV_HEADER}`, found {:?}",
                    other.unwrap_or("")
                )))
            }
        }
        let mut radii = Vec::new();
        let mut values = Vec::new();
        let mut meta: Option<(ProfileKind, CutoffSpec)> = None;
        for (n, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = |what: &str| Error::InvalidProfile(format!("row {}: {what}", n + 1));
            if fields.len() != 6 {
                return Err(bad("expected 6 fields"));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| bad(&format!("bad number `{s}`")))
            };
            radii.push(num(fields[0])?);
            values.push(num(fields[1])?);
            let kind: ProfileKind = fields[2].parse()?;
            let cutoff = CutoffSpec::new(num(fields[4])?, fields[3].parse()?, num(fields[5])?)?;
            match &meta {
                None => meta = Some((kind, cutoff)),
                Some(m) if *m != (kind, cutoff) => {
                    return Err(bad("metadata differs from first row"))
                }
                Some(_) => {}
            }
        }
        let (kind, cutoff) = meta.ok_or_else(|| Error::InvalidProfile("no data rows".into()))?;
        Self::new(radii, values, cutoff, kind)
    }
}

pub fn count_sign_changes(values: &[f64]) -> usize {
    let mut last = 0.0f64;
    let mut changes = 0;
    for &v in values {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            changes += 1;
        }
        last = v;
    }
    changes
}

/// `n` points from `rmin` to `rmax` with constant ratio.
pub fn geometric_radii(rmin: f64, rmax: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![rmin];
    }
    let ratio = (rmax / rmin).ln() / (n - 1) as f64;
    let mut out: Vec<f64> = (0..n).map(|i| rmin * (ratio * i as f64).exp()).collect();
    out[n - 1] = rmax;
    out
}

/// `n` evenly spaced points from `rmin` to `rmax`.
pub fn linear_radii(rmin: f64, rmax: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![rmin];
    }
    let step = (rmax - rmin) / (n - 1) as f64;
    let mut out: Vec<f64> = (0..n).map(|i| rmin + step * i as f64).collect();
    out[n - 1] = rmax;
    out
}

/// Samples a radial coupling function; radii are evaluated in parallel and
/// collected in order.
pub fn sample_profile(
    spec: &CutoffSpec,
    kind: ProfileKind,
    radii: &[f64],
) -> Result<SampledProfile> {
    let values = radii
        .par_iter()
        .map(|&r| kind.eval(spec, r))
        .collect::<Result<Vec<f64>>>()?;
    SampledProfile::new(radii.to_vec(), values, *spec, kind)
}

/// Samples the non-vanishing part of `h^i_λ` along the ray `r·direction`.
pub fn sample_polarized_profile(
    spec: &CutoffSpec,
    lambda_index: usize,
    component: usize,
    direction: &Vec3,
    radii: &[f64],
) -> Result<SampledProfile> {
    let n = direction.norm();
    if !(n > 0.0) {
        return Err(Error::InvalidProfile("direction must be nonzero".into()));
    }
    let unit = direction / n;
    let values = radii
        .par_iter()
        .map(|&r| {
            compute_h_polarized(spec, lambda_index, component, &(unit * r))
                .map(|v| v.principal(lambda_index))
        })
        .collect::<Result<Vec<f64>>>()?;
    SampledProfile::new(radii.to_vec(), values, *spec, ProfileKind::HPolarized)
}
