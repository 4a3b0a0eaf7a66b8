use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::Vec3;

/// One finite-box mode `k = 2πn/L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub n: [i64; 3],
    /// `|n|²`, so `|k| = (2π/L)√m`.
    pub m: u64,
    pub k: Vec3,
    pub k_norm: f64,
}

impl Mode {
    pub fn on_axis(&self) -> bool {
        self.n[0] == 0 && self.n[1] == 0
    }
}

/// Momentum modes of a periodic box of side `L`, without the zero mode,
/// sorted by `|k|` and then lexicographically by `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeLattice {
    pub box_side: f64,
    pub max_index: i64,
    pub cutoff_lambda: Option<f64>,
    pub modes: Vec<Mode>,
}

fn make_mode(box_side: f64, n: [i64; 3]) -> Mode {
    let m = n.iter().map(|&x| (x * x) as u64).sum();
    let scale = 2.0 * PI / box_side;
    let k = Vec3::new(n[0] as f64, n[1] as f64, n[2] as f64) * scale;
    Mode {
        n,
        m,
        k,
        k_norm: scale * (m as f64).sqrt(),
    }
}

fn check_box(box_side: f64) -> Result<()> {
    if box_side > 0.0 && box_side.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveBox(box_side))
    }
}

impl ModeLattice {
    /// Lattice built from an explicit list of integer index vectors.
    pub fn from_indices(box_side: f64, indices: &[[i64; 3]]) -> Result<Self> {
        check_box(box_side)?;
        let mut modes: Vec<Mode> = indices.iter().map(|&n| make_mode(box_side, n)).collect();
        if modes.iter().any(|m| m.m == 0) {
            return Err(Error::InvalidLattice("the zero mode is excluded".into()));
        }
        modes.sort_by(|a, b| a.m.cmp(&b.m).then(a.n.cmp(&b.n)));
        if modes.windows(2).any(|w| w[0].n == w[1].n) {
            return Err(Error::InvalidLattice("duplicate mode".into()));
        }
        let max_index = indices.iter().flatten().map(|x| x.abs()).max().unwrap_or(0);
        Ok(Self {
            box_side,
            max_index,
            cutoff_lambda: None,
            modes,
        })
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Energy quantum `2π/L` (units of ħc).
    pub fn energy_unit(&self) -> f64 {
        2.0 * PI / self.box_side
    }

    /// Modes on the x₃-axis, where the standard polarization frame needs
    /// its fallback.
    pub fn on_axis_count(&self) -> usize {
        self.modes.iter().filter(|m| m.on_axis()).count()
    }
}

/// All `n ∈ ℤ³` with `0 < |n|∞ ≤ N`, optionally keeping only `|k| ≤ Λ`.
pub fn build_lattice(
    box_side: f64,
    max_index: i64,
    cutoff_lambda: Option<f64>,
) -> Result<ModeLattice> {
    check_box(box_side)?;
    if max_index < 1 {
        return Err(Error::InvalidLattice(format!(
            "max index must be at least 1, got {max_index}"
        )));
    }
    if let Some(l) = cutoff_lambda {
        if !(l > 0.0) {
            return Err(Error::InvalidLattice(format!(
                "cutoff must be positive, got {l}"
            )));
        }
    }
    let range = -max_index..=max_index;
    let mut modes = Vec::new();
    for a in range.clone() {
        for b in range.clone() {
            for c in range.clone() {
                if a == 0 && b == 0 && c == 0 {
                    continue;
                }
                let mode = make_mode(box_side, [a, b, c]);
                if cutoff_lambda.is_none_or(|l| mode.k_norm <= l) {
                    modes.push(mode);
                }
            }
        }
    }
    if modes.is_empty() {
        return Err(Error::EmptyLattice);
    }
    modes.sort_by(|a, b| a.m.cmp(&b.m).then(a.n.cmp(&b.n)));
    Ok(ModeLattice {
        box_side,
        max_index,
        cutoff_lambda,
        modes,
    })
}
