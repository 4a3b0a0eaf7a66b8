use std::collections::HashMap;

use super::lattice::ModeLattice;
use super::sparse::SparseMatrix;
use super::spectrum::{state_space_size, Channels, STATE_SPACE_LIMIT};
use crate::error::{Error, Result};
use crate::polarization::make_polarization_basis;
use crate::{Mat3, Vec3};

/// Label of one oscillator attached to a mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    /// Cartesian component `j ∈ {1, 2, 3}`.
    Cartesian(u8),
    /// Transverse polarization `λ ∈ {1, 2}`.
    Transverse(u8),
    /// Longitudinal (scalar) mode.
    Scalar,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator {
    pub mode_id: usize,
    pub channel: Channel,
    pub omega: f64,
}

/// Truncated bosonic Fock space over a list of oscillators, with the
/// lowering operator of each oscillator as a sparse matrix in the
/// occupation basis.
#[derive(Debug, Clone)]
pub struct FockRep {
    pub n_max: u32,
    pub total_cap: Option<u32>,
    pub oscillators: Vec<Oscillator>,
    basis: Vec<Vec<u32>>,
    lowering: Vec<SparseMatrix>,
}

fn enumerate_basis(count: usize, n_max: u32, cap: Option<u32>) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut occ = vec![0u32; count];
    fn rec(i: usize, left: u32, n_max: u32, occ: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == occ.len() {
            out.push(occ.clone());
            return;
        }
        for q in 0..=n_max.min(left) {
            occ[i] = q;
            rec(i + 1, left - q, n_max, occ, out);
        }
        occ[i] = 0;
    }
    rec(0, cap.unwrap_or(u32::MAX), n_max, &mut occ, &mut out);
    out
}

impl FockRep {
    pub fn new(oscillators: Vec<Oscillator>, n_max: u32, total_cap: Option<u32>) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidLattice("n_max must be at least 1".into()));
        }
        let states = state_space_size(oscillators.len(), n_max, total_cap);
        if states > STATE_SPACE_LIMIT {
            return Err(Error::StateSpaceTooLarge {
                states,
                limit: STATE_SPACE_LIMIT,
            });
        }
        let basis = enumerate_basis(oscillators.len(), n_max, total_cap);
        let index: HashMap<&[u32], usize> = basis
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_slice(), i))
            .collect();
        let lowering = (0..oscillators.len())
            .map(|o| {
                let mut a = SparseMatrix::zeros(basis.len());
                for (col, state) in basis.iter().enumerate() {
                    let n = state[o];
                    if n > 0 {
                        let mut lower = state.clone();
                        lower[o] -= 1;
                        a.set(index[lower.as_slice()], col, (n as f64).sqrt());
                    }
                }
                a
            })
            .collect();
        Ok(Self {
            n_max,
            total_cap,
            oscillators,
            basis,
            lowering,
        })
    }

    /// One oscillator per channel for every lattice mode, with `ω = |k|`.
    pub fn for_lattice(
        lattice: &ModeLattice,
        channels: Channels,
        n_max: u32,
        total_cap: Option<u32>,
    ) -> Result<Self> {
        let labels: &[Channel] = match channels {
            Channels::Three => &[
                Channel::Cartesian(1),
                Channel::Cartesian(2),
                Channel::Cartesian(3),
            ],
            Channels::Two => &[Channel::Transverse(1), Channel::Transverse(2)],
            Channels::ScalarOnly => &[Channel::Scalar],
        };
        let oscillators = lattice
            .modes
            .iter()
            .enumerate()
            .flat_map(|(mode_id, m)| {
                labels.iter().map(move |&channel| Oscillator {
                    mode_id,
                    channel,
                    omega: m.k_norm,
                })
            })
            .collect();
        Self::new(oscillators, n_max, total_cap)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn lowering(&self, oscillator: usize) -> &SparseMatrix {
        &self.lowering[oscillator]
    }

    pub fn raising(&self, oscillator: usize) -> SparseMatrix {
        self.lowering[oscillator].transpose()
    }

    pub fn number(&self, oscillator: usize) -> SparseMatrix {
        let mut n = SparseMatrix::zeros(self.dim());
        for (i, s) in self.basis.iter().enumerate() {
            n.set(i, i, s[oscillator] as f64);
        }
        n
    }

    /// `Σ ω_i a_i† a_i`.
    pub fn field_hamiltonian(&self) -> SparseMatrix {
        let mut h = SparseMatrix::zeros(self.dim());
        for (i, s) in self.basis.iter().enumerate() {
            let e: f64 = s
                .iter()
                .zip(&self.oscillators)
                .map(|(&n, o)| n as f64 * o.omega)
                .sum();
            h.set(i, i, e);
        }
        h
    }

    /// States on which every ladder operator acts as in the untruncated
    /// space: each occupation below `n_max` and the total below the cap.
    pub fn protected_mask(&self) -> Vec<bool> {
        self.basis
            .iter()
            .map(|s| {
                s.iter().all(|&n| n < self.n_max)
                    && self.total_cap.is_none_or(|c| s.iter().sum::<u32>() < c)
            })
            .collect()
    }

    /// `Σ_j c_j a_j`.
    pub fn combination(&self, coeffs: &[f64]) -> SparseMatrix {
        coeffs
            .iter()
            .enumerate()
            .fold(SparseMatrix::zeros(self.dim()), |acc, (j, &c)| {
                acc.add_scaled(&self.lowering[j], c)
            })
    }
}

fn three_oscillators(n_max: u32) -> Result<FockRep> {
    let oscillators = (1..=3)
        .map(|j| Oscillator {
            mode_id: 0,
            channel: Channel::Cartesian(j),
            omega: 1.0,
        })
        .collect();
    FockRep::new(oscillators, n_max, None)
}

/// Largest commutator defect of `a_ν = Σ_j B_{νj} a_j` for the rows of
/// `frame`, measured on the protected states. Zero for orthogonal frames.
pub fn ccr_frame_check(frame: &Mat3, n_max: u32) -> Result<f64> {
    let rep = three_oscillators(n_max)?;
    let mask = rep.protected_mask();
    let ops: Vec<SparseMatrix> = (0..3)
        .map(|nu| rep.combination(&[frame[(nu, 0)], frame[(nu, 1)], frame[(nu, 2)]]))
        .collect();
    let id = SparseMatrix::identity(rep.dim());
    let mut worst: f64 = 0.0;
    for (nu, a_nu) in ops.iter().enumerate() {
        for (mu, a_mu) in ops.iter().enumerate() {
            let delta = if nu == mu { 1.0 } else { 0.0 };
            let mixed = a_nu.commutator(&a_mu.transpose()).add_scaled(&id, -delta);
            let plain = a_nu.commutator(a_mu);
            worst = worst
                .max(mixed.column_restricted_norm(&mask))
                .max(plain.column_restricted_norm(&mask));
        }
    }
    Ok(worst)
}

/// Commutator check for the frame `(ε₁, ε₂, k̂)` of the polarization basis
/// at `k`, using `(1, 0, 0)` as fallback on the x₃-axis.
pub fn ccr_transform_check(k: &Vec3, n_max: u32) -> Result<f64> {
    let basis = make_polarization_basis(k, &Vec3::x())?;
    ccr_frame_check(&basis.frame_matrix(), n_max)
}

/// True when `hamiltonian` commutes exactly with every per-oscillator
/// number operator.
pub fn number_conservation_check(rep: &FockRep, hamiltonian: &SparseMatrix) -> bool {
    (0..rep.oscillators.len()).all(|i| hamiltonian.commutator(&rep.number(i)).is_zero())
}
