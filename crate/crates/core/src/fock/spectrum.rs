use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::lattice::ModeLattice;
use crate::error::{Error, Result};

/// Largest truncated state space the enumeration will accept.
pub const STATE_SPACE_LIMIT: u128 = 10_000_000;

/// Number of oscillators attached to each lattice mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Channels {
    /// The two transverse polarizations.
    Two,
    /// All three Cartesian components.
    Three,
    /// The longitudinal mode only.
    ScalarOnly,
}

impl Channels {
    pub fn count(self) -> usize {
        match self {
            Channels::Two => 2,
            Channels::Three => 3,
            Channels::ScalarOnly => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Channels::Two => "2",
            Channels::Three => "3",
            Channels::ScalarOnly => "scalar_only",
        }
    }
}

impl fmt::Display for Channels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Channels {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "2" | "two" => Ok(Channels::Two),
            "3" | "three" => Ok(Channels::Three),
            "1" | "scalar" | "scalar_only" => Ok(Channels::ScalarOnly),
            other => Err(format!("unknown channel set '{other}'")),
        }
    }
}

/// Splits `m` as `s²·f` with `f` squarefree; returns `(s, f)`.
pub fn squarefree_split(m: u64) -> (u64, u64) {
    let mut s = 1;
    let mut f = m;
    let mut p = 2;
    while p * p <= f {
        while f.is_multiple_of(p * p) {
            f /= p * p;
            s *= p;
        }
        p += 1;
    }
    (s, f)
}

/// An energy `Σ c_f √f` in units of `ħc·2π/L`, with squarefree `f` and
/// positive integer `c_f`. Since square roots of distinct squarefree
/// integers are linearly independent over ℚ, equal keys mean equal energies.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactEnergy(BTreeMap<u64, u64>);

impl ExactEnergy {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Energy of `quanta` quanta in a mode with `|n|² = m`.
    pub fn of_mode(m: u64, quanta: u64) -> Self {
        let mut e = Self::zero();
        e.add_mode(m, quanta);
        e
    }

    pub fn add_mode(&mut self, m: u64, quanta: u64) {
        if quanta == 0 || m == 0 {
            return;
        }
        let (s, f) = squarefree_split(m);
        *self.0.entry(f).or_insert(0) += s * quanta;
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&f, &c) in &other.0 {
            *out.0.entry(f).or_insert(0) += c;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Numerical value in units of `2π/L`.
    pub fn value(&self) -> f64 {
        self.0
            .iter()
            .fold(0.0, |acc, (&f, &c)| acc + c as f64 * (f as f64).sqrt())
    }
}

impl fmt::Display for ExactEnergy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (&root, &c)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{c}*sqrt({root})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumLine {
    pub energy: ExactEnergy,
    /// Energy in units of ħc.
    pub energy_over_hc: f64,
    pub multiplicity: u64,
}

/// Eigenvalues of a diagonal field energy, with multiplicities, sorted by
/// energy.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMultiset {
    pub energy_unit: f64,
    pub lines: Vec<SpectrumLine>,
}

pub const SPECTRUM_CSV_HEADER: &str = "m_composition,energy_over_hc,multiplicity";

impl SpectrumMultiset {
    fn from_counts(energy_unit: f64, counts: BTreeMap<ExactEnergy, u64>) -> Self {
        let mut lines: Vec<SpectrumLine> = counts
            .into_iter()
            .map(|(energy, multiplicity)| SpectrumLine {
                energy_over_hc: energy_unit * energy.value(),
                energy,
                multiplicity,
            })
            .collect();
        lines.sort_by(|a, b| {
            a.energy_over_hc
                .total_cmp(&b.energy_over_hc)
                .then_with(|| a.energy.cmp(&b.energy))
        });
        Self { energy_unit, lines }
    }

    pub fn total_states(&self) -> u64 {
        self.lines.iter().map(|l| l.multiplicity).sum()
    }

    pub fn multiplicity(&self, energy: &ExactEnergy) -> u64 {
        self.lines
            .iter()
            .find(|l| &l.energy == energy)
            .map_or(0, |l| l.multiplicity)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(SPECTRUM_CSV_HEADER);
        out.push('\n');
        for l in &self.lines {
            out.push_str(&format!(
                "{},{:e},{}\n",
                l.energy, l.energy_over_hc, l.multiplicity
            ));
        }
        out
    }
}

/// Occupation-resolved counts: (energy, total quanta) → number of states.
type Sectors = BTreeMap<(ExactEnergy, u32), u64>;

fn oscillator_modes(lattice: &ModeLattice, channels: Channels) -> Vec<u64> {
    lattice
        .modes
        .iter()
        .flat_map(|m| std::iter::repeat_n(m.m, channels.count()))
        .collect()
}

/// Number of occupation tuples over `oscillators` oscillators with each
/// entry at most `n_max` and, if set, total at most `cap`.
pub fn state_space_size(oscillators: usize, n_max: u32, cap: Option<u32>) -> u128 {
    let Some(cap) = cap else {
        let base = n_max as u128 + 1;
        let mut total: u128 = 1;
        for _ in 0..oscillators {
            total = total.saturating_mul(base);
        }
        return total;
    };
    let cap = cap as usize;
    let mut ways = vec![0u128; cap + 1];
    ways[0] = 1;
    for _ in 0..oscillators {
        let mut next = vec![0u128; cap + 1];
        for (t, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for q in 0..=(n_max as usize).min(cap - t) {
                next[t + q] = next[t + q].saturating_add(w);
            }
        }
        ways = next;
    }
    ways.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

fn check_size(oscillators: usize, n_max: u32, cap: Option<u32>) -> Result<()> {
    let states = state_space_size(oscillators, n_max, cap);
    if states > STATE_SPACE_LIMIT {
        return Err(Error::StateSpaceTooLarge {
            states,
            limit: STATE_SPACE_LIMIT,
        });
    }
    Ok(())
}

fn sectors(modes: &[u64], n_max: u32, cap: Option<u32>) -> Sectors {
    let mut acc = Sectors::new();
    acc.insert((ExactEnergy::zero(), 0), 1);
    for &m in modes {
        let mut next = Sectors::new();
        for ((energy, quanta), count) in &acc {
            for q in 0..=n_max {
                let total = quanta + q;
                if cap.is_some_and(|c| total > c) {
                    break;
                }
                let mut e = energy.clone();
                e.add_mode(m, q as u64);
                *next.entry((e, total)).or_insert(0) += count;
            }
        }
        acc = next;
    }
    acc
}

fn collapse(energy_unit: f64, sectors: &Sectors) -> SpectrumMultiset {
    let mut counts = BTreeMap::new();
    for ((e, _), &c) in sectors {
        *counts.entry(e.clone()).or_insert(0) += c;
    }
    SpectrumMultiset::from_counts(energy_unit, counts)
}

/// Exact spectrum of `Σ |k| n` over the truncated occupation space.
pub fn field_spectrum(
    lattice: &ModeLattice,
    channels: Channels,
    n_max: u32,
    total_cap: Option<u32>,
) -> Result<SpectrumMultiset> {
    let modes = oscillator_modes(lattice, channels);
    check_size(modes.len(), n_max, total_cap)?;
    Ok(collapse(
        lattice.energy_unit(),
        &sectors(&modes, n_max, total_cap),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discrepancy {
    pub energy: String,
    pub energy_over_hc: f64,
    pub three_channel: u64,
    pub decomposed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub equal: bool,
    pub first_discrepancy: Option<Discrepancy>,
    pub states: u64,
    pub distinct_energies: usize,
}

/// Minkowski sum of two quanta-resolved spectra, keeping only combined
/// totals within `cap`.
fn minkowski(a: &Sectors, b: &Sectors, cap: Option<u32>) -> Sectors {
    let mut out = Sectors::new();
    for ((ea, qa), ca) in a {
        for ((eb, qb), cb) in b {
            let q = qa + qb;
            if cap.is_some_and(|c| q > c) {
                continue;
            }
            *out.entry((ea.plus(eb), q)).or_insert(0) += ca * cb;
        }
    }
    out
}

/// Compares the three-channel spectrum with the two-channel spectrum
/// combined with the scalar spectrum, under the same truncation.
pub fn spectrum_equivalence_check(
    lattice: &ModeLattice,
    n_max: u32,
    total_cap: Option<u32>,
) -> Result<EquivalenceReport> {
    let three_modes = oscillator_modes(lattice, Channels::Three);
    check_size(three_modes.len(), n_max, total_cap)?;
    let unit = lattice.energy_unit();
    let three = collapse(unit, &sectors(&three_modes, n_max, total_cap));
    let two = sectors(&oscillator_modes(lattice, Channels::Two), n_max, total_cap);
    let scalar = sectors(
        &oscillator_modes(lattice, Channels::ScalarOnly),
        n_max,
        total_cap,
    );
    let combined = collapse(unit, &minkowski(&two, &scalar, total_cap));
    Ok(compare(&three, &combined))
}

/// Exact multiset comparison; the first discrepancy is the lowest energy
/// whose multiplicities differ.
pub fn compare(left: &SpectrumMultiset, right: &SpectrumMultiset) -> EquivalenceReport {
    let mut merged: BTreeMap<&ExactEnergy, (f64, u64, u64)> = BTreeMap::new();
    for l in &left.lines {
        merged
            .entry(&l.energy)
            .or_insert((l.energy_over_hc, 0, 0))
            .1 += l.multiplicity;
    }
    for l in &right.lines {
        merged
            .entry(&l.energy)
            .or_insert((l.energy_over_hc, 0, 0))
            .2 += l.multiplicity;
    }
    let first_discrepancy = merged
        .iter()
        .filter(|(_, (_, a, b))| a != b)
        .min_by(|x, y| x.1 .0.total_cmp(&y.1 .0))
        .map(|(e, &(v, a, b))| Discrepancy {
            energy: e.to_string(),
            energy_over_hc: v,
            three_channel: a,
            decomposed: b,
        });
    EquivalenceReport {
        equal: first_discrepancy.is_none(),
        first_discrepancy,
        states: left.total_states(),
        distinct_energies: merged.len(),
    }
}
