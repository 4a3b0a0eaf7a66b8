//! Truncated bosonic Fock spaces over finite-box modes.

mod dynamics;
mod lattice;
mod rep;
mod sparse;
mod spectrum;

pub use dynamics::{heisenberg_scalar_evolution, scalar_mode_evolution, EvolutionReport};
pub use lattice::{build_lattice, Mode, ModeLattice};
pub use rep::{
    ccr_frame_check, ccr_transform_check, number_conservation_check, Channel, FockRep, Oscillator,
};
pub use sparse::SparseMatrix;
pub use spectrum::{
    compare, field_spectrum, spectrum_equivalence_check, squarefree_split, state_space_size,
    Channels, Discrepancy, EquivalenceReport, ExactEnergy, SpectrumLine, SpectrumMultiset,
    SPECTRUM_CSV_HEADER, STATE_SPACE_LIMIT,
};
