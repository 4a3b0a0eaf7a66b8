//! Position-space coupling functions of the photon field.

pub mod curl;
pub mod cutoff;
pub mod decay;
pub mod oracle;
pub mod polarized;
pub mod profile;
pub mod radial;

pub use curl::transverse_cross_kernel;
pub use cutoff::{cutoff_eval, CutoffSpec, Taper};
pub use decay::{fit_decay_exponent, weighted_tail_diagnostic, DecayFit, TailDiagnostic};
pub use oracle::{oracle_direct_3d, Integrand3d};
pub use polarized::{compute_h_polarized, PolarizedValue};
pub use profile::{
    geometric_radii, linear_radii, sample_polarized_profile, sample_profile, ProfileKind,
    SampledProfile,
};
pub use radial::{
    compute_h, compute_htilde, compute_htilde_gradient, radial_transform,
    radial_transform_derivative, value_at_origin,
};
