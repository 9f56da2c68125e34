//! Electron tunneling through symmetric double barriers with complex
//! potentials.
//!
//! Two structure families are covered: the rectangular double barrier
//! ([`rect::RectDoubleBarrier`]) and its zero-width limit, the double delta
//! barrier ([`delta::DeltaDoubleBarrier`]). For both the crate computes the
//! transmission denominator `D(k)`, locates resonances, and finds the
//! transmission singularities where the resonant `D` vanishes. The
//! [`oracle`] module solves the same problems with transfer matrices and is
//! used to validate the closed forms.

pub mod delta;
pub mod error;
pub mod oracle;
pub mod rect;
pub mod resonance;
pub mod scattering;
pub mod singularity;
pub mod structure;
pub mod units;
pub mod uvw;
pub mod validation;

pub use num_complex::Complex64;

pub use delta::{DeltaDoubleBarrier, DeltaScattering};
pub use error::{Result, TunnelError};
pub use rect::RectDoubleBarrier;
pub use resonance::{find_resonances, resonance_residual, track_resonance, ResonanceResult};
pub use scattering::ScatteringResult;
pub use singularity::{
    cubic_residual, locus_v0r, singular_point_delta, singular_point_rect, BranchKind,
    LocusBranch, LocusValue, PotentialSign, SingularPoint,
};
pub use structure::DoubleBarrier;
pub use units::{ConstantSet, EffectiveMass};
pub use uvw::UvwSplit;
