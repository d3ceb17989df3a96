//! Truncated multi-mode bosonic Fock spaces.
//!
//! Basis order is fixed: the basis index is the mixed-radix encoding of the
//! occupation tuple with the first register most significant. Every matrix,
//! vector and serialized document in the crate uses that order.

mod density;
mod ensemble;
pub mod linalg;
mod sector;
mod serial;
mod space;
mod state;

pub use density::DensityOperator;
pub use ensemble::PureEnsemble;
pub use sector::{
    number_operator, sector_decomposition, sector_projector, sectors, PartyPartition, Sector,
    SectorComponent, SectorLabel,
};
pub use serial::{AnyState, StateDocument, StateKind};
pub use space::{FockSpace, OccupationTuple, Register};
pub(crate) use space::RegisterSplit;
pub use state::StateVector;

/// Cutoff used for a coherent register of amplitude `alpha` when none is
/// given: `ceil(alpha^2 + 10 alpha + 10)`.
pub fn default_coherent_cutoff(alpha: f64) -> usize {
    (alpha * alpha + 10.0 * alpha + 10.0).ceil() as usize
}
