//! Dense simulation of bosonic multi-mode systems under a particle-number
//! superselection rule.
//!
//! The crate is organised bottom-up:
//!
//! * [`fock`]: truncated Fock spaces, pure and mixed states, tensor structure,
//!   partial traces, number operators and local-number sector projectors.
//! * [`channels`]: the sector-dephasing channel, SSR-compatibility tests and
//!   the local-statistics tester.
//! * [`states`]: the named states (the separable mixtures rho1 and rho2, hiding states,
//!   entangled resources, multiparty hiding states).
//! * [`protocols`]: measurement bases, Born-rule decoding of hidden bits,
//!   multiparty security checks and dual-rail teleportation.
//! * [`analysis`]: trace distance, Helstrom bound and partial-transpose tests.

pub mod analysis;
pub mod channels;
mod error;
pub mod fock;
pub mod protocols;
pub mod states;
mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerances;

/// Complex scalar used throughout.
pub type C64 = nalgebra::Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;

/// Largest Hilbert-space dimension for which a dense density matrix is built.
pub const DENSE_DIMENSION_LIMIT: usize = 4096;
