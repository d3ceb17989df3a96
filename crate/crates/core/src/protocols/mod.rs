//! The data-hiding protocol and its decoders, the multiparty security check,
//! and dual-rail teleportation.

mod basis;
mod decode;
pub mod exact;
mod multiparty;
mod teleport;

pub use basis::{
    born_probabilities, computational_basis, pm_basis, BornState, MeasurementBasis, OutcomeDistribution, PmLabel,
    Sign,
};
pub use decode::{
    coherent_protocol_state, coherent_summary, decode_coherent, decode_entangled, entangled_protocol_state,
    entangled_summary, f_formula, joint_decode, sum_f, CoherentSummary, DecodeResult, EntangledSummary, JointDecode,
    COHERENT_RULE, PARITY_RULE,
};
pub use multiparty::{coalition_gap, coalitions, multiparty_security_check, BipartitionCheck, MultipartyReport};
pub use teleport::{dual_rail_gate, dual_rail_teleport, random_qubit, TeleportBranch, TeleportReport};
