//! Teleportation of a dual-rail qubit.
//!
//! Logical `|k>` of a pair of modes `(x.0, x.1)` is `|k, 1-k>`, so each
//! logical qubit carries exactly one particle and every gate below acts
//! inside a fixed local-number block.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::fock::linalg::{commutator_norm, embed_operator};
use crate::fock::{number_operator, FockSpace, PartyPartition, Register, StateVector};
use crate::states::{ALICE, BOB};
use crate::{CMatrix, CVector, Error, Result, C64};

const MODES: [(&str, &str); 6] = [
    ("q0.0", ALICE),
    ("q0.1", ALICE),
    ("q1.0", ALICE),
    ("q1.1", ALICE),
    ("q2.0", BOB),
    ("q2.1", BOB),
];

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Mode-level operator on `pairs` dual-rail qubits that applies `logical`
/// on the one-particle-per-pair subspace and the identity elsewhere.
pub fn dual_rail_gate(logical: &CMatrix, pairs: usize) -> Result<CMatrix> {
    let ld = 1usize << pairs;
    if logical.shape() != (ld, ld) {
        return Err(Error::DimensionMismatch(format!("logical gate {:?} on {pairs} qubits", logical.shape())));
    }
    let modes = 2 * pairs;
    let d = 1usize << modes;
    let occ = |i: usize, mode: usize| (i >> (modes - 1 - mode)) & 1;
    let logical_index = |i: usize| -> Option<usize> {
        let mut l = 0;
        for p in 0..pairs {
            if occ(i, 2 * p) + occ(i, 2 * p + 1) != 1 {
                return None;
            }
            l = (l << 1) | occ(i, 2 * p);
        }
        Some(l)
    };
    Ok(CMatrix::from_fn(d, d, |i, j| match (logical_index(i), logical_index(j)) {
        (Some(a), Some(b)) => logical[(a, b)],
        (None, None) if i == j => c(1.0),
        _ => c(0.0),
    }))
}

fn hadamard() -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[c(h), c(h), c(h), c(-h)])
}

fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])
}

fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)])
}

fn cnot() -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = c(1.0);
    m[(1, 1)] = c(1.0);
    m[(2, 3)] = c(1.0);
    m[(3, 2)] = c(1.0);
    m
}

/// Result of one branch of the protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeleportBranch {
    pub m0: u8,
    pub m1: u8,
    pub probability: f64,
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeleportReport {
    /// Worst fidelity over branches with nonzero probability.
    pub fidelity: f64,
    pub average_fidelity: f64,
    pub branches: Vec<TeleportBranch>,
    /// Largest `[op, n_party]` over every gate and measurement projector and
    /// both parties.
    pub max_number_commutator: f64,
}

struct Circuit {
    space: FockSpace,
    n_alice: CMatrix,
    n_bob: CMatrix,
    worst_commutator: f64,
}

impl Circuit {
    fn new() -> Result<Self> {
        let space = FockSpace::new(MODES.iter().map(|(id, p)| Register::new(*id, *p, 1)).collect())?;
        let part = PartyPartition::from_space(&space);
        Ok(Circuit {
            n_alice: number_operator(&space, &part, ALICE)?,
            n_bob: number_operator(&space, &part, BOB)?,
            space,
            worst_commutator: 0.0,
        })
    }

    /// Records the number-rule audit for `op` and returns it.
    fn audit(&mut self, op: CMatrix) -> CMatrix {
        let w = commutator_norm(&op, &self.n_alice).max(commutator_norm(&op, &self.n_bob));
        self.worst_commutator = self.worst_commutator.max(w);
        op
    }

    fn gate(&mut self, logical: &CMatrix, modes: &[&str]) -> Result<CMatrix> {
        let op = embed_operator(&self.space, modes, &dual_rail_gate(logical, modes.len() / 2)?)?;
        Ok(self.audit(op))
    }

    /// Number-resolving detection of both of Alice's qubits.
    fn detection(&mut self, m0: u8, m1: u8) -> CMatrix {
        let d = self.space.dimension();
        let mut p = CMatrix::zeros(d, d);
        for i in 0..d {
            let o = self.space.occupation(i).0;
            let hit = o[0] == m0 as usize && o[1] == 1 - m0 as usize && o[2] == m1 as usize && o[3] == 1 - m1 as usize;
            if hit {
                p[(i, i)] = c(1.0);
            }
        }
        self.audit(p)
    }
}

fn logical_qubit(space: &FockSpace, u: C64, v: C64) -> Result<StateVector> {
    let mut amps = CVector::zeros(space.dimension());
    amps[space.index_of(&[0, 1].into())?] = u;
    amps[space.index_of(&[1, 0].into())?] = v;
    StateVector::new(space.clone(), amps)
}

/// Teleports `u|0> + v|1>` from Alice's dual-rail qubit `q0` to Bob's `q2`
/// using a shared dual-rail Bell pair on `q1`, `q2`.
pub fn dual_rail_teleport(u: C64, v: C64) -> Result<TeleportReport> {
    let norm = u.norm_sqr() + v.norm_sqr();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("|u|^2 + |v|^2 = {norm}, expected 1")));
    }
    let mut circuit = Circuit::new()?;
    let space = circuit.space.clone();
    let pair = |a: &str, b: &str| FockSpace::new(vec![Register::new(a, ALICE, 1), Register::new(b, ALICE, 1)]);
    let input = logical_qubit(&pair("q0.0", "q0.1")?, u, v)?;
    let bell_space = FockSpace::new(MODES[2..].iter().map(|(id, p)| Register::new(*id, *p, 1)).collect())?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut bell = CVector::zeros(bell_space.dimension());
    bell[bell_space.index_of(&[0, 1, 0, 1].into())?] = c(h);
    bell[bell_space.index_of(&[1, 0, 1, 0].into())?] = c(h);
    let psi = input.tensor(&StateVector::new(bell_space, bell)?)?;
    let psi = StateVector::new(space.clone(), psi.into_amplitudes())?;

    let entangle = circuit.gate(&cnot(), &["q0.0", "q0.1", "q1.0", "q1.1"])?;
    let rotate = circuit.gate(&hadamard(), &["q0.0", "q0.1"])?;
    let fix_x = circuit.gate(&pauli_x(), &["q2.0", "q2.1"])?;
    let fix_z = circuit.gate(&pauli_z(), &["q2.0", "q2.1"])?;
    let before = psi.apply(&(rotate * entangle))?;

    let target = logical_qubit(&pair("q2.0", "q2.1")?, u, v)?;
    let mut branches = Vec::new();
    for m0 in 0..2u8 {
        for m1 in 0..2u8 {
            let proj = circuit.detection(m0, m1);
            let mut out = before.apply(&proj)?;
            let probability = out.norm().powi(2);
            if probability == 0.0 {
                branches.push(TeleportBranch { m0, m1, probability, fidelity: f64::NAN });
                continue;
            }
            if m1 == 1 {
                out = out.apply(&fix_x)?;
            }
            if m0 == 1 {
                out = out.apply(&fix_z)?;
            }
            let bob = out.normalized()?.to_density().partial_trace(&["q2.0", "q2.1"])?;
            let t = target.amplitudes();
            let fidelity = (t.adjoint() * bob.matrix() * t)[(0, 0)].re;
            branches.push(TeleportBranch { m0, m1, probability, fidelity });
        }
    }
    let live = branches.iter().filter(|b| b.probability > 0.0);
    let fidelity = live.clone().map(|b| b.fidelity).fold(f64::INFINITY, f64::min);
    let average_fidelity = live.map(|b| b.probability * b.fidelity).sum();
    Ok(TeleportReport {
        fidelity,
        average_fidelity,
        branches,
        max_number_commutator: circuit.worst_commutator,
    })
}

/// Haar-like random qubit from a seeded Gaussian draw.
pub fn random_qubit(seed: u64) -> (C64, C64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || -> f64 { StandardNormal.sample(&mut rng) };
    let u = C64::new(draw(), draw());
    let v = C64::new(draw(), draw());
    let n = (u.norm_sqr() + v.norm_sqr()).sqrt();
    (u / n, v / n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_state_teleports() {
        let r = dual_rail_teleport(c(1.0), c(0.0)).unwrap();
        assert!((r.fidelity - 1.0).abs() < 1e-12);
        let total: f64 = r.branches.iter().map(|b| b.probability).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(r.max_number_commutator < 1e-12);
    }

    #[test]
    fn phase_state_teleports() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = dual_rail_teleport(c(h), C64::new(0.0, h)).unwrap();
        assert!((r.fidelity - 1.0).abs() < 1e-12);
        assert!(r.branches.iter().all(|b| (b.probability - 0.25).abs() < 1e-12));
    }

    #[test]
    fn gate_is_identity_off_logical_subspace() {
        let g = dual_rail_gate(&hadamard(), 1).unwrap();
        assert_eq!(g[(0, 0)], c(1.0));
        assert_eq!(g[(3, 3)], c(1.0));
        assert!((g[(1, 2)].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(dual_rail_gate(&hadamard(), 2).is_err());
    }

    #[test]
    fn rejects_unnormalized_input() {
        assert!(dual_rail_teleport(c(1.0), c(1.0)).is_err());
    }
}
