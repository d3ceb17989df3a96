//! Constructors for the named states.
//!
//! Register conventions: the two-party states use registers `a` (party `A`)
//! and `b` (party `B`). Hiding states are prepared jointly by a dealer on
//! registers `system-1` and `system-2` (party label `dealer`); use
//! [`dealer_split`] to hand system 1 to `A` and system 2 to `B`.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::channels::DephasingChannel;
use crate::fock::{
    default_coherent_cutoff, DensityOperator, FockSpace, PartyPartition, PureEnsemble, Register, StateVector,
};
use crate::{CVector, Error, Result, Tolerances, C64};

pub const ALICE: &str = "A";
pub const BOB: &str = "B";
pub const DEALER: &str = "dealer";
pub const SYSTEM_1: &str = "system-1";
pub const SYSTEM_2: &str = "system-2";
pub const RESOURCE_A: &str = "resource-A";
pub const RESOURCE_B: &str = "resource-B";

/// The bit a dealer hides: `Zero` selects `|+>`, `One` selects `|->`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HidingBit {
    Zero,
    One,
}

impl HidingBit {
    pub const BOTH: [HidingBit; 2] = [HidingBit::Zero, HidingBit::One];

    pub fn value(self) -> u8 {
        match self {
            HidingBit::Zero => 0,
            HidingBit::One => 1,
        }
    }

    /// Relative sign between the two branches.
    pub fn sign(self) -> f64 {
        match self {
            HidingBit::Zero => 1.0,
            HidingBit::One => -1.0,
        }
    }
}

impl TryFrom<u8> for HidingBit {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            0 => Ok(HidingBit::Zero),
            1 => Ok(HidingBit::One),
            _ => Err(Error::Domain(format!("a hidden bit is 0 or 1, not {v}"))),
        }
    }
}

fn bipartite_space(cutoff_a: usize, cutoff_b: usize) -> FockSpace {
    FockSpace::new(vec![Register::new("a", ALICE, cutoff_a), Register::new("b", BOB, cutoff_b)])
        .expect("distinct ids")
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `(1/4)(|00><00| + |11><11|) + (1/2)|Psi+><Psi+|`, `|Psi+> = (|01> + |10>)/sqrt 2`.
pub fn rho1() -> DensityOperator {
    let space = bipartite_space(1, 1);
    let k = |occ: [usize; 2]| StateVector::ket(&space, &occ.into()).expect("within cutoff").to_density();
    let psi_plus = StateVector::new(
        space.clone(),
        CVector::from_vec(vec![real(0.0), real(FRAC_1_SQRT_2), real(FRAC_1_SQRT_2), real(0.0)]),
    )
    .expect("normalized");
    DensityOperator::mixture(&[(0.25, k([0, 0])), (0.25, k([1, 1])), (0.5, psi_plus.to_density())])
        .expect("weights sum to one")
}

/// `sum_k p_k |a_k><a_k| ⊗ |b_k><b_k|`.
#[derive(Debug, Clone)]
pub struct SeparableDecomposition {
    pub terms: Vec<(f64, StateVector, StateVector)>,
}

impl SeparableDecomposition {
    pub fn new(terms: Vec<(f64, StateVector, StateVector)>) -> Result<Self> {
        let tol = Tolerances::DEFAULT;
        let mut total = 0.0;
        for (p, a, b) in &terms {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::InvalidState(format!("weight {p} outside [0, 1]")));
            }
            for f in [a, b] {
                if (f.norm() - 1.0).abs() > tol.trace {
                    return Err(Error::InvalidState("unnormalized factor".into()));
                }
            }
            total += p;
        }
        if (total - 1.0).abs() > tol.trace {
            return Err(Error::InvalidState(format!("weights sum to {total}")));
        }
        Ok(SeparableDecomposition { terms })
    }

    pub fn reconstruct(&self) -> Result<DensityOperator> {
        let parts = self
            .terms
            .iter()
            .map(|(p, a, b)| Ok((*p, a.to_density().tensor(&b.to_density())?)))
            .collect::<Result<Vec<_>>>()?;
        DensityOperator::mixture(&parts)
    }
}

/// Four equal-weight product terms with `a_k = b_k` drawn from
/// `(|0> ± |1>)/sqrt 2` and `(|0> ± i|1>)/sqrt 2`.
pub fn rho1_decomposition() -> SeparableDecomposition {
    let sa = FockSpace::new(vec![Register::new("a", ALICE, 1)]).expect("one register");
    let sb = FockSpace::new(vec![Register::new("b", BOB, 1)]).expect("one register");
    let h = FRAC_1_SQRT_2;
    let phases = [real(h), real(-h), C64::new(0.0, h), C64::new(0.0, -h)];
    let terms = phases
        .iter()
        .map(|&c1| {
            let amps = CVector::from_vec(vec![real(h), c1]);
            (
                0.25,
                StateVector::new(sa.clone(), amps.clone()).expect("normalized"),
                StateVector::new(sb.clone(), amps).expect("normalized"),
            )
        })
        .collect();
    SeparableDecomposition::new(terms).expect("valid by construction")
}

/// Phase-averaged product of coherent states `|alpha>_a ⊗ |alpha>_b` as an
/// ensemble with one pure component per total particle number. The uniform
/// phase average removes exactly the coherences between different totals, so
/// this is the total-number dephasing of the product state. `cutoff` defaults
/// to [`default_coherent_cutoff`].
pub fn rho2_ensemble(alpha: f64, cutoff: Option<usize>) -> Result<PureEnsemble> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("alpha must be a finite non-negative number, got {alpha}")));
    }
    let cutoff = cutoff.unwrap_or_else(|| default_coherent_cutoff(alpha));
    let sa = FockSpace::new(vec![Register::new("a", ALICE, cutoff)])?;
    let sb = FockSpace::new(vec![Register::new("b", BOB, cutoff)])?;
    let product = StateVector::coherent(&sa, "a", alpha, 0.0)?.tensor(&StateVector::coherent(&sb, "b", alpha, 0.0)?)?;
    let world = PartyPartition::single(product.space(), "world");
    DephasingChannel::new(product.space(), &world)?.project_pure(&product)
}

/// Dense form of [`rho2_ensemble`]; refused above the dense dimension limit.
pub fn rho2(alpha: f64, cutoff: Option<usize>) -> Result<DensityOperator> {
    rho2_ensemble(alpha, cutoff)?.to_density()
}

/// `|±> = (|0>_1|1>_2 ± |1>_1|0>_2)/sqrt 2` on registers `system-1`, `system-2`.
pub fn hiding_state(bit: HidingBit) -> StateVector {
    hiding_state_on(bit, SYSTEM_1, SYSTEM_2)
}

fn hiding_state_on(bit: HidingBit, id1: &str, id2: &str) -> StateVector {
    let space = FockSpace::new(vec![Register::new(id1, DEALER, 1), Register::new(id2, DEALER, 1)])
        .expect("distinct ids");
    let amps = CVector::from_vec(vec![
        real(0.0),
        real(FRAC_1_SQRT_2),
        real(bit.sign() * FRAC_1_SQRT_2),
        real(0.0),
    ]);
    StateVector::new(space, amps).expect("normalized")
}

/// `|±>^{⊗ copies}`; copy `k` lives on `system-1.k` and `system-2.k`.
pub fn hiding_state_copies(bit: HidingBit, copies: usize) -> Result<StateVector> {
    if copies == 0 {
        return Err(Error::Domain("at least one copy".into()));
    }
    let mut state = hiding_state_on(bit, &format!("{SYSTEM_1}.1"), &format!("{SYSTEM_2}.1"));
    for k in 2..=copies {
        state = state.tensor(&hiding_state_on(bit, &format!("{SYSTEM_1}.{k}"), &format!("{SYSTEM_2}.{k}")))?;
    }
    Ok(state)
}

/// Distribution step: registers named `system-1*` go to `A`, `system-2*` to
/// `B`, everything else keeps its own party label.
pub fn dealer_split(space: &FockSpace) -> PartyPartition {
    PartyPartition::new(space.registers().iter().map(|r| {
        let party = if r.id.starts_with(SYSTEM_1) {
            ALICE.to_string()
        } else if r.id.starts_with(SYSTEM_2) {
            BOB.to_string()
        } else {
            r.party.clone()
        };
        (r.id.clone(), party)
    }))
    .expect("space ids are unique")
}

/// `sum_{n=0}^{N} |n>_A |N-n>_B / sqrt(N+1)` on `resource-A`, `resource-B`.
/// `n_total = 0` gives the useless product `|0,0>`.
pub fn resource_state(n_total: usize) -> StateVector {
    let space = FockSpace::new(vec![
        Register::new(RESOURCE_A, ALICE, n_total),
        Register::new(RESOURCE_B, BOB, n_total),
    ])
    .expect("distinct ids");
    let mut amps = CVector::zeros(space.dimension());
    let c = real(1.0 / ((n_total + 1) as f64).sqrt());
    for n in 0..=n_total {
        amps[space.index_of(&[n, n_total - n].into()).expect("within cutoff")] = c;
    }
    StateVector::new(space, amps).expect("normalized")
}

/// Occupations of the two branches of the `parties`-party hiding state.
///
/// Branch one holds `k - 1` particles on register `k`; branch two holds `k`
/// on register `k < P` and none on the last. Both carry `P(P-1)/2` particles.
pub fn multiparty_branches(parties: usize) -> (Vec<usize>, Vec<usize>) {
    let first = (0..parties).collect();
    let second = (1..parties).chain(std::iter::once(0)).collect();
    (first, second)
}

/// `(|branch 1> ± |branch 2>)/sqrt 2` on registers `party-1 .. party-P`,
/// register `k` owned by party `Pk`, cutoffs sized to the largest occupation.
pub fn multiparty_hiding_state(bit: HidingBit, parties: usize) -> Result<StateVector> {
    if parties < 2 {
        return Err(Error::Domain(format!("need at least two parties, got {parties}")));
    }
    let (b1, b2) = multiparty_branches(parties);
    let regs = (0..parties)
        .map(|k| Register::new(format!("party-{}", k + 1), format!("P{}", k + 1), b1[k].max(b2[k])))
        .collect();
    let space = FockSpace::new(regs)?;
    let mut amps = CVector::zeros(space.dimension());
    amps[space.index_of(&b1.into())?] = real(FRAC_1_SQRT_2);
    amps[space.index_of(&b2.into())?] = real(bit.sign() * FRAC_1_SQRT_2);
    StateVector::new(space, amps)
}
