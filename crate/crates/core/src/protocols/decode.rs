//! Decoding the hidden bit with shared resources.

use std::fmt::Write as _;

use super::basis::{born_probabilities, pm_basis, BornState, OutcomeDistribution, PmLabel, Sign};
use crate::fock::{FockSpace, PureEnsemble, StateVector};
use crate::states::{
    dealer_split, hiding_state, resource_state, rho2_ensemble, HidingBit, RESOURCE_A, RESOURCE_B,
    SYSTEM_1, SYSTEM_2,
};
use crate::{CVector, Error, Result, C64};

/// Parity rule applied to the two assigned values.
pub const PARITY_RULE: &str = "equal assignments -> bit 0, different assignments -> bit 1";

/// Parity rule restricted to outcomes with `n, m >= 1`; an outcome `|±,0>` on
/// either side is inconclusive.
pub const COHERENT_RULE: &str =
    "equal assignments -> bit 0, different assignments -> bit 1, any |+-,0> outcome inconclusive";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scoring {
    AllOutcomes,
    OccupiedOnly,
}

/// Outcome statistics of one decoding run.
#[derive(Debug, Clone)]
pub struct DecodeResult {
    pub bit: HidingBit,
    pub distribution: OutcomeDistribution<PmLabel>,
    /// Probability that the rule returns `bit`.
    pub success: f64,
    /// Probability of outcomes the rule declares inconclusive.
    pub inconclusive: f64,
    pub rule: &'static str,
}

impl DecodeResult {
    fn from_distribution(bit: HidingBit, distribution: OutcomeDistribution<PmLabel>, scoring: Scoring) -> Self {
        let counted = |a: &PmLabel, b: &PmLabel| scoring == Scoring::AllOutcomes || (a.n > 0 && b.n > 0);
        let success = distribution.mass(|a, b| counted(a, b) && (a.value() ^ b.value()) == bit.value());
        let inconclusive = distribution.mass(|a, b| !counted(a, b));
        let rule = match scoring {
            Scoring::AllOutcomes => PARITY_RULE,
            Scoring::OccupiedOnly => COHERENT_RULE,
        };
        DecodeResult {
            bit,
            distribution,
            success,
            inconclusive,
            rule,
        }
    }

    /// `P^z_{x,y,n,m}`: probability of Alice seeing `|x,n>` and Bob `|y,m>`.
    pub fn outcome(&self, x: Sign, n: usize, y: Sign, m: usize) -> f64 {
        self.distribution.get(&PmLabel::new(x, n), &PmLabel::new(y, m))
    }

    /// CSV with columns `bit,x,n,y,m,probability`.
    pub fn to_csv(&self, with_header: bool) -> String {
        let mut out = String::new();
        if with_header {
            out.push_str("bit,x,n,y,m,probability\n");
        }
        for (a, b, p) in self.distribution.iter() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:.12e}",
                self.bit.value(),
                a.sign.symbol(),
                a.n,
                b.sign.symbol(),
                b.n,
                p
            );
        }
        out
    }
}

/// Register order after regrouping: Alice's hiding register and resource,
/// then Bob's.
fn party_order(resource_a: &str, resource_b: &str) -> [String; 4] {
    [SYSTEM_1.to_string(), resource_a.to_string(), SYSTEM_2.to_string(), resource_b.to_string()]
}

fn relabel(space: &FockSpace) -> FockSpace {
    let split = dealer_split(space);
    space.relabeled(|r| split.party_of(&r.id).expect("every register assigned").to_string())
}

fn local_spaces(space: &FockSpace) -> Result<(FockSpace, FockSpace)> {
    let regs = space.registers();
    Ok((FockSpace::new(regs[..2].to_vec())?, FockSpace::new(regs[2..].to_vec())?))
}

fn measure<S: BornState>(state: &S, bit: HidingBit, scoring: Scoring) -> Result<DecodeResult> {
    let (alice, bob) = local_spaces(state.space())?;
    let dist = born_probabilities(state, &pm_basis(&alice)?, &pm_basis(&bob)?)?;
    Ok(DecodeResult::from_distribution(bit, dist, scoring))
}

/// Hiding state for `bit` ⊗ `|Psi>_AB` with `N = n_total`, regrouped as
/// `(system-1, resource-A | system-2, resource-B)` and with parties assigned.
pub fn entangled_protocol_state(bit: HidingBit, n_total: usize) -> Result<StateVector> {
    let joint = hiding_state(bit).tensor(&resource_state(n_total))?;
    let order = party_order(RESOURCE_A, RESOURCE_B);
    let regrouped = joint.permute(&order.iter().map(String::as_str).collect::<Vec<_>>())?;
    let space = relabel(regrouped.space());
    StateVector::new(space, regrouped.into_amplitudes())
}

/// Both parties measure in the `±` basis of their hiding register and
/// resource half, then apply the parity rule.
pub fn decode_entangled(bit: HidingBit, n_total: usize) -> Result<DecodeResult> {
    if n_total == 0 {
        return Err(Error::Domain("the entangled resource needs N >= 1".into()));
    }
    measure(&entangled_protocol_state(bit, n_total)?, bit, Scoring::AllOutcomes)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntangledSummary {
    pub n_total: usize,
    pub success_bit0: f64,
    pub success_bit1: f64,
    pub worst_case: f64,
    pub average: f64,
    /// `N / (N + 1)`.
    pub predicted: f64,
}

pub fn entangled_summary(n_total: usize) -> Result<EntangledSummary> {
    let s0 = decode_entangled(HidingBit::Zero, n_total)?.success;
    let s1 = decode_entangled(HidingBit::One, n_total)?.success;
    Ok(EntangledSummary {
        n_total,
        success_bit0: s0,
        success_bit1: s1,
        worst_case: s0.min(s1),
        average: 0.5 * (s0 + s1),
        predicted: n_total as f64 / (n_total + 1) as f64,
    })
}

/// Hiding state for `bit` ⊗ phase-averaged coherent pair, regrouped like
/// [`entangled_protocol_state`]. The coherent registers are `a` (Alice) and
/// `b` (Bob).
pub fn coherent_protocol_state(bit: HidingBit, alpha: f64, cutoff: Option<usize>) -> Result<PureEnsemble> {
    let joint = rho2_ensemble(alpha, cutoff)?.prepend(&hiding_state(bit))?;
    let order = party_order("a", "b");
    let regrouped = joint.permute(&order.iter().map(String::as_str).collect::<Vec<_>>())?;
    let space = relabel(regrouped.space());
    let deficit = regrouped.truncation_deficit();
    let terms = regrouped
        .terms()
        .iter()
        .map(|(w, s)| Ok((*w, StateVector::new(space.clone(), s.amplitudes().clone())?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PureEnsemble::new(terms)?.with_deficit(deficit))
}

/// Same measurement as [`decode_entangled`] with the phase-averaged coherent
/// pair as resource. The truncation cutoff plays the role of `N` in the
/// basis, so `|-,0> = |1,cutoff>`. Only outcomes with `n, m >= 1` are scored;
/// the rest is reported as inconclusive.
pub fn decode_coherent(bit: HidingBit, alpha: f64, cutoff: Option<usize>) -> Result<DecodeResult> {
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    measure(&coherent_protocol_state(bit, alpha, cutoff)?, bit, Scoring::OccupiedOnly)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentSummary {
    pub alpha: f64,
    pub cutoff: usize,
    pub success_bit0: f64,
    pub success_bit1: f64,
    pub average: f64,
    pub inconclusive: f64,
    /// `sum_{n,m=1}^{cutoff} f_{n,m}(alpha)`.
    pub sum_f: f64,
    pub truncation_deficit: f64,
}

pub fn coherent_summary(alpha: f64, cutoff: Option<usize>) -> Result<CoherentSummary> {
    let cutoff = cutoff.unwrap_or_else(|| crate::fock::default_coherent_cutoff(alpha));
    let r0 = decode_coherent(HidingBit::Zero, alpha, Some(cutoff))?;
    let r1 = decode_coherent(HidingBit::One, alpha, Some(cutoff))?;
    let ens = rho2_ensemble(alpha, Some(cutoff))?;
    Ok(CoherentSummary {
        alpha,
        cutoff,
        success_bit0: r0.success,
        success_bit1: r1.success,
        average: 0.5 * (r0.success + r1.success),
        inconclusive: r0.inconclusive,
        sum_f: sum_f(alpha, cutoff)?,
        truncation_deficit: ens.truncation_deficit(),
    })
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `f_{n,m}(alpha) = e^{-2 alpha^2}/4 * alpha^{2(n+m-1)}/(n! m!) * (sqrt n + sqrt m)^2`,
/// evaluated in log space. Defined for `n, m >= 1`.
pub fn f_formula(n: usize, m: usize, alpha: f64) -> Result<f64> {
    if n == 0 || m == 0 {
        return Err(Error::Domain(format!("f is defined for n, m >= 1 (got n={n}, m={m})")));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    let ln = -2.0 * alpha * alpha - 4f64.ln() + 2.0 * (n + m - 1) as f64 * alpha.ln() - ln_factorial(n)
        - ln_factorial(m)
        + 2.0 * ((n as f64).sqrt() + (m as f64).sqrt()).ln();
    Ok(ln.exp())
}

/// `sum_{n,m=1}^{cutoff} f_{n,m}(alpha)`.
pub fn sum_f(alpha: f64, cutoff: usize) -> Result<f64> {
    let mut total = 0.0;
    for n in 1..=cutoff {
        for m in 1..=cutoff {
            total += f_formula(n, m, alpha)?;
        }
    }
    Ok(total)
}

/// Probabilities of the two hidden-bit values under the joint `{|+>, |->}`
/// measurement of the hiding pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDecode {
    pub p_zero: f64,
    pub p_one: f64,
}

impl JointDecode {
    /// The bit read with certainty, if any.
    pub fn certain_bit(&self, tol: f64) -> Option<HidingBit> {
        if (self.p_zero - 1.0).abs() <= tol {
            Some(HidingBit::Zero)
        } else if (self.p_one - 1.0).abs() <= tol {
            Some(HidingBit::One)
        } else {
            None
        }
    }
}

/// Joint measurement of `system-1`, `system-2` in `{|+>, |->}`. Fails when
/// the hiding pair has weight outside the one-particle sector.
pub fn joint_decode(state: &crate::fock::DensityOperator) -> Result<JointDecode> {
    let pair = state.partial_trace(&[SYSTEM_1, SYSTEM_2])?;
    let space = pair.space();
    let m = pair.matrix();
    let i01 = space.index_of(&[0, 1].into())?;
    let i10 = space.index_of(&[1, 0].into())?;
    let in_sector = m[(i01, i01)].re + m[(i10, i10)].re;
    if (in_sector - 1.0).abs() > crate::Tolerances::DEFAULT.probability {
        return Err(Error::InvalidState(format!(
            "hiding registers carry weight {:.3e} outside the one-particle sector",
            1.0 - in_sector
        )));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let project = |sign: f64| {
        let mut v = CVector::zeros(4);
        v[i01] = C64::new(h, 0.0);
        v[i10] = C64::new(sign * h, 0.0);
        (v.adjoint() * m * &v)[(0, 0)].re
    };
    Ok(JointDecode {
        p_zero: project(1.0),
        p_one: project(-1.0),
    })
}
