//! The sector-dephasing channel and the tests built on it.
//!
//! `N(rho) = sum_s P_s rho P_s`, with `P_s` the projector onto joint
//! local-number sector `s` of a [`PartyPartition`]. A state prepared with
//! number-conserving local operations is a fixed point of `N`, and product
//! observables that commute with each party's number operator cannot tell
//! `rho` from `N(rho)`.
//!
//! Classical-communication rounds are not simulated. The product-observable
//! sampler covers one-shot local measurements; adaptive strategies are covered
//! by the operator identity `N(X_A ⊗ X_B) = X_A ⊗ X_B`, checked by
//! [`DephasingChannel::fixed_point_gap`], which holds for every observable a
//! number-conserving local party can measure at any round.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::fock::linalg::{commutator_norm, hermiticity_gap, max_abs, max_abs_diff};
use crate::fock::{
    number_operator, sectors, DensityOperator, FockSpace, PartyPartition, PureEnsemble, RegisterSplit, Sector,
    StateVector,
};
use crate::{CMatrix, Error, Result, Tolerances, C64};

/// `N` for a fixed space and partition. Its Kraus operators are the sector
/// projectors.
#[derive(Debug, Clone)]
pub struct DephasingChannel {
    space: FockSpace,
    partition: PartyPartition,
    sectors: Vec<Sector>,
}

impl DephasingChannel {
    pub fn new(space: &FockSpace, partition: &PartyPartition) -> Result<Self> {
        Ok(DephasingChannel {
            space: space.clone(),
            partition: partition.clone(),
            sectors: sectors(space, partition)?,
        })
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn partition(&self) -> &PartyPartition {
        &self.partition
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    /// Dense Kraus operators, one projector per nonempty sector.
    pub fn kraus_operators(&self) -> Vec<CMatrix> {
        let d = self.space.dimension();
        self.sectors
            .iter()
            .map(|s| {
                let mut p = CMatrix::zeros(d, d);
                for &i in &s.indices {
                    p[(i, i)] = C64::new(1.0, 0.0);
                }
                p
            })
            .collect()
    }

    /// `max |sum_s K_s^dagger K_s - 1|`.
    pub fn completeness_gap(&self) -> f64 {
        let d = self.space.dimension();
        let sum = self
            .kraus_operators()
            .iter()
            .fold(CMatrix::zeros(d, d), |acc, k| acc + k.adjoint() * k);
        max_abs(&(sum - CMatrix::identity(d, d)))
    }

    /// `sum_s P_s op P_s` for any square operator on the space. The
    /// projectors are diagonal, so each sandwich is a gather over the
    /// sector's index set.
    pub fn apply_operator(&self, op: &CMatrix) -> Result<CMatrix> {
        let d = self.space.dimension();
        if op.shape() != (d, d) {
            return Err(Error::DimensionMismatch(format!("operator {:?} on dimension {d}", op.shape())));
        }
        let mut out = CMatrix::zeros(d, d);
        for s in &self.sectors {
            for &i in &s.indices {
                for &j in &s.indices {
                    out[(i, j)] = op[(i, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.space() != &self.space {
            return Err(Error::DimensionMismatch("state lives on a different space".into()));
        }
        let out = self.apply_operator(rho.matrix())?;
        Ok(DensityOperator::from_parts(self.space.clone(), out).with_deficit(rho.truncation_deficit()))
    }

    /// `N(|psi><psi|)` as the ensemble of normalized sector projections
    /// `P_s|psi>` with weights `||P_s psi||^2`.
    pub fn project_pure(&self, psi: &StateVector) -> Result<PureEnsemble> {
        if psi.space() != &self.space {
            return Err(Error::DimensionMismatch("state lives on a different space".into()));
        }
        let norm2 = psi.norm().powi(2);
        let mut terms = Vec::new();
        for s in &self.sectors {
            let mut amps = DVector::zeros(self.space.dimension());
            for &i in &s.indices {
                amps[i] = psi.amplitudes()[i];
            }
            let w = amps.norm_squared() / norm2;
            if w > 0.0 {
                let part = StateVector::unnormalized(self.space.clone(), amps)?.normalized()?;
                terms.push((w, part));
            }
        }
        Ok(PureEnsemble::new(terms)?.with_deficit(psi.truncation_deficit()))
    }

    /// `max |N(X) - X|`: zero iff `X` is block diagonal over the sectors.
    pub fn fixed_point_gap(&self, op: &CMatrix) -> Result<f64> {
        max_abs_diff(&self.apply_operator(op)?, op)
    }
}

/// `N(rho)` over the joint sectors of `partition`.
pub fn dephase(rho: &DensityOperator, partition: &PartyPartition) -> Result<DensityOperator> {
    DephasingChannel::new(rho.space(), partition)?.apply(rho)
}

/// Outcome of a fixed-point comparison `rho` vs `N(rho)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointTest {
    /// Max-abs entry of `rho - N(rho)`.
    pub residual: f64,
    pub tolerance: f64,
}

impl FixedPointTest {
    fn run(rho: &DensityOperator, partition: &PartyPartition, tol: &Tolerances) -> Result<Self> {
        let residual = rho.max_abs_diff(&dephase(rho, partition)?)?;
        Ok(FixedPointTest {
            residual,
            tolerance: tol.fixed_point,
        })
    }

    pub fn is_fixed(&self) -> bool {
        self.residual < self.tolerance
    }
}

/// Whether `rho` has no coherence between the sectors of `partition`. With a
/// single-party partition this is compatibility with the global
/// superselection rule.
pub fn is_ssr_compatible(rho: &DensityOperator, partition: &PartyPartition, tol: &Tolerances) -> Result<(bool, f64)> {
    let t = FixedPointTest::run(rho, partition, tol)?;
    Ok((t.is_fixed(), t.residual))
}

/// `true` when `rho != N(rho)`, which rules out preparation by
/// number-conserving local operations. `false` is not a certificate of local
/// preparability.
pub fn certify_not_locally_preparable(
    rho: &DensityOperator,
    partition: &PartyPartition,
    tol: &Tolerances,
) -> Result<(bool, f64)> {
    let t = FixedPointTest::run(rho, partition, tol)?;
    Ok((!t.is_fixed(), t.residual))
}

/// A Hermitian operator on one party's registers commuting with that party's
/// number operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SsrObservable {
    party: String,
    space: FockSpace,
    matrix: CMatrix,
}

impl SsrObservable {
    pub fn new(party: &str, space: FockSpace, matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        let d = space.dimension();
        if matrix.shape() != (d, d) {
            return Err(Error::DimensionMismatch(format!("observable {:?} on dimension {d}", matrix.shape())));
        }
        if hermiticity_gap(&matrix) > tol.hermiticity {
            return Err(Error::Domain("observable is not Hermitian".into()));
        }
        let obs = SsrObservable {
            party: party.to_string(),
            space,
            matrix,
        };
        let c = obs.number_commutator();
        if c > tol.hermiticity {
            return Err(Error::Domain(format!("observable breaks the local number rule (commutator {c:e})")));
        }
        Ok(obs)
    }

    pub fn party(&self) -> &str {
        &self.party
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Max-abs entry of `[X, n_party]`.
    pub fn number_commutator(&self) -> f64 {
        let part = PartyPartition::single(&self.space, &self.party);
        let n = number_operator(&self.space, &part, &self.party).expect("party covers its own space");
        commutator_norm(&self.matrix, &n)
    }

    /// Independent Gaussian Hermitian block on every local-number sector.
    pub fn random(party: &str, space: &FockSpace, rng: &mut impl rand::Rng) -> Self {
        let part = PartyPartition::single(space, party);
        let d = space.dimension();
        let mut m = CMatrix::zeros(d, d);
        for sector in sectors(space, &part).expect("single party covers the space") {
            let idx = &sector.indices;
            for (a, &i) in idx.iter().enumerate() {
                let diag: f64 = StandardNormal.sample(rng);
                m[(i, i)] = C64::new(diag, 0.0);
                for &j in &idx[a + 1..] {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    let z = C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2;
                    m[(i, j)] = z;
                    m[(j, i)] = z.conj();
                }
            }
        }
        SsrObservable {
            party: party.to_string(),
            space: space.clone(),
            matrix: m,
        }
    }
}

/// Seeded [`SsrObservable::random`] for `party`'s registers of `space`.
pub fn random_ssr_observable(
    space: &FockSpace,
    partition: &PartyPartition,
    party: &str,
    seed: u64,
) -> Result<SsrObservable> {
    let local = local_space(space, partition, party)?;
    Ok(SsrObservable::random(party, &local, &mut ChaCha8Rng::seed_from_u64(seed)))
}

fn local_space(space: &FockSpace, partition: &PartyPartition, party: &str) -> Result<FockSpace> {
    let ids = partition.registers_of(space, party)?;
    let positions = space.positions(&ids)?;
    Ok(RegisterSplit::new(space, &positions)?.kept)
}

/// Per-trial generator: stream `trial` of the ChaCha generator seeded by `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Precomputed local indices for evaluating product observables.
struct ProductLayout {
    parties: Vec<String>,
    locals: Vec<FockSpace>,
    local_index: Vec<Vec<usize>>,
}

impl ProductLayout {
    fn new(space: &FockSpace, partition: &PartyPartition) -> Result<Self> {
        let parties = partition.parties();
        let positions = partition.party_positions(space)?;
        let mut locals = Vec::new();
        let mut local_index = Vec::new();
        for ps in &positions {
            let split = RegisterSplit::new(space, ps)?;
            locals.push(split.kept);
            local_index.push(split.local);
        }
        Ok(ProductLayout {
            parties,
            locals,
            local_index,
        })
    }

    fn order<'o>(&self, observables: &'o [SsrObservable]) -> Result<Vec<&'o SsrObservable>> {
        if observables.len() != self.parties.len() {
            return Err(Error::InvalidPartition(format!(
                "{} observables for {} parties",
                observables.len(),
                self.parties.len()
            )));
        }
        self.parties
            .iter()
            .zip(&self.locals)
            .map(|(p, local)| {
                let x = observables
                    .iter()
                    .find(|x| x.party == *p)
                    .ok_or_else(|| Error::UnknownParty(p.clone()))?;
                if x.space != *local {
                    return Err(Error::DimensionMismatch(format!("observable for `{p}` has the wrong registers")));
                }
                Ok(x)
            })
            .collect()
    }

    /// `tr[(⊗_p X_p) m]`.
    fn trace_with(&self, observables: &[&SsrObservable], m: &CMatrix) -> C64 {
        let d = m.nrows();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                let rho_ji = m[(j, i)];
                if rho_ji == C64::new(0.0, 0.0) {
                    continue;
                }
                let mut x = C64::new(1.0, 0.0);
                for (k, obs) in observables.iter().enumerate() {
                    x *= obs.matrix[(self.local_index[k][i], self.local_index[k][j])];
                    if x == C64::new(0.0, 0.0) {
                        break;
                    }
                }
                acc += x * rho_ji;
            }
        }
        acc
    }

    fn lift(&self, observables: &[&SsrObservable], d: usize) -> CMatrix {
        CMatrix::from_fn(d, d, |i, j| {
            observables
                .iter()
                .enumerate()
                .map(|(k, obs)| obs.matrix[(self.local_index[k][i], self.local_index[k][j])])
                .product()
        })
    }
}

/// `tr[(⊗_p X_p) rho]`, one observable per party of `partition`.
pub fn product_expectation(
    rho: &DensityOperator,
    partition: &PartyPartition,
    observables: &[SsrObservable],
) -> Result<C64> {
    let layout = ProductLayout::new(rho.space(), partition)?;
    let ordered = layout.order(observables)?;
    Ok(layout.trace_with(&ordered, rho.matrix()))
}

/// Dense `⊗_p X_p` on the full space, in basis order.
pub fn product_observable(
    space: &FockSpace,
    partition: &PartyPartition,
    observables: &[SsrObservable],
) -> Result<CMatrix> {
    let layout = ProductLayout::new(space, partition)?;
    let ordered = layout.order(observables)?;
    Ok(layout.lift(&ordered, space.dimension()))
}

/// Product observables drawn for trial `trial`, one per party.
pub fn trial_observables(
    space: &FockSpace,
    partition: &PartyPartition,
    seed: u64,
    trial: u64,
) -> Result<Vec<SsrObservable>> {
    let layout = ProductLayout::new(space, partition)?;
    let mut rng = trial_rng(seed, trial);
    Ok(layout
        .parties
        .iter()
        .zip(&layout.locals)
        .map(|(p, local)| SsrObservable::random(p, local, &mut rng))
        .collect())
}

/// `max_t |tr[(X_A^t ⊗ X_B^t ⊗ ...)(rho - sigma)]|` over `trials` seeded
/// random product observables. Trial `t` draws from stream `t` of `seed`, so
/// the result does not depend on evaluation order.
pub fn locc_statistics_gap(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    partition: &PartyPartition,
    trials: u64,
    seed: u64,
) -> Result<f64> {
    if rho.space() != sigma.space() {
        return Err(Error::DimensionMismatch("states live on different spaces".into()));
    }
    let layout = ProductLayout::new(rho.space(), partition)?;
    let diff = rho.matrix() - sigma.matrix();
    let gaps: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let obs: Vec<SsrObservable> = layout
                .parties
                .iter()
                .zip(&layout.locals)
                .map(|(p, local)| SsrObservable::random(p, local, &mut rng))
                .collect();
            let refs: Vec<&SsrObservable> = obs.iter().collect();
            layout.trace_with(&refs, &diff).norm()
        })
        .collect();
    Ok(gaps.into_iter().fold(0.0, f64::max))
}
