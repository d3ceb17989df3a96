use std::collections::BTreeMap;
use std::fmt;

use crate::fock::{DensityOperator, FockSpace, OccupationTuple, PureEnsemble, StateVector};
use crate::{CMatrix, CVector, Error, Result, Tolerances, C64};

/// Labeled orthonormal basis of a local space.
#[derive(Debug, Clone)]
pub struct MeasurementBasis<L> {
    space: FockSpace,
    labels: Vec<L>,
    vectors: Vec<CVector>,
    supports: Vec<Vec<(usize, C64)>>,
}

impl<L: Clone> MeasurementBasis<L> {
    /// Requires exactly `dimension` vectors whose Gram matrix is the identity
    /// to `tol.hermiticity`.
    pub fn new(space: FockSpace, outcomes: Vec<(L, CVector)>, tol: &Tolerances) -> Result<Self> {
        let d = space.dimension();
        if let Some((_, v)) = outcomes.iter().find(|(_, v)| v.len() != d) {
            return Err(Error::DimensionMismatch(format!("basis vector of length {} in dimension {d}", v.len())));
        }
        if outcomes.len() != d {
            return Err(Error::IncompleteBasis(format!("{} vectors for dimension {d}", outcomes.len())));
        }
        let (labels, vectors): (Vec<L>, Vec<CVector>) = outcomes.into_iter().unzip();
        let basis = MeasurementBasis {
            supports: vectors
                .iter()
                .map(|v| v.iter().enumerate().filter(|(_, z)| z.norm() > 0.0).map(|(i, z)| (i, *z)).collect())
                .collect(),
            space,
            labels,
            vectors,
        };
        let gap = basis.gram_gap();
        if gap > tol.hermiticity {
            return Err(Error::IncompleteBasis(format!("vectors are not orthonormal (Gram gap {gap:e})")));
        }
        Ok(basis)
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// `max |<v_i|v_j> - delta_ij|`.
    pub fn gram_gap(&self) -> f64 {
        let mut gap: f64 = 0.0;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                gap = gap.max((a.dotc(b) - C64::new(target, 0.0)).norm());
            }
        }
        gap
    }

    /// `max |sum_v |v><v| - 1|`.
    pub fn completeness_gap(&self) -> f64 {
        let d = self.space.dimension();
        let sum = self.vectors.iter().fold(CMatrix::zeros(d, d), |acc, v| acc + v * v.adjoint());
        crate::fock::linalg::max_abs(&(sum - CMatrix::identity(d, d)))
    }
}

/// The number basis of `space`, labeled by occupations.
pub fn computational_basis(space: &FockSpace) -> MeasurementBasis<OccupationTuple> {
    let d = space.dimension();
    let outcomes = (0..d)
        .map(|i| {
            let mut v = CVector::zeros(d);
            v[i] = C64::new(1.0, 0.0);
            (space.occupation(i), v)
        })
        .collect();
    MeasurementBasis::new(space.clone(), outcomes, &Tolerances::DEFAULT).expect("unit vectors")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Outcome `|±, n>` of the hiding measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PmLabel {
    pub sign: Sign,
    pub n: usize,
}

impl PmLabel {
    pub fn new(sign: Sign, n: usize) -> Self {
        PmLabel { sign, n }
    }

    /// Value a party assigns to the outcome: 0 for `+`, 1 for `-`.
    pub fn value(self) -> u8 {
        match self.sign {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }
}

impl fmt::Display for PmLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.sign.symbol(), self.n)
    }
}

/// Basis `|±,n> = (|0,n> ± |1,n-1>)/sqrt 2` for `n = 1..=N`, plus
/// `|+,0> = |0,0>` and `|-,0> = |1,N>`, on a local space of one hiding
/// register (cutoff 1) followed by one resource register (cutoff `N`).
pub fn pm_basis(local: &FockSpace) -> Result<MeasurementBasis<PmLabel>> {
    let regs = local.registers();
    if regs.len() != 2 || regs[0].cutoff != 1 || regs[1].cutoff == 0 {
        return Err(Error::Domain(
            "the ± basis needs a hiding register (cutoff 1) followed by a resource register (cutoff >= 1)".into(),
        ));
    }
    let n_max = regs[1].cutoff;
    let d = local.dimension();
    let ket = |h: usize, n: usize| local.index_of(&[h, n].into()).expect("within cutoff");
    let unit = |i: usize| {
        let mut v = CVector::zeros(d);
        v[i] = C64::new(1.0, 0.0);
        v
    };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut outcomes = vec![
        (PmLabel::new(Sign::Plus, 0), unit(ket(0, 0))),
        (PmLabel::new(Sign::Minus, 0), unit(ket(1, n_max))),
    ];
    for n in 1..=n_max {
        for (sign, s) in [(Sign::Plus, 1.0), (Sign::Minus, -1.0)] {
            let mut v = CVector::zeros(d);
            v[ket(0, n)] = C64::new(h, 0.0);
            v[ket(1, n - 1)] = C64::new(s * h, 0.0);
            outcomes.push((PmLabel::new(sign, n), v));
        }
    }
    MeasurementBasis::new(local.clone(), outcomes, &Tolerances::DEFAULT)
}

/// Joint outcome probabilities `p(a, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution<L: Ord> {
    probabilities: BTreeMap<(L, L), f64>,
}

impl<L: Ord + Clone> OutcomeDistribution<L> {
    pub fn get(&self, alice: &L, bob: &L) -> f64 {
        self.probabilities.get(&(alice.clone(), bob.clone())).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&L, &L, f64)> {
        self.probabilities.iter().map(|((a, b), p)| (a, b, *p))
    }

    pub fn total(&self) -> f64 {
        self.probabilities.values().sum()
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// Sum of `p(a, b)` over outcomes satisfying `pred`.
    pub fn mass(&self, pred: impl Fn(&L, &L) -> bool) -> f64 {
        self.iter().filter(|(a, b, _)| pred(a, b)).map(|(_, _, p)| p).sum()
    }
}

/// States the Born rule can be evaluated on. `alice` and `bob` are the
/// supports of local basis vectors; the state's space is Alice's registers
/// followed by Bob's, so the joint index is `i * bob_dim + j`.
pub trait BornState {
    fn space(&self) -> &FockSpace;
    fn outcome_probability(&self, bob_dim: usize, alice: &[(usize, C64)], bob: &[(usize, C64)]) -> f64;
}

fn amplitude(psi: &CVector, bob_dim: usize, alice: &[(usize, C64)], bob: &[(usize, C64)]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for &(i, ca) in alice {
        for &(j, cb) in bob {
            acc += (ca * cb).conj() * psi[i * bob_dim + j];
        }
    }
    acc
}

impl BornState for StateVector {
    fn space(&self) -> &FockSpace {
        StateVector::space(self)
    }

    fn outcome_probability(&self, bob_dim: usize, alice: &[(usize, C64)], bob: &[(usize, C64)]) -> f64 {
        amplitude(self.amplitudes(), bob_dim, alice, bob).norm_sqr()
    }
}

impl BornState for PureEnsemble {
    fn space(&self) -> &FockSpace {
        PureEnsemble::space(self)
    }

    fn outcome_probability(&self, bob_dim: usize, alice: &[(usize, C64)], bob: &[(usize, C64)]) -> f64 {
        self.terms()
            .iter()
            .map(|(w, s)| w * amplitude(s.amplitudes(), bob_dim, alice, bob).norm_sqr())
            .sum()
    }
}

impl BornState for DensityOperator {
    fn space(&self) -> &FockSpace {
        DensityOperator::space(self)
    }

    fn outcome_probability(&self, bob_dim: usize, alice: &[(usize, C64)], bob: &[(usize, C64)]) -> f64 {
        let m = self.matrix();
        let joint: Vec<(usize, C64)> = alice
            .iter()
            .flat_map(|&(i, ca)| bob.iter().map(move |&(j, cb)| (i * bob_dim + j, ca * cb)))
            .collect();
        let mut acc = C64::new(0.0, 0.0);
        for &(r, cr) in &joint {
            for &(c, cc) in &joint {
                acc += cr.conj() * m[(r, c)] * cc;
            }
        }
        acc.re
    }
}

/// `p(a, b) = <a ⊗ b| rho |a ⊗ b>` for every pair of basis outcomes.
///
/// The state's registers must be Alice's basis registers followed by Bob's
/// (same ids and cutoffs, party labels ignored).
pub fn born_probabilities<S, L>(
    state: &S,
    alice: &MeasurementBasis<L>,
    bob: &MeasurementBasis<L>,
) -> Result<OutcomeDistribution<L>>
where
    S: BornState + ?Sized,
    L: Clone + Ord,
{
    let layout: Vec<(&str, usize)> = alice
        .space
        .registers()
        .iter()
        .chain(bob.space.registers())
        .map(|r| (r.id.as_str(), r.cutoff))
        .collect();
    let have: Vec<(&str, usize)> = state.space().registers().iter().map(|r| (r.id.as_str(), r.cutoff)).collect();
    if layout != have {
        return Err(Error::DimensionMismatch(format!(
            "state registers {have:?} do not match measurement layout {layout:?}"
        )));
    }
    let bob_dim = bob.space.dimension();
    let mut probabilities = BTreeMap::new();
    for (la, sa) in alice.labels.iter().zip(&alice.supports) {
        for (lb, sb) in bob.labels.iter().zip(&bob.supports) {
            let p = state.outcome_probability(bob_dim, sa, sb);
            probabilities.insert((la.clone(), lb.clone()), p);
        }
    }
    Ok(OutcomeDistribution { probabilities })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Register;

    fn local(n: usize) -> FockSpace {
        FockSpace::new(vec![Register::new("h", "A", 1), Register::new("r", "A", n)]).unwrap()
    }

    #[test]
    fn pm_basis_is_orthonormal_and_complete() {
        for n in 1..6 {
            let b = pm_basis(&local(n)).unwrap();
            assert_eq!(b.len(), 2 * n + 2);
            assert!(b.gram_gap() < 1e-12);
            assert!(b.completeness_gap() < 1e-12);
        }
    }

    #[test]
    fn pm_basis_n1_vectors() {
        let s = local(1);
        let b = pm_basis(&s).unwrap();
        let k = b.labels().iter().position(|l| *l == PmLabel::new(Sign::Plus, 1)).unwrap();
        let v = &b.vectors()[k];
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v[s.index_of(&[0, 1].into()).unwrap()].re - h).abs() < 1e-15);
        assert!((v[s.index_of(&[1, 0].into()).unwrap()].re - h).abs() < 1e-15);
        let k = b.labels().iter().position(|l| *l == PmLabel::new(Sign::Minus, 0)).unwrap();
        assert_eq!(b.vectors()[k][s.index_of(&[1, 1].into()).unwrap()], C64::new(1.0, 0.0));
    }

    #[test]
    fn assigned_values() {
        for n in 0..4 {
            assert_eq!(PmLabel::new(Sign::Plus, n).value(), 0);
            assert_eq!(PmLabel::new(Sign::Minus, n).value(), 1);
        }
    }

    #[test]
    fn incomplete_basis_rejected() {
        let s = FockSpace::new(vec![Register::new("a", "A", 1)]).unwrap();
        let v = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        assert!(matches!(
            MeasurementBasis::new(s.clone(), vec![(0, v.clone())], &Tolerances::DEFAULT),
            Err(Error::IncompleteBasis(_))
        ));
        assert!(matches!(
            MeasurementBasis::new(s, vec![(0, v.clone()), (1, v)], &Tolerances::DEFAULT),
            Err(Error::IncompleteBasis(_))
        ));
    }

    #[test]
    fn computational_measurement_is_deterministic() {
        let sa = FockSpace::new(vec![Register::new("a", "A", 1)]).unwrap();
        let sb = FockSpace::new(vec![Register::new("b", "B", 1)]).unwrap();
        let joint = sa.concat(&sb).unwrap();
        let psi = StateVector::ket(&joint, &[0, 1].into()).unwrap();
        let dist = born_probabilities(&psi, &computational_basis(&sa), &computational_basis(&sb)).unwrap();
        assert_eq!(dist.get(&[0].into(), &[1].into()), 1.0);
        assert!((dist.total() - 1.0).abs() < 1e-15);
        // same through the density-matrix path
        let dist = born_probabilities(&psi.to_density(), &computational_basis(&sa), &computational_basis(&sb)).unwrap();
        assert_eq!(dist.get(&[0].into(), &[1].into()), 1.0);
    }

    #[test]
    fn uniform_superposition_splits_evenly() {
        let sa = FockSpace::new(vec![Register::new("a", "A", 1)]).unwrap();
        let sb = FockSpace::new(vec![Register::new("b", "B", 0)]).unwrap();
        let joint = sa.concat(&sb).unwrap();
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let psi = StateVector::new(joint, CVector::from_vec(vec![h, h])).unwrap();
        let dist = born_probabilities(&psi, &computational_basis(&sa), &computational_basis(&sb)).unwrap();
        assert!((dist.get(&[0].into(), &[0].into()) - 0.5).abs() < 1e-15);
        assert!((dist.get(&[1].into(), &[0].into()) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn layout_mismatch_rejected() {
        let sa = FockSpace::new(vec![Register::new("a", "A", 1)]).unwrap();
        let sb = FockSpace::new(vec![Register::new("b", "B", 1)]).unwrap();
        let psi = StateVector::ket(&sb.concat(&sa).unwrap(), &[0, 1].into()).unwrap();
        assert!(born_probabilities(&psi, &computational_basis(&sa), &computational_basis(&sb)).is_err());
    }
}
