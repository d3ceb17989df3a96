use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{DensityOperator, FockSpace};
use crate::{CMatrix, Error, Result, C64};

/// Assignment of register ids to party labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartyPartition {
    assignment: BTreeMap<String, String>,
}

impl PartyPartition {
    pub fn new<I, R, P>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (R, P)>,
        R: Into<String>,
        P: Into<String>,
    {
        let mut assignment = BTreeMap::new();
        for (r, p) in pairs {
            let r = r.into();
            if assignment.insert(r.clone(), p.into()).is_some() {
                return Err(Error::InvalidPartition(format!("register `{r}` assigned twice")));
            }
        }
        if assignment.is_empty() {
            return Err(Error::InvalidPartition("a partition needs at least one party".into()));
        }
        Ok(PartyPartition { assignment })
    }

    /// The party labels carried by the registers themselves.
    pub fn from_space(space: &FockSpace) -> Self {
        PartyPartition {
            assignment: space.registers().iter().map(|r| (r.id.clone(), r.party.clone())).collect(),
        }
    }

    /// Everything in one party; its sectors are the total-number sectors.
    pub fn single(space: &FockSpace, party: &str) -> Self {
        PartyPartition {
            assignment: space.registers().iter().map(|r| (r.id.clone(), party.to_string())).collect(),
        }
    }

    pub fn party_of(&self, register: &str) -> Option<&str> {
        self.assignment.get(register).map(String::as_str)
    }

    /// Sorted, deduplicated party labels.
    pub fn parties(&self) -> Vec<String> {
        let mut parties: Vec<String> = self.assignment.values().cloned().collect();
        parties.sort();
        parties.dedup();
        parties
    }

    /// Merge parties: each party label `p` becomes `group(p)`.
    pub fn grouped(&self, group: impl Fn(&str) -> String) -> PartyPartition {
        PartyPartition {
            assignment: self.assignment.iter().map(|(r, p)| (r.clone(), group(p))).collect(),
        }
    }

    /// Every register of `space` must be assigned, and nothing else.
    pub fn validate(&self, space: &FockSpace) -> Result<()> {
        for r in space.registers() {
            if !self.assignment.contains_key(&r.id) {
                return Err(Error::InvalidPartition(format!("register `{}` has no party", r.id)));
            }
        }
        if self.assignment.len() != space.len() {
            let extra = self
                .assignment
                .keys()
                .find(|id| space.position(id).is_none())
                .cloned()
                .unwrap_or_default();
            return Err(Error::InvalidPartition(format!("register `{extra}` is not in the space")));
        }
        Ok(())
    }

    /// Register ids of `party`, in space order.
    pub fn registers_of<'s>(&self, space: &'s FockSpace, party: &str) -> Result<Vec<&'s str>> {
        self.validate(space)?;
        let ids: Vec<&str> = space
            .registers()
            .iter()
            .filter(|r| self.assignment[&r.id] == party)
            .map(|r| r.id.as_str())
            .collect();
        if ids.is_empty() {
            return Err(Error::UnknownParty(party.to_string()));
        }
        Ok(ids)
    }

    /// For each party (in [`parties`](Self::parties) order) the register positions.
    pub(crate) fn party_positions(&self, space: &FockSpace) -> Result<Vec<Vec<usize>>> {
        self.validate(space)?;
        let parties = self.parties();
        let mut out = vec![Vec::new(); parties.len()];
        for (pos, r) in space.registers().iter().enumerate() {
            let k = parties.binary_search(&self.assignment[&r.id]).expect("party listed");
            out[k].push(pos);
        }
        Ok(out)
    }
}

/// Particle count per party.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SectorLabel {
    pub counts: BTreeMap<String, usize>,
}

impl SectorLabel {
    pub fn new<I, P>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (P, usize)>,
        P: Into<String>,
    {
        SectorLabel {
            counts: pairs.into_iter().map(|(p, n)| (p.into(), n)).collect(),
        }
    }

    pub fn count(&self, party: &str) -> Option<usize> {
        self.counts.get(party).copied()
    }
}

impl fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (p, n)) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}={n}")?;
        }
        write!(f, ")")
    }
}

/// A joint local-number sector and the basis indices it contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sector {
    pub label: SectorLabel,
    pub indices: Vec<usize>,
}

/// All nonempty joint sectors of `space` under `partition`, ordered by label.
pub fn sectors(space: &FockSpace, partition: &PartyPartition) -> Result<Vec<Sector>> {
    let positions = partition.party_positions(space)?;
    let parties = partition.parties();
    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for index in 0..space.dimension() {
        let key: Vec<usize> = positions
            .iter()
            .map(|ps| ps.iter().map(|&p| space.digit(index, p)).sum())
            .collect();
        groups.entry(key).or_default().push(index);
    }
    Ok(groups
        .into_iter()
        .map(|(key, indices)| Sector {
            label: SectorLabel::new(parties.iter().cloned().zip(key)),
            indices,
        })
        .collect())
}

/// Diagonal operator counting the particles held by `party`.
pub fn number_operator(space: &FockSpace, partition: &PartyPartition, party: &str) -> Result<CMatrix> {
    let ids = partition.registers_of(space, party)?;
    let positions = space.positions(&ids)?;
    let d = space.dimension();
    let mut op = CMatrix::zeros(d, d);
    for i in 0..d {
        let n: usize = positions.iter().map(|&p| space.digit(i, p)).sum();
        op[(i, i)] = C64::new(n as f64, 0.0);
    }
    Ok(op)
}

/// Projector onto the basis states whose per-party counts equal `sector`.
pub fn sector_projector(space: &FockSpace, partition: &PartyPartition, sector: &SectorLabel) -> Result<CMatrix> {
    let positions = partition.party_positions(space)?;
    let parties = partition.parties();
    let mut wanted = Vec::with_capacity(parties.len());
    for (party, pos) in parties.iter().zip(&positions) {
        let n = sector
            .count(party)
            .ok_or_else(|| Error::Domain(format!("sector label has no count for party `{party}`")))?;
        let max: usize = pos.iter().map(|&p| space.registers()[p].cutoff).sum();
        if n > max {
            return Err(Error::Domain(format!("party `{party}` holds at most {max} particles, not {n}")));
        }
        wanted.push(n);
    }
    if let Some(extra) = sector.counts.keys().find(|p| !parties.contains(p)) {
        return Err(Error::UnknownParty(extra.clone()));
    }
    let d = space.dimension();
    let mut proj = CMatrix::zeros(d, d);
    for i in 0..d {
        let hit = positions
            .iter()
            .zip(&wanted)
            .all(|(ps, &n)| ps.iter().map(|&p| space.digit(i, p)).sum::<usize>() == n);
        if hit {
            proj[(i, i)] = C64::new(1.0, 0.0);
        }
    }
    Ok(proj)
}

/// One term `p_s rho_s` of the sector decomposition.
#[derive(Debug, Clone)]
pub struct SectorComponent {
    pub label: SectorLabel,
    pub weight: f64,
    pub state: DensityOperator,
}

/// Weights below this are dropped from [`sector_decomposition`].
const NEGLIGIBLE_WEIGHT: f64 = 1e-14;

/// `rho -> [(s, tr(P_s rho P_s), P_s rho P_s / p_s)]` over the joint sectors
/// of `partition`, skipping empty sectors.
pub fn sector_decomposition(rho: &DensityOperator, partition: &PartyPartition) -> Result<Vec<SectorComponent>> {
    let space = rho.space();
    let m = rho.matrix();
    let d = space.dimension();
    let mut out = Vec::new();
    for sector in sectors(space, partition)? {
        let weight: f64 = sector.indices.iter().map(|&i| m[(i, i)].re).sum();
        if weight <= NEGLIGIBLE_WEIGHT {
            continue;
        }
        let mut block = CMatrix::zeros(d, d);
        for &i in &sector.indices {
            for &j in &sector.indices {
                block[(i, j)] = m[(i, j)] / weight;
            }
        }
        out.push(SectorComponent {
            label: sector.label,
            weight,
            state: DensityOperator::from_parts(space.clone(), block),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::linalg::max_abs_diff;
    use crate::fock::{Register, StateVector};

    fn bipartite(ca: usize, cb: usize) -> (FockSpace, PartyPartition) {
        let s = FockSpace::new(vec![Register::new("a", "A", ca), Register::new("b", "B", cb)]).unwrap();
        let p = PartyPartition::from_space(&s);
        (s, p)
    }

    fn diag(m: &CMatrix) -> Vec<f64> {
        (0..m.nrows()).map(|i| m[(i, i)].re).collect()
    }

    #[test]
    fn number_operators() {
        let s = FockSpace::new(vec![Register::new("m", "A", 2)]).unwrap();
        let n = number_operator(&s, &PartyPartition::from_space(&s), "A").unwrap();
        assert_eq!(diag(&n), vec![0.0, 1.0, 2.0]);
        let (s, _) = bipartite(1, 1);
        let single = PartyPartition::single(&s, "A");
        assert_eq!(diag(&number_operator(&s, &single, "A").unwrap()), vec![0.0, 1.0, 1.0, 2.0]);
        assert!(matches!(number_operator(&s, &single, "Z"), Err(Error::UnknownParty(_))));
    }

    #[test]
    fn resource_number_expectation() {
        // (|0,2> + |1,1> + |2,0>)/sqrt(3): <n_A> = (0 + 1 + 2)/3
        let (s, p) = bipartite(2, 2);
        let mut amps = crate::CVector::zeros(9);
        for n in 0..3 {
            amps[s.index_of(&[n, 2 - n].into()).unwrap()] = C64::new(1.0 / 3f64.sqrt(), 0.0);
        }
        let psi = StateVector::new(s.clone(), amps).unwrap();
        let n_a = number_operator(&s, &p, "A").unwrap();
        assert!((psi.expectation(&n_a).unwrap().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn projector_picks_single_ket() {
        let (s, p) = bipartite(1, 1);
        let proj = sector_projector(&s, &p, &SectorLabel::new([("A", 0), ("B", 1)])).unwrap();
        assert_eq!(diag(&proj), vec![0.0, 1.0, 0.0, 0.0]);
        assert!(sector_projector(&s, &p, &SectorLabel::new([("A", 2), ("B", 0)])).is_err());
        assert!(sector_projector(&s, &p, &SectorLabel::new([("A", 0)])).is_err());
    }

    #[test]
    fn projectors_resolve_identity() {
        let s = FockSpace::new(vec![
            Register::new("a1", "A", 1),
            Register::new("b1", "B", 2),
            Register::new("a2", "A", 1),
        ])
        .unwrap();
        let p = PartyPartition::from_space(&s);
        let all = sectors(&s, &p).unwrap();
        let projs: Vec<CMatrix> = all
            .iter()
            .map(|sec| sector_projector(&s, &p, &sec.label).unwrap())
            .collect();
        let sum = projs.iter().fold(CMatrix::zeros(12, 12), |acc, x| acc + x);
        assert!(max_abs_diff(&sum, &CMatrix::identity(12, 12)).unwrap() < 1e-15);
        for (i, a) in projs.iter().enumerate() {
            assert!(max_abs_diff(&(a * a), a).unwrap() < 1e-15);
            for b in projs.iter().skip(i + 1) {
                assert!(crate::fock::linalg::max_abs(&(a * b)) < 1e-15);
            }
        }
    }

    #[test]
    fn projector_component_of_psi_plus() {
        let (s, p) = bipartite(1, 1);
        let h = 0.5f64.sqrt();
        let amps = crate::CVector::from_vec(vec![C64::new(0.0, 0.0), C64::new(h, 0.0), C64::new(h, 0.0), C64::new(0.0, 0.0)]);
        let psi = StateVector::new(s.clone(), amps).unwrap();
        let proj = sector_projector(&s, &p, &SectorLabel::new([("A", 1), ("B", 0)])).unwrap();
        let out = psi.apply(&proj).unwrap();
        assert!((out.amplitude(&[1, 0].into()).unwrap().re - h).abs() < 1e-15);
        assert!((out.norm() - h).abs() < 1e-15);
    }

    #[test]
    fn decomposition_of_number_state() {
        let (s, p) = bipartite(1, 1);
        let rho = StateVector::ket(&s, &[0, 1].into()).unwrap().to_density();
        let parts = sector_decomposition(&rho, &p).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].label, SectorLabel::new([("A", 0), ("B", 1)]));
        assert!((parts[0].weight - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partition_validation() {
        let (s, _) = bipartite(1, 1);
        assert!(PartyPartition::new([("a", "A")]).unwrap().validate(&s).is_err());
        assert!(PartyPartition::new([("a", "A"), ("b", "B"), ("c", "C")]).unwrap().validate(&s).is_err());
        assert!(PartyPartition::new(Vec::<(String, String)>::new()).is_err());
    }
}
