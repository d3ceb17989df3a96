use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A single bosonic mode with occupations `0..=cutoff`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Register {
    pub id: String,
    pub party: String,
    pub cutoff: usize,
}

impl Register {
    pub fn new(id: impl Into<String>, party: impl Into<String>, cutoff: usize) -> Self {
        Register {
            id: id.into(),
            party: party.into(),
            cutoff,
        }
    }

    pub fn dim(&self) -> usize {
        self.cutoff + 1
    }
}

/// One occupation number per register, in register order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccupationTuple(pub Vec<usize>);

impl OccupationTuple {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl From<Vec<usize>> for OccupationTuple {
    fn from(v: Vec<usize>) -> Self {
        OccupationTuple(v)
    }
}

impl<const N: usize> From<[usize; N]> for OccupationTuple {
    fn from(v: [usize; N]) -> Self {
        OccupationTuple(v.to_vec())
    }
}

impl fmt::Display for OccupationTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

/// Ordered tensor product of registers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockSpace {
    registers: Vec<Register>,
    strides: Vec<usize>,
    dimension: usize,
}

impl FockSpace {
    pub fn new(registers: Vec<Register>) -> Result<Self> {
        if registers.is_empty() {
            return Err(Error::InvalidState("a Fock space needs at least one register".into()));
        }
        let mut seen = HashSet::new();
        for r in &registers {
            if !seen.insert(r.id.as_str()) {
                return Err(Error::DuplicateRegister(r.id.clone()));
            }
        }
        let mut strides = vec![1; registers.len()];
        for i in (0..registers.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * registers[i + 1].dim();
        }
        let dimension = strides[0] * registers[0].dim();
        Ok(FockSpace {
            registers,
            strides,
            dimension,
        })
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn register_ids(&self) -> Vec<&str> {
        self.registers.iter().map(|r| r.id.as_str()).collect()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of registers.
    pub fn len(&self) -> usize {
        self.registers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.registers.is_empty()
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.registers.iter().position(|r| r.id == id)
    }

    pub fn register(&self, id: &str) -> Result<&Register> {
        self.position(id)
            .map(|p| &self.registers[p])
            .ok_or_else(|| Error::UnknownRegister(id.to_string()))
    }

    pub fn index_of(&self, occ: &OccupationTuple) -> Result<usize> {
        if occ.0.len() != self.registers.len() {
            return Err(Error::DimensionMismatch(format!(
                "occupation tuple has {} entries, space has {} registers",
                occ.0.len(),
                self.registers.len()
            )));
        }
        let mut index = 0;
        for ((&n, r), &s) in occ.0.iter().zip(&self.registers).zip(&self.strides) {
            if n > r.cutoff {
                return Err(Error::OccupationOutOfRange {
                    register: r.id.clone(),
                    occupation: n,
                    cutoff: r.cutoff,
                });
            }
            index += n * s;
        }
        Ok(index)
    }

    /// Occupation of register `position` in basis state `index`.
    #[inline]
    pub fn digit(&self, index: usize, position: usize) -> usize {
        (index / self.strides[position]) % self.registers[position].dim()
    }

    /// # Panics
    /// If `index >= dimension`.
    pub fn occupation(&self, index: usize) -> OccupationTuple {
        assert!(index < self.dimension, "basis index {index} out of range");
        OccupationTuple((0..self.registers.len()).map(|p| self.digit(index, p)).collect())
    }

    pub fn total_occupation(&self, index: usize) -> usize {
        (0..self.registers.len()).map(|p| self.digit(index, p)).sum()
    }

    /// Registers of `self` followed by those of `other`.
    pub fn concat(&self, other: &FockSpace) -> Result<FockSpace> {
        let mut regs = self.registers.clone();
        regs.extend(other.registers.iter().cloned());
        FockSpace::new(regs)
    }

    /// Positions (in this space) of the given ids, or an error for unknown ids.
    pub fn positions(&self, ids: &[&str]) -> Result<Vec<usize>> {
        ids.iter()
            .map(|id| self.position(id).ok_or_else(|| Error::UnknownRegister(id.to_string())))
            .collect()
    }

    /// Same registers in the order given by `order`, together with the map
    /// `new basis index -> old basis index`.
    pub fn permuted(&self, order: &[&str]) -> Result<(FockSpace, Vec<usize>)> {
        if order.len() != self.registers.len() {
            return Err(Error::DimensionMismatch(format!(
                "permutation names {} registers, space has {}",
                order.len(),
                self.registers.len()
            )));
        }
        let positions = self.positions(order)?;
        let space = FockSpace::new(positions.iter().map(|&p| self.registers[p].clone()).collect())?;
        let mut map = vec![0; self.dimension];
        for old in 0..self.dimension {
            let new: usize = positions
                .iter()
                .zip(&space.strides)
                .map(|(&p, &s)| self.digit(old, p) * s)
                .sum();
            map[new] = old;
        }
        Ok((space, map))
    }

    /// Copy of the space with every register's party label replaced.
    pub fn relabeled(&self, party_of: impl Fn(&Register) -> String) -> FockSpace {
        let regs = self
            .registers
            .iter()
            .map(|r| Register::new(r.id.clone(), party_of(r), r.cutoff))
            .collect();
        FockSpace::new(regs).expect("relabeling keeps ids unique")
    }
}

/// Factorisation of a space into kept registers and the rest.
///
/// `global[k * rest_dim + r]` is the basis index whose kept part is `k` and
/// whose remaining part is `r`.
#[derive(Debug, Clone)]
pub(crate) struct RegisterSplit {
    pub kept: FockSpace,
    pub rest_dim: usize,
    pub local: Vec<usize>,
    pub other: Vec<usize>,
    pub global: Vec<usize>,
}

impl RegisterSplit {
    /// `kept` must be a nonempty set of distinct positions; they are used in
    /// space order.
    pub fn new(space: &FockSpace, kept: &[usize]) -> Result<Self> {
        let mut kept: Vec<usize> = kept.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if kept.is_empty() {
            return Err(Error::InvalidPartition("no registers selected".into()));
        }
        let rest: Vec<usize> = (0..space.len()).filter(|p| !kept.contains(p)).collect();
        let kept_space = FockSpace::new(kept.iter().map(|&p| space.registers[p].clone()).collect())?;
        let rest_space = if rest.is_empty() {
            None
        } else {
            Some(FockSpace::new(rest.iter().map(|&p| space.registers[p].clone()).collect())?)
        };
        let rest_dim = rest_space.as_ref().map_or(1, FockSpace::dimension);
        let encode = |g: usize, positions: &[usize], sub: Option<&FockSpace>| -> usize {
            match sub {
                None => 0,
                Some(sub) => positions
                    .iter()
                    .zip(&sub.strides)
                    .map(|(&p, &s)| space.digit(g, p) * s)
                    .sum(),
            }
        };
        let mut local = vec![0; space.dimension];
        let mut other = vec![0; space.dimension];
        let mut global = vec![0; space.dimension];
        for g in 0..space.dimension {
            let k = encode(g, &kept, Some(&kept_space));
            let r = encode(g, &rest, rest_space.as_ref());
            local[g] = k;
            other[g] = r;
            global[k * rest_dim + r] = g;
        }
        Ok(RegisterSplit {
            kept: kept_space,
            rest_dim,
            local,
            other,
            global,
        })
    }
}
