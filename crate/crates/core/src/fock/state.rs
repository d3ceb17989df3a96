use super::{DensityOperator, FockSpace, OccupationTuple};
use crate::{CMatrix, CVector, Error, Result, Tolerances, C64};

/// Pure state over a [`FockSpace`].
///
/// Constructed through [`StateVector::new`] the amplitudes have unit norm.
/// [`StateVector::unnormalized`] skips that check for intermediate vectors
/// such as sector projections.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: FockSpace,
    amplitudes: CVector,
    truncation_deficit: f64,
}

impl StateVector {
    pub fn new(space: FockSpace, amplitudes: CVector) -> Result<Self> {
        let state = Self::unnormalized(space, amplitudes)?;
        let norm = state.norm();
        if (norm - 1.0).abs() > Tolerances::DEFAULT.trace {
            return Err(Error::InvalidState(format!("state norm is {norm}, expected 1")));
        }
        Ok(state)
    }

    pub fn unnormalized(space: FockSpace, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != space.dimension() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for a space of dimension {}",
                amplitudes.len(),
                space.dimension()
            )));
        }
        Ok(StateVector {
            space,
            amplitudes,
            truncation_deficit: 0.0,
        })
    }

    /// Number-basis ket `|occ>`.
    pub fn ket(space: &FockSpace, occ: &OccupationTuple) -> Result<Self> {
        let index = space.index_of(occ)?;
        let mut amplitudes = CVector::zeros(space.dimension());
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(StateVector {
            space: space.clone(),
            amplitudes,
            truncation_deficit: 0.0,
        })
    }

    /// Truncated coherent state `|alpha e^{i phase}>` on a single-register
    /// space, renormalized. The discarded Poisson mass is kept in
    /// [`truncation_deficit`](Self::truncation_deficit).
    pub fn coherent(space: &FockSpace, register: &str, alpha: f64, phase: f64) -> Result<Self> {
        if space.len() != 1 || space.registers()[0].id != register {
            return Err(Error::Domain(format!(
                "coherent states are built on a single-register space holding `{register}`"
            )));
        }
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::Domain(format!("alpha must be a finite non-negative number, got {alpha}")));
        }
        let cutoff = space.registers()[0].cutoff;
        let mut amplitudes = CVector::zeros(cutoff + 1);
        if alpha == 0.0 {
            amplitudes[0] = C64::new(1.0, 0.0);
            return Ok(StateVector {
                space: space.clone(),
                amplitudes,
                truncation_deficit: 0.0,
            });
        }
        let ln_alpha = alpha.ln();
        let mut ln_fact = 0.0;
        for n in 0..=cutoff {
            if n > 0 {
                ln_fact += (n as f64).ln();
            }
            let modulus = (-0.5 * alpha * alpha + n as f64 * ln_alpha - 0.5 * ln_fact).exp();
            amplitudes[n] = C64::from_polar(modulus, phase * n as f64);
        }
        let deficit = poisson_tail(alpha * alpha, cutoff);
        let norm = amplitudes.norm();
        Ok(StateVector {
            space: space.clone(),
            amplitudes: amplitudes.unscale(norm),
            truncation_deficit: deficit,
        })
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    /// Probability mass lost to truncation before renormalization.
    pub fn truncation_deficit(&self) -> f64 {
        self.truncation_deficit
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalized(self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("cannot normalize the zero vector".into()));
        }
        Ok(StateVector {
            amplitudes: self.amplitudes.unscale(norm),
            ..self
        })
    }

    pub fn amplitude(&self, occ: &OccupationTuple) -> Result<C64> {
        Ok(self.amplitudes[self.space.index_of(occ)?])
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch("inner product across different spaces".into()));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let space = self.space.concat(&other.space)?;
        Ok(StateVector {
            space,
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
            truncation_deficit: self.truncation_deficit + other.truncation_deficit - self.truncation_deficit * other.truncation_deficit,
        })
    }

    /// Reorder registers; `order` lists every register id exactly once.
    pub fn permute(&self, order: &[&str]) -> Result<StateVector> {
        let (space, map) = self.space.permuted(order)?;
        let amplitudes = CVector::from_fn(space.dimension(), |i, _| self.amplitudes[map[i]]);
        Ok(StateVector {
            space,
            amplitudes,
            truncation_deficit: self.truncation_deficit,
        })
    }

    /// `op |self>`, not renormalized.
    pub fn apply(&self, op: &CMatrix) -> Result<StateVector> {
        let d = self.space.dimension();
        if op.shape() != (d, d) {
            return Err(Error::DimensionMismatch(format!("operator {:?} on dimension {d}", op.shape())));
        }
        Ok(StateVector {
            space: self.space.clone(),
            amplitudes: op * &self.amplitudes,
            truncation_deficit: self.truncation_deficit,
        })
    }

    pub fn expectation(&self, op: &CMatrix) -> Result<C64> {
        let image = self.apply(op)?;
        Ok(self.amplitudes.dotc(&image.amplitudes))
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator::pure(self)
    }
}

/// `sum_{n > cutoff} e^{-mean} mean^n / n!`, summed directly so tiny tails
/// keep their relative precision.
pub(crate) fn poisson_tail(mean: f64, cutoff: usize) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    let ln_term = |n: usize| -> f64 {
        let ln_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
        -mean + n as f64 * mean.ln() - ln_fact
    };
    if (cutoff as f64) < mean {
        // head mass is small here, so 1 - head is accurate
        let head: f64 = (0..=cutoff).map(|n| ln_term(n).exp()).sum();
        return (1.0 - head).max(0.0);
    }
    let mut n = cutoff + 1;
    let mut term = ln_term(n).exp();
    let mut sum = 0.0;
    while term > 0.0 && term > sum * 1e-18 {
        sum += term;
        n += 1;
        term *= mean / n as f64;
    }
    sum
}
