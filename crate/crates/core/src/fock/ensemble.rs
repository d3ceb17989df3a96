use super::{DensityOperator, FockSpace, StateVector};
use crate::{CMatrix, Error, Result, Tolerances, C64, DENSE_DIMENSION_LIMIT};

/// Mixed state stored as `sum_k p_k |psi_k><psi_k|`.
///
/// Used where the dense matrix would be too large but the state has a short
/// pure-state decomposition (e.g. phase-averaged coherent states, which are
/// one pure component per total-number sector).
#[derive(Debug, Clone, PartialEq)]
pub struct PureEnsemble {
    space: FockSpace,
    terms: Vec<(f64, StateVector)>,
    truncation_deficit: f64,
}

impl PureEnsemble {
    pub fn new(terms: Vec<(f64, StateVector)>) -> Result<Self> {
        let space = terms
            .first()
            .map(|(_, s)| s.space().clone())
            .ok_or_else(|| Error::InvalidState("empty ensemble".into()))?;
        let mut total = 0.0;
        for (p, s) in &terms {
            if *p < 0.0 {
                return Err(Error::InvalidState(format!("negative ensemble weight {p}")));
            }
            if s.space() != &space {
                return Err(Error::DimensionMismatch("ensemble members on different spaces".into()));
            }
            if (s.norm() - 1.0).abs() > Tolerances::DEFAULT.trace {
                return Err(Error::InvalidState("ensemble member is not normalized".into()));
            }
            total += p;
        }
        if (total - 1.0).abs() > Tolerances::DEFAULT.trace {
            return Err(Error::InvalidState(format!("ensemble weights sum to {total}")));
        }
        Ok(PureEnsemble {
            space,
            terms,
            truncation_deficit: 0.0,
        })
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn terms(&self) -> &[(f64, StateVector)] {
        &self.terms
    }

    pub fn truncation_deficit(&self) -> f64 {
        self.truncation_deficit
    }

    pub(crate) fn with_deficit(mut self, deficit: f64) -> Self {
        self.truncation_deficit = deficit;
        self
    }

    /// Dense matrix, refused above [`DENSE_DIMENSION_LIMIT`].
    pub fn to_density(&self) -> Result<DensityOperator> {
        let d = self.space.dimension();
        if d > DENSE_DIMENSION_LIMIT {
            return Err(Error::TooLarge {
                dimension: d,
                limit: DENSE_DIMENSION_LIMIT,
            });
        }
        let mut matrix = CMatrix::zeros(d, d);
        for (p, s) in &self.terms {
            let a = s.amplitudes();
            matrix += a * a.adjoint() * C64::new(*p, 0.0);
        }
        Ok(DensityOperator::from_parts(self.space.clone(), matrix).with_deficit(self.truncation_deficit))
    }

    /// `|state><state| ⊗ self`, with `state` in front.
    pub fn prepend(&self, state: &StateVector) -> Result<PureEnsemble> {
        let terms = self
            .terms
            .iter()
            .map(|(p, s)| Ok((*p, state.tensor(s)?)))
            .collect::<Result<Vec<_>>>()?;
        let (a, b) = (state.truncation_deficit(), self.truncation_deficit);
        let deficit = a + b - a * b;
        Ok(PureEnsemble::new(terms)?.with_deficit(deficit))
    }

    pub fn permute(&self, order: &[&str]) -> Result<PureEnsemble> {
        let terms = self
            .terms
            .iter()
            .map(|(p, s)| Ok((*p, s.permute(order)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut out = PureEnsemble::new(terms)?;
        out.truncation_deficit = self.truncation_deficit;
        Ok(out)
    }
}
