use serde::{Deserialize, Serialize};

use super::{DensityOperator, FockSpace, Register, StateVector};
use crate::{CMatrix, CVector, Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Vector,
    Density,
}

/// Text form of a state: registers in basis order, then amplitudes or
/// row-major matrix entries as `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    pub registers: Vec<Register>,
    pub kind: StateKind,
    pub data: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyState {
    Vector(StateVector),
    Density(DensityOperator),
}

impl StateDocument {
    pub fn from_vector(state: &StateVector) -> Self {
        StateDocument {
            registers: state.space().registers().to_vec(),
            kind: StateKind::Vector,
            data: state.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn from_density(rho: &DensityOperator) -> Self {
        let m = rho.matrix();
        let d = m.nrows();
        let data = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| [m[(i, j)].re, m[(i, j)].im])
            .collect();
        StateDocument {
            registers: rho.space().registers().to_vec(),
            kind: StateKind::Density,
            data,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn into_state(self) -> Result<AnyState> {
        let space = FockSpace::new(self.registers)?;
        let d = space.dimension();
        let values: Vec<C64> = self.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
        match self.kind {
            StateKind::Vector => {
                if values.len() != d {
                    return Err(Error::DimensionMismatch(format!("{} entries for dimension {d}", values.len())));
                }
                Ok(AnyState::Vector(StateVector::new(space, CVector::from_vec(values))?))
            }
            StateKind::Density => {
                if values.len() != d * d {
                    return Err(Error::DimensionMismatch(format!("{} entries for a {d}x{d} matrix", values.len())));
                }
                let m = CMatrix::from_row_slice(d, d, &values);
                Ok(AnyState::Density(DensityOperator::new(space, m)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_row_major() {
        let s = FockSpace::new(vec![Register::new("a", "A", 1)]).unwrap();
        let m = CMatrix::from_row_slice(2, 2, &[C64::new(0.75, 0.0), C64::new(0.1, 0.2), C64::new(0.1, -0.2), C64::new(0.25, 0.0)]);
        let rho = DensityOperator::new(s, m).unwrap();
        let doc = StateDocument::from_density(&rho);
        assert_eq!(doc.data[1], [0.1, 0.2]);
        assert_eq!(doc.data[2], [0.1, -0.2]);
        let json = doc.to_json();
        assert!(json.contains("\"kind\": \"density\""));
        assert_eq!(StateDocument::from_json(&json).unwrap().into_state().unwrap(), AnyState::Density(rho));
    }

    #[test]
    fn rejects_bad_documents() {
        let bad = r#"{"registers":[{"id":"a","party":"A","cutoff":1}],"kind":"vector","data":[[1.0,0.0]]}"#;
        assert!(StateDocument::from_json(bad).unwrap().into_state().is_err());
        let extra = r#"{"registers":[],"kind":"vector","data":[],"x":1}"#;
        assert!(StateDocument::from_json(extra).is_err());
    }
}
