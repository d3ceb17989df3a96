use super::linalg::{hermitian_eigenvalues, hermiticity_gap, max_abs_diff};
use super::{FockSpace, RegisterSplit, StateVector};
use crate::{CMatrix, Error, Result, Tolerances, C64};

/// Mixed state over a [`FockSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    space: FockSpace,
    matrix: CMatrix,
    truncation_deficit: f64,
}

impl DensityOperator {
    /// Checks shape, hermiticity and unit trace with default tolerances.
    /// Positivity is checked separately by [`check_positive`](Self::check_positive)
    /// since it needs a full diagonalisation.
    pub fn new(space: FockSpace, matrix: CMatrix) -> Result<Self> {
        Self::with_tolerances(space, matrix, &Tolerances::DEFAULT)
    }

    pub fn with_tolerances(space: FockSpace, matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        let d = space.dimension();
        if matrix.shape() != (d, d) {
            return Err(Error::DimensionMismatch(format!(
                "matrix {:?} for a space of dimension {d}",
                matrix.shape()
            )));
        }
        let gap = hermiticity_gap(&matrix);
        if gap > tol.hermiticity {
            return Err(Error::InvalidState(format!("matrix is not Hermitian (gap {gap:e})")));
        }
        let tr = matrix.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol.trace {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        Ok(Self::from_parts(space, matrix))
    }

    pub(crate) fn from_parts(space: FockSpace, matrix: CMatrix) -> Self {
        DensityOperator {
            space,
            matrix,
            truncation_deficit: 0.0,
        }
    }

    pub fn pure(state: &StateVector) -> Self {
        let a = state.amplitudes();
        DensityOperator {
            space: state.space().clone(),
            matrix: a * a.adjoint(),
            truncation_deficit: state.truncation_deficit(),
        }
    }

    pub fn maximally_mixed(space: &FockSpace) -> Self {
        let d = space.dimension();
        Self::from_parts(space.clone(), CMatrix::identity(d, d).unscale(d as f64))
    }

    /// Random full-rank state `G G^† / tr(G G^†)` with `G` a complex
    /// Gaussian matrix.
    pub fn random(space: &FockSpace, rng: &mut impl rand::Rng) -> Self {
        use rand_distr::{Distribution, StandardNormal};
        let d = space.dimension();
        let g = CMatrix::from_fn(d, d, |_, _| {
            C64::new(StandardNormal.sample(&mut *rng), StandardNormal.sample(&mut *rng))
        });
        let m = &g * g.adjoint();
        let tr = m.trace().re;
        let m = crate::fock::linalg::hermitian_part(&m.unscale(tr));
        Self::from_parts(space.clone(), m)
    }

    /// Convex combination; weights must be non-negative and sum to one.
    pub fn mixture(terms: &[(f64, DensityOperator)]) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
        let mut total = 0.0;
        let mut deficit = 0.0;
        let d = first.space.dimension();
        let mut matrix = CMatrix::zeros(d, d);
        for (p, rho) in terms {
            if *p < 0.0 {
                return Err(Error::InvalidState(format!("negative mixture weight {p}")));
            }
            if rho.space != first.space {
                return Err(Error::DimensionMismatch("mixture of states on different spaces".into()));
            }
            total += p;
            deficit += p * rho.truncation_deficit;
            matrix += &rho.matrix * C64::new(*p, 0.0);
        }
        if (total - 1.0).abs() > Tolerances::DEFAULT.trace {
            return Err(Error::InvalidState(format!("mixture weights sum to {total}")));
        }
        Ok(DensityOperator {
            space: first.space.clone(),
            matrix,
            truncation_deficit: deficit,
        })
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.space.dimension()
    }

    pub fn truncation_deficit(&self) -> f64 {
        self.truncation_deficit
    }

    pub(crate) fn with_deficit(mut self, deficit: f64) -> Self {
        self.truncation_deficit = deficit;
        self
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `tr(op rho)`.
    pub fn expectation(&self, op: &CMatrix) -> Result<C64> {
        let d = self.dimension();
        if op.shape() != (d, d) {
            return Err(Error::DimensionMismatch(format!("operator {:?} on dimension {d}", op.shape())));
        }
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += op[(i, j)] * self.matrix[(j, i)];
            }
        }
        Ok(acc)
    }

    /// Ascending eigenvalues of the re-symmetrized matrix.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Returns the smallest eigenvalue, or an error if it lies below the floor.
    pub fn check_positive(&self, tol: &Tolerances) -> Result<f64> {
        let min = self.min_eigenvalue();
        if min < tol.psd_floor {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(min)
    }

    pub fn max_abs_diff(&self, other: &DensityOperator) -> Result<f64> {
        max_abs_diff(&self.matrix, &other.matrix)
    }

    pub fn tensor(&self, other: &DensityOperator) -> Result<DensityOperator> {
        let space = self.space.concat(&other.space)?;
        Ok(DensityOperator {
            space,
            matrix: self.matrix.kronecker(&other.matrix),
            truncation_deficit: self.truncation_deficit + other.truncation_deficit - self.truncation_deficit * other.truncation_deficit,
        })
    }

    /// Reduced state on the registers in `keep` (kept in space order).
    pub fn partial_trace(&self, keep: &[&str]) -> Result<DensityOperator> {
        let positions = self.space.positions(keep)?;
        let split = RegisterSplit::new(&self.space, &positions)?;
        let dk = split.kept.dimension();
        let dr = split.rest_dim;
        let mut out = CMatrix::zeros(dk, dk);
        for k1 in 0..dk {
            for k2 in 0..dk {
                let mut acc = C64::new(0.0, 0.0);
                for r in 0..dr {
                    acc += self.matrix[(split.global[k1 * dr + r], split.global[k2 * dr + r])];
                }
                out[(k1, k2)] = acc;
            }
        }
        Ok(DensityOperator {
            space: split.kept,
            matrix: out,
            truncation_deficit: self.truncation_deficit,
        })
    }

    /// Reorder registers; `order` lists every register id exactly once.
    pub fn permute(&self, order: &[&str]) -> Result<DensityOperator> {
        let (space, map) = self.space.permuted(order)?;
        let d = space.dimension();
        Ok(DensityOperator {
            space,
            matrix: CMatrix::from_fn(d, d, |i, j| self.matrix[(map[i], map[j])]),
            truncation_deficit: self.truncation_deficit,
        })
    }

    /// `u rho u^dagger`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<DensityOperator> {
        let d = self.dimension();
        if u.shape() != (d, d) {
            return Err(Error::DimensionMismatch(format!("operator {:?} on dimension {d}", u.shape())));
        }
        Ok(DensityOperator {
            space: self.space.clone(),
            matrix: u * &self.matrix * u.adjoint(),
            truncation_deficit: self.truncation_deficit,
        })
    }

    /// Same matrix over a space with relabeled parties or ids of equal shape.
    pub fn with_space(&self, space: FockSpace) -> Result<DensityOperator> {
        let same_shape = space.len() == self.space.len()
            && space
                .registers()
                .iter()
                .zip(self.space.registers())
                .all(|(a, b)| a.cutoff == b.cutoff);
        if !same_shape {
            return Err(Error::DimensionMismatch("register cutoffs differ".into()));
        }
        Ok(DensityOperator {
            space,
            matrix: self.matrix.clone(),
            truncation_deficit: self.truncation_deficit,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Register;

    fn space_ab() -> FockSpace {
        FockSpace::new(vec![Register::new("A1", "A", 1), Register::new("B1", "B", 1)]).unwrap()
    }

    fn psi_plus() -> StateVector {
        let s = 0.5f64.sqrt();
        StateVector::new(
            space_ab(),
            crate::CVector::from_vec(vec![0.0, s, s, 0.0].into_iter().map(|x| C64::new(x, 0.0)).collect()),
        )
        .unwrap()
    }

    #[test]
    fn random_state_is_valid() {
        use rand::SeedableRng;
        let space = FockSpace::new(vec![Register::new("a", "A", 2), Register::new("b", "B", 1)]).unwrap();
        let rho = DensityOperator::random(&space, &mut rand_chacha::ChaCha8Rng::seed_from_u64(3));
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        assert!(rho.min_eigenvalue() > 0.0);
        let again = DensityOperator::random(&space, &mut rand_chacha::ChaCha8Rng::seed_from_u64(3));
        assert_eq!(rho, again);
    }

    #[test]
    fn rejects_invalid_matrices() {
        let s = space_ab();
        assert!(DensityOperator::new(s.clone(), CMatrix::identity(3, 3)).is_err());
        assert!(DensityOperator::new(s.clone(), CMatrix::identity(4, 4)).is_err());
        let mut m = CMatrix::identity(4, 4).unscale(4.0);
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(DensityOperator::new(s, m).is_err());
    }

    #[test]
    fn partial_trace_of_bell_like_state() {
        // <n|_B rho |n>_B summed by hand: Alice ends up maximally mixed
        let rho = psi_plus().to_density();
        let red = rho.partial_trace(&["A1"]).unwrap();
        let a = rho.matrix();
        let oracle = CMatrix::from_fn(2, 2, |i, j| a[(2 * i, 2 * j)] + a[(2 * i + 1, 2 * j + 1)]);
        assert!(max_abs_diff(red.matrix(), &oracle).unwrap() < 1e-15);
        assert!((red.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((red.matrix()[(1, 1)].re - 0.5).abs() < 1e-15);
        assert!(red.matrix()[(0, 1)].norm() < 1e-15);
        assert!((red.trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_recovers_factor() {
        let a = FockSpace::new(vec![Register::new("x", "A", 2)]).unwrap();
        let b = FockSpace::new(vec![Register::new("y", "B", 1)]).unwrap();
        let rho = DensityOperator::maximally_mixed(&a);
        let sigma = StateVector::ket(&b, &[1].into()).unwrap().to_density();
        let joint = rho.tensor(&sigma).unwrap();
        assert!((joint.trace() - 1.0).abs() < 1e-15);
        let back = joint.partial_trace(&["x"]).unwrap();
        assert!(back.max_abs_diff(&rho).unwrap() < 1e-15);
        assert!(joint.partial_trace(&["nope"]).is_err());
    }

    #[test]
    fn permute_reorders_tensor_factors() {
        let a = FockSpace::new(vec![Register::new("x", "A", 2)]).unwrap();
        let b = FockSpace::new(vec![Register::new("y", "B", 1)]).unwrap();
        let ra = StateVector::ket(&a, &[2].into()).unwrap().to_density();
        let rb = StateVector::ket(&b, &[1].into()).unwrap().to_density();
        let ab = ra.tensor(&rb).unwrap().permute(&["y", "x"]).unwrap();
        let ba = rb.tensor(&ra).unwrap();
        assert_eq!(ab, ba);
    }
}
