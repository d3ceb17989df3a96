//! Small dense helpers shared by the channel and analysis code.

use nalgebra::SymmetricEigen;

use super::{FockSpace, RegisterSplit};
use crate::{CMatrix, Error, Result};

/// `(m + m^dagger) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * crate::C64::new(0.5, 0.0)
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = SymmetricEigen::new(hermitian_part(m)).eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", a.shape(), b.shape())));
    }
    Ok(a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
}

/// Max-abs deviation from hermiticity.
pub fn hermiticity_gap(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut gap: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            gap = gap.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    gap
}

/// Max-abs entry of `[a, b]`.
pub fn commutator_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a * b - b * a))
}

/// Lift `op`, acting on the registers `ids` (in space order), to the whole
/// space as `op ⊗ 1`.
pub fn embed_operator(space: &FockSpace, ids: &[&str], op: &CMatrix) -> Result<CMatrix> {
    let positions = space.positions(ids)?;
    let split = RegisterSplit::new(space, &positions)?;
    let d = split.kept.dimension();
    if op.shape() != (d, d) {
        return Err(Error::DimensionMismatch(format!(
            "operator is {:?}, registers span dimension {d}",
            op.shape()
        )));
    }
    let n = space.dimension();
    Ok(CMatrix::from_fn(n, n, |i, j| {
        if split.other[i] == split.other[j] {
            op[(split.local[i], split.local[j])]
        } else {
            crate::C64::new(0.0, 0.0)
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Register;
    use crate::C64;

    #[test]
    fn embed_matches_kronecker() {
        let space = FockSpace::new(vec![Register::new("a", "A", 1), Register::new("b", "B", 2)]).unwrap();
        let x = CMatrix::from_fn(2, 2, |i, j| C64::new((i + 2 * j) as f64, i as f64 - j as f64));
        let y = CMatrix::from_fn(3, 3, |i, j| C64::new((3 * i + j) as f64, 0.5 * j as f64));
        let lifted_a = embed_operator(&space, &["a"], &x).unwrap();
        let lifted_b = embed_operator(&space, &["b"], &y).unwrap();
        assert!(max_abs_diff(&lifted_a, &x.kronecker(&CMatrix::identity(3, 3))).unwrap() < 1e-15);
        assert!(max_abs_diff(&lifted_b, &CMatrix::identity(2, 2).kronecker(&y)).unwrap() < 1e-15);
        assert!(max_abs_diff(&(lifted_a * lifted_b), &x.kronecker(&y)).unwrap() < 1e-12);
    }

    #[test]
    fn eigenvalues_sorted() {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(3.0, 0.0),
            C64::new(-1.0, 0.0),
            C64::new(0.5, 0.0),
        ]));
        assert_eq!(hermitian_eigenvalues(&m), vec![-1.0, 0.5, 3.0]);
    }
}
