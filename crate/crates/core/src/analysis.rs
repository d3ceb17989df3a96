//! Discrimination and entanglement diagnostics.

use nalgebra::SymmetricEigen;

use crate::fock::linalg::{hermitian_eigenvalues, hermitian_part};
use crate::fock::{DensityOperator, PartyPartition, RegisterSplit};
use crate::{CMatrix, Error, Result, Tolerances, C64};

fn same_space(rho: &DensityOperator, sigma: &DensityOperator) -> Result<()> {
    if rho.space() != sigma.space() {
        return Err(Error::DimensionMismatch(format!(
            "dimension {} vs {}",
            rho.dimension(),
            sigma.dimension()
        )));
    }
    Ok(())
}

/// Trace norm of a Hermitian matrix.
fn trace_norm(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).iter().map(|x| x.abs()).sum()
}

/// `||rho - sigma||_1 / 2`.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    same_space(rho, sigma)?;
    Ok(0.5 * trace_norm(&(rho.matrix() - sigma.matrix())))
}

/// Optimal two-hypothesis discrimination with joint measurements.
#[derive(Debug, Clone)]
pub struct DiscriminationBound {
    /// `(1 + ||p rho - (1-p) sigma||_1) / 2`.
    pub success: f64,
    /// Projector onto the positive eigenspace of `p rho - (1-p) sigma`;
    /// guessing `rho` on this outcome attains `success`.
    pub guess_rho: CMatrix,
    pub positive_rank: usize,
}

pub fn helstrom_success(rho: &DensityOperator, sigma: &DensityOperator, prior: f64) -> Result<DiscriminationBound> {
    same_space(rho, sigma)?;
    if !(0.0..=1.0).contains(&prior) {
        return Err(Error::Domain(format!("prior {prior} outside [0, 1]")));
    }
    let gamma = hermitian_part(&(rho.matrix() * C64::new(prior, 0.0) - sigma.matrix() * C64::new(1.0 - prior, 0.0)));
    let eig = SymmetricEigen::new(gamma);
    let d = rho.dimension();
    let mut guess_rho = CMatrix::zeros(d, d);
    let mut positive_rank = 0;
    let mut norm = 0.0;
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        norm += lambda.abs();
        if lambda > 0.0 {
            let v = eig.eigenvectors.column(k);
            guess_rho += v * v.adjoint();
            positive_rank += 1;
        }
    }
    Ok(DiscriminationBound {
        success: 0.5 * (1.0 + norm),
        guess_rho,
        positive_rank,
    })
}

/// Transpose on `party`'s factor of a bipartite state.
pub fn partial_transpose(rho: &DensityOperator, partition: &PartyPartition, party: &str) -> Result<CMatrix> {
    let parties = partition.parties();
    if parties.len() != 2 {
        return Err(Error::InvalidPartition(format!(
            "partial transpose needs two parties, partition has {}",
            parties.len()
        )));
    }
    let space = rho.space();
    let ids = partition.registers_of(space, party)?;
    let split = RegisterSplit::new(space, &space.positions(&ids)?)?;
    let m = rho.matrix();
    let d = space.dimension();
    let rd = split.rest_dim;
    Ok(CMatrix::from_fn(d, d, |i, j| {
        let (li, ri) = (split.local[i], split.other[i]);
        let (lj, rj) = (split.local[j], split.other[j]);
        m[(split.global[lj * rd + ri], split.global[li * rd + rj])]
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PptReport {
    pub ppt: bool,
    pub min_eigenvalue: f64,
    /// PPT implies separability only for 2x2 and 2x3 splits.
    pub conclusive: bool,
}

pub fn ppt_check(rho: &DensityOperator, partition: &PartyPartition, party: &str, tol: &Tolerances) -> Result<PptReport> {
    let pt = partial_transpose(rho, partition, party)?;
    let min_eigenvalue = hermitian_eigenvalues(&pt)[0];
    let space = rho.space();
    let local = partition.registers_of(space, party)?;
    let dl: usize = local.iter().map(|id| space.register(id).map(|r| r.dim())).product::<Result<usize>>()?;
    let dims = {
        let mut v = [dl, space.dimension() / dl];
        v.sort_unstable();
        v
    };
    Ok(PptReport {
        ppt: min_eigenvalue >= tol.psd_floor,
        min_eigenvalue,
        conclusive: dims == [2, 2] || dims == [2, 3],
    })
}
