//! Reference criteria: positive partial transpose and the reduction criterion.

use crate::qstate::{
    min_eigenvalue, partial_trace_raw, partial_transpose_raw, BipartiteDims, CMatrix,
    DensityMatrix, Subsystem,
};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PptResult {
    /// Smallest eigenvalue of the partial transpose over the first subsystem.
    pub min_eigenvalue: f64,
    pub is_npt: bool,
}

pub fn ppt_check(rho: &DensityMatrix) -> PptResult {
    ppt_check_raw(rho.matrix(), rho.dims())
}

/// PPT test on a matrix that need not be a valid state.
pub fn ppt_check_raw(mat: &CMatrix, dims: BipartiteDims) -> PptResult {
    let min_eigenvalue = min_eigenvalue(&partial_transpose_raw(mat, dims, Subsystem::First));
    PptResult {
        min_eigenvalue,
        is_npt: min_eigenvalue < -tol::PSD,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionResult {
    /// Smallest eigenvalue of `rho_A (x) I - rho`.
    pub min_eig_a: f64,
    /// Smallest eigenvalue of `I (x) rho_B - rho`.
    pub min_eig_b: f64,
    pub violated: bool,
}

pub fn reduction_check(rho: &DensityMatrix) -> ReductionResult {
    reduction_check_raw(rho.matrix(), rho.dims())
}

pub fn reduction_check_raw(mat: &CMatrix, dims: BipartiteDims) -> ReductionResult {
    let (m, n) = (dims.m(), dims.n());
    let rho_a = partial_trace_raw(mat, dims, Subsystem::Second);
    let rho_b = partial_trace_raw(mat, dims, Subsystem::First);
    let min_eig_a = min_eigenvalue(&(rho_a.kronecker(&CMatrix::identity(n, n)) - mat));
    let min_eig_b = min_eigenvalue(&(CMatrix::identity(m, m).kronecker(&rho_b) - mat));
    ReductionResult {
        min_eig_a,
        min_eig_b,
        violated: min_eig_a < -tol::PSD || min_eig_b < -tol::PSD,
    }
}
