//! Numerical tolerances shared across the crate.

/// Hermiticity tolerance (max-norm of `rho - rho^dagger`).
pub const HERM: f64 = 1e-10;
/// Unit-trace tolerance.
pub const TRACE: f64 = 1e-10;
/// Unit-norm tolerance for pure states.
pub const NORM: f64 = 1e-10;
/// Smallest eigenvalue accepted as nonnegative.
pub const PSD: f64 = 1e-9;
/// Schmidt coefficients above this count towards the Schmidt rank.
pub const RANK: f64 = 1e-9;
/// Unitarity tolerance (max-norm of `U U^dagger - I`).
pub const UNIT: f64 = 1e-12;
/// Schmidt reconstruction tolerance.
pub const RECON: f64 = 1e-10;
/// Witness values below `-VIOL` count as a violation.
pub const VIOL: f64 = 1e-10;
/// Largest imaginary residue tolerated in an expectation value.
pub const IMAG: f64 = 1e-10;
/// Filters whose output trace falls at or below this annihilate the state.
pub const FILTER: f64 = 1e-12;
