//! Nonlinear entanglement witness for arbitrary `m x n` bipartite states.
//!
//! The witness is built from local observables `A_i = U lambda_i U^dagger`,
//! `B_j = V lambda_j V^dagger` (plus the two off-diagonal observables on the
//! `{|0>, |1>}` block of each side) and combines three expectations
//! `h`, `p`, `q` into `w = h^2 - p^2 - q^2`. Separable states satisfy
//! `w >= 0` for every local frame `(U, V)`; every entangled pure state has a
//! frame with `w < 0`.
//!
//! Module map:
//!
//! * [`qstate`]: states, tensor products, partial trace/transpose, Schmidt
//!   decomposition, Haar sampling.
//! * [`witness`]: observables, the `(H, P, Q)` operators and their evaluation.
//! * [`search`]: constructive violating frames and maximal-violation search.
//! * [`criteria`]: PPT and reduction criteria used as reference oracles.
//! * [`distill`]: N-copy states, local filters, distillability evidence.
//! * [`zoo`]: named state families and random ensembles.
//! * [`par`]: data-parallel helpers with a sequential fallback.

pub mod criteria;
pub mod distill;
mod error;
pub mod par;
pub mod qstate;
pub mod rng;
pub mod search;
mod simplex;
pub mod tol;
pub mod witness;
pub mod zoo;

pub use error::{Error, Invariant, Result, Violation};
pub use qstate::{BipartiteDims, CMatrix, CVector, DensityMatrix, PureState, SchmidtForm, Subsystem};
pub use search::{SearchConfig, ViolationReport};
pub use witness::{Weighting, WitnessEvaluation, WitnessOperators};
