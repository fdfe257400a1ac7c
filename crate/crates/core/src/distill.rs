//! Distillability evidence: N-copy states, local filters onto two-dimensional
//! subspaces, and witness violations of the filtered states.
//!
//! A state is distillable iff some `N` and some local filters `A`, `B` onto
//! qubits leave an entangled two-qubit state from `rho^(x)N`. Searches here
//! are bounded (`N <= 2`, dimension `<= 256`), so a negative result only
//! means no evidence was found at that budget.

use num_complex::Complex64;

use crate::criteria::{ppt_check, ppt_check_raw, PptResult};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::qstate::{
    haar_random_unitary, min_eigenpair, min_eigenvalue, partial_transpose, schmidt_decompose,
    validate_density, BipartiteDims, CMatrix, DensityMatrix, PureState, Subsystem,
};
use crate::rng;
use crate::search::{max_violation_with, SearchConfig, ViolationReport};
use crate::tol;
use crate::witness::{evaluate_operators_raw, Weighting, WitnessEvaluation};
use crate::zoo;

/// Largest total dimension accepted for N-copy states.
pub const MAX_DIMENSION: usize = 256;
/// Largest number of copies.
pub const MAX_COPIES: usize = 2;
/// Frame-search restarts used on each filtered two-qubit state.
pub const INNER_RESTARTS: usize = 4;

/// Local operators applied as `(a (x) b) rho (a (x) b)^dagger`. Rows are the
/// target dimension, columns the source dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterPair {
    pub a: CMatrix,
    pub b: CMatrix,
}

impl FilterPair {
    pub fn new(a: CMatrix, b: CMatrix) -> Result<Self> {
        for (name, op) in [("a", &a), ("b", &b)] {
            if op.nrows() < 2 {
                return Err(Error::Dimension(format!(
                    "filter {name} must map onto at least two dimensions, has {} rows",
                    op.nrows()
                )));
            }
            if op.iter().all(|z| z.norm() == 0.0) {
                return Err(Error::OutOfRange(format!("filter {name} is zero")));
            }
        }
        Ok(FilterPair { a, b })
    }

    pub fn output_dims(&self) -> Result<BipartiteDims> {
        BipartiteDims::new(self.a.nrows(), self.b.nrows())
    }
}

/// `rho^(x)N` with all first-subsystem copies ahead of the second-subsystem
/// copies, so the result has dims `(m^N, n^N)`.
pub fn n_fold_copy(rho: &DensityMatrix, n_copies: usize) -> Result<DensityMatrix> {
    if n_copies == 0 {
        return Err(Error::OutOfRange("need at least one copy".into()));
    }
    let dims = rho.dims();
    if n_copies > MAX_COPIES {
        return Err(Error::CapExceeded(format!(
            "at most {MAX_COPIES} copies are supported, got {n_copies}"
        )));
    }
    let total = dims
        .total()
        .checked_pow(n_copies as u32)
        .filter(|&t| t <= MAX_DIMENSION)
        .ok_or_else(|| {
            Error::CapExceeded(format!(
                "{n_copies} copies of a {}-dimensional state exceed dimension {MAX_DIMENSION}",
                dims.total()
            ))
        })?;
    if n_copies == 1 {
        return Ok(rho.clone());
    }
    let (m, n) = (dims.m(), dims.n());
    let raw = rho.matrix().kronecker(rho.matrix());
    // old order (a1 b1 a2 b2), new order (a1 a2 b1 b2)
    let old_index = |k: usize| {
        let b2 = k % n;
        let b1 = (k / n) % n;
        let a2 = (k / (n * n)) % m;
        let a1 = k / (n * n * m);
        ((a1 * n + b1) * m + a2) * n + b2
    };
    let perm: Vec<usize> = (0..total).map(old_index).collect();
    let mat = CMatrix::from_fn(total, total, |r, c| raw[(perm[r], perm[c])]);
    validate_density(mat, BipartiteDims::new(m * m, n * n)?)
}

/// `(a (x) b) mat (a (x) b)^dagger / tr(...)` without a positivity check.
pub fn apply_filter_raw(mat: &CMatrix, dims: BipartiteDims, filter: &FilterPair) -> Result<CMatrix> {
    if filter.a.ncols() != dims.m() || filter.b.ncols() != dims.n() {
        return Err(Error::Dimension(format!(
            "filters act on ({}, {}) but the state has dims ({}, {})",
            filter.a.ncols(),
            filter.b.ncols(),
            dims.m(),
            dims.n()
        )));
    }
    let k = filter.a.kronecker(&filter.b);
    let out = &k * mat * k.adjoint();
    let tr = out.trace().re;
    if tr <= tol::FILTER {
        return Err(Error::FilterAnnihilates(tr));
    }
    let out = (&out + out.adjoint()) * Complex64::from(0.5 / tr);
    Ok(out)
}

/// Filters and renormalizes `rho`; the result lives in dims `out_dims`,
/// which must equal the filters' row counts.
pub fn apply_filter(
    rho: &DensityMatrix,
    filter: &FilterPair,
    out_dims: BipartiteDims,
) -> Result<DensityMatrix> {
    if filter.output_dims()? != out_dims {
        return Err(Error::Dimension(format!(
            "filters map onto ({}, {}), requested ({}, {})",
            filter.a.nrows(),
            filter.b.nrows(),
            out_dims.m(),
            out_dims.n()
        )));
    }
    let out = apply_filter_raw(rho.matrix(), rho.dims(), filter)?;
    validate_density(out, out_dims)
}

/// The distillation example's filters, truncated to their ranges:
/// `A = |0><0| + |1><1|` (2x4) and `B = (|0>+|1>)(<0|+<1|) + |2><2|` (3x4).
pub fn example4_filters() -> FilterPair {
    let one = Complex64::from(1.0);
    let mut a = CMatrix::zeros(2, 4);
    a[(0, 0)] = one;
    a[(1, 1)] = one;
    let mut b = CMatrix::zeros(3, 4);
    for (r, c) in [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)] {
        b[(r, c)] = one;
    }
    FilterPair { a, b }
}

/// The example's frame: `U = I_2`,
/// `V = |1><2| + (|0>(<0|+<1|) + |2>(<0|-<1|))/sqrt 2`.
pub fn example4_frame() -> (CMatrix, CMatrix) {
    let s = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
    let mut v = CMatrix::zeros(3, 3);
    v[(1, 2)] = Complex64::from(1.0);
    v[(0, 0)] = s;
    v[(0, 1)] = s;
    v[(2, 0)] = s;
    v[(2, 1)] = -s;
    (CMatrix::identity(2, 2), v)
}

/// Outcome of running the example's filters and frame at one `p`.
///
/// The source operator is not positive semidefinite (see
/// [`zoo::example4_state`]), so everything here is computed on raw matrices
/// and the smallest eigenvalues are reported alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct Example4Report {
    pub p: f64,
    pub source_min_eigenvalue: f64,
    pub filtered: CMatrix,
    pub filtered_dims: BipartiteDims,
    pub filtered_min_eigenvalue: f64,
    pub eval: WitnessEvaluation,
    pub ppt: PptResult,
    pub reduction: crate::criteria::ReductionResult,
    /// `w < -tol` at the example's frame.
    pub distillable_evidence: bool,
    /// Witness verdict agrees with the PPT verdict on the filtered matrix.
    pub consistent_with_ppt: bool,
    /// Both source and filtered matrices are valid density matrices.
    pub states_valid: bool,
}

pub fn example4_check(p: f64, weighting: Weighting) -> Result<Example4Report> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::OutOfRange(format!("p must lie in (0, 1], got {p}")));
    }
    let (source, dims) = zoo::example4_operator(p);
    let filter = example4_filters();
    let filtered = apply_filter_raw(&source, dims, &filter)?;
    let filtered_dims = filter.output_dims()?;
    let (u, v) = example4_frame();
    let eval = evaluate_operators_raw(&filtered, filtered_dims, &u, &v, weighting)?;
    let ppt = ppt_check_raw(&filtered, filtered_dims);
    let source_min_eigenvalue = min_eigenvalue(&source);
    let filtered_min_eigenvalue = min_eigenvalue(&filtered);
    Ok(Example4Report {
        p,
        source_min_eigenvalue,
        filtered_min_eigenvalue,
        eval,
        ppt,
        reduction: crate::criteria::reduction_check_raw(&source, dims),
        distillable_evidence: eval.violated,
        consistent_with_ppt: eval.violated == ppt.is_npt,
        states_valid: source_min_eigenvalue >= -tol::PSD && filtered_min_eigenvalue >= -tol::PSD,
        filtered,
        filtered_dims,
    })
}

/// Best evidence from [`distill_search`].
#[derive(Debug, Clone, PartialEq)]
pub struct DistillReport {
    pub n_copies: usize,
    pub filter: FilterPair,
    pub projected_state: DensityMatrix,
    pub eval: ViolationReport,
    pub projected_ppt: PptResult,
    pub distillable_evidence: bool,
    /// Filter samples tried.
    pub samples: usize,
    /// Sample that produced the reported filter.
    pub best_sample: usize,
}

/// Searches local qubit filters on `rho^(x)N` for a filtered state that
/// violates the witness.
///
/// `cfg.restarts` filter samples are drawn: sample 0 projects both sides
/// onto `span{|0>, |1>}`; when the N-copy state is NPT, sample 1 keeps the
/// two leading Schmidt vectors of the most negative eigenvector of its
/// partial transpose; the rest are random isometries from Haar unitaries.
/// Each filtered state gets a [`max_violation`](crate::search::max_violation)
/// run with [`INNER_RESTARTS`] restarts.
pub fn distill_search(rho: &DensityMatrix, n_copies: usize, cfg: &SearchConfig) -> Result<DistillReport> {
    distill_search_with(rho, n_copies, cfg, Execution::Parallel)
}

pub fn distill_search_with(
    rho: &DensityMatrix,
    n_copies: usize,
    cfg: &SearchConfig,
    exec: Execution,
) -> Result<DistillReport> {
    if cfg.restarts < 1 {
        return Err(Error::OutOfRange("restarts must be at least 1".into()));
    }
    let copies = n_fold_copy(rho, n_copies)?;
    let dims = copies.dims();
    let qubits = BipartiteDims::new(2, 2)?;
    let guided = negative_eigenvector_filter(&copies);

    let candidates = par::map_indexed(cfg.restarts, exec, |k| {
        let filter = match (k, &guided) {
            (0, _) => computational_filter(dims),
            (1, Some(f)) => f.clone(),
            _ => {
                let mut r = rng::substream(cfg.seed, k as u64);
                FilterPair {
                    a: random_isometry(dims.m(), &mut r),
                    b: random_isometry(dims.n(), &mut r),
                }
            }
        };
        let projected = match apply_filter(&copies, &filter, qubits) {
            Ok(s) => s,
            Err(Error::FilterAnnihilates(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let inner = SearchConfig {
            restarts: INNER_RESTARTS,
            seed: cfg.seed.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(k as u64 + 1)),
            ..cfg.clone()
        };
        let report = max_violation_with(&projected, &inner, Execution::Sequential)?;
        Ok(Some((filter, projected, report)))
    });

    let mut best: Option<(usize, FilterPair, DensityMatrix, ViolationReport)> = None;
    for (k, cand) in candidates.into_iter().enumerate() {
        if let Some((filter, projected, report)) = cand? {
            let better = best.as_ref().is_none_or(|b| report.f_value > b.3.f_value);
            if better {
                best = Some((k, filter, projected, report));
            }
        }
    }
    let (best_sample, filter, projected_state, eval) =
        best.ok_or(Error::FilterAnnihilates(0.0))?;
    let projected_ppt = ppt_check(&projected_state);
    Ok(DistillReport {
        n_copies,
        filter,
        distillable_evidence: eval.detected(),
        projected_ppt,
        projected_state,
        eval,
        samples: cfg.restarts,
        best_sample,
    })
}

fn computational_filter(dims: BipartiteDims) -> FilterPair {
    let proj = |d: usize| {
        let mut a = CMatrix::zeros(2, d);
        a[(0, 0)] = Complex64::from(1.0);
        a[(1, 1)] = Complex64::from(1.0);
        a
    };
    FilterPair {
        a: proj(dims.m()),
        b: proj(dims.n()),
    }
}

/// Projection onto the span of the first two columns of a Haar unitary.
fn random_isometry<R: rand::Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let u = haar_random_unitary(d, rng);
    u.columns(0, 2).adjoint()
}

fn negative_eigenvector_filter(rho: &DensityMatrix) -> Option<FilterPair> {
    let pt = partial_transpose(rho, Subsystem::First);
    let (val, vec) = min_eigenpair(&pt);
    if val >= -tol::PSD {
        return None;
    }
    let chi = PureState::normalized(rho.dims(), vec).ok()?;
    let s = schmidt_decompose(&chi);
    // the first side carries the transpose, so its rows are unconjugated
    let a = s.u.columns(0, 2).transpose();
    let b = s.v.columns(0, 2).adjoint();
    Some(FilterPair { a, b })
}
