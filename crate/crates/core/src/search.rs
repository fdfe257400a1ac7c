//! Violating frames: the constructive Schmidt frame for pure states, and the
//! maximal violation `F(rho) = max_{U,V} max(-w, 0)` by restarted simplex
//! search over the unitary groups.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::qstate::{
    haar_random_unitary, schmidt_decompose, BipartiteDims, CMatrix, CVector, DensityMatrix,
    PureState, SchmidtForm,
};
use crate::rng;
use crate::simplex::{self, SimplexOptions};
use crate::tol;
use crate::witness::{evaluate_in_frame, evaluate_witness_weighted, Weighting, WitnessEvaluation};

/// Real coordinates of a Hermitian generator `G`; the unitary is `exp(iG)`.
///
/// Layout for a `d x d` generator: `d` diagonal entries, then for each pair
/// `i < j` (row-major) the real and imaginary part of `G[i][j]`. That spans
/// every Hermitian matrix, so the map onto the unitary group is surjective.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryParams(pub Vec<f64>);

impl UnitaryParams {
    pub fn zeros(d: usize) -> Self {
        UnitaryParams(vec![0.0; d * d])
    }

    pub fn to_unitary(&self, d: usize) -> Result<CMatrix> {
        param_to_unitary(&self.0, d)
    }
}

pub fn param_to_unitary(params: &[f64], d: usize) -> Result<CMatrix> {
    if params.len() != d * d {
        return Err(Error::Dimension(format!(
            "a {d}x{d} unitary needs {} parameters, got {}",
            d * d,
            params.len()
        )));
    }
    Ok(exp_i_hermitian(params, d))
}

fn exp_i_hermitian(params: &[f64], d: usize) -> CMatrix {
    if params.iter().all(|&x| x == 0.0) {
        return CMatrix::identity(d, d);
    }
    let mut g = CMatrix::zeros(d, d);
    for i in 0..d {
        g[(i, i)] = Complex64::from(params[i]);
    }
    let mut k = d;
    for i in 0..d {
        for j in (i + 1)..d {
            let z = Complex64::new(params[k], params[k + 1]);
            g[(i, j)] = z;
            g[(j, i)] = z.conj();
            k += 2;
        }
    }
    let eig = SymmetricEigen::new(g);
    let w = &eig.eigenvectors;
    let phases = CMatrix::from_diagonal(&CVector::from_iterator(
        d,
        eig.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, l)),
    ));
    w * phases * w.adjoint()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
    pub weighting: Weighting,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            restarts: 50,
            max_iters: 500,
            tol: 1e-8,
            seed: 0,
            weighting: Weighting::Standard,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if self.restarts < 1 {
            return Err(Error::OutOfRange("restarts must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::OutOfRange(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

/// Best frame found by [`max_violation`]. `f_value` is a lower bound on the
/// true maximal violation.
#[derive(Debug, Clone, PartialEq)]
pub struct ViolationReport {
    pub f_value: f64,
    pub best_u: CMatrix,
    pub best_v: CMatrix,
    pub best_eval: WitnessEvaluation,
    pub restarts_run: usize,
    pub evaluations: usize,
    /// Restart that produced the best frame.
    pub best_restart: usize,
    /// Restarts whose simplex met the convergence test within `max_iters`.
    pub converged_restarts: usize,
}

impl ViolationReport {
    /// True when the best frame violates beyond [`tol::VIOL`].
    pub fn detected(&self) -> bool {
        self.f_value > tol::VIOL
    }
}

/// Why the constructive frame does not exist.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductStateReport {
    pub schmidt_coeffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConstructiveOutcome {
    /// Schmidt rank at least 2: the Schmidt frame violates.
    Violation {
        u: CMatrix,
        v: CMatrix,
        eval: WitnessEvaluation,
        schmidt: SchmidtForm,
    },
    /// Schmidt rank 1: no frame can violate.
    ProductState(ProductStateReport),
}

/// The violating frame for an entangled pure state: the Schmidt frames
/// `(U, V)` with `(U^dagger (x) V^dagger)|phi> = sum_i a_i |ii>`. There
/// `h = p = 0` and `q = a_0 a_1 / 4 > 0`, so `w < 0`.
pub fn constructive_pure_violation(phi: &PureState) -> ConstructiveOutcome {
    let schmidt = schmidt_decompose(phi);
    if schmidt.rank() < 2 {
        return ConstructiveOutcome::ProductState(ProductStateReport {
            schmidt_coeffs: schmidt.coeffs,
        });
    }
    let rho = DensityMatrix::from_pure(phi);
    let eval = evaluate_witness_weighted(&rho, &schmidt.u, &schmidt.v, Weighting::Standard)
        .expect("Schmidt frames are unitary with matching dimensions");
    ConstructiveOutcome::Violation {
        u: schmidt.u.clone(),
        v: schmidt.v.clone(),
        eval,
        schmidt,
    }
}

struct RestartOutcome {
    w: f64,
    u: CMatrix,
    v: CMatrix,
    evaluations: usize,
    converged: bool,
}

/// Maximizes `-w` over local frames.
///
/// Restart 0 starts at the identity frames; when `rho` is an entangled pure
/// state, restart 1 starts at its Schmidt frames; the rest start at Haar
/// random frames drawn from per-restart substreams of `cfg.seed`. Each
/// restart optimizes `U_0 exp(iG_a)`, `V_0 exp(iG_b)` over the generator
/// coordinates. Results depend only on `(rho, cfg)`.
pub fn max_violation(rho: &DensityMatrix, cfg: &SearchConfig) -> Result<ViolationReport> {
    max_violation_with(rho, cfg, Execution::Parallel)
}

pub fn max_violation_with(
    rho: &DensityMatrix,
    cfg: &SearchConfig,
    exec: Execution,
) -> Result<ViolationReport> {
    cfg.validate()?;
    let dims = rho.dims();
    let (m, n) = (dims.m(), dims.n());
    let constructive = pure_schmidt_frame(rho);

    let outcomes = par::map_indexed(cfg.restarts, exec, |k| {
        let (u0, v0) = match (k, &constructive) {
            (0, _) => (CMatrix::identity(m, m), CMatrix::identity(n, n)),
            (1, Some((u, v))) => (u.clone(), v.clone()),
            _ => {
                let mut rng = rng::substream(cfg.seed, k as u64);
                (haar_random_unitary(m, &mut rng), haar_random_unitary(n, &mut rng))
            }
        };
        run_restart(rho.matrix(), dims, &u0, &v0, cfg)
    });

    let mut best = 0;
    for (k, o) in outcomes.iter().enumerate() {
        if o.w < outcomes[best].w {
            best = k;
        }
    }
    let evaluations = outcomes.iter().map(|o| o.evaluations).sum();
    let converged_restarts = outcomes.iter().filter(|o| o.converged).count();
    let winner = &outcomes[best];
    let best_eval = evaluate_witness_weighted(rho, &winner.u, &winner.v, cfg.weighting)?;
    Ok(ViolationReport {
        f_value: best_eval.violation(),
        best_u: winner.u.clone(),
        best_v: winner.v.clone(),
        best_eval,
        restarts_run: cfg.restarts,
        evaluations,
        best_restart: best,
        converged_restarts,
    })
}

fn run_restart(
    mat: &CMatrix,
    dims: BipartiteDims,
    u0: &CMatrix,
    v0: &CMatrix,
    cfg: &SearchConfig,
) -> RestartOutcome {
    let (m, n) = (dims.m(), dims.n());
    let frames = |x: &[f64]| {
        let (pa, pb) = x.split_at(m * m);
        (u0 * exp_i_hermitian(pa, m), v0 * exp_i_hermitian(pb, n))
    };
    let objective = |x: &[f64]| {
        let (u, v) = frames(x);
        evaluate_in_frame(mat, dims, &u, &v, cfg.weighting).w_val
    };
    let start = vec![0.0; m * m + n * n];
    let res = simplex::minimize(
        objective,
        &start,
        &SimplexOptions {
            max_iters: cfg.max_iters,
            tol: cfg.tol,
            initial_step: 0.5,
        },
    );
    let (u, v) = frames(&res.x);
    RestartOutcome {
        w: res.fval,
        u,
        v,
        evaluations: res.evaluations,
        converged: res.converged,
    }
}

/// Schmidt frames of `rho` when it is an entangled pure state.
fn pure_schmidt_frame(rho: &DensityMatrix) -> Option<(CMatrix, CMatrix)> {
    if rho.purity() < 1.0 - tol::TRACE {
        return None;
    }
    let eig = SymmetricEigen::new(rho.matrix().clone());
    let (idx, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))?;
    let psi = PureState::normalized(rho.dims(), eig.eigenvectors.column(idx).into_owned()).ok()?;
    match constructive_pure_violation(&psi) {
        ConstructiveOutcome::Violation { u, v, .. } => Some((u, v)),
        ConstructiveOutcome::ProductState(_) => None,
    }
}
