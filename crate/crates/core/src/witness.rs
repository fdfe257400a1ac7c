//! Local observables, the witness operators `(H, P, Q)`, and their evaluation.
//!
//! For each side with dimension `d` the base observables are
//! `lambda_0 = I`, `lambda_i = |0><0| - |i><i|` (`i = 1..d-1`),
//! `mu_1 = |0><1| + |1><0|` and `mu_2 = i|0><1| - i|1><0|`. Rotated by local
//! unitaries `U`, `V` they define
//!
//! ```text
//! H = 1/(mn)      sum_ij (1 - m/2 d_i1 - n/2 d_j1) A_i (x) B_j
//! P = 1/(2 m^2 n^2) sum_ij (m d_i1 - n d_j1)        A_i (x) B_j
//! Q = 1/16 (A'_1 (x) B'_1 - A'_2 (x) B'_2)
//! ```
//!
//! and the nonlinear witness `w = <H>^2 - <P>^2 - <Q>^2`, nonnegative on every
//! separable state.
//!
//! The sums collapse: in the identity frame `H = (|01><01| + |10><10|)/2`,
//! `P = (|01><01| - |10><10|)/(2mn)` and `Q = (|00><11| + |11><00|)/8`.
//! [`evaluate_in_frame`] uses that reduced form; [`evaluate_witness`] goes
//! through the full operator sums. Tests hold the two routes together.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qstate::{check_unitary, BipartiteDims, CMatrix, CVector, DensityMatrix, ONE, ZERO};
use crate::tol;

/// Relative weights of `<P>` and `<Q>` inside `w`.
///
/// `Standard` uses the operators exactly as defined above. `ProductTight`
/// rescales `<P>` by `mn` and `<Q>` by `4`; under that weighting the
/// pure-product bound `h^2 >= p^2 + q^2` is attained with equality by real
/// product states, and in `2 x n` the maximal violation vanishes exactly on
/// PPT states. For `3 x 3` it is the weighting of [`qutrit_inequality_sides`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weighting {
    #[default]
    Standard,
    ProductTight,
}

impl Weighting {
    /// Multipliers applied to `(<P>, <Q>)`.
    pub fn scales(self, dims: BipartiteDims) -> (f64, f64) {
        match self {
            Weighting::Standard => (1.0, 1.0),
            Weighting::ProductTight => (dims.total() as f64, 4.0),
        }
    }
}

/// `lambda_0 .. lambda_{d-1}`, `mu_1`, `mu_2` on one subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableBasis {
    pub d: usize,
    pub lambdas: Vec<CMatrix>,
    pub mu1: CMatrix,
    pub mu2: CMatrix,
}

pub fn build_base_observables(d: usize) -> Result<ObservableBasis> {
    if d < 2 {
        return Err(Error::Dimension(format!(
            "observables need dimension at least 2, got {d}"
        )));
    }
    let mut lambdas = Vec::with_capacity(d);
    lambdas.push(CMatrix::identity(d, d));
    for i in 1..d {
        let mut l = CMatrix::zeros(d, d);
        l[(0, 0)] = ONE;
        l[(i, i)] = -ONE;
        lambdas.push(l);
    }
    let mut mu1 = CMatrix::zeros(d, d);
    mu1[(0, 1)] = ONE;
    mu1[(1, 0)] = ONE;
    let mut mu2 = CMatrix::zeros(d, d);
    mu2[(0, 1)] = Complex64::i();
    mu2[(1, 0)] = -Complex64::i();
    Ok(ObservableBasis {
        d,
        lambdas,
        mu1,
        mu2,
    })
}

/// Base observables conjugated by a local unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct RotatedBasis {
    /// `U lambda_i U^dagger`; index 0 is the identity.
    pub diag: Vec<CMatrix>,
    /// `U mu_1 U^dagger`, `U mu_2 U^dagger`.
    pub offdiag: [CMatrix; 2],
}

impl ObservableBasis {
    pub fn rotate(&self, u: &CMatrix) -> RotatedBasis {
        let ud = u.adjoint();
        let conj = |x: &CMatrix| u * x * &ud;
        let mut diag: Vec<CMatrix> = self.lambdas.iter().map(conj).collect();
        // keep A_0 exactly the identity
        diag[0] = CMatrix::identity(self.d, self.d);
        RotatedBasis {
            diag,
            offdiag: [conj(&self.mu1), conj(&self.mu2)],
        }
    }
}

/// Both sides' rotated observables together with the frames.
#[derive(Debug, Clone, PartialEq)]
pub struct RotatedObservables {
    pub first: RotatedBasis,
    pub second: RotatedBasis,
    pub u: CMatrix,
    pub v: CMatrix,
}

impl RotatedObservables {
    pub fn new(dims: BipartiteDims, u: &CMatrix, v: &CMatrix) -> Result<Self> {
        check_unitary(u, dims.m())?;
        check_unitary(v, dims.n())?;
        Ok(RotatedObservables {
            first: build_base_observables(dims.m())?.rotate(u),
            second: build_base_observables(dims.n())?.rotate(v),
            u: u.clone(),
            v: v.clone(),
        })
    }
}

/// The operator triple `(H, P, Q)` for one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessOperators {
    pub h: CMatrix,
    pub p: CMatrix,
    pub q: CMatrix,
}

/// Builds `(H, P, Q)` from the full sums over rotated observables.
pub fn build_hpq(dims: BipartiteDims, u: &CMatrix, v: &CMatrix) -> Result<WitnessOperators> {
    let obs = RotatedObservables::new(dims, u, v)?;
    let (m, n) = (dims.m(), dims.n());
    let (mf, nf) = (m as f64, n as f64);
    let side = dims.total();
    let mut h = CMatrix::zeros(side, side);
    let mut p = CMatrix::zeros(side, side);
    let delta = |k: usize| if k == 1 { 1.0 } else { 0.0 };
    for (i, a) in obs.first.diag.iter().enumerate() {
        for (j, b) in obs.second.diag.iter().enumerate() {
            let ch = (1.0 - mf / 2.0 * delta(i) - nf / 2.0 * delta(j)) / (mf * nf);
            let cp = (mf * delta(i) - nf * delta(j)) / (2.0 * mf * mf * nf * nf);
            if ch == 0.0 && cp == 0.0 {
                continue;
            }
            let ab = a.kronecker(b);
            if ch != 0.0 {
                h += &ab * Complex64::from(ch);
            }
            if cp != 0.0 {
                p += &ab * Complex64::from(cp);
            }
        }
    }
    let [a1, a2] = &obs.first.offdiag;
    let [b1, b2] = &obs.second.offdiag;
    let q = (a1.kronecker(b1) - a2.kronecker(b2)) * Complex64::from(1.0 / 16.0);
    Ok(WitnessOperators { h, p, q })
}

/// Expectations `h, p, q` and the witness value `w = h^2 - p^2 - q^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessEvaluation {
    pub h_val: f64,
    pub p_val: f64,
    pub q_val: f64,
    pub w_val: f64,
    pub violated: bool,
}

impl WitnessEvaluation {
    pub fn from_expectations(h_val: f64, p_val: f64, q_val: f64) -> Self {
        let w_val = h_val * h_val - p_val * p_val - q_val * q_val;
        WitnessEvaluation {
            h_val,
            p_val,
            q_val,
            w_val,
            violated: w_val < -tol::VIOL,
        }
    }

    /// `max(-w, 0)`.
    pub fn violation(&self) -> f64 {
        (-self.w_val).max(0.0)
    }
}

/// `tr(rho op)`, failing if the imaginary residue exceeds [`tol::IMAG`].
pub fn expectation(rho: &CMatrix, op: &CMatrix) -> Result<f64> {
    if rho.shape() != op.shape() {
        return Err(Error::Dimension(format!(
            "operator shape {:?} does not match state shape {:?}",
            op.shape(),
            rho.shape()
        )));
    }
    // tr(rho op) = sum_ij rho_ij op_ji
    let mut acc = ZERO;
    for i in 0..rho.nrows() {
        for j in 0..rho.ncols() {
            acc += rho[(i, j)] * op[(j, i)];
        }
    }
    if acc.im.abs() > tol::IMAG {
        return Err(Error::Numeric(format!(
            "expectation has imaginary residue {:e}",
            acc.im
        )));
    }
    Ok(acc.re)
}

/// Evaluates the witness at frame `(u, v)` through the full operator sums.
pub fn evaluate_witness(rho: &DensityMatrix, u: &CMatrix, v: &CMatrix) -> Result<WitnessEvaluation> {
    evaluate_witness_weighted(rho, u, v, Weighting::Standard)
}

pub fn evaluate_witness_weighted(
    rho: &DensityMatrix,
    u: &CMatrix,
    v: &CMatrix,
    weighting: Weighting,
) -> Result<WitnessEvaluation> {
    evaluate_operators_raw(rho.matrix(), rho.dims(), u, v, weighting)
}

pub(crate) fn evaluate_operators_raw(
    mat: &CMatrix,
    dims: BipartiteDims,
    u: &CMatrix,
    v: &CMatrix,
    weighting: Weighting,
) -> Result<WitnessEvaluation> {
    let ops = build_hpq(dims, u, v)?;
    let (sp, sq) = weighting.scales(dims);
    Ok(WitnessEvaluation::from_expectations(
        expectation(mat, &ops.h)?,
        sp * expectation(mat, &ops.p)?,
        sq * expectation(mat, &ops.q)?,
    ))
}

/// Evaluates the witness through the reduced form of `(H, P, Q)`: only the
/// matrix elements of `rho` between `u_a (x) v_b` for `a, b in {0, 1}` enter.
///
/// Cheap enough for optimizer inner loops. Frames are not checked for
/// unitarity here; callers pass matrices built to be unitary.
pub fn evaluate_in_frame(
    mat: &CMatrix,
    dims: BipartiteDims,
    u: &CMatrix,
    v: &CMatrix,
    weighting: Weighting,
) -> WitnessEvaluation {
    let (m, n) = (dims.m(), dims.n());
    let e = |a: usize, b: usize| -> CVector {
        CVector::from_fn(m * n, |k, _| u[(k / n, a)] * v[(k % n, b)])
    };
    let (e00, e01, e10, e11) = (e(0, 0), e(0, 1), e(1, 0), e(1, 1));
    let r0101 = e01.dotc(&(mat * &e01)).re;
    let r1010 = e10.dotc(&(mat * &e10)).re;
    let r0011 = e00.dotc(&(mat * &e11)).re;
    let (sp, sq) = weighting.scales(dims);
    let mn = (m * n) as f64;
    WitnessEvaluation::from_expectations(
        0.5 * (r0101 + r1010),
        sp * (r0101 - r1010) / (2.0 * mn),
        sq * 0.25 * r0011,
    )
}

/// Closed-form `h` and `p^2 + q^2` for the product state `a (x) b` in the
/// identity frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductClosedForm {
    pub h_val: f64,
    pub pq_sq: f64,
}

/// `h = (|a0 b1|^2 + |a1 b0|^2)/2` and, for `ProductTight`,
/// `p^2 + q^2 = (|a0 b1|^2 - |a1 b0|^2)^2/4 + Re(a0 a1* b0 b1*)^2`.
/// `Standard` divides the two terms by `(mn)^2` and `16`.
pub fn pure_product_closed_form(a: &CVector, b: &CVector, weighting: Weighting) -> Result<ProductClosedForm> {
    for v in [a, b] {
        let norm = v.norm();
        if (norm - 1.0).abs() > tol::NORM {
            return Err(Error::NotNormalized(norm));
        }
    }
    let dims = BipartiteDims::new(a.len(), b.len())?;
    let x = (a[0] * b[1]).norm_sqr();
    let y = (a[1] * b[0]).norm_sqr();
    let re = (a[0] * a[1].conj() * b[0] * b[1].conj()).re;
    let (sp, sq) = weighting.scales(dims);
    let mn = dims.total() as f64;
    let p_term = (x - y).powi(2) / 4.0 * (sp / mn).powi(2);
    let q_term = re * re * (sq / 4.0).powi(2);
    Ok(ProductClosedForm {
        h_val: 0.5 * (x + y),
        pq_sq: p_term + q_term,
    })
}

/// The two sides of the literal `3 x 3` identity-frame inequality
/// `4 <M>^2 >= 36 <N>^2 + 81 <mu_1 mu_1 - mu_2 mu_2>^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QutritSides {
    pub lhs: f64,
    pub rhs: f64,
}

impl QutritSides {
    pub fn violated(&self) -> bool {
        self.lhs < self.rhs - tol::VIOL
    }
}

/// Evaluates both sides of the `3 x 3` inequality with
/// `M = 2II - I l1 + 2 I l2 - l1 I - 4 l1 l1 - l1 l2 + 2 l2 I - l2 l1 + 2 l2 l2`
/// and `N = I l1 - l1 I - l1 l2 + l2 l1`.
pub fn qutrit_inequality_sides(rho: &DensityMatrix) -> Result<QutritSides> {
    qutrit_sides_raw(rho.matrix(), rho.dims())
}

pub(crate) fn qutrit_sides_raw(mat: &CMatrix, dims: BipartiteDims) -> Result<QutritSides> {
    if dims.m() != 3 || dims.n() != 3 {
        return Err(Error::Dimension(format!(
            "the qutrit inequality needs 3x3 dims, got ({}, {})",
            dims.m(),
            dims.n()
        )));
    }
    let b = build_base_observables(3)?;
    let l = &b.lambdas;
    let term = |c: f64, x: &CMatrix, y: &CMatrix| x.kronecker(y) * Complex64::from(c);
    let m_op = term(2.0, &l[0], &l[0]) + term(-1.0, &l[0], &l[1]) + term(2.0, &l[0], &l[2])
        + term(-1.0, &l[1], &l[0])
        + term(-4.0, &l[1], &l[1])
        + term(-1.0, &l[1], &l[2])
        + term(2.0, &l[2], &l[0])
        + term(-1.0, &l[2], &l[1])
        + term(2.0, &l[2], &l[2]);
    let n_op = term(1.0, &l[0], &l[1]) - term(1.0, &l[1], &l[0]) - term(1.0, &l[1], &l[2])
        + term(1.0, &l[2], &l[1]);
    let mu_op = b.mu1.kronecker(&b.mu1) - b.mu2.kronecker(&b.mu2);
    let mv = expectation(mat, &m_op)?;
    let nv = expectation(mat, &n_op)?;
    let muv = expectation(mat, &mu_op)?;
    Ok(QutritSides {
        lhs: 4.0 * mv * mv,
        rhs: 36.0 * nv * nv + 81.0 * muv * muv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{hermitian_eigenvalues, max_abs_diff, validate_density, PureState};
    use approx::assert_abs_diff_eq;

    fn c(x: f64) -> Complex64 {
        Complex64::from(x)
    }

    fn dims(m: usize, n: usize) -> BipartiteDims {
        BipartiteDims::new(m, n).unwrap()
    }

    fn eye(d: usize) -> CMatrix {
        CMatrix::identity(d, d)
    }

    fn bell_rho() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = PureState::new(dims(2, 2), CVector::from_vec(vec![c(s), ZERO, ZERO, c(s)])).unwrap();
        DensityMatrix::from_pure(&psi)
    }

    fn spectrum_counts(mat: &CMatrix) -> (usize, usize, usize) {
        let ev = hermitian_eigenvalues(mat);
        let count = |t: f64| ev.iter().filter(|&&x| (x - t).abs() < 1e-12).count();
        (count(-1.0), count(0.0), count(1.0))
    }

    #[test]
    fn base_observables_qubit() {
        let b = build_base_observables(2).unwrap();
        let z = CMatrix::from_diagonal(&CVector::from_vec(vec![ONE, -ONE]));
        assert_eq!(b.lambdas[1], z);
        let x = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        assert_eq!(b.mu1, x);
        // i|0><1| - i|1><0| is sigma_y up to sign
        let y = CMatrix::from_row_slice(2, 2, &[ZERO, -Complex64::i(), Complex64::i(), ZERO]);
        assert_eq!(b.mu2, -y);
        assert!(build_base_observables(1).is_err());
    }

    #[test]
    fn base_observables_qutrit() {
        let b = build_base_observables(3).unwrap();
        let l2 = CMatrix::from_diagonal(&CVector::from_vec(vec![ONE, ZERO, -ONE]));
        assert_eq!(b.lambdas[2], l2);
        for d in 2..=5 {
            let b = build_base_observables(d).unwrap();
            assert_eq!(spectrum_counts(&b.mu2), (1, d - 2, 1));
            for op in b.lambdas.iter().skip(1).chain([&b.mu1, &b.mu2]) {
                assert!(max_abs_diff(op, &op.adjoint()) == 0.0);
                assert_eq!(op.trace(), ZERO);
                assert_eq!(spectrum_counts(op), (1, d - 2, 1));
            }
        }
    }

    #[test]
    fn hpq_qubit_identity_frame() {
        let ops = build_hpq(dims(2, 2), &eye(2), &eye(2)).unwrap();
        let z = CMatrix::from_diagonal(&CVector::from_vec(vec![ONE, -ONE]));
        let expected = (eye(4) - z.kronecker(&z)) * c(0.25);
        assert!(max_abs_diff(&ops.h, &expected) < 1e-15);
    }

    #[test]
    fn hpq_traces() {
        for (m, n) in [(2, 2), (2, 3), (3, 3), (4, 3), (3, 5)] {
            let ops = build_hpq(dims(m, n), &eye(m), &eye(n)).unwrap();
            assert_abs_diff_eq!(ops.h.trace().re, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(ops.p.trace().norm(), 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(ops.q.trace().norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn hpq_reduced_form() {
        // H = (|01><01| + |10><10|)/2, P = (|01><01| - |10><10|)/(2mn), Q = (|00><11| + h.c.)/8
        for (m, n) in [(2, 2), (3, 2), (3, 4)] {
            let d = dims(m, n);
            let ops = build_hpq(d, &eye(m), &eye(n)).unwrap();
            let idx = |i, j| d.index(i, j);
            let mut h = CMatrix::zeros(m * n, m * n);
            h[(idx(0, 1), idx(0, 1))] = c(0.5);
            h[(idx(1, 0), idx(1, 0))] = c(0.5);
            let mut p = CMatrix::zeros(m * n, m * n);
            let pc = 1.0 / (2.0 * (m * n) as f64);
            p[(idx(0, 1), idx(0, 1))] = c(pc);
            p[(idx(1, 0), idx(1, 0))] = c(-pc);
            let mut q = CMatrix::zeros(m * n, m * n);
            q[(idx(0, 0), idx(1, 1))] = c(0.125);
            q[(idx(1, 1), idx(0, 0))] = c(0.125);
            assert!(max_abs_diff(&ops.h, &h) < 1e-15);
            assert!(max_abs_diff(&ops.p, &p) < 1e-15);
            assert!(max_abs_diff(&ops.q, &q) < 1e-15);
        }
    }

    #[test]
    fn p_support_for_equal_dims() {
        // with m = n the (1,1) coefficient of P cancels; only rows/cols with
        // exactly one index equal to 1 contribute
        let (m, n) = (3.0f64, 3.0f64);
        for i in 0..3 {
            for j in 0..3 {
                let di = if i == 1 { 1.0 } else { 0.0 };
                let dj = if j == 1 { 1.0 } else { 0.0 };
                let coef = m * di - n * dj;
                assert_eq!(coef != 0.0, (i == 1) ^ (j == 1));
            }
        }
    }

    #[test]
    fn non_unitary_frame_rejected() {
        let bad = eye(2) * c(1.1);
        assert!(matches!(build_hpq(dims(2, 2), &bad, &eye(2)), Err(Error::Unitarity(_))));
        assert!(matches!(build_hpq(dims(2, 2), &eye(3), &eye(2)), Err(Error::Dimension(_))));
    }

    #[test]
    fn bell_identity_frame() {
        let ev = evaluate_witness(&bell_rho(), &eye(2), &eye(2)).unwrap();
        assert_abs_diff_eq!(ev.h_val, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ev.p_val, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ev.q_val, 0.125, epsilon = 1e-12);
        assert_abs_diff_eq!(ev.w_val, -1.0 / 64.0, epsilon = 1e-12);
        assert!(ev.violated);
    }

    #[test]
    fn computational_product_is_boundary() {
        for (m, n) in [(2, 2), (3, 4)] {
            let mut mat = CMatrix::zeros(m * n, m * n);
            mat[(0, 0)] = ONE;
            let rho = validate_density(mat, dims(m, n)).unwrap();
            let ev = evaluate_witness(&rho, &eye(m), &eye(n)).unwrap();
            assert_eq!((ev.h_val, ev.p_val, ev.q_val, ev.w_val), (0.0, 0.0, 0.0, 0.0));
            assert!(!ev.violated);
        }
    }

    #[test]
    fn plus_plus_state() {
        // h = 1/4, p = 0, q = <Q> = (1/16)(<xx> - <yy>) = 1/16, so w = 1/16 - 1/256
        let half = c(0.5);
        let psi = PureState::new(dims(2, 2), CVector::from_vec(vec![half; 4])).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        let ev = evaluate_witness(&rho, &eye(2), &eye(2)).unwrap();
        assert_abs_diff_eq!(ev.h_val, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(ev.p_val, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ev.q_val, 1.0 / 16.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ev.w_val, 15.0 / 256.0, epsilon = 1e-12);
        // tight weighting puts it on the boundary
        let ev = evaluate_witness_weighted(&rho, &eye(2), &eye(2), Weighting::ProductTight).unwrap();
        assert_abs_diff_eq!(ev.q_val, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(ev.w_val, 0.0, epsilon = 1e-12);
        assert!(!ev.violated);
    }

    #[test]
    fn closed_form_examples() {
        let v = |xs: &[f64]| CVector::from_iterator(xs.len(), xs.iter().map(|&x| c(x)));
        let cf = pure_product_closed_form(&v(&[1.0, 0.0]), &v(&[0.0, 1.0]), Weighting::ProductTight).unwrap();
        assert_abs_diff_eq!(cf.h_val, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(cf.pq_sq, 0.25, epsilon = 1e-15);
        let cf = pure_product_closed_form(&v(&[1.0, 0.0]), &v(&[0.0, 1.0]), Weighting::Standard).unwrap();
        assert_abs_diff_eq!(cf.pq_sq, 1.0 / 64.0, epsilon = 1e-15);

        let cf = pure_product_closed_form(&v(&[1.0, 0.0, 0.0]), &v(&[1.0, 0.0, 0.0]), Weighting::Standard).unwrap();
        assert_eq!((cf.h_val, cf.pq_sq), (0.0, 0.0));

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let cf = pure_product_closed_form(&v(&[s, s]), &v(&[s, s]), Weighting::ProductTight).unwrap();
        assert_abs_diff_eq!(cf.h_val, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(cf.pq_sq, 1.0 / 16.0, epsilon = 1e-15);

        assert!(matches!(
            pure_product_closed_form(&v(&[1.0, 1.0]), &v(&[1.0, 0.0]), Weighting::Standard),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn qutrit_sides_on_basis_state() {
        let mut mat = CMatrix::zeros(9, 9);
        mat[(1, 1)] = ONE;
        let rho = validate_density(mat, dims(3, 3)).unwrap();
        let s = qutrit_inequality_sides(&rho).unwrap();
        assert_abs_diff_eq!(s.lhs, 324.0, epsilon = 1e-9);
        assert_abs_diff_eq!(s.rhs, 324.0, epsilon = 1e-9);
        assert!(!s.violated());
        assert!(qutrit_inequality_sides(&bell_rho()).is_err());
    }

    #[test]
    fn expectation_rejects_imaginary_residue() {
        let rho = bell_rho();
        let mut op = CMatrix::zeros(4, 4);
        op[(0, 0)] = Complex64::i();
        assert!(matches!(expectation(rho.matrix(), &op), Err(Error::Numeric(_))));
    }
}
