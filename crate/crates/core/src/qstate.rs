//! Bipartite states and the linear algebra underneath them.
//!
//! Basis convention: `|ij> = |i> (x) |j>` with the second index fastest, i.e.
//! the row of `|ij>` in an `(m n) x (m n)` matrix is `i * n + j`. This matches
//! the Kronecker product convention used by [`tensor_product`].

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Invariant, Result, Violation};
use crate::tol;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dimensions `(m, n)` of the two subsystems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BipartiteDims {
    m: usize,
    n: usize,
}

impl BipartiteDims {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m < 2 || n < 2 {
            return Err(Error::Dimension(format!(
                "subsystem dimensions must be at least 2, got ({m}, {n})"
            )));
        }
        Ok(BipartiteDims { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total(&self) -> usize {
        self.m * self.n
    }

    /// The same pair with the subsystems exchanged.
    pub fn swapped(&self) -> Self {
        BipartiteDims { m: self.n, n: self.m }
    }

    #[inline]
    pub(crate) fn index(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }
}

/// Which tensor factor an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// A validated density matrix with attached bipartite dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: BipartiteDims,
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// `|psi><psi|` for a pure state.
    pub fn from_pure(psi: &PureState) -> Self {
        let a = psi.amplitudes();
        DensityMatrix {
            dims: psi.dims(),
            matrix: a * a.adjoint(),
        }
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }
}

/// Checks every density-matrix invariant and returns the typed state, or the
/// full list of violated invariants.
pub fn validate_density(matrix: CMatrix, dims: BipartiteDims) -> Result<DensityMatrix> {
    if !matrix.is_square() || matrix.nrows() != dims.total() {
        return Err(Error::InvalidState(vec![Violation {
            invariant: Invariant::Dimension,
            magnitude: matrix.nrows().max(matrix.ncols()) as f64,
        }]));
    }
    let mut violations = Vec::new();
    let herm = hermiticity_deviation(&matrix);
    if herm > tol::HERM {
        violations.push(Violation {
            invariant: Invariant::Hermiticity,
            magnitude: herm,
        });
    }
    let trace_dev = (matrix.trace() - ONE).norm();
    if trace_dev > tol::TRACE {
        violations.push(Violation {
            invariant: Invariant::Trace,
            magnitude: trace_dev,
        });
    }
    let min_eig = min_eigenvalue(&hermitian_part(&matrix));
    if min_eig < -tol::PSD {
        violations.push(Violation {
            invariant: Invariant::Positivity,
            magnitude: min_eig,
        });
    }
    if violations.is_empty() {
        Ok(DensityMatrix { dims, matrix })
    } else {
        Err(Error::InvalidState(violations))
    }
}

/// A unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: BipartiteDims,
    amplitudes: CVector,
}

impl PureState {
    pub fn new(dims: BipartiteDims, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::Dimension(format!(
                "expected {} amplitudes, got {}",
                dims.total(),
                amplitudes.len()
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > tol::NORM {
            return Err(Error::NotNormalized(norm));
        }
        Ok(PureState { dims, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(dims: BipartiteDims, amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        PureState::new(dims, amplitudes / Complex64::from(norm))
    }

    /// `a (x) b` for local vectors of unit norm.
    pub fn product(a: &CVector, b: &CVector) -> Result<Self> {
        let dims = BipartiteDims::new(a.len(), b.len())?;
        PureState::new(dims, a.kronecker(b))
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// The `m x n` coefficient matrix `C[i][j] = <ij|psi>`.
    pub fn coefficient_matrix(&self) -> CMatrix {
        let (m, n) = (self.dims.m, self.dims.n);
        CMatrix::from_fn(m, n, |i, j| self.amplitudes[i * n + j])
    }

    /// The same vector with the subsystem order reversed.
    pub fn swapped(&self) -> PureState {
        let (m, n) = (self.dims.m, self.dims.n);
        let amps = CVector::from_fn(m * n, |k, _| {
            let (j, i) = (k / m, k % m);
            self.amplitudes[i * n + j]
        });
        PureState {
            dims: self.dims.swapped(),
            amplitudes: amps,
        }
    }
}

/// Schmidt coefficients (descending) together with the local frames.
///
/// `(u^dagger (x) v^dagger) psi = sum_i coeffs[i] |ii>`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtForm {
    pub coeffs: Vec<f64>,
    pub u: CMatrix,
    pub v: CMatrix,
}

impl SchmidtForm {
    /// Number of coefficients above [`tol::RANK`].
    pub fn rank(&self) -> usize {
        self.coeffs.iter().filter(|&&a| a > tol::RANK).count()
    }
}

/// Kronecker product of two square matrices.
pub fn tensor_product(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() || !b.is_square() {
        return Err(Error::Dimension(format!(
            "tensor_product needs square inputs, got {}x{} and {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    Ok(a.kronecker(b))
}

/// Reduced state after tracing out `traced`.
pub fn partial_trace(rho: &DensityMatrix, traced: Subsystem) -> CMatrix {
    partial_trace_raw(&rho.matrix, rho.dims, traced)
}

pub(crate) fn partial_trace_raw(mat: &CMatrix, dims: BipartiteDims, traced: Subsystem) -> CMatrix {
    let (m, n) = (dims.m, dims.n);
    match traced {
        Subsystem::Second => CMatrix::from_fn(m, m, |i, k| {
            (0..n).map(|j| mat[(dims.index(i, j), dims.index(k, j))]).sum()
        }),
        Subsystem::First => CMatrix::from_fn(n, n, |j, l| {
            (0..m).map(|i| mat[(dims.index(i, j), dims.index(i, l))]).sum()
        }),
    }
}

/// Transpose of the `transposed` tensor factor.
pub fn partial_transpose(rho: &DensityMatrix, transposed: Subsystem) -> CMatrix {
    partial_transpose_raw(&rho.matrix, rho.dims, transposed)
}

pub(crate) fn partial_transpose_raw(
    mat: &CMatrix,
    dims: BipartiteDims,
    transposed: Subsystem,
) -> CMatrix {
    let d = dims.total();
    let n = dims.n;
    CMatrix::from_fn(d, d, |r, c| {
        let (i, j) = (r / n, r % n);
        let (k, l) = (c / n, c % n);
        match transposed {
            Subsystem::First => mat[(dims.index(k, j), dims.index(i, l))],
            Subsystem::Second => mat[(dims.index(i, l), dims.index(k, j))],
        }
    })
}

/// Schmidt decomposition via the SVD of the coefficient matrix.
///
/// Coefficients are real, nonnegative, and sorted descending (stable on ties).
pub fn schmidt_decompose(psi: &PureState) -> SchmidtForm {
    let (m, n) = (psi.dims.m, psi.dims.n);
    let k = m.min(n);
    let svd = psi.coefficient_matrix().svd(true, true);
    let left = svd.u.expect("svd computed with u");
    let right_t = svd.v_t.expect("svd computed with v_t");

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

    let coeffs: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    // C = W S X^dagger, so psi = sum_k s_k |w_k> (x) |conj(x_k)>; the second
    // factor's vectors are the rows of v_t read as columns.
    let u_cols = CMatrix::from_fn(m, k, |r, c| left[(r, order[c])]);
    let v_cols = CMatrix::from_fn(n, k, |r, c| right_t[(order[c], r)]);
    SchmidtForm {
        coeffs,
        u: complete_unitary(&u_cols),
        v: complete_unitary(&v_cols),
    }
}

/// Pure-state concurrence `sqrt(2 (1 - tr rho_1^2))` from the reduced state.
pub fn concurrence_pure(psi: &PureState) -> f64 {
    let rho = DensityMatrix::from_pure(psi);
    let reduced = partial_trace(&rho, Subsystem::Second);
    let purity: f64 = reduced.iter().map(|z| z.norm_sqr()).sum();
    (2.0 * (1.0 - purity)).max(0.0).sqrt()
}

/// Haar-distributed `d x d` unitary: QR of a complex Ginibre matrix with the
/// phases of `diag(R)` moved into `Q`.
pub fn haar_random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    assert!(d >= 1, "unitary dimension must be positive");
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let ginibre = CMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = ginibre.qr();
    let r = qr.r();
    let mut q = qr.q();
    for c in 0..d {
        let rcc = r[(c, c)];
        let phase = if rcc.norm() > 0.0 { rcc / rcc.norm() } else { ONE };
        for row in 0..d {
            q[(row, c)] *= phase;
        }
    }
    q
}

/// Haar-random unit vector of length `d` (first column of a Haar unitary
/// has the same law; sampled directly from a normalized Gaussian).
pub fn haar_random_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVector {
    loop {
        let v = CVector::from_fn(d, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let norm = v.norm();
        if norm > 1e-300 {
            return v / Complex64::from(norm);
        }
    }
}

/// `max |U U^dagger - I|`; `f64::INFINITY` for non-square input.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let d = u.nrows();
    let prod = u * u.adjoint();
    max_abs_diff(&prod, &CMatrix::identity(d, d))
}

pub(crate) fn check_unitary(u: &CMatrix, d: usize) -> Result<()> {
    if u.nrows() != d || u.ncols() != d {
        return Err(Error::Dimension(format!(
            "expected a {d}x{d} unitary, got {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    let dev = unitarity_deviation(u);
    if dev > tol::UNIT {
        return Err(Error::Unitarity(dev));
    }
    Ok(())
}

/// `max |a - b|` entrywise.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn hermiticity_deviation(mat: &CMatrix) -> f64 {
    max_abs_diff(mat, &mat.adjoint())
}

pub(crate) fn hermitian_part(mat: &CMatrix) -> CMatrix {
    (mat + mat.adjoint()) * Complex64::from(0.5)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(mat: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(hermitian_part(mat))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn min_eigenvalue(mat: &CMatrix) -> f64 {
    hermitian_eigenvalues(mat)[0]
}

/// Eigenvector for the smallest eigenvalue of a Hermitian matrix.
pub(crate) fn min_eigenpair(mat: &CMatrix) -> (f64, CVector) {
    let eig = SymmetricEigen::new(hermitian_part(mat));
    let (idx, val) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty matrix");
    (val, eig.eigenvectors.column(idx).into_owned())
}

/// Extends a set of orthonormal columns to a full unitary with Gram-Schmidt
/// over the standard basis.
pub(crate) fn complete_unitary(cols: &CMatrix) -> CMatrix {
    let d = cols.nrows();
    let mut basis: Vec<CVector> = cols.column_iter().map(|c| c.into_owned()).collect();
    while basis.len() < d {
        // pick the standard basis vector with the largest residual
        let mut best: Option<(f64, CVector)> = None;
        for e in 0..d {
            let mut v = CVector::zeros(d);
            v[e] = ONE;
            let r = orthogonalize(&v, &basis);
            let norm = r.norm();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, r));
            }
        }
        let (norm, r) = best.expect("a residual exists while the basis is incomplete");
        basis.push(r / Complex64::from(norm));
    }
    CMatrix::from_columns(&basis)
}

fn orthogonalize(v: &CVector, basis: &[CVector]) -> CVector {
    let mut r = v.clone();
    // two passes keep the result orthogonal to machine precision
    for _ in 0..2 {
        for b in basis {
            let c = b.dotc(&r);
            r -= b * c;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn dims(m: usize, n: usize) -> BipartiteDims {
        BipartiteDims::new(m, n).unwrap()
    }

    fn bell() -> PureState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(
            dims(2, 2),
            CVector::from_vec(vec![c(s), ZERO, ZERO, c(s)]),
        )
        .unwrap()
    }

    fn basis_state(m: usize, n: usize, i: usize, j: usize) -> PureState {
        let mut v = CVector::zeros(m * n);
        v[i * n + j] = ONE;
        PureState::new(dims(m, n), v).unwrap()
    }

    #[test]
    fn dims_reject_qubit_free_sizes() {
        assert!(BipartiteDims::new(1, 3).is_err());
        assert!(BipartiteDims::new(2, 2).is_ok());
    }

    #[test]
    fn tensor_product_examples() {
        let i2 = CMatrix::identity(2, 2);
        assert_eq!(tensor_product(&i2, &i2).unwrap(), CMatrix::identity(4, 4));

        let z = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0), c(-1.0)]));
        let zi = tensor_product(&z, &i2).unwrap();
        let expected =
            CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0), c(1.0), c(-1.0), c(-1.0)]));
        assert_eq!(zi, expected);

        let zz = tensor_product(&z, &z).unwrap();
        let psi = bell();
        let ev = psi.amplitudes().dotc(&(zz * psi.amplitudes()));
        assert_abs_diff_eq!(ev.re, 1.0, epsilon = 1e-15);

        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(tensor_product(&rect, &i2), Err(Error::Dimension(_))));
    }

    #[test]
    fn partial_trace_examples() {
        let rho = DensityMatrix::from_pure(&bell());
        let red = partial_trace(&rho, Subsystem::Second);
        assert_abs_diff_eq!(
            max_abs_diff(&red, &(CMatrix::identity(2, 2) * c(0.5))),
            0.0,
            epsilon = 1e-15
        );

        let rho01 = DensityMatrix::from_pure(&basis_state(2, 2, 0, 1));
        let red = partial_trace(&rho01, Subsystem::First);
        let mut one = CMatrix::zeros(2, 2);
        one[(1, 1)] = ONE;
        assert_eq!(red, one);
    }

    #[test]
    fn partial_trace_of_product_recovers_factor() {
        let rho_a = CMatrix::from_row_slice(
            3,
            3,
            &[c(0.5), Complex64::new(0.1, 0.2), ZERO, Complex64::new(0.1, -0.2), c(0.3), ZERO, ZERO, ZERO, c(0.2)],
        );
        let rho_b = CMatrix::from_row_slice(2, 2, &[c(0.6), c(0.1), c(0.1), c(0.4)]);
        let prod = validate_density(tensor_product(&rho_a, &rho_b).unwrap(), dims(3, 2)).unwrap();
        assert!(max_abs_diff(&partial_trace(&prod, Subsystem::Second), &rho_a) < 1e-15);
        assert!(max_abs_diff(&partial_trace(&prod, Subsystem::First), &rho_b) < 1e-15);
        let pt = partial_transpose(&prod, Subsystem::First);
        let expected = tensor_product(&rho_a.transpose(), &rho_b).unwrap();
        assert!(max_abs_diff(&pt, &expected) < 1e-15);
    }

    #[test]
    fn bell_partial_transpose_min_eigenvalue() {
        let rho = DensityMatrix::from_pure(&bell());
        let pt = partial_transpose(&rho, Subsystem::First);
        assert_abs_diff_eq!(min_eigenvalue(&pt), -0.5, epsilon = 1e-12);
    }

    #[test]
    fn schmidt_examples() {
        let s = schmidt_decompose(&basis_state(2, 2, 0, 0));
        assert_abs_diff_eq!(s.coeffs[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.coeffs[1], 0.0, epsilon = 1e-12);
        assert_eq!(s.rank(), 1);

        let s = schmidt_decompose(&bell());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(s.coeffs[0], h, epsilon = 1e-12);
        assert_abs_diff_eq!(s.coeffs[1], h, epsilon = 1e-12);

        let psi = PureState::new(
            dims(2, 2),
            CVector::from_vec(vec![c(0.8f64.sqrt()), ZERO, ZERO, c(0.2f64.sqrt())]),
        )
        .unwrap();
        let s = schmidt_decompose(&psi);
        assert_abs_diff_eq!(s.coeffs[0], 0.8f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(s.coeffs[1], 0.2f64.sqrt(), epsilon = 1e-12);
        // u, v diagonal up to phases
        for mat in [&s.u, &s.v] {
            assert!(mat[(0, 1)].norm() < 1e-12 && mat[(1, 0)].norm() < 1e-12);
            assert_abs_diff_eq!(mat[(0, 0)].norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn concurrence_examples() {
        assert_abs_diff_eq!(concurrence_pure(&basis_state(2, 2, 0, 1)), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(concurrence_pure(&bell()), 1.0, epsilon = 1e-12);
        let psi = PureState::new(
            dims(2, 2),
            CVector::from_vec(vec![ZERO, c(0.6), c(0.8), ZERO]),
        )
        .unwrap();
        assert_abs_diff_eq!(concurrence_pure(&psi), 0.96, epsilon = 1e-12);
    }

    #[test]
    fn validation_examples() {
        let mixed = CMatrix::identity(4, 4) * c(0.25);
        assert!(validate_density(mixed, dims(2, 2)).is_ok());

        let raw = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0), c(-0.001), ZERO, ZERO]));
        let raw = &raw / raw.trace();
        let err = validate_density(raw, dims(2, 2)).unwrap_err();
        assert_eq!(err.invariants(), vec![Invariant::Positivity]);

        let err = validate_density(CMatrix::identity(3, 3) / c(3.0), dims(2, 2)).unwrap_err();
        assert_eq!(err.invariants(), vec![Invariant::Dimension]);

        let mut bad = CMatrix::identity(4, 4) * c(0.3);
        bad[(0, 1)] = c(0.5);
        let err = validate_density(bad, dims(2, 2)).unwrap_err();
        let inv = err.invariants();
        assert!(inv.contains(&Invariant::Hermiticity));
        assert!(inv.contains(&Invariant::Trace));
    }

    #[test]
    fn haar_unitary_basics() {
        let mut rng = crate::rng::root(11);
        let u = haar_random_unitary(1, &mut rng);
        assert_abs_diff_eq!(u[(0, 0)].norm(), 1.0, epsilon = 1e-14);
        for d in 2..=6 {
            let u = haar_random_unitary(d, &mut rng);
            assert!(unitarity_deviation(&u) <= 1e-12);
        }
    }

    #[test]
    fn complete_unitary_fills_missing_columns() {
        let mut col = CMatrix::zeros(4, 1);
        col[(1, 0)] = c(0.6);
        col[(2, 0)] = Complex64::new(0.0, 0.8);
        let u = complete_unitary(&col);
        assert!(unitarity_deviation(&u) < 1e-14);
        assert_eq!(u.column(0), col.column(0));
    }

    #[test]
    fn swap_round_trip() {
        let mut rng = crate::rng::root(3);
        let psi = PureState::new(dims(2, 3), haar_random_vector(6, &mut rng)).unwrap();
        assert_eq!(psi.swapped().swapped(), psi);
        assert_eq!(psi.swapped().coefficient_matrix(), psi.coefficient_matrix().transpose());
    }
}
