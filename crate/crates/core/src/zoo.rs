//! Named state families and random ensembles.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};
use crate::qstate::{
    haar_random_vector, validate_density, BipartiteDims, CMatrix, CVector, DensityMatrix,
    PureState, ONE,
};
use crate::rng;

fn c(x: f64) -> Complex64 {
    Complex64::from(x)
}

fn square_dims(n: usize) -> Result<BipartiteDims> {
    BipartiteDims::new(n, n)
}

/// `|psi+> = (1/sqrt n) sum_i |ii>`.
pub fn max_entangled(n: usize) -> Result<PureState> {
    let dims = square_dims(n)?;
    let amp = c(1.0 / (n as f64).sqrt());
    let mut v = CVector::zeros(n * n);
    for i in 0..n {
        v[dims.index(i, i)] = amp;
    }
    PureState::new(dims, v)
}

/// `|00><00|` in `m x n`.
pub fn product_ground(m: usize, n: usize) -> Result<DensityMatrix> {
    let dims = BipartiteDims::new(m, n)?;
    let mut mat = CMatrix::zeros(m * n, m * n);
    mat[(0, 0)] = ONE;
    validate_density(mat, dims)
}

fn projector(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// `sigma_alpha = 2/7 |psi+><psi+| + alpha/7 sigma_+ + (5 - alpha)/7 sigma_-`
/// in `3 x 3`, with `sigma_+` uniform on `{01, 12, 20}` and `sigma_-` on
/// `{10, 21, 02}`.
pub fn horodecki_state(alpha: f64) -> Result<DensityMatrix> {
    if !(2.0..=5.0).contains(&alpha) {
        return Err(Error::OutOfRange(format!("alpha must lie in [2, 5], got {alpha}")));
    }
    let dims = square_dims(3)?;
    let psi = max_entangled(3)?;
    let mut mat = projector(psi.amplitudes()) * c(2.0 / 7.0);
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        let k = dims.index(i, j);
        mat[(k, k)] += c(alpha / 21.0);
    }
    for (i, j) in [(1, 0), (2, 1), (0, 2)] {
        let k = dims.index(i, j);
        mat[(k, k)] += c((5.0 - alpha) / 21.0);
    }
    validate_density(mat, dims)
}

/// `(1 - f)/(n^2 - 1) I + (n^2 f - 1)/(n^2 - 1) |psi+><psi+|` with `I` the
/// full `n^2`-dimensional identity; `<psi+|rho|psi+> = f`.
pub fn isotropic_state(n: usize, f: f64) -> Result<DensityMatrix> {
    let dims = square_dims(n)?;
    let d2 = (n * n) as f64;
    let psi = max_entangled(n)?;
    let mat = CMatrix::identity(n * n, n * n) * c((1.0 - f) / (d2 - 1.0))
        + projector(psi.amplitudes()) * c((d2 * f - 1.0) / (d2 - 1.0));
    validate_density(mat, dims)
}

/// The swap `sum_ij |ij><ji|` on `n x n`.
pub fn swap_operator(n: usize) -> CMatrix {
    CMatrix::from_fn(n * n, n * n, |r, col| {
        let (i, j) = (r / n, r % n);
        if col == j * n + i {
            ONE
        } else {
            Complex64::from(0.0)
        }
    })
}

/// `(n - f)/(n^3 - n) I + (n f - 1)/(n^3 - n) Swap` with `f` in `[-1, 1]`.
pub fn werner_state(n: usize, f: f64) -> Result<DensityMatrix> {
    let dims = square_dims(n)?;
    let nf = n as f64;
    let denom = nf * nf * nf - nf;
    let mat = CMatrix::identity(n * n, n * n) * c((nf - f) / denom)
        + swap_operator(n) * c((nf * f - 1.0) / denom);
    validate_density(mat, dims)
}

/// First-side frame for the Werner scan: exchanges `|0>` and `|1>`, identity
/// elsewhere.
pub fn werner_swap_frame(n: usize) -> CMatrix {
    let mut u = CMatrix::identity(n, n);
    u[(0, 0)] = c(0.0);
    u[(1, 1)] = c(0.0);
    u[(0, 1)] = ONE;
    u[(1, 0)] = ONE;
    u
}

/// The `4 x 4` distillation example, transcribed term by term and not
/// checked for positivity. See [`example4_state`].
pub fn example4_operator(p: f64) -> (CMatrix, BipartiteDims) {
    let dims = square_dims(4).expect("4 >= 2");
    let idx = |i: usize, j: usize| dims.index(i, j);
    let mut mat = CMatrix::zeros(16, 16);
    let w = c(p / 6.0);
    for (i, j) in [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)] {
        mat[(idx(i, j), idx(i, j))] += w;
    }
    let off = [
        ((0, 0), (1, 2)),
        ((0, 1), (1, 2)),
        ((1, 2), (0, 0)),
        ((1, 2), (0, 1)),
        ((1, 0), (1, 1)),
        ((1, 1), (1, 0)),
    ];
    for ((a, b), (x, y)) in off {
        mat[(idx(a, b), idx(x, y))] -= w;
    }
    let tail = c((1.0 - p) / 2.0);
    mat[(idx(2, 2), idx(2, 2))] += tail;
    mat[(idx(3, 3), idx(3, 3))] += tail;
    (mat, dims)
}

/// The validated distillation example. As transcribed the `{00, 01, 12}`
/// block is `(p/6) [[1,0,-1],[0,1,-1],[-1,-1,1]]`, whose smallest eigenvalue
/// is `(1 - sqrt 2) p / 6`, so this returns a positivity error for every
/// `p` in `(0, 1]`; the error carries that eigenvalue.
pub fn example4_state(p: f64) -> Result<DensityMatrix> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::OutOfRange(format!("p must lie in (0, 1], got {p}")));
    }
    let (mat, dims) = example4_operator(p);
    validate_density(mat, dims)
}

/// Haar-random pure state.
pub fn random_pure<R: Rng + ?Sized>(dims: BipartiteDims, rng: &mut R) -> PureState {
    PureState::new(dims, haar_random_vector(dims.total(), rng)).expect("normalized by construction")
}

/// Product of two Haar-random local vectors.
pub fn random_product_pure<R: Rng + ?Sized>(dims: BipartiteDims, rng: &mut R) -> PureState {
    let a = haar_random_vector(dims.m(), rng);
    let b = haar_random_vector(dims.n(), rng);
    PureState::product(&a, &b).expect("normalized by construction")
}

/// Flat-Dirichlet weights.
fn dirichlet_weights<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

fn mixture<R, F>(dims: BipartiteDims, k: usize, rng: &mut R, mut draw: F) -> Result<DensityMatrix>
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> PureState,
{
    if k < 1 {
        return Err(Error::OutOfRange("a mixture needs at least one component".into()));
    }
    let weights = dirichlet_weights(k, rng);
    let d = dims.total();
    let mut mat = CMatrix::zeros(d, d);
    for w in weights {
        let psi = draw(rng);
        mat += projector(psi.amplitudes()) * c(w);
    }
    // clean the rounding asymmetry before validation
    let mat = (&mat + mat.adjoint()) * c(0.5);
    let tr = mat.trace();
    validate_density(mat / tr, dims)
}

/// Convex mixture of `k` Haar-random product states with flat-Dirichlet
/// weights.
pub fn random_separable<R: Rng + ?Sized>(dims: BipartiteDims, k: usize, rng: &mut R) -> Result<DensityMatrix> {
    mixture(dims, k, rng, |r| random_product_pure(dims, r))
}

/// Convex mixture of `k` Haar-random (generally entangled) pure states.
pub fn random_mixed<R: Rng + ?Sized>(dims: BipartiteDims, k: usize, rng: &mut R) -> Result<DensityMatrix> {
    mixture(dims, k, rng, |r| random_pure(dims, r))
}

/// A state family with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyParams {
    Horodecki { alpha: f64 },
    Isotropic { n: usize, f: f64 },
    Werner { n: usize, f: f64 },
    Example4 { p: f64 },
    MaxEntangled { n: usize },
    Product { m: usize, n: usize },
    RandomMixture { m: usize, n: usize, k: usize, seed: u64 },
}

impl FamilyParams {
    pub fn tag(&self) -> &'static str {
        match self {
            FamilyParams::Horodecki { .. } => "horodecki",
            FamilyParams::Isotropic { .. } => "isotropic",
            FamilyParams::Werner { .. } => "werner",
            FamilyParams::Example4 { .. } => "example4",
            FamilyParams::MaxEntangled { .. } => "max_entangled",
            FamilyParams::Product { .. } => "product",
            FamilyParams::RandomMixture { .. } => "random_mixture",
        }
    }

    pub fn build(&self) -> Result<DensityMatrix> {
        match *self {
            FamilyParams::Horodecki { alpha } => horodecki_state(alpha),
            FamilyParams::Isotropic { n, f } => isotropic_state(n, f),
            FamilyParams::Werner { n, f } => werner_state(n, f),
            FamilyParams::Example4 { p } => example4_state(p),
            FamilyParams::MaxEntangled { n } => Ok(DensityMatrix::from_pure(&max_entangled(n)?)),
            FamilyParams::Product { m, n } => product_ground(m, n),
            FamilyParams::RandomMixture { m, n, k, seed } => {
                let dims = BipartiteDims::new(m, n)?;
                random_separable(dims, k, &mut rng::root(seed))
            }
        }
    }
}
