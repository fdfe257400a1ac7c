use entwit_core::criteria::{ppt_check, reduction_check};
use entwit_core::distill::{apply_filter, FilterPair};
use entwit_core::qstate::{
    haar_random_unitary, hermitian_eigenvalues, hermiticity_deviation, max_abs_diff, partial_trace,
    partial_transpose, tensor_product, unitarity_deviation, validate_density,
};
use entwit_core::search::param_to_unitary;
use entwit_core::witness::{
    build_base_observables, evaluate_in_frame, evaluate_witness_weighted, Weighting,
};
use entwit_core::{rng, zoo, BipartiteDims, CMatrix, DensityMatrix, Subsystem};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn dims_strategy() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=4, 2usize..=4)
}

fn mixed(m: usize, n: usize, seed: u64) -> DensityMatrix {
    let mut r = rng::root(seed);
    let k = r.random_range(1..=m * n);
    zoo::random_mixed(BipartiteDims::new(m, n).unwrap(), k, &mut r).unwrap()
}

fn conj_local(rho: &DensityMatrix, w: &CMatrix, x: &CMatrix) -> DensityMatrix {
    let k = w.kronecker(x);
    validate_density(&k * rho.matrix() * k.adjoint(), rho.dims()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_transpose_is_an_involution((m, n) in dims_strategy(), seed in any::<u64>()) {
        let rho = mixed(m, n, seed);
        for side in [Subsystem::First, Subsystem::Second] {
            let pt = partial_transpose(&rho, side);
            prop_assert!(hermiticity_deviation(&pt) <= 1e-14);
            prop_assert!((pt.trace().re - 1.0).abs() <= 1e-12);
        }
        // transpose the first factor of the already transposed matrix
        let once = partial_transpose(&rho, Subsystem::First);
        let dims = rho.dims();
        let twice = CMatrix::from_fn(dims.total(), dims.total(), |r, c| {
            let (i, j) = (r / n, r % n);
            let (k, l) = (c / n, c % n);
            once[(k * n + j, i * n + l)]
        });
        prop_assert!(max_abs_diff(&twice, rho.matrix()) <= 1e-15);
    }

    #[test]
    fn partial_trace_of_product((m, n) in dims_strategy(), seed in any::<u64>()) {
        let mut r = rng::root(seed);
        let a = zoo::random_mixed(BipartiteDims::new(m, 2).unwrap(), 2, &mut r).unwrap();
        let b = zoo::random_mixed(BipartiteDims::new(n, 2).unwrap(), 2, &mut r).unwrap();
        let ra = partial_trace(&a, Subsystem::Second);
        let rb = partial_trace(&b, Subsystem::Second);
        let prod = validate_density(tensor_product(&ra, &rb).unwrap(), BipartiteDims::new(m, n).unwrap()).unwrap();
        prop_assert!(max_abs_diff(&partial_trace(&prod, Subsystem::Second), &ra) <= 1e-12);
        prop_assert!(max_abs_diff(&partial_trace(&prod, Subsystem::First), &rb) <= 1e-12);
    }

    #[test]
    fn haar_and_exponential_unitaries(d in 2usize..=4, seed in any::<u64>(), scale in 0.0f64..10.0) {
        let mut r = rng::root(seed);
        prop_assert!(unitarity_deviation(&haar_random_unitary(d, &mut r)) <= 1e-12);
        let params: Vec<f64> = (0..d * d).map(|_| scale * (r.random::<f64>() - 0.5)).collect();
        prop_assert!(unitarity_deviation(&param_to_unitary(&params, d).unwrap()) <= 1e-12);
    }

    #[test]
    fn covariance_identity((m, n) in dims_strategy(), seed in any::<u64>()) {
        let rho = mixed(m, n, seed);
        let mut r = rng::substream(seed, 1);
        let u = haar_random_unitary(m, &mut r);
        let v = haar_random_unitary(n, &mut r);
        let moved = conj_local(&rho, &u.adjoint(), &v.adjoint());
        for w in [Weighting::Standard, Weighting::ProductTight] {
            let a = evaluate_witness_weighted(&rho, &u, &v, w).unwrap();
            let b = evaluate_witness_weighted(&moved, &CMatrix::identity(m, m), &CMatrix::identity(n, n), w).unwrap();
            for (x, y) in [(a.h_val, b.h_val), (a.p_val, b.p_val), (a.q_val, b.q_val), (a.w_val, b.w_val)] {
                prop_assert!((x - y).abs() <= 1e-12, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn reduced_form_matches_operator_sums((m, n) in dims_strategy(), seed in any::<u64>()) {
        let rho = mixed(m, n, seed);
        let mut r = rng::substream(seed, 2);
        let u = haar_random_unitary(m, &mut r);
        let v = haar_random_unitary(n, &mut r);
        for w in [Weighting::Standard, Weighting::ProductTight] {
            let full = evaluate_witness_weighted(&rho, &u, &v, w).unwrap();
            let fast = evaluate_in_frame(rho.matrix(), rho.dims(), &u, &v, w);
            prop_assert!((full.w_val - fast.w_val).abs() <= 1e-13);
            prop_assert!((full.h_val - fast.h_val).abs() <= 1e-13);
            prop_assert!((full.q_val - fast.q_val).abs() <= 1e-13);
        }
    }

    #[test]
    fn rotated_spectra_are_preserved(d in 2usize..=4, seed in any::<u64>()) {
        let base = build_base_observables(d).unwrap();
        let u = haar_random_unitary(d, &mut rng::root(seed));
        let rot = base.rotate(&u);
        let pairs = base.lambdas.iter().zip(&rot.diag)
            .chain([(&base.mu1, &rot.offdiag[0]), (&base.mu2, &rot.offdiag[1])]);
        for (a, b) in pairs {
            let (ea, eb) = (hermitian_eigenvalues(a), hermitian_eigenvalues(b));
            for (x, y) in ea.iter().zip(&eb) {
                prop_assert!((x - y).abs() <= 1e-10);
            }
            prop_assert!(ea.iter().all(|x| [-1.0, 0.0, 1.0].iter().any(|t| (x - t).abs() <= 1e-12)));
        }
    }

    #[test]
    fn separable_states_never_violate((m, n) in dims_strategy(), seed in any::<u64>()) {
        let mut r = rng::root(seed);
        let k = r.random_range(1..=m * n);
        let rho = zoo::random_separable(BipartiteDims::new(m, n).unwrap(), k, &mut r).unwrap();
        for _ in 0..5 {
            let u = haar_random_unitary(m, &mut r);
            let v = haar_random_unitary(n, &mut r);
            let e = evaluate_witness_weighted(&rho, &u, &v, Weighting::Standard).unwrap();
            prop_assert!(e.w_val >= -1e-10, "w = {}", e.w_val);
        }
    }

    #[test]
    fn convexity_step(seed in any::<u64>(), k in 1usize..8) {
        // mixture expectations are weighted sums of per-component ones
        let dims = BipartiteDims::new(3, 2).unwrap();
        let mut r = rng::root(seed);
        let weights: Vec<f64> = (0..k).map(|_| r.random::<f64>() + 1e-3).collect();
        let total: f64 = weights.iter().sum();
        let (mut c, mut d, mut e) = (0.0, 0.0, 0.0);
        let mut mat = CMatrix::zeros(6, 6);
        for w in &weights {
            let psi = zoo::random_product_pure(dims, &mut r);
            let rho = DensityMatrix::from_pure(&psi);
            let ev = evaluate_witness_weighted(&rho, &CMatrix::identity(3, 3), &CMatrix::identity(2, 2), Weighting::Standard).unwrap();
            prop_assert!(ev.h_val >= -1e-15);
            c += w / total * ev.h_val;
            d += w / total * ev.p_val;
            e += w / total * ev.q_val;
            mat += rho.matrix() * Complex64::from(w / total);
        }
        prop_assert!(c * c >= d * d + e * e - 1e-14);
        let mix = validate_density(mat, dims).unwrap();
        let ev = evaluate_witness_weighted(&mix, &CMatrix::identity(3, 3), &CMatrix::identity(2, 2), Weighting::Standard).unwrap();
        prop_assert!((ev.h_val - c).abs() <= 1e-13 && (ev.p_val - d).abs() <= 1e-13 && (ev.q_val - e).abs() <= 1e-13);
    }

    #[test]
    fn reduction_violation_implies_npt((m, n) in dims_strategy(), seed in any::<u64>()) {
        let rho = mixed(m, n, seed);
        if reduction_check(&rho).violated {
            prop_assert!(ppt_check(&rho).is_npt);
        }
    }

    #[test]
    fn filtered_states_are_valid((m, n) in dims_strategy(), seed in any::<u64>()) {
        let rho = mixed(m, n, seed);
        let mut r = rng::substream(seed, 3);
        let rand_op = |rows: usize, cols: usize, r: &mut rng::Rng| {
            CMatrix::from_fn(rows, cols, |_, _| Complex64::new(r.random::<f64>() - 0.5, r.random::<f64>() - 0.5))
        };
        let f = FilterPair::new(rand_op(2, m, &mut r), rand_op(2, n, &mut r)).unwrap();
        let out = apply_filter(&rho, &f, BipartiteDims::new(2, 2).unwrap());
        prop_assert!(out.is_ok(), "{out:?}");
    }
}
