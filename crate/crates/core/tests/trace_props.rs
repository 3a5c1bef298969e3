mod common;

use cheblogdet::chebyshev::{logdet_interpolant, negativity_holds, ChebyshevInterpolant};
use cheblogdet::operator::AffineOperator;
use cheblogdet::synth::{spectrum_in, with_eigenvalues};
use cheblogdet::trace::{
    chebyshev_trace, hutchinson_trace, rademacher_vector, trace_sample_bound, RademacherStream,
};
use cheblogdet::SparseMatrix;
use common::{dense_chebyshev, random_symmetric, symmetric_matrix, to_nalgebra};
use proptest::prelude::*;

fn offdiag_variance(a: &SparseMatrix) -> f64 {
    let fro: f64 = a.values().iter().map(|v| v * v).sum();
    let diag: f64 = a.diagonal().iter().map(|v| v * v).sum();
    2.0 * (fro - diag)
}

#[test]
fn hutchinson_is_unbiased() {
    let a = SparseMatrix::from_rows(&[
        &[1.0, 0.5, -0.3, 0.0, 0.2],
        &[0.5, -2.0, 0.7, 0.1, 0.0],
        &[-0.3, 0.7, 0.4, -0.9, 0.6],
        &[0.0, 0.1, -0.9, 3.0, 0.0],
        &[0.2, 0.0, 0.6, 0.0, -1.1],
    ])
    .unwrap();
    let tr: f64 = a.diagonal().iter().sum();
    let runs = 10_000u64;
    let mean = (0..runs)
        .map(|seed| hutchinson_trace(&a, 1, seed).unwrap().value)
        .sum::<f64>()
        / runs as f64;
    let sd = offdiag_variance(&a).sqrt();
    assert!(
        (mean - tr).abs() <= 4.0 * sd / (runs as f64).sqrt(),
        "{mean} vs {tr}"
    );
}

#[test]
fn per_sample_variance_follows_off_diagonal_mass() {
    for seed in 0..5 {
        let a = random_symmetric(64, 0.3, seed);
        let est = hutchinson_trace(&a, 10_000, 3).unwrap();
        let expect = offdiag_variance(&a);
        let got = est.sample_variance();
        assert!(
            (got - expect).abs() <= 0.15 * expect,
            "{got} vs {expect} at d = {}",
            a.nrows()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn recurrence_matches_dense_polynomial(
        a in symmetric_matrix(16, 0.5),
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..12),
        seed in any::<u64>(),
    ) {
        // keep ‖A‖ ≤ 1 so T_j(A) stays bounded
        let (lo, hi) = a.gershgorin_interval().unwrap();
        let r = lo.abs().max(hi.abs()).max(1.0);
        let a = a.scaled(1.0 / r);
        let p = ChebyshevInterpolant::from_coefficients(coeffs.clone()).unwrap();
        let est = chebyshev_trace(&a, &p, 3, seed).unwrap();
        let pm = dense_chebyshev(&to_nalgebra(&a), &coeffs);
        for (i, &q) in est.per_sample.iter().enumerate() {
            let v = nalgebra::DVector::from_vec(rademacher_vector(RademacherStream::new(seed, i as u64), a.nrows()));
            let expect = v.dot(&(&pm * &v));
            let scale = pm.abs().sum().max(1.0);
            prop_assert!((q - expect).abs() <= 1e-10 * scale, "{q} vs {expect}");
        }
    }
}

#[test]
fn concentration_at_sample_bound() {
    // p_n(A) for the log interpolant is negative definite when the envelope
    // stays below −log(1 − δ)
    let (delta, n) = (0.2, 12);
    assert!(negativity_holds(delta, n).unwrap());
    let lam = spectrum_in(30, 0.2, 0.8, 4);
    let b = with_eigenvalues(&lam, 200, 29, 4).unwrap();
    let p = logdet_interpolant(delta, n).unwrap();
    let w = 1.0 - 2.0 * delta;
    let x = AffineOperator::new(&b, 1.0 / w, -2.0 / w);
    let xd = (nalgebra::DMatrix::identity(30, 30) - to_nalgebra(&b) * 2.0) / w;
    let pm = dense_chebyshev(&xd, p.coefficients());
    let tr = pm.trace();
    assert!(pm.symmetric_eigen().eigenvalues.iter().all(|&e| e < 0.0));
    let (eps0, zeta0) = (0.3, 0.1);
    let m = trace_sample_bound(eps0, zeta0).unwrap();
    let trials = 500;
    let good = (0..trials)
        .filter(|&t| {
            let est = chebyshev_trace(&x, &p, m, 1000 + t as u64).unwrap();
            (est.value - tr).abs() <= eps0 * tr.abs()
        })
        .count();
    assert!(
        good as f64 >= (1.0 - zeta0) * trials as f64,
        "{good}/{trials}"
    );
}

#[test]
fn estimates_do_not_depend_on_thread_count() {
    let a = with_eigenvalues(&spectrum_in(40, -1.0, 1.0, 2), 100, 10, 2).unwrap();
    let p = logdet_interpolant(0.1, 20).unwrap();
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            let h = hutchinson_trace(&a, 57, 11).unwrap();
            let c = chebyshev_trace(&a, &p, 57, 11).unwrap();
            (h, c)
        })
    };
    let (h1, c1) = run(1);
    let (h4, c4) = run(4);
    assert_eq!(h1.value.to_bits(), h4.value.to_bits());
    assert_eq!(c1.value.to_bits(), c4.value.to_bits());
    assert_eq!(h1, h4);
    assert_eq!(c1, c4);
}
