mod common;

use cheblogdet::gmrf::{
    exact_loglik_scan, gibbs_sample, lattice_precision, loglik_scan,
    marginal_logdet_identity_check, rho_grid, scan_argmax, GibbsChain, LatticeSpec,
};
use cheblogdet::synth::{affine_into_interval, random_sparse_pd, RandomPdSpec};
use cheblogdet::EstimatorParams;
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn schur_identity_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..50u64 {
        let d = rng.random_range(4..=60);
        let raw = random_sparse_pd(&RandomPdSpec::new(d, case)).unwrap();
        let j = affine_into_interval(&raw, 0.2, 3.0).unwrap();
        let mut idx: Vec<usize> = (0..d).collect();
        idx.shuffle(&mut rng);
        let k = rng.random_range(1..d);
        let (lhs, rhs) = marginal_logdet_identity_check(&j, &idx[..k]).unwrap();
        assert!((lhs - rhs).abs() < 1e-9, "case {case}: {lhs} vs {rhs}");
    }
}

#[test]
fn exact_scan_is_unimodal() {
    let rhos = rho_grid(-0.24, 0.24, 0.02);
    for (k, rho) in [-0.2, -0.1, 0.0, 0.15].into_iter().enumerate() {
        let spec = LatticeSpec::new(10, 10, rho).unwrap();
        let x = gibbs_sample(&spec, 200, k as u64).unwrap();
        let pts = exact_loglik_scan(10, 10, &x, &rhos).unwrap();
        let peak = pts
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.loglik.total_cmp(&b.1.loglik))
            .unwrap()
            .0;
        assert!(pts[..=peak].windows(2).all(|w| w[0].loglik <= w[1].loglik));
        assert!(pts[peak..].windows(2).all(|w| w[0].loglik >= w[1].loglik));
    }
}

#[test]
fn stochastic_argmax_tracks_exact_argmax() {
    let spec = LatticeSpec::new(12, 12, -0.15).unwrap();
    let rhos = rho_grid(-0.24, 0.24, 0.02);
    let mut agree = 0;
    for seed in 0..20u64 {
        let x = gibbs_sample(&spec, 300, seed).unwrap();
        let exact = scan_argmax(&exact_loglik_scan(12, 12, &x, &rhos).unwrap()).unwrap();
        let params = EstimatorParams::default().with_seed(seed);
        let est = scan_argmax(&loglik_scan(12, 12, &x, &rhos, &params).unwrap()).unwrap();
        if (est - exact).abs() <= 0.02 + 1e-9 {
            agree += 1;
        }
    }
    assert!(agree >= 18, "{agree}/20");
}

#[test]
fn gibbs_chain_recovers_precision() {
    let spec = LatticeSpec::new(5, 5, 0.2).unwrap();
    let d = spec.dim();
    let mut chain = GibbsChain::new(spec, 21);
    chain.run(200);
    let samples = 100_000;
    let thin = 2;
    let mut cov = DMatrix::<f64>::zeros(d, d);
    for _ in 0..samples {
        chain.run(thin);
        let x = nalgebra::DVector::from_column_slice(chain.state());
        cov += &x * x.transpose();
    }
    cov /= samples as f64;
    let prec = cov.try_inverse().unwrap();
    let j = lattice_precision(&spec);
    for (r, c, v) in j.triplets() {
        let got = prec[(r, c)];
        assert!(
            (got - v).abs() <= 0.1 * v.abs(),
            "J[{r},{c}] = {v}, recovered {got}"
        );
    }
}
