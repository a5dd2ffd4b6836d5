//! Rough timing of the solver building blocks; run with
//! `cargo run --release -p spca --example timing`.

use spca::analysis::empirical_covariance;
use spca::estimators::{default_tuning, mirror_prox_sdp, SparseUnitVector};
use spca::matcore::{eig_sym, SymMatrix};
use spca::models::{sample_spiked, SeededRng, SpikedModelSpec};
use std::time::Instant;

fn random_sym(p: usize, rng: &mut SeededRng) -> SymMatrix {
    SymMatrix::from_fn_symmetric(p, |_, _| rng.gaussian()).unwrap()
}

fn main() {
    let mut rng = SeededRng::new(1);
    for &p in &[20usize, 50, 128] {
        let a = random_sym(p, &mut rng);
        let reps = if p <= 50 { 200 } else { 40 };
        let t0 = Instant::now();
        for _ in 0..reps {
            let s = eig_sym(&a).unwrap();
            std::hint::black_box(s.eigenvalues()[0]);
        }
        println!("eig_sym p={p}: {:?}/call", t0.elapsed() / reps);
    }

    for &(n, p, k, theta) in &[(250usize, 50usize, 5usize, 0.5f64), (2000, 50, 5, 0.5)] {
        let pairs: Vec<(usize, f64)> = (0..k).map(|i| (i, 1.0 / (k as f64).sqrt())).collect();
        let v1 = SparseUnitVector::from_pairs(p, &pairs).unwrap();
        let spec = SpikedModelSpec::new(p, 1.0, theta, v1).unwrap();
        let x = sample_spiked(&spec, n, 7);
        let cov = empirical_covariance(&x);
        let cfg = default_tuning(n, p).unwrap();
        let t0 = Instant::now();
        let r = mirror_prox_sdp(&cov, &cfg).unwrap();
        println!(
            "solve n={n} p={p}: iters={}, gap={:?}, objective={:.4}, {:?}",
            r.iterations_run,
            r.final_gap,
            r.objective,
            t0.elapsed()
        );
    }
}
