//! Independent-oracle checks: every expected value here is computed by a
//! route that does not share code with the implementation it verifies.

use spca::analysis::{empirical_covariance, loss};
use spca::estimators::{
    exhaustive_sparse_pc, mirror_prox_sdp, primal_dual_gap, sdp_estimate, truncate_renormalize,
    SdpConfig,
};
use spca::matcore::{eig_sym, project_simplex, project_spectahedron, MatrixNorm, SymMatrix};
use spca::models::{DataMatrix, SeededRng};

mod common;
use common::{cubic_eigenvalues, random_sym, same_up_to_sign, simplex_oracle};

#[test]
fn eig_matches_characteristic_polynomial_roots() {
    let mut rng = SeededRng::new(101);
    for _ in 0..200 {
        let a = random_sym(3, 2.0, &mut rng);
        let expected = cubic_eigenvalues(&a);
        let got = eig_sym(&a).unwrap();
        for (g, e) in got.eigenvalues().iter().zip(expected) {
            assert!((g - e).abs() <= 1e-9, "eigenvalue {g} vs oracle {e}");
        }
    }
}

#[test]
fn simplex_projection_matches_active_set_oracle() {
    let mut rng = SeededRng::new(7);
    for trial in 0..500 {
        let p = 2 + (trial % 7);
        let d: Vec<f64> = (0..p).map(|_| 4.0 * rng.uniform() - 2.0).collect();
        let got = project_simplex(&d).unwrap();
        let expected = simplex_oracle(&d);
        for (g, e) in got.weights().iter().zip(&expected) {
            assert!((g - e).abs() <= 1e-10, "weights {g} vs oracle {e} on {d:?}");
        }
    }

    // the spec's worked instance
    let got = project_simplex(&[0.8, 0.4, 0.2]).unwrap();
    let expected = simplex_oracle(&[0.8, 0.4, 0.2]);
    for (g, e) in got.weights().iter().zip(&expected) {
        assert!((g - e).abs() <= 1e-10);
    }
}

#[test]
fn spectahedron_projection_matches_eigenvalue_oracle() {
    let mut rng = SeededRng::new(8);
    for trial in 0..500 {
        let p = 2 + (trial % 7);
        let a = random_sym(p, 1.5, &mut rng);
        let got = project_spectahedron(&a).unwrap();

        let spectrum = eig_sym(&a).unwrap();
        let w = simplex_oracle(spectrum.eigenvalues());
        let mut expected = SymMatrix::zeros(p);
        for (j, &wj) in w.iter().enumerate() {
            if wj != 0.0 {
                let col = spectrum.eigenvector(j);
                expected.add_scaled(&SymMatrix::outer(&col), wj).unwrap();
            }
        }
        for i in 0..p {
            for j in 0..p {
                assert!(
                    (got.get(i, j) - expected.get(i, j)).abs() <= 1e-10,
                    "projection mismatch at ({i}, {j})"
                );
            }
        }
        assert!((got.trace() - 1.0).abs() <= 1e-10);
        let min_eig = *eig_sym(&got).unwrap().eigenvalues().last().unwrap();
        assert!(min_eig >= -1e-10);
    }
}

#[test]
fn exhaustive_matches_angular_grid_oracle() {
    let mut rng = SeededRng::new(9);
    let a = random_sym(6, 1.0, &mut rng);
    let k = 2;

    let mut grid_best = f64::NEG_INFINITY;
    let mut grid_vec = vec![0.0; 6];
    for i in 0..6 {
        for j in (i + 1)..6 {
            for step in 0..10_000 {
                let phi = std::f64::consts::PI * step as f64 / 10_000.0;
                let (c, s) = (phi.cos(), phi.sin());
                let val = a.get(i, i) * c * c + 2.0 * a.get(i, j) * c * s + a.get(j, j) * s * s;
                if val > grid_best {
                    grid_best = val;
                    grid_vec.fill(0.0);
                    grid_vec[i] = c;
                    grid_vec[j] = s;
                }
            }
        }
    }

    let got = exhaustive_sparse_pc(&a, k).unwrap();
    let dense = got.to_dense();
    let value = a.quadratic_form(&dense).unwrap();
    assert!(
        (value - grid_best).abs() <= 1e-6,
        "value {value} vs grid {grid_best}"
    );
    assert!(loss(&dense, &grid_vec).unwrap() <= 1e-3);
}

#[test]
fn exhaustive_full_support_equals_leading_eigenvector() {
    let mut rng = SeededRng::new(10);
    for _ in 0..20 {
        let p = 4 + (rng.next_u64() % 3) as usize;
        let a = random_sym(p, 1.0, &mut rng);
        let full = exhaustive_sparse_pc(&a, p).unwrap().to_dense();
        let lead = spca::matcore::leading_eigenvector(&a).unwrap();
        assert!(same_up_to_sign(&full, &lead, 1e-9));
    }
}

#[test]
fn exhaustive_is_scale_equivariant() {
    let mut rng = SeededRng::new(11);
    let a = random_sym(6, 1.0, &mut rng);
    let base = exhaustive_sparse_pc(&a, 2).unwrap().to_dense();
    for &c in &[0.5, 3.0, 1e3] {
        let mut scaled = a.clone();
        scaled.scale(c);
        let v = exhaustive_sparse_pc(&scaled, 2).unwrap().to_dense();
        assert!(same_up_to_sign(&base, &v, 1e-9), "scale {c}");
    }
}

/// Fine grid over the p = 2 spectahedron parametrized as
/// `rho u uT + (1 - rho) u_perp u_perpT`.
fn grid_optimum_p2(s: &SymMatrix, lambda: f64, steps_phi: usize, steps_rho: usize) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for i in 0..steps_phi {
        let phi = std::f64::consts::PI * i as f64 / steps_phi as f64;
        let (c, sn) = (phi.cos(), phi.sin());
        for j in 0..=steps_rho {
            let rho = 0.5 + 0.5 * j as f64 / steps_rho as f64;
            let m00 = rho * c * c + (1.0 - rho) * sn * sn;
            let m11 = rho * sn * sn + (1.0 - rho) * c * c;
            let m01 = (2.0 * rho - 1.0) * c * sn;
            let f = s.get(0, 0) * m00 + 2.0 * s.get(0, 1) * m01 + s.get(1, 1) * m11
                - lambda * (m00.abs() + m11.abs() + 2.0 * m01.abs());
            if f > best {
                best = f;
            }
        }
    }
    best
}

#[test]
fn mirror_prox_matches_p2_grid_oracle() {
    let s = SymMatrix::from_rows(&[vec![1.0, 0.5], vec![0.5, 0.2]]).unwrap();
    let lambda = 0.1;
    let epsilon = 1e-4;
    let cfg = SdpConfig::new(lambda, epsilon).unwrap();
    let r = mirror_prox_sdp(&s, &cfg).unwrap();
    let oracle = grid_optimum_p2(&s, lambda, 5_000, 2_500);
    // the solver is epsilon-optimal from below; the grid undershoots the
    // true optimum by at most the grid resolution times the gradient bound
    let grid_slack = 2e-3;
    assert!(
        r.objective >= oracle - epsilon - grid_slack,
        "objective {} vs grid oracle {oracle}",
        r.objective
    );
    assert!(r.objective <= oracle + grid_slack);
}

#[test]
fn mirror_prox_matches_diagonal_active_set_optimum() {
    // for diagonal input the optimum is max_j s_jj - lambda, attained at a
    // one-coordinate density
    let mut rng = SeededRng::new(12);
    for trial in 0..10 {
        let p = 3 + trial % 8;
        let diag: Vec<f64> = (0..p).map(|_| rng.uniform() * 2.0).collect();
        let s = SymMatrix::from_fn_symmetric(p, |i, j| if i == j { diag[i] } else { 0.0 }).unwrap();
        let lambda = 0.05 + 0.2 * rng.uniform();
        let epsilon = 1e-4;
        let optimum = diag.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v)) - lambda;
        let cfg = SdpConfig::new(lambda, epsilon).unwrap();
        let r = mirror_prox_sdp(&s, &cfg).unwrap();
        assert!(
            r.objective >= optimum - epsilon,
            "objective {} vs exact optimum {optimum}",
            r.objective
        );
        assert!(r.objective <= optimum + 1e-9);
    }
}

#[test]
fn gap_agrees_with_independent_evaluation_at_p3() {
    let mut rng = SeededRng::new(13);
    for _ in 0..50 {
        let s = random_sym(3, 1.0, &mut rng);
        let lambda = 0.2 + rng.uniform();
        let m_bar = project_spectahedron(&random_sym(3, 1.0, &mut rng)).unwrap();
        let u_bar = random_sym(3, 2.0, &mut rng).clip_entrywise(lambda).unwrap();

        let got = primal_dual_gap(&s, &m_bar, &u_bar, lambda).unwrap();

        let mut shifted = u_bar.clone();
        shifted.add_scaled(&s, 1.0).unwrap();
        let top = cubic_eigenvalues(&shifted)[0];
        let expected =
            top - (m_bar.inner(&s).unwrap() - lambda * m_bar.entrywise_norm(MatrixNorm::L1));
        assert!((got - expected).abs() <= 1e-9);
        assert!(got >= -1e-8, "weak duality violated: {got}");
    }
}

#[test]
fn mirror_prox_gap_bound_without_early_stopping() {
    // run to the full theoretical iteration count with the gap evaluated
    // only at the end; the averaged pair must certify the requested slack
    let mut rng = SeededRng::new(14);
    for &(p, lambda, epsilon) in &[(3usize, 0.4f64, 5e-3f64), (8, 0.3, 5e-3), (20, 0.1, 2e-3)] {
        let s = random_sym(p, 1.0, &mut rng);
        let cfg = SdpConfig::new(lambda, epsilon)
            .unwrap()
            .with_gap_check_period(usize::MAX)
            .unwrap();
        let r = mirror_prox_sdp(&s, &cfg).unwrap();
        let gap = r
            .final_gap
            .expect("final gap evaluated at the last iteration");
        assert!(
            gap <= epsilon + 1e-6,
            "gap {gap} above certified slack {epsilon} at p = {p}"
        );
    }
}

#[test]
fn repeated_row_recovers_the_row_direction() {
    // equal-magnitude coordinates keep the penalty exactly aligned with the
    // signal, so the estimate matches the row direction to high accuracy
    let x_row = [1.5, -1.5, 1.5, 1.5];
    let norm = 3.0;
    let n = 5;
    let entries: Vec<f64> = (0..n).flat_map(|_| x_row.iter().copied()).collect();
    let x = DataMatrix::new(n, 4, entries).unwrap();
    let cfg = SdpConfig::new(1e-4, 1e-6).unwrap();
    let (v_hat, _) = sdp_estimate(&x, &cfg).unwrap();
    let direction: Vec<f64> = x_row.iter().map(|v| v / norm).collect();
    assert!(loss(&v_hat, &direction).unwrap() <= 1e-6);

    // lambda -> 0 continuity: the limit is the sample-covariance eigenvector
    let lead = spca::matcore::leading_eigenvector(&empirical_covariance(&x)).unwrap();
    assert!(loss(&v_hat, &lead).unwrap() <= 1e-6);
}

#[test]
fn deterministic_loss_bound_on_small_instances() {
    // for a spiked population with eigengap theta and a perturbed sample
    // covariance within lambda entrywise, the estimate satisfies
    // loss <= 4 sqrt(2) lambda k / theta + 2 sqrt(epsilon / theta)
    let mut rng = SeededRng::new(16);
    let p = 8;
    let k = 3;
    let theta = 0.6;
    let lambda = 0.01;
    let epsilon = 1e-3;
    let bound = 4.0 * 2.0f64.sqrt() * lambda * k as f64 / theta + 2.0 * (epsilon / theta).sqrt();
    for _ in 0..5 {
        let support = {
            let mut s = rng.sample_without_replacement(p, k);
            s.sort_unstable();
            s
        };
        let weight = 1.0 / (k as f64).sqrt();
        let mut v1 = vec![0.0; p];
        for &i in &support {
            v1[i] = weight;
        }
        let mut population = SymMatrix::outer(&v1);
        population.scale(theta);
        population.add_scaled(&SymMatrix::identity(p), 1.0).unwrap();
        let noise = SymMatrix::from_fn_symmetric(p, |_, _| lambda * rng.rademacher()).unwrap();
        let mut sample_cov = population.clone();
        sample_cov.add_scaled(&noise, 1.0).unwrap();

        let cfg = SdpConfig::new(lambda, epsilon).unwrap();
        let r = mirror_prox_sdp(&sample_cov, &cfg).unwrap();
        let l = loss(&r.v_hat, &v1).unwrap();
        assert!(l <= bound, "loss {l} above deterministic bound {bound}");
    }
}

#[test]
fn truncation_loses_at_most_a_factor_of_two() {
    let mut rng = SeededRng::new(15);
    for _ in 0..200 {
        let p = 8;
        let k = 3;
        let mut v: Vec<f64> = (0..p).map(|_| rng.gaussian()).collect();
        let nv: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= nv);

        let mut u = vec![0.0; p];
        let support: Vec<usize> = {
            let mut rng2 = SeededRng::new(rng.next_u64());
            rng2.sample_without_replacement(p, k)
        };
        let mut un = 0.0;
        for &i in &support {
            u[i] = rng.gaussian();
            un += u[i] * u[i];
        }
        let un = un.sqrt();
        if un == 0.0 {
            continue;
        }
        for &i in &support {
            u[i] /= un;
        }

        let truncated = truncate_renormalize(&v, k).unwrap().to_dense();
        let lhs = loss(&truncated, &u).unwrap();
        let rhs = loss(&v, &u).unwrap();
        assert!(lhs <= 2.0 * rhs + 1e-10, "{lhs} > 2 * {rhs}");
    }
}
