//! Helpers shared by the integration and acceptance suites.
#![allow(dead_code)]

use spca::estimators::SparseUnitVector;
use spca::matcore::SymMatrix;
use spca::models::SeededRng;

pub fn random_sym(p: usize, scale: f64, rng: &mut SeededRng) -> SymMatrix {
    SymMatrix::from_fn_symmetric(p, |_, _| scale * (2.0 * rng.uniform() - 1.0)).unwrap()
}

/// Uniform k-sparse spike with equal weights on `support`.
pub fn spike(p: usize, support: &[usize]) -> SparseUnitVector {
    let k = support.len() as f64;
    let pairs: Vec<(usize, f64)> = support.iter().map(|&i| (i, 1.0 / k.sqrt())).collect();
    SparseUnitVector::from_pairs(p, &pairs).unwrap()
}

pub fn same_up_to_sign(a: &[f64], b: &[f64], tol: f64) -> bool {
    let plus = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let minus = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x + y).abs())
        .fold(0.0, f64::max);
    plus.min(minus) <= tol
}

/// Exhaustive active-set oracle for the simplex projection: solve the
/// equality-constrained projection on every nonempty candidate support and
/// keep the feasible candidate closest to the input.
pub fn simplex_oracle(d: &[f64]) -> Vec<f64> {
    let p = d.len();
    assert!(p <= 20, "oracle enumerates 2^p supports");
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1u32..(1 << p) {
        let active: Vec<usize> = (0..p).filter(|i| mask & (1 << i) != 0).collect();
        let sum: f64 = active.iter().map(|&i| d[i]).sum();
        let shift = (sum - 1.0) / active.len() as f64;
        let mut w = vec![0.0; p];
        let mut feasible = true;
        for &i in &active {
            w[i] = d[i] - shift;
            if w[i] < 0.0 {
                feasible = false;
                break;
            }
        }
        if !feasible {
            continue;
        }
        let dist: f64 = w.iter().zip(d).map(|(a, b)| (a - b) * (a - b)).sum();
        if best.as_ref().is_none_or(|(bd, _)| dist < *bd) {
            best = Some((dist, w));
        }
    }
    best.expect("projection always exists").1
}

/// Closed-form eigenvalues of a symmetric 3x3 matrix via the trigonometric
/// solution of the characteristic cubic.
pub fn cubic_eigenvalues(a: &SymMatrix) -> [f64; 3] {
    assert_eq!(a.dim(), 3);
    let p1 = a.get(0, 1).powi(2) + a.get(0, 2).powi(2) + a.get(1, 2).powi(2);
    if p1 == 0.0 {
        let mut d = [a.get(0, 0), a.get(1, 1), a.get(2, 2)];
        d.sort_by(|x, y| y.partial_cmp(x).unwrap());
        return d;
    }
    let q = a.trace() / 3.0;
    let p2 = (a.get(0, 0) - q).powi(2)
        + (a.get(1, 1) - q).powi(2)
        + (a.get(2, 2) - q).powi(2)
        + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let b = |i: usize, j: usize| (a.get(i, j) - if i == j { q } else { 0.0 }) / p;
    let det_b = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1))
        - b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0))
        + b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
    let r = (det_b / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let e2 = 3.0 * q - e1 - e3;
    let mut d = [e1, e2, e3];
    d.sort_by(|x, y| y.partial_cmp(x).unwrap());
    d
}

/// Least-squares slope of `y` against `x`.
pub fn fitted_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx: f64 = x.iter().sum::<f64>() / n;
    let my: f64 = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
