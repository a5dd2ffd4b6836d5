//! Sparse principal component estimators: the semidefinite-relaxation
//! estimator driven by a mirror-prox saddle-point solver, its default
//! tuning, the top-k truncation post-processor, and the exhaustive k-sparse
//! leading eigenvector.

mod mirror_prox;

pub use mirror_prox::{mirror_prox_sdp, primal_dual_gap, sdp_estimate, SdpResult};

use crate::error::{Error, Result};
use crate::matcore::{leading_eigenvector, EigWorkspace, SymMatrix};

/// Unit vector with at most `k` nonzero coordinates, stored sparsely.
///
/// Invariants: unit Euclidean norm within `1e-12`, strictly increasing
/// support indices, and the canonical sign (the entry of largest absolute
/// value is positive, ties resolved toward the lowest index). Construction
/// canonicalizes the global sign.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseUnitVector {
    dim: usize,
    support: Vec<usize>,
    values: Vec<f64>,
}

impl SparseUnitVector {
    pub fn from_pairs(dim: usize, pairs: &[(usize, f64)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::DegenerateInput(
                "sparse vector with empty support".into(),
            ));
        }
        let mut support = Vec::with_capacity(pairs.len());
        let mut values = Vec::with_capacity(pairs.len());
        for &(idx, val) in pairs {
            if idx >= dim {
                return Err(Error::InvalidParameter(format!(
                    "support index {idx} out of range for dimension {dim}"
                )));
            }
            if let Some(&last) = support.last() {
                if idx <= last {
                    return Err(Error::InvalidParameter(
                        "support indices must be strictly increasing".into(),
                    ));
                }
            }
            if !val.is_finite() {
                return Err(Error::NonFinite { row: 0, col: idx });
            }
            if val == 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "explicit zero stored at support index {idx}"
                )));
            }
            support.push(idx);
            values.push(val);
        }
        let norm: f64 = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "sparse vector has norm {norm}, expected 1"
            )));
        }
        let mut v = SparseUnitVector {
            dim,
            support,
            values,
        };
        v.canonicalize_sign();
        Ok(v)
    }

    /// Extracts the nonzero entries of a dense unit vector.
    pub fn from_dense(dense: &[f64]) -> Result<Self> {
        let pairs: Vec<(usize, f64)> = dense
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(i, &v)| (i, v))
            .collect();
        SparseUnitVector::from_pairs(dense.len(), &pairs)
    }

    fn canonicalize_sign(&mut self) {
        let mut best = 0usize;
        for (j, v) in self.values.iter().enumerate().skip(1) {
            if v.abs() > self.values[best].abs() {
                best = j;
            }
        }
        if self.values[best] < 0.0 {
            for v in &mut self.values {
                *v = -*v;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn nnz(&self) -> usize {
        self.support.len()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (&i, &v) in self.support.iter().zip(&self.values) {
            out[i] = v;
        }
        out
    }

    pub fn dot_dense(&self, other: &[f64]) -> f64 {
        self.support
            .iter()
            .zip(&self.values)
            .map(|(&i, &v)| v * other[i])
            .sum()
    }
}

/// Tuning of the semidefinite-relaxation estimator.
#[derive(Debug, Clone)]
pub struct SdpConfig {
    /// Entrywise l1 penalty level.
    pub lambda: f64,
    /// Optimization slack: the solver certifies an epsilon-maximiser.
    pub epsilon: f64,
    /// Hard iteration cap (the solver never exceeds the theoretical bound
    /// [`iteration_bound`] either).
    pub max_iterations: usize,
    /// Primal-dual gap evaluation cadence, in iterations.
    pub gap_check_period: usize,
}

impl SdpConfig {
    /// Validates `lambda > 0` and `epsilon > 0`. The cap starts unbounded
    /// because the theoretical bound depends on the matrix dimension; the
    /// solver always clamps the run length to that bound. [`default_tuning`]
    /// fills in the dimension-aware defaults.
    pub fn new(lambda: f64, epsilon: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        Ok(SdpConfig {
            lambda,
            epsilon,
            max_iterations: usize::MAX,
            gap_check_period: 1,
        })
    }

    pub fn with_max_iterations(mut self, cap: usize) -> Result<Self> {
        if cap == 0 {
            return Err(Error::InvalidParameter(
                "iteration cap must be at least 1".into(),
            ));
        }
        self.max_iterations = cap;
        Ok(self)
    }

    pub fn with_gap_check_period(mut self, period: usize) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidParameter(
                "gap check period must be at least 1".into(),
            ));
        }
        self.gap_check_period = period;
        Ok(self)
    }
}

/// Iteration count `N = ceil((lambda^2 p^2 + 1) / (sqrt(2) epsilon))` that
/// guarantees an epsilon-maximiser without any gap-based early stop.
pub fn iteration_bound(lambda: f64, p: usize, epsilon: f64) -> usize {
    let p = p as f64;
    ((lambda * lambda * p * p + 1.0) / (std::f64::consts::SQRT_2 * epsilon)).ceil() as usize
}

/// Default tuning: `lambda = 4 sqrt(log p / n)`, `epsilon = log p / (4 n)`
/// (natural logarithm), iteration cap at the theoretical bound, gap checks
/// every `ceil(N / 1000)` iterations.
pub fn default_tuning(n: usize, p: usize) -> Result<SdpConfig> {
    if n < 1 {
        return Err(Error::InvalidParameter("need n >= 1".into()));
    }
    if p < 2 {
        return Err(Error::InvalidParameter("need p >= 2".into()));
    }
    let logp = (p as f64).ln();
    let lambda = 4.0 * (logp / n as f64).sqrt();
    let epsilon = logp / (4.0 * n as f64);
    let n_bound = iteration_bound(lambda, p, epsilon);
    SdpConfig::new(lambda, epsilon)?
        .with_max_iterations(n_bound)?
        .with_gap_check_period((n_bound.div_ceil(1000)).max(1))
}

/// Keeps the `k` coordinates of largest absolute value (ties resolved
/// toward the lexicographically smallest index set), zeroes the rest and
/// renormalizes.
pub fn truncate_renormalize(v: &[f64], k: usize) -> Result<SparseUnitVector> {
    let p = v.len();
    if k < 1 || k > p {
        return Err(Error::InvalidParameter(format!(
            "k = {k} out of range 1..={p}"
        )));
    }
    if let Some(pos) = v.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite { row: 0, col: pos });
    }
    let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidParameter(format!(
            "input must be a unit vector, got norm {norm}"
        )));
    }
    let selected = top_k_indices(v, k);
    let kept_norm: f64 = selected.iter().map(|&i| v[i] * v[i]).sum::<f64>().sqrt();
    if kept_norm == 0.0 {
        return Err(Error::DegenerateInput(
            "all retained coordinates are zero; truncation undefined".into(),
        ));
    }
    let pairs: Vec<(usize, f64)> = selected
        .iter()
        .filter(|&&i| v[i] != 0.0)
        .map(|&i| (i, v[i] / kept_norm))
        .collect();
    SparseUnitVector::from_pairs(p, &pairs)
}

/// Indices of the `k` largest entries of `|v|`, sorted increasing; ties
/// resolve toward smaller indices, which yields the lexicographically
/// smallest admissible index set.
pub(crate) fn top_k_indices(v: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| {
        v[b].abs()
            .partial_cmp(&v[a].abs())
            .expect("finite entries")
            .then(a.cmp(&b))
    });
    let mut selected = order[..k].to_vec();
    selected.sort_unstable();
    selected
}

/// Exhaustive k-sparse leading eigenvector: enumerates every k-subset in
/// lexicographic order, takes the top eigenpair of each principal
/// submatrix, and returns the embedded eigenvector of the best subset.
/// Value ties within `1e-12` keep the lexicographically smallest subset;
/// within a subset the usual sign convention and degenerate-eigenvalue tie
/// rule of [`leading_eigenvector`] apply.
pub fn exhaustive_sparse_pc(a: &SymMatrix, k: usize) -> Result<SparseUnitVector> {
    let p = a.dim();
    if k < 1 || k > p {
        return Err(Error::InvalidParameter(format!(
            "k = {k} out of range 1..={p}"
        )));
    }
    let count = binomial(p, k);
    if count > 1_000_000 {
        eprintln!(
            "exhaustive_sparse_pc: enumerating {count} subsets (p = {p}, k = {k}); \
             this is beyond the intended desk scale"
        );
    }

    let mut ws = EigWorkspace::new(k);
    let mut subset: Vec<usize> = (0..k).collect();
    let mut sub = vec![0.0; k * k];
    let mut values = Vec::with_capacity(count.min(1 << 26) as usize);
    loop {
        fill_submatrix(a, &subset, &mut sub);
        let m = SymMatrix::from_flat(k, sub.clone())?;
        values.push(ws.max_eigenvalue(&m)?);
        if !next_subset(&mut subset, p) {
            break;
        }
    }
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let winner = values
        .iter()
        .position(|&v| v >= best - 1e-12)
        .expect("at least one subset");

    let mut subset: Vec<usize> = (0..k).collect();
    for _ in 0..winner {
        next_subset(&mut subset, p);
    }
    let m = a.submatrix(&subset)?;
    let local = leading_eigenvector(&m)?;
    let mut dense = vec![0.0; p];
    for (slot, &idx) in subset.iter().enumerate() {
        dense[idx] = local[slot];
    }
    SparseUnitVector::from_dense(&dense)
}

fn fill_submatrix(a: &SymMatrix, subset: &[usize], out: &mut [f64]) {
    let k = subset.len();
    for (r, &i) in subset.iter().enumerate() {
        for (c, &j) in subset.iter().enumerate() {
            out[r * k + c] = a.get(i, j);
        }
    }
}

/// Advances `subset` to the next k-combination of `0..p` in lexicographic
/// order; returns false after the last one.
fn next_subset(subset: &mut [usize], p: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < p - k + i {
            subset[i] += 1;
            for j in (i + 1)..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn binomial(p: usize, k: usize) -> u64 {
    let k = k.min(p - k);
    let mut acc: f64 = 1.0;
    for i in 0..k {
        acc = acc * (p - i) as f64 / (i + 1) as f64;
        if acc > 1e18 {
            return u64::MAX;
        }
    }
    acc.round() as u64
}
