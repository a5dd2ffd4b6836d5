//! Loss metric, restricted covariance deviations, and empirical auditing of
//! restricted covariance concentration.

use crate::error::{Error, Result};
use crate::estimators::SparseUnitVector;
use crate::matcore::{eig_sym, MatrixNorm, SymMatrix};
use crate::models::{
    gv_covariance, sample_graph_vector, sample_spiked, DataMatrix, GraphVectorSpec, SeededRng,
    SpikedModelSpec,
};

/// Sine of the acute angle between two unit vectors:
/// `sqrt(max(0, 1 - (uᵀv)^2))`. Invariant to sign flips of either argument.
pub fn loss(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch(format!(
            "loss of vectors with lengths {} and {}",
            u.len(),
            v.len()
        )));
    }
    for w in [u, v] {
        let norm: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidParameter(format!(
                "loss requires unit vectors, got norm {norm}"
            )));
        }
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    Ok((1.0 - dot * dot).max(0.0).sqrt())
}

/// Sample covariance `n^{-1} XᵀX`, exactly symmetric by construction.
pub fn empirical_covariance(x: &DataMatrix) -> SymMatrix {
    let n = x.n();
    let p = x.p();
    let inv_n = 1.0 / n as f64;
    let mut entries = vec![0.0; p * p];
    for i in 0..n {
        let row = x.row(i);
        for a in 0..p {
            let ra = row[a];
            if ra == 0.0 {
                continue;
            }
            let dst = &mut entries[a * p..(a + 1) * p];
            for b in a..p {
                dst[b] += ra * row[b];
            }
        }
    }
    for a in 0..p {
        for b in (a + 1)..p {
            entries[a * p + b] *= inv_n;
            entries[b * p + a] = entries[a * p + b];
        }
        entries[a * p + a] *= inv_n;
    }
    SymMatrix::from_flat(p, entries).expect("finite covariance entries")
}

const SUBSET_BUDGET: u64 = 1_000_000;

/// Exact value of `sup_{u in B_0(ell)} |uᵀ(S - P)u|` by support
/// enumeration: the supremum over each support equals the largest absolute
/// eigenvalue of the corresponding principal submatrix of the difference.
pub fn restricted_deviation(sample: &SymMatrix, population: &SymMatrix, ell: usize) -> Result<f64> {
    let p = sample.dim();
    if population.dim() != p {
        return Err(Error::DimensionMismatch(
            "restricted deviation of matrices with different dimensions".into(),
        ));
    }
    if ell < 1 || ell > p {
        return Err(Error::InvalidParameter(format!(
            "ell = {ell} out of range 1..={p}"
        )));
    }
    let count = subset_count(p, ell);
    if count > SUBSET_BUDGET {
        return Err(Error::ResourceLimit(format!(
            "enumerating {count} supports exceeds the budget of {SUBSET_BUDGET}; \
             reduce p or ell"
        )));
    }
    let mut diff = sample.clone();
    diff.add_scaled(population, -1.0)?;

    if ell == 1 {
        return Ok((0..p).map(|i| diff.get(i, i).abs()).fold(0.0, f64::max));
    }

    let mut subset: Vec<usize> = (0..ell).collect();
    let mut best = 0.0f64;
    loop {
        let sub = diff.submatrix(&subset)?;
        let spectrum = eig_sym(&sub)?;
        let top = spectrum.eigenvalues()[0].abs();
        let bottom = spectrum.eigenvalues().last().unwrap().abs();
        best = best.max(top.max(bottom));
        if !advance_subset(&mut subset, p) {
            break;
        }
    }
    Ok(best)
}

fn subset_count(p: usize, ell: usize) -> u64 {
    let ell = ell.min(p - ell);
    let mut acc = 1.0f64;
    for i in 0..ell {
        acc = acc * (p - i) as f64 / (i + 1) as f64;
        if acc > 1e18 {
            return u64::MAX;
        }
    }
    acc.round() as u64
}

fn advance_subset(subset: &mut [usize], p: usize) -> bool {
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

/// Concentration threshold
/// `C max( sqrt(ell log(p/delta) / n), ell log(p/delta) / n )`
/// with the natural logarithm.
pub fn rcc_threshold(p: usize, n: usize, ell: usize, c: f64, delta: f64) -> f64 {
    let ratio = ell as f64 * (p as f64 / delta).ln() / n as f64;
    c * ratio.sqrt().max(ratio)
}

/// Reference concentration constants for the two distribution families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RccConstantKind {
    /// Subgaussian with parameter `sigma^2`: `16 sigma^2 (1 + 9 / log p)`.
    Subgaussian,
    /// Gaussian with top covariance eigenvalue `lambda_1`:
    /// `8 lambda_1 (1 + 9 / log p)`.
    Gaussian,
}

pub fn rcc_constant(kind: RccConstantKind, scale: f64, p: usize) -> f64 {
    let base = match kind {
        RccConstantKind::Subgaussian => 16.0,
        RccConstantKind::Gaussian => 8.0,
    };
    base * scale * (1.0 + 9.0 / (p as f64).ln())
}

/// Distribution under audit.
#[derive(Debug, Clone)]
pub enum RccSampler {
    Spiked(SpikedModelSpec),
    GraphVector(GraphVectorSpec),
}

impl RccSampler {
    pub fn p(&self) -> usize {
        match self {
            RccSampler::Spiked(s) => s.p,
            RccSampler::GraphVector(s) => s.p(),
        }
    }

    pub fn population_covariance(&self) -> SymMatrix {
        match self {
            RccSampler::Spiked(s) => s.population_covariance(),
            RccSampler::GraphVector(s) => gv_covariance(s),
        }
    }

    pub fn sample(&self, n: usize, seed: u64) -> DataMatrix {
        match self {
            RccSampler::Spiked(s) => sample_spiked(s, n, seed),
            RccSampler::GraphVector(s) => sample_graph_vector(s, n, seed),
        }
    }
}

/// Monte Carlo audit configuration for one concentration event.
#[derive(Debug, Clone)]
pub struct RccAuditSpec {
    pub sampler: RccSampler,
    pub n: usize,
    pub ell: usize,
    /// Candidate concentration constant `C`.
    pub constant: f64,
    /// Failure probability at which the event is evaluated.
    pub delta: f64,
    pub trials: usize,
    pub seed: u64,
}

impl RccAuditSpec {
    pub fn validate(&self) -> Result<()> {
        let p = self.sampler.p();
        if self.n < 1 {
            return Err(Error::InvalidParameter("need n >= 1".into()));
        }
        if self.ell < 1 || self.ell > p {
            return Err(Error::InvalidParameter(format!(
                "ell = {} out of range 1..={p}",
                self.ell
            )));
        }
        if !(self.constant > 0.0) {
            return Err(Error::InvalidParameter(
                "concentration constant must be positive".into(),
            ));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if self.trials < 1 {
            return Err(Error::InvalidParameter("need at least one trial".into()));
        }
        Ok(())
    }
}

/// Audit outcome: exceedance count of the concentration threshold.
#[derive(Debug, Clone)]
pub struct RccReport {
    pub violations: usize,
    pub trials: usize,
    pub threshold_used: f64,
    pub empirical_rate: f64,
}

/// Per-trial restricted deviations, one sample of size `n` per trial with
/// hash-derived sub-seeds, so trials are order-insensitive.
pub fn rcc_audit_deviations(spec: &RccAuditSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let population = spec.sampler.population_covariance();
    let mut out = Vec::with_capacity(spec.trials);
    for trial in 0..spec.trials {
        let seed = SeededRng::sub_seed(spec.seed, trial as u64);
        let x = spec.sampler.sample(spec.n, seed);
        let sample_cov = empirical_covariance(&x);
        out.push(restricted_deviation(&sample_cov, &population, spec.ell)?);
    }
    Ok(out)
}

/// Runs the Monte Carlo audit of the concentration event: a sampler that
/// genuinely satisfies the concentration condition with constant `C` keeps
/// the empirical violation rate at or below `delta`, up to binomial
/// fluctuation.
pub fn rcc_audit(spec: &RccAuditSpec) -> Result<RccReport> {
    let threshold = rcc_threshold(
        spec.sampler.p(),
        spec.n,
        spec.ell,
        spec.constant,
        spec.delta,
    );
    let deviations = rcc_audit_deviations(spec)?;
    let violations = deviations.iter().filter(|&&d| d >= threshold).count();
    Ok(RccReport {
        violations,
        trials: spec.trials,
        threshold_used: threshold,
        empirical_rate: violations as f64 / spec.trials as f64,
    })
}

/// Polarisation inequality: the entrywise max deviation of the sample
/// covariance is at most twice the restricted deviation at sparsity 2.
/// Returns `(lhs, rhs, holds)`; `holds` is a theorem and must be true.
pub fn check_polarisation(x: &DataMatrix, population: &SymMatrix) -> Result<(f64, f64, bool)> {
    if x.p() < 2 {
        return Err(Error::InvalidParameter("need p >= 2".into()));
    }
    let sample_cov = empirical_covariance(x);
    let mut diff = sample_cov.clone();
    diff.add_scaled(population, -1.0)?;
    let lhs = diff.entrywise_norm(MatrixNorm::LInf);
    let rhs = 2.0 * restricted_deviation(&sample_cov, population, 2)?;
    Ok((lhs, rhs, lhs <= rhs))
}

/// Support-loss inequality: the squared loss against a sparse vector is at
/// least half the mass that vector places outside the top-|support| entries
/// of the estimate. Returns `(lhs, rhs, holds)`; `holds` is a theorem and
/// must be true.
pub fn check_support_bound(v: &SparseUnitVector, v_hat: &[f64]) -> Result<(f64, f64, bool)> {
    let dense = v.to_dense();
    let l = loss(v_hat, &dense)?;
    let lhs = l * l;
    let k = v.nnz();
    let shat = crate::estimators::top_k_indices(v_hat, k);
    let mut rhs = 0.0;
    for (&j, &vj) in v.support().iter().zip(v.values()) {
        if !shat.contains(&j) {
            rhs += vj * vj;
        }
    }
    rhs *= 0.5;
    Ok((lhs, rhs, lhs >= rhs))
}
