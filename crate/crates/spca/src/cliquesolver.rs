//! Planted-clique recovery pipeline: subsample the graph into a data matrix
//! via the bottom-left transform, estimate a sparse principal direction,
//! threshold its support, and expand by neighbor counts.

use crate::error::{Error, Result};
use crate::estimators::{default_tuning, sdp_estimate, top_k_indices};
use crate::models::{bottom_left_transform, Graph};

/// Pipeline configuration.
#[derive(Debug, Clone)]
pub struct CliqueSolverConfig {
    /// Subsampling factor `L`; the working sizes are `n = p = floor(9m /
    /// (10L))` and `k = floor(kappa / L)`, so `L >= 2` keeps `n + p <= m`.
    pub subsample_factor: usize,
    /// Variance normalizer applied to the data matrix as `X / sqrt(scaling)`.
    pub scaling: f64,
    /// Fraction of `k` a vertex's neighbor count must reach to enter the
    /// recovered set; compared as an integer ceiling.
    pub threshold_fraction: f64,
    /// Optional iteration cap forwarded to the estimator; the theoretical
    /// bound at these sizes is impractically large and the downstream
    /// thresholding tolerates approximate solves.
    pub sdp_max_iterations: Option<usize>,
}

impl CliqueSolverConfig {
    pub fn new(subsample_factor: usize) -> Result<Self> {
        if subsample_factor < 2 {
            return Err(Error::InvalidParameter(
                "subsample factor must be at least 2".into(),
            ));
        }
        Ok(CliqueSolverConfig {
            subsample_factor,
            scaling: 750.0,
            threshold_fraction: 0.75,
            sdp_max_iterations: Some(3000),
        })
    }

    /// Defaults for a graph on `m` vertices: `L = max(2, ceil(log m))` with
    /// the natural logarithm.
    pub fn default_for(m: usize) -> Self {
        let l = ((m as f64).ln().ceil() as usize).max(2);
        CliqueSolverConfig {
            subsample_factor: l,
            scaling: 750.0,
            threshold_fraction: 0.75,
            sdp_max_iterations: Some(3000),
        }
    }

    pub fn with_scaling(mut self, scaling: f64) -> Result<Self> {
        if !(scaling > 0.0) || !scaling.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "scaling must be positive, got {scaling}"
            )));
        }
        self.scaling = scaling;
        Ok(self)
    }

    pub fn with_threshold_fraction(mut self, fraction: f64) -> Result<Self> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "threshold fraction must lie in (0, 1], got {fraction}"
            )));
        }
        self.threshold_fraction = fraction;
        Ok(self)
    }

    pub fn with_sdp_max_iterations(mut self, cap: Option<usize>) -> Result<Self> {
        if cap == Some(0) {
            return Err(Error::InvalidParameter(
                "iteration cap must be at least 1".into(),
            ));
        }
        self.sdp_max_iterations = cap;
        Ok(self)
    }
}

/// Outcome of one recovery run.
#[derive(Debug, Clone)]
pub struct RecoveryReport {
    /// Sorted recovered vertex set.
    pub recovered: Vec<usize>,
    /// Whether the recovered set equals the planted clique; absent when the
    /// planted set is unknown.
    pub exact_match: Option<bool>,
    /// Jaccard similarity to the planted clique; absent when unknown.
    pub jaccard: Option<f64>,
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub iterations_run: usize,
    pub final_gap: Option<f64>,
}

/// Membership-plus-adjacency count: `1` if `u` belongs to `members`, plus
/// one for each member adjacent to `u`. `members` must list distinct
/// vertices.
pub fn neighbor_count(graph: &Graph, u: usize, members: &[usize]) -> Result<usize> {
    let m = graph.vertex_count();
    if u >= m {
        return Err(Error::InvalidParameter(format!("vertex {u} out of range")));
    }
    let mut count = 0usize;
    let mut is_member = false;
    for &w in members {
        if w >= m {
            return Err(Error::InvalidParameter(format!("vertex {w} out of range")));
        }
        if w == u {
            is_member = true;
        }
        if graph.has_edge(u, w) {
            count += 1;
        }
    }
    Ok(count + usize::from(is_member))
}

/// Index set of the `k` largest coordinates of `v` in absolute value,
/// sorted increasing; ties resolve toward the lexicographically smallest
/// admissible set.
pub fn top_k_support(v: &[f64], k: usize) -> Result<Vec<usize>> {
    if k < 1 || k > v.len() {
        return Err(Error::InvalidParameter(format!(
            "k = {k} out of range 1..={}",
            v.len()
        )));
    }
    if let Some(pos) = v.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite { row: 0, col: pos });
    }
    Ok(top_k_indices(v, k))
}

/// Working sizes of the pipeline: `n = p = floor(9m / (10L))`,
/// `k = floor(kappa / L)`.
pub fn derive_sizes(
    m: usize,
    kappa: usize,
    subsample_factor: usize,
) -> Result<(usize, usize, usize)> {
    if subsample_factor < 2 {
        return Err(Error::InvalidParameter(
            "subsample factor must be at least 2".into(),
        ));
    }
    let n = 9 * m / (10 * subsample_factor);
    let k = kappa / subsample_factor;
    if k < 1 {
        return Err(Error::InvalidParameter(format!(
            "clique size {kappa} below the subsample factor {subsample_factor} leaves k = 0"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "graph too small: working dimension n = {n}"
        )));
    }
    if k > n {
        return Err(Error::InvalidParameter(format!(
            "working sparsity k = {k} exceeds the working dimension {n}"
        )));
    }
    Ok((n, n, k))
}

/// Runs the full pipeline on `graph` with claimed clique size `kappa`.
/// When the planted clique is known, pass it to score the recovery;
/// otherwise the match fields stay absent. Deterministic given `seed`.
pub fn solve_planted_clique(
    graph: &Graph,
    kappa: usize,
    planted: Option<&[usize]>,
    cfg: &CliqueSolverConfig,
    seed: u64,
) -> Result<RecoveryReport> {
    let m = graph.vertex_count();
    let (n, p, k) = derive_sizes(m, kappa, cfg.subsample_factor)?;
    let (x, _u_vertices, w_vertices) = bottom_left_transform(graph, n, p, seed)?;
    let x_scaled = x.scaled(1.0 / cfg.scaling.sqrt());

    let mut tuning = default_tuning(n, p)?;
    if let Some(cap) = cfg.sdp_max_iterations {
        tuning = tuning.with_max_iterations(cap)?;
    }
    let (v_hat, sdp) = sdp_estimate(&x_scaled, &tuning)?;

    let support = top_k_support(&v_hat, k)?;
    let members: Vec<usize> = support.iter().map(|&j| w_vertices[j]).collect();
    let need = (cfg.threshold_fraction * k as f64).ceil() as usize;
    let mut recovered = Vec::new();
    for u in 0..m {
        if neighbor_count(graph, u, &members)? >= need {
            recovered.push(u);
        }
    }

    let (exact_match, jaccard) = match planted {
        Some(clique) => {
            let mut truth = clique.to_vec();
            truth.sort_unstable();
            truth.dedup();
            let intersection = recovered
                .iter()
                .filter(|v| truth.binary_search(v).is_ok())
                .count();
            let union = recovered.len() + truth.len() - intersection;
            let jaccard = if union == 0 {
                1.0
            } else {
                intersection as f64 / union as f64
            };
            (Some(recovered == truth), Some(jaccard))
        }
        None => (None, None),
    };

    Ok(RecoveryReport {
        recovered,
        exact_match,
        jaccard,
        n,
        p,
        k,
        iterations_run: sdp.iterations_run,
        final_gap: sdp.final_gap,
    })
}
