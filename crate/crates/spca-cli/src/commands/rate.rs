use crate::config::ConfigFile;
use crate::output::{emit, g17, parse_usize_list, CsvTable};
use clap::Args;
use rayon::prelude::*;
use spca::analysis::{empirical_covariance, loss};
use spca::error::{Error, Result};
use spca::estimators::{
    default_tuning, exhaustive_sparse_pc, sdp_estimate, truncate_renormalize, SparseUnitVector,
};
use spca::models::{sample_spiked, SeededRng, SpikedModelSpec};
use std::path::PathBuf;

/// Rate experiment over a grid of sample sizes: per-trial losses of the
/// relaxation estimator (plain and truncated), the exhaustive estimator
/// when its enumeration is feasible, and the theoretical rate bounds.
#[derive(Debug, Args)]
pub struct RateArgs {
    /// Ambient dimension (ignored under `--regime thm6`, where p = n).
    #[arg(long)]
    pub p: Option<usize>,
    /// Spike sparsity (ignored under `--regime thm6`).
    #[arg(long)]
    pub k: Option<usize>,
    /// Spike size (ignored under `--regime thm6`).
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub sigma2: Option<f64>,
    /// Comma-separated sample sizes, e.g. `200,400,800`.
    #[arg(long, value_name = "LIST")]
    pub n: String,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `thm6` derives (p, k, theta) from each n via the hard-regime preset
    /// k = floor(n^(2/(5-alpha))), p = n, theta = n^(-(1-alpha)/(5-alpha)) / 1000.
    #[arg(long)]
    pub regime: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Iteration cap forwarded to the solver.
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Enumeration ceiling for running the exhaustive estimator in-line.
const EXHAUSTIVE_BUDGET: f64 = 1e6;

fn binomial_approx(p: usize, k: usize) -> f64 {
    let k = k.min(p - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (p - i) as f64 / (i + 1) as f64;
        if acc > 1e18 {
            return acc;
        }
    }
    acc
}

struct Cell {
    n: usize,
    p: usize,
    k: usize,
    theta: f64,
}

pub fn run(args: RateArgs) -> Result<()> {
    let file_cfg = ConfigFile::load(args.config.as_deref())?;
    let grid = parse_usize_list(&args.n)?;
    let trials = file_cfg.resolve(args.trials, "trials")?.unwrap_or(30);
    let seed = file_cfg.resolve(args.seed, "seed")?.unwrap_or(1);
    let sigma2 = file_cfg.resolve(args.sigma2, "sigma2")?.unwrap_or(1.0);
    let regime = file_cfg.resolve(args.regime.clone(), "regime")?;
    let max_iterations = file_cfg.resolve(args.max_iterations, "max-iterations")?;
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }

    let cells: Vec<Cell> = match regime.as_deref() {
        None => {
            let p = file_cfg
                .resolve(args.p, "p")?
                .ok_or_else(|| Error::InvalidParameter("--p is required".into()))?;
            let k = file_cfg
                .resolve(args.k, "k")?
                .ok_or_else(|| Error::InvalidParameter("--k is required".into()))?;
            let theta = file_cfg
                .resolve(args.theta, "theta")?
                .ok_or_else(|| Error::InvalidParameter("--theta is required".into()))?;
            grid.iter().map(|&n| Cell { n, p, k, theta }).collect()
        }
        Some("thm6") => {
            let alpha = file_cfg.resolve(args.alpha, "alpha")?.ok_or_else(|| {
                Error::InvalidParameter("--alpha is required with --regime thm6".into())
            })?;
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "alpha must lie in (0, 1), got {alpha}"
                )));
            }
            grid.iter()
                .map(|&n| {
                    let nf = n as f64;
                    let k = nf.powf(2.0 / (5.0 - alpha)).floor() as usize;
                    let theta = nf.powf(-(1.0 - alpha) / (5.0 - alpha)) / 1000.0;
                    Cell {
                        n,
                        p: n,
                        k: k.max(1),
                        theta,
                    }
                })
                .collect()
        }
        Some(other) => {
            return Err(Error::InvalidParameter(format!(
                "unknown regime {other:?}; the only preset is thm6"
            )))
        }
    };

    let mut table = CsvTable::new(&[
        "seed",
        "trial",
        "n",
        "p",
        "k",
        "theta",
        "loss_sdp",
        "loss_truncated",
        "loss_exhaustive",
        "iterations",
        "final_gap",
        "bound_minimax",
        "bound_sdp",
    ]);

    for (cell_idx, cell) in cells.iter().enumerate() {
        if cell.k > cell.p {
            return Err(Error::InvalidParameter(format!(
                "sparsity {} exceeds dimension {} at n = {}",
                cell.k, cell.p, cell.n
            )));
        }
        let support: Vec<usize> = (0..cell.k).collect();
        let weight = 1.0 / (cell.k as f64).sqrt();
        let pairs: Vec<(usize, f64)> = support.iter().map(|&i| (i, weight)).collect();
        let v1 = SparseUnitVector::from_pairs(cell.p, &pairs)?;
        let spec = SpikedModelSpec::new(cell.p, sigma2, cell.theta, v1.clone())?;
        let dense = v1.to_dense();

        let mut tuning = default_tuning(cell.n, cell.p)?;
        if let Some(cap) = max_iterations {
            tuning = tuning.with_max_iterations(cap)?;
        }
        let run_exhaustive = binomial_approx(cell.p, cell.k) <= EXHAUSTIVE_BUDGET;

        let logp = (cell.p as f64).ln();
        let bound_minimax =
            7.0 * (cell.k as f64 * logp / (cell.n as f64 * cell.theta * cell.theta)).sqrt();
        let bound_sdp = (16.0 * 2.0f64.sqrt() + 2.0)
            * ((cell.k * cell.k) as f64 * logp / (cell.n as f64 * cell.theta * cell.theta)).sqrt();

        // trial rows computed in parallel, emitted in trial order
        let rows: Vec<Vec<String>> = (0..trials)
            .into_par_iter()
            .map(|trial| -> Result<Vec<String>> {
                let sub = SeededRng::sub_seed(seed, (cell_idx * trials + trial) as u64);
                let x = sample_spiked(&spec, cell.n, sub);
                let (v_hat, result) = sdp_estimate(&x, &tuning)?;
                let loss_sdp = loss(&v_hat, &dense)?;
                let truncated = truncate_renormalize(&v_hat, cell.k)?;
                let loss_truncated = loss(&truncated.to_dense(), &dense)?;
                let loss_exhaustive = if run_exhaustive {
                    let cov = empirical_covariance(&x);
                    let exh = exhaustive_sparse_pc(&cov, cell.k)?;
                    g17(loss(&exh.to_dense(), &dense)?)
                } else {
                    String::new()
                };
                Ok(vec![
                    seed.to_string(),
                    trial.to_string(),
                    cell.n.to_string(),
                    cell.p.to_string(),
                    cell.k.to_string(),
                    g17(cell.theta),
                    g17(loss_sdp),
                    g17(loss_truncated),
                    loss_exhaustive,
                    result.iterations_run.to_string(),
                    result.final_gap.map(g17).unwrap_or_default(),
                    g17(bound_minimax),
                    g17(bound_sdp),
                ])
            })
            .collect::<Result<_>>()?;
        for row in rows {
            table.push_row(row);
        }
    }

    emit(args.out.as_deref(), &table.render())
}
