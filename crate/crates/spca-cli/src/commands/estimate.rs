use crate::config::ConfigFile;
use crate::output::{emit, g17};
use clap::Args;
use spca::error::Result;
use spca::estimators::{
    default_tuning, iteration_bound, sdp_estimate, truncate_renormalize, SdpConfig,
};
use spca::models::DataMatrix;
use std::io::BufReader;
use std::path::PathBuf;

/// Estimate a sparse principal direction from a data matrix file.
#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Data matrix in the shared text format (header `n p`).
    #[arg(long)]
    pub input: PathBuf,
    /// Penalty level; defaults to 4 sqrt(log p / n).
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Optimization slack; defaults to log p / (4 n).
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Iteration cap; defaults to the theoretical bound.
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Gap evaluation cadence; defaults to ceil(bound / 1000).
    #[arg(long)]
    pub gap_check_period: Option<usize>,
    /// Also report the estimate truncated to its top k coordinates.
    #[arg(long)]
    pub truncate: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional key=value file supplying defaults for absent flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn run(args: EstimateArgs) -> Result<()> {
    let file_cfg = ConfigFile::load(args.config.as_deref())?;
    let x = DataMatrix::read_text(BufReader::new(std::fs::File::open(&args.input)?))?;

    let defaults = default_tuning(x.n(), x.p())?;
    let lambda = file_cfg
        .resolve(args.lambda, "lambda")?
        .unwrap_or(defaults.lambda);
    let epsilon = file_cfg
        .resolve(args.epsilon, "epsilon")?
        .unwrap_or(defaults.epsilon);
    let bound = iteration_bound(lambda, x.p(), epsilon);
    let max_iterations = file_cfg
        .resolve(args.max_iterations, "max-iterations")?
        .unwrap_or(bound);
    let gap_check_period = file_cfg
        .resolve(args.gap_check_period, "gap-check-period")?
        .unwrap_or_else(|| bound.div_ceil(1000).max(1));
    let truncate = file_cfg.resolve(args.truncate, "truncate")?;

    let cfg = SdpConfig::new(lambda, epsilon)?
        .with_max_iterations(max_iterations)?
        .with_gap_check_period(gap_check_period)?;
    let (v_hat, result) = sdp_estimate(&x, &cfg)?;

    let mut report = String::new();
    report.push_str(&format!("n {}\n", x.n()));
    report.push_str(&format!("p {}\n", x.p()));
    report.push_str(&format!("lambda {}\n", g17(lambda)));
    report.push_str(&format!("epsilon {}\n", g17(epsilon)));
    report.push_str(&format!("iterations_run {}\n", result.iterations_run));
    match result.final_gap {
        Some(gap) => report.push_str(&format!("final_gap {}\n", g17(gap))),
        None => report.push_str("final_gap NA\n"),
    }
    report.push_str(&format!("objective {}\n", g17(result.objective)));
    let joined: Vec<String> = v_hat.iter().map(|&v| g17(v)).collect();
    report.push_str(&format!("v_hat {}\n", joined.join(" ")));

    if let Some(k) = truncate {
        let truncated = truncate_renormalize(&v_hat, k)?;
        report.push_str(&format!("truncate_k {k}\n"));
        let dense: Vec<String> = truncated.to_dense().iter().map(|&v| g17(v)).collect();
        report.push_str(&format!("v_truncated {}\n", dense.join(" ")));
    }

    emit(args.out.as_deref(), &report)
}
