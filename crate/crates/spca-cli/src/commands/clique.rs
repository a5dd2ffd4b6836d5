use crate::config::ConfigFile;
use crate::output::{emit, g17};
use clap::Args;
use spca::cliquesolver::{solve_planted_clique, CliqueSolverConfig, RecoveryReport};
use spca::error::{Error, Result};
use spca::models::{sample_planted_clique, PlantedInstance};
use std::io::BufReader;
use std::path::PathBuf;

/// Generate or load a planted-clique instance and run the recovery
/// pipeline.
#[derive(Debug, Args)]
pub struct CliqueArgs {
    /// Vertex count for a generated instance.
    #[arg(long)]
    pub m: Option<usize>,
    /// Clique size: plant size when generating, claimed size when loading.
    #[arg(long)]
    pub kappa: Option<usize>,
    /// Load an instance from the graph text format instead of generating.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Subsampling factor; defaults to max(2, ceil(log m)).
    #[arg(long)]
    pub l: Option<usize>,
    /// Iteration cap for the estimator (default 3000).
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Variance normalizer (default 750).
    #[arg(long)]
    pub scaling: Option<f64>,
    /// Neighbor-count threshold as a fraction of k (default 0.75).
    #[arg(long)]
    pub threshold_fraction: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn render_report(report: &RecoveryReport) -> String {
    let recovered: Vec<String> = report.recovered.iter().map(|v| v.to_string()).collect();
    let exact = match report.exact_match {
        Some(true) => "true".to_string(),
        Some(false) => "false".to_string(),
        None => "null".to_string(),
    };
    let jaccard = match report.jaccard {
        Some(j) => g17(j),
        None => "null".to_string(),
    };
    let gap = match report.final_gap {
        Some(g) => g17(g),
        None => "null".to_string(),
    };
    format!(
        "{{\"recovered\": [{}], \"n\": {}, \"p\": {}, \"k\": {}, \"iterations_run\": {}, \
         \"final_gap\": {}, \"exact_match\": {}, \"jaccard\": {}}}\n",
        recovered.join(", "),
        report.n,
        report.p,
        report.k,
        report.iterations_run,
        gap,
        exact,
        jaccard,
    )
}

pub fn run(args: CliqueArgs) -> Result<()> {
    let file_cfg = ConfigFile::load(args.config.as_deref())?;
    let seed = file_cfg.resolve(args.seed, "seed")?.unwrap_or(1);
    let kappa_flag = file_cfg.resolve(args.kappa, "kappa")?;

    let (instance, kappa) = match &args.input {
        Some(path) => {
            let inst = PlantedInstance::read_text(BufReader::new(std::fs::File::open(path)?))?;
            let kappa = match kappa_flag {
                Some(k) => k,
                None if !inst.clique().is_empty() => inst.clique().len(),
                None => {
                    return Err(Error::InvalidParameter(
                        "--kappa is required for instances without a recorded clique".into(),
                    ))
                }
            };
            (inst, kappa)
        }
        None => {
            let m = file_cfg.resolve(args.m, "m")?.ok_or_else(|| {
                Error::InvalidParameter("either --input or --m is required".into())
            })?;
            let kappa = kappa_flag
                .ok_or_else(|| Error::InvalidParameter("--kappa is required with --m".into()))?;
            (sample_planted_clique(m, kappa, seed)?, kappa)
        }
    };

    let m = instance.graph().vertex_count();
    let mut cfg = CliqueSolverConfig::default_for(m);
    if let Some(l) = file_cfg.resolve(args.l, "l")? {
        cfg = CliqueSolverConfig::new(l)?;
    }
    if let Some(s) = file_cfg.resolve(args.scaling, "scaling")? {
        cfg = cfg.with_scaling(s)?;
    }
    if let Some(t) = file_cfg.resolve(args.threshold_fraction, "threshold-fraction")? {
        cfg = cfg.with_threshold_fraction(t)?;
    }
    if let Some(cap) = file_cfg.resolve(args.iterations, "iterations")? {
        cfg = cfg.with_sdp_max_iterations(Some(cap))?;
    }

    let planted = if instance.clique().is_empty() {
        None
    } else {
        Some(instance.clique())
    };
    let report = solve_planted_clique(instance.graph(), kappa, planted, &cfg, seed)?;
    emit(args.out.as_deref(), &render_report(&report))
}
