use crate::config::ConfigFile;
use crate::output::{emit, g17, parse_f64_list, CsvTable};
use clap::Args;
use spca::analysis::{
    rcc_audit_deviations, rcc_constant, rcc_threshold, RccAuditSpec, RccConstantKind, RccSampler,
};
use spca::error::{Error, Result};
use spca::estimators::SparseUnitVector;
use spca::models::{GraphVectorSpec, SpikedModelSpec};
use std::path::PathBuf;

/// Empirical concentration audit over a grid of failure probabilities.
#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Distribution family: `spiked` or `gv`.
    #[arg(long)]
    pub model: String,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Sparsity level of the audited directions.
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated failure probabilities (default `0.25,0.1,0.05`).
    #[arg(long)]
    pub deltas: Option<String>,
    /// Concentration constant; defaults to the family's reference constant.
    #[arg(long)]
    pub constant: Option<f64>,
    /// Spiked model: spike size.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Spiked model: base variance.
    #[arg(long)]
    pub sigma2: Option<f64>,
    /// Spiked model: spike sparsity.
    #[arg(long)]
    pub spike_k: Option<usize>,
    /// Graph-vector model: number of active coordinates.
    #[arg(long)]
    pub signal_size: Option<usize>,
    /// Graph-vector model: mixing probability.
    #[arg(long)]
    pub pi0: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn run(args: AuditArgs) -> Result<()> {
    let file_cfg = ConfigFile::load(args.config.as_deref())?;
    let p = file_cfg.resolve(args.p, "p")?.unwrap_or(8);
    let n = file_cfg.resolve(args.n, "n")?.unwrap_or(100);
    let ell = file_cfg.resolve(args.ell, "ell")?.unwrap_or(2);
    let trials = file_cfg.resolve(args.trials, "trials")?.unwrap_or(200);
    let seed = file_cfg.resolve(args.seed, "seed")?.unwrap_or(1);
    let deltas = match file_cfg.resolve(args.deltas.clone(), "deltas")? {
        Some(list) => parse_f64_list(&list)?,
        None => vec![0.25, 0.1, 0.05],
    };

    let (sampler, theta, default_constant) = match args.model.as_str() {
        "spiked" => {
            let sigma2 = file_cfg.resolve(args.sigma2, "sigma2")?.unwrap_or(1.0);
            let theta = file_cfg.resolve(args.theta, "theta")?.unwrap_or(0.5);
            let spike_k = file_cfg
                .resolve(args.spike_k, "spike-k")?
                .unwrap_or(2.min(p));
            if spike_k == 0 || spike_k > p {
                return Err(Error::InvalidParameter(format!(
                    "spike sparsity {spike_k} out of range 1..={p}"
                )));
            }
            let w = 1.0 / (spike_k as f64).sqrt();
            let pairs: Vec<(usize, f64)> = (0..spike_k).map(|i| (i, w)).collect();
            let v1 = SparseUnitVector::from_pairs(p, &pairs)?;
            let spec = SpikedModelSpec::new(p, sigma2, theta, v1)?;
            let constant = rcc_constant(RccConstantKind::Gaussian, sigma2 + theta, p);
            (RccSampler::Spiked(spec), theta, constant)
        }
        "gv" => {
            let signal = file_cfg
                .resolve(args.signal_size, "signal-size")?
                .unwrap_or(3);
            let pi0 = file_cfg.resolve(args.pi0, "pi0")?.unwrap_or(0.2);
            if signal > p {
                return Err(Error::InvalidParameter(format!(
                    "signal size {signal} exceeds dimension {p}"
                )));
            }
            let g: Vec<bool> = (0..p).map(|i| i < signal).collect();
            let spec = GraphVectorSpec::new(g, pi0)?;
            let theta = spec.eigengap();
            (RccSampler::GraphVector(spec), theta, 750.0)
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown model {other:?}; expected spiked or gv"
            )))
        }
    };
    let constant = file_cfg
        .resolve(args.constant, "constant")?
        .unwrap_or(default_constant);

    // deviations do not depend on delta, so they are sampled once
    let base_spec = RccAuditSpec {
        sampler,
        n,
        ell,
        constant,
        delta: deltas[0],
        trials,
        seed,
    };
    base_spec.validate()?;
    let deviations = rcc_audit_deviations(&base_spec)?;

    let mut table = CsvTable::new(&[
        "seed",
        "trial",
        "n",
        "p",
        "k",
        "theta",
        "delta",
        "constant",
        "threshold",
        "deviation",
        "violation",
    ]);
    for &delta in &deltas {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "delta must lie in (0, 1), got {delta}"
            )));
        }
        let threshold = rcc_threshold(p, n, ell, constant, delta);
        let mut violations = 0usize;
        for (trial, &dev) in deviations.iter().enumerate() {
            let violation = dev >= threshold;
            violations += usize::from(violation);
            table.push_row(vec![
                seed.to_string(),
                trial.to_string(),
                n.to_string(),
                p.to_string(),
                ell.to_string(),
                g17(theta),
                g17(delta),
                g17(constant),
                g17(threshold),
                g17(dev),
                u8::from(violation).to_string(),
            ]);
        }
        eprintln!(
            "delta={delta}: violations {violations}/{trials} (rate {:.4}, threshold {:.6})",
            violations as f64 / trials as f64,
            threshold
        );
    }

    emit(args.out.as_deref(), &table.render())
}
