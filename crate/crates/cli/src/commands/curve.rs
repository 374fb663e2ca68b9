use anyhow::{bail, Context, Result};
use clap::Args;
use searchtrace::eval::{curve_to_csv, parallel_curve, sequential_curve, EvalRecord};
use std::path::PathBuf;

#[derive(Args)]
pub struct CurveArgs {
    /// Scored records (JSONL of EvalRecord, e.g. from `eval --out`).
    #[arg(long)]
    records: PathBuf,
    /// Model config for the FLOPs axis.
    #[arg(long)]
    config: String,
    /// Curve mode: sequential or parallel.
    #[arg(long)]
    mode: String,
    /// Sequential token budgets, e.g. 1024,2048,4096.
    #[arg(long)]
    budgets: Option<String>,
    /// Parallel sample counts, e.g. 1,2,4,8,16.
    #[arg(long)]
    samples: Option<String>,
    /// Tokens per sample for the parallel FLOPs axis.
    #[arg(long, default_value_t = 512)]
    tokens_per_sample: u64,
    /// Output CSV file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: CurveArgs) -> Result<bool> {
    let config = super::resolve_model(&args.config)?;
    let text = std::fs::read_to_string(&args.records)
        .with_context(|| format!("reading {}", args.records.display()))?;
    let records: Vec<EvalRecord> = text
        .lines()
        .enumerate()
        .map(|(i, line)| {
            serde_json::from_str(line).with_context(|| format!("{}:{}", args.records.display(), i + 1))
        })
        .collect::<Result<_>>()?;
    eprintln!("curve: mode={} records={} config={}", args.mode, records.len(), config.name);

    let points = match args.mode.as_str() {
        "sequential" => {
            let Some(budgets) = &args.budgets else { bail!("sequential mode needs --budgets") };
            sequential_curve(&records, &config, &super::parse_u64_list(budgets)?)?
        }
        "parallel" => {
            let Some(samples) = &args.samples else { bail!("parallel mode needs --samples") };
            parallel_curve(&records, &config, &super::parse_u64_list(samples)?, args.tokens_per_sample)?
        }
        other => bail!("unknown curve mode {other:?} (sequential or parallel)"),
    };
    super::write_output(args.out.as_ref(), &curve_to_csv(&points))?;
    Ok(true)
}
