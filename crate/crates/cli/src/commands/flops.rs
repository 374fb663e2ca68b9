use anyhow::Result;
use clap::Args;
use searchtrace::flops::{flops_breakdown, BudgetQuery};

#[derive(Args)]
pub struct FlopsArgs {
    /// Builtin size (3M, 17M, 38M, 144M) or a key-value config file.
    #[arg(long)]
    config: String,
    /// Tokens generated per sequence.
    #[arg(long)]
    tokens: u64,
    /// Number of sequences (best-of-n).
    #[arg(long, default_value_t = 1)]
    samples: u64,
    /// Print the full breakdown as JSON instead of the total.
    #[arg(long)]
    breakdown: bool,
}

pub fn run(args: FlopsArgs) -> Result<bool> {
    let config = super::resolve_model(&args.config)?;
    eprintln!("flops: config={config} tokens={} samples={}", args.tokens, args.samples);
    let b = flops_breakdown(&config, BudgetQuery { tokens: args.tokens, sequences: args.samples })?;
    if args.breakdown {
        println!("{}", serde_json::to_string_pretty(&b)?);
    } else {
        println!("{}", b.total);
    }
    Ok(true)
}
