use anyhow::{bail, Result};
use clap::Args;
use searchtrace::trace::{count_mistakes, parse, prune_to_direct, serialize, shorten_think, Dialect, TraceMode};
use std::path::PathBuf;

#[derive(Args)]
pub struct TraceArgs {
    /// Game of the input text: countdown or sudoku.
    #[arg(long)]
    game: String,
    /// Dialect of the input text: backtrack, direct, or think.
    #[arg(long, default_value = "backtrack")]
    mode: String,
    /// Transform: prune (to direct), think (shorten), mistakes, or report.
    #[arg(long)]
    op: String,
    /// Input file; stdin when omitted.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: TraceArgs) -> Result<bool> {
    let dialect = super::parse_dialect(&args.game, &args.mode)?;
    let text = super::read_input(args.input.as_ref())?;
    let text = text.strip_suffix('\n').unwrap_or(&text);
    eprintln!("trace: game={} mode={} op={}", args.game, args.mode, args.op);
    let (trace, report) = parse(text, dialect);
    match args.op.as_str() {
        "prune" => {
            let direct = prune_to_direct(&trace)?;
            let out_dialect = Dialect::new(dialect.game, TraceMode::Direct)?;
            super::write_output(args.out.as_ref(), &format!("{}\n", serialize(&direct, out_dialect)?))?;
            Ok(true)
        }
        "think" => {
            let think = shorten_think(&trace)?;
            let out_dialect = Dialect::new(dialect.game, TraceMode::Think)?;
            super::write_output(args.out.as_ref(), &format!("{}\n", serialize(&think, out_dialect)?))?;
            Ok(true)
        }
        "mistakes" => {
            super::write_output(args.out.as_ref(), &format!("{}\n", count_mistakes(&trace)))?;
            Ok(true)
        }
        "report" => {
            let violations: Vec<serde_json::Value> = report
                .violations
                .iter()
                .map(|v| {
                    serde_json::json!({
                        "line": v.line,
                        "kind": format!("{:?}", v.kind),
                        "message": v.message,
                    })
                })
                .collect();
            let json = serde_json::json!({
                "events": trace.events.len(),
                "goal_present": report.goal_present,
                "truncated": report.truncated,
                "violations": violations,
            });
            super::write_output(args.out.as_ref(), &format!("{}\n", serde_json::to_string_pretty(&json)?))?;
            Ok(report.is_clean())
        }
        other => bail!("unknown trace op {other:?} (prune, think, mistakes, report)"),
    }
}
