use crate::config::resolve_corpus_path;
use anyhow::Result;
use clap::Args;
use searchtrace::dataset::ingest_sudoku;
use searchtrace::sudoku::BoardRecord;
use std::path::PathBuf;

#[derive(Args)]
pub struct IngestArgs {
    /// Corpus file: CSV with puzzle,solution columns or bare 81-char lines.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output problem JSONL; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Maximum invalid rows tolerated before aborting.
    #[arg(long, default_value_t = 0)]
    max_invalid: usize,
}

pub fn run(args: IngestArgs) -> Result<bool> {
    let path = resolve_corpus_path(&args.input);
    eprintln!("ingest: in={} max_invalid={}", path.display(), args.max_invalid);
    let (rows, report) = ingest_sudoku(&path, args.max_invalid)?;
    let mut out = String::new();
    for row in &rows {
        let record = BoardRecord { id: row.id.clone(), puzzle: row.board.to_line(), solution: row.solution.clone() };
        out.push_str(&serde_json::to_string(&record)?);
        out.push('\n');
    }
    super::write_output(args.out.as_ref(), &out)?;
    eprintln!("rows: {}, valid: {}, invalid: {}", report.rows, report.valid, report.invalid.len());
    for (line, reason) in &report.invalid {
        eprintln!("  line {line}: {reason}");
    }
    Ok(report.invalid.is_empty())
}
