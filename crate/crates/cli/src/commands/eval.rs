use anyhow::{Context, Result};
use clap::Args;
use searchtrace::countdown::{Puzzle, PuzzleRecord};
use searchtrace::eval::{GenerationRecord, ProblemSet, Scorer};
use searchtrace::sudoku::{parse_board, BoardRecord};
use searchtrace::trace::Game;
use std::path::PathBuf;

#[derive(Args)]
pub struct EvalArgs {
    /// Game: countdown or sudoku.
    #[arg(long)]
    game: String,
    /// Dialect the generations are written in.
    #[arg(long, default_value = "backtrack")]
    dialect: String,
    /// Problem file ({name}.problems.jsonl from gen, or ingest output).
    #[arg(long)]
    problems: PathBuf,
    /// Generations to score: JSONL of {"problem_id","sample_id","text"}.
    #[arg(long)]
    generations: PathBuf,
    /// Attach per-record FLOPs for this model (builtin name or config file).
    #[arg(long)]
    model: Option<String>,
    /// Output records file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: EvalArgs) -> Result<bool> {
    let game = super::parse_game(&args.game)?;
    let dialect = super::parse_dialect(&args.game, &args.dialect)?;
    eprintln!(
        "eval: game={game} dialect={dialect} problems={} generations={}",
        args.problems.display(),
        args.generations.display()
    );

    let mut problems = ProblemSet::new();
    let text = std::fs::read_to_string(&args.problems)
        .with_context(|| format!("reading {}", args.problems.display()))?;
    for (i, line) in text.lines().enumerate() {
        match game {
            Game::Countdown => {
                let record: PuzzleRecord = serde_json::from_str(line)
                    .with_context(|| format!("{}:{}", args.problems.display(), i + 1))?;
                problems.insert_countdown(Puzzle::try_from(record)?);
            }
            Game::Sudoku => {
                let record: BoardRecord = serde_json::from_str(line)
                    .with_context(|| format!("{}:{}", args.problems.display(), i + 1))?;
                problems.insert_sudoku(record.id, parse_board(&record.puzzle)?);
            }
        }
    }

    let mut scorer = Scorer::new(&problems, dialect);
    if let Some(model) = &args.model {
        scorer = scorer.with_model(super::resolve_model(model)?);
    }

    let gens = std::fs::read_to_string(&args.generations)
        .with_context(|| format!("reading {}", args.generations.display()))?;
    let mut out_lines = String::new();
    let mut total = 0u64;
    let mut correct = 0u64;
    for (i, line) in gens.lines().enumerate() {
        let generation: GenerationRecord = serde_json::from_str(line)
            .with_context(|| format!("{}:{}", args.generations.display(), i + 1))?;
        let record = scorer.score(&generation.problem_id, generation.sample_id, &generation.text)?;
        total += 1;
        correct += u64::from(record.is_correct());
        out_lines.push_str(&serde_json::to_string(&record)?);
        out_lines.push('\n');
    }
    super::write_output(args.out.as_ref(), &out_lines)?;
    let accuracy = if total == 0 { 0.0 } else { correct as f64 / total as f64 };
    eprintln!("scored {total} generations: {correct} correct (accuracy {accuracy:.4})");
    Ok(true)
}
