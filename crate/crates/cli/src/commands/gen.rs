use crate::config::{resolve_corpus_path, FileConfig};
use anyhow::{bail, Result};
use clap::Args;
use searchtrace::budget::SearchBudget;
use searchtrace::countdown::{GenConfig, Variant};
use searchtrace::dataset::{generate_dataset, ingest_sudoku, split, GenSpec, JobKind, SplitBoundaries, SudokuSource};
use searchtrace::search::SearchPolicy;
use searchtrace::sudoku::BoardGenConfig;
use searchtrace::trace::Game;
use std::path::PathBuf;

#[derive(Args)]
pub struct GenArgs {
    /// Game: countdown or sudoku.
    #[arg(long)]
    game: Option<String>,
    /// CountDown variant: standard or stacked.
    #[arg(long)]
    variant: Option<String>,
    /// Trace dialect: backtrack, direct, or think (countdown only).
    #[arg(long)]
    dialect: Option<String>,
    #[arg(long)]
    count: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// CountDown search policy string.
    #[arg(long)]
    policy: Option<SearchPolicy>,
    /// Sudoku strategy profile: full, naked-single, or a comma list.
    #[arg(long)]
    strategies: Option<String>,
    /// Sudoku corpus file (CSV puzzle,solution or bare 81-char lines);
    /// bare names are resolved under SEARCHTRACE_CORPUS_DIR. Without this,
    /// boards are generated from the seed.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Target given count for generated Sudoku boards.
    #[arg(long)]
    givens: Option<u8>,
    /// Extra cells to pre-fill from the solution (easy Sudoku variant).
    #[arg(long)]
    extra_fills: Option<usize>,
    /// Allow unsolvable CountDown puzzles in the sample.
    #[arg(long)]
    allow_unsolvable: bool,
    #[arg(long)]
    budget_tokens: Option<u64>,
    #[arg(long)]
    budget_nodes: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Basename for the output files.
    #[arg(long)]
    name: Option<String>,
    /// Record the brute-force solvable fraction in the manifest.
    #[arg(long)]
    measure_solvable: bool,
    /// Also write the raw trace-text corpus ({name}.txt).
    #[arg(long)]
    raw_text: bool,
    /// Contiguous split sizes "train,val,test"; val and test come from the
    /// tail of the record file.
    #[arg(long)]
    split: Option<String>,
    /// Key-value config file supplying defaults for the flags above.
    #[arg(long)]
    config_file: Option<PathBuf>,
    /// Maximum invalid corpus rows tolerated during ingestion.
    #[arg(long, default_value_t = 0)]
    max_invalid: usize,
}

pub fn run(args: GenArgs) -> Result<bool> {
    let file = FileConfig::load(args.config_file.as_deref())?;
    let game = super::parse_game(&file.resolve(args.game, "game", "countdown".to_string())?)?;
    let dialect = super::parse_mode(&file.resolve(args.dialect, "dialect", "backtrack".to_string())?)?;
    let count = file.resolve(args.count, "count", 1000u64)?;
    let seed = file.resolve(args.seed, "seed", 0u64)?;
    let workers = file.resolve(args.workers, "workers", 1usize)?;
    let budget = SearchBudget {
        max_tokens: Some(file.resolve(args.budget_tokens, "budget-tokens", 4096)?),
        max_nodes: file.resolve_opt(args.budget_nodes, "budget-nodes")?,
    };

    let kind = match game {
        Game::Countdown => {
            let variant = match file.resolve(args.variant, "variant", "standard".to_string())?.as_str() {
                "standard" => Variant::Standard,
                "stacked" => Variant::Stacked,
                other => bail!("unknown variant {other:?} (standard or stacked)"),
            };
            let policy = file.resolve(args.policy, "policy", SearchPolicy::generation_default())?;
            let config = if args.allow_unsolvable { GenConfig::raw() } else { GenConfig::default() };
            JobKind::Countdown { variant, config, policy }
        }
        Game::Sudoku => {
            let strategies = super::parse_strategies(&file.resolve(args.strategies, "strategies", "full".to_string())?)?;
            let extra_fills = file.resolve(args.extra_fills, "extra-fills", 0usize)?;
            let source = match file.resolve_opt(args.corpus, "corpus")? {
                Some(path) => {
                    let path = resolve_corpus_path(&path);
                    let (rows, report) = ingest_sudoku(&path, args.max_invalid)?;
                    eprintln!(
                        "ingested {}: {} rows, {} valid, {} invalid",
                        path.display(),
                        report.rows,
                        report.valid,
                        report.invalid.len()
                    );
                    SudokuSource::Corpus(rows)
                }
                None => SudokuSource::Generated(BoardGenConfig {
                    target_givens: file.resolve(args.givens, "givens", BoardGenConfig::default().target_givens)?,
                }),
            };
            JobKind::Sudoku { source, strategies, extra_fills }
        }
    };

    let name = match args.name {
        Some(name) => name,
        None => format!("{game}-{dialect}-{seed}"),
    };
    let spec = GenSpec {
        name: name.clone(),
        kind,
        dialect,
        count,
        seed,
        budget,
        workers,
        measure_solvable: args.measure_solvable,
        raw_text: args.raw_text,
    };
    eprintln!(
        "gen: game={game} dialect={dialect} count={count} seed={seed} workers={workers} \
         budget_tokens={:?} budget_nodes={:?} out={}",
        budget.max_tokens,
        budget.max_nodes,
        args.out.display()
    );
    let manifest = generate_dataset(&spec, &args.out)?;
    eprintln!(
        "wrote {} records ({} solved / {} total, fraction {}), manifest {}.manifest.json",
        manifest.records_written, manifest.counts.solved, manifest.counts.total, manifest.solved_fraction, name
    );

    if let Some(sizes) = args.split {
        let parts = super::parse_u64_list(&sizes)?;
        if parts.len() != 3 {
            bail!("--split wants train,val,test");
        }
        let bounds = SplitBoundaries { train: parts[0], val: parts[1], test: parts[2] };
        split(&args.out.join(format!("{name}.jsonl")), &bounds, &args.out)?;
        eprintln!("split: train={} val={} test={}", bounds.train, bounds.val, bounds.test);
    }
    Ok(true)
}
