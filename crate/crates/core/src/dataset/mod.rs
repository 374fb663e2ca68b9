//! Reproducible dataset generation: seeded problems, policy-driven search,
//! trace serialization, splits, and manifests.
//!
//! Output is a pure function of the [`GenSpec`]: work is sharded by problem
//! index across workers and a reorder buffer restores index order at the
//! single writer, so byte-identical files come out at any worker count.

mod ingest;

pub use ingest::{ingest_sudoku, CorpusRow, IngestReport};

use crate::budget::SearchBudget;
use crate::countdown::{self, GenConfig, Variant};
use crate::search::{search, SearchPolicy, SearchStatus};
use crate::sudoku::{self, solve_with_strategies, BoardGenConfig, SolveStatus, Strategy};
use crate::tokenizer::{vocab, VOCAB_VERSION};
use crate::trace::{prune_to_direct, serialize_parts, shorten_think, Dialect, Game, SearchTrace, TraceMode};
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::mpsc;
use thiserror::Error;

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid spec: {0}")]
    Spec(String),
    #[error("{count} invalid corpus rows exceed the threshold of {threshold}")]
    TooManyInvalid { count: usize, threshold: usize },
    #[error("split sizes {requested} exceed the {available} available records")]
    OversizedSplit { requested: u64, available: u64 },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DatasetError + '_ {
    move |source| DatasetError::Io { path: path.to_path_buf(), source }
}

/// Where Sudoku boards come from.
#[derive(Debug, Clone)]
pub enum SudokuSource {
    /// Seeded dig-out generation of unique-solution boards.
    Generated(BoardGenConfig),
    /// Pre-ingested corpus rows (see [`ingest_sudoku`]).
    Corpus(Vec<CorpusRow>),
}

/// Game-specific generation parameters.
#[derive(Debug, Clone)]
pub enum JobKind {
    Countdown { variant: Variant, config: GenConfig, policy: SearchPolicy },
    Sudoku { source: SudokuSource, strategies: Vec<Strategy>, extra_fills: usize },
}

impl JobKind {
    pub fn game(&self) -> Game {
        match self {
            JobKind::Countdown { .. } => Game::Countdown,
            JobKind::Sudoku { .. } => Game::Sudoku,
        }
    }
}

/// A complete dataset-generation request.
#[derive(Debug, Clone)]
pub struct GenSpec {
    /// Basename of the output files.
    pub name: String,
    pub kind: JobKind,
    pub dialect: TraceMode,
    pub count: u64,
    pub seed: u64,
    pub budget: SearchBudget,
    pub workers: usize,
    /// Record the brute-force solvable fraction (CountDown only).
    pub measure_solvable: bool,
    /// Also write the raw trace text corpus ({name}.txt, records separated
    /// by blank lines).
    pub raw_text: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TraceRecord {
    pub id: String,
    pub problem: String,
    pub trace: String,
    pub dialect: String,
    pub solved: bool,
    pub mistakes: u64,
    pub tokens: u64,
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct Counts {
    pub total: u64,
    pub solved: u64,
    pub unsolved: u64,
    pub budget_exhausted: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VocabInfo {
    pub game: String,
    pub size: usize,
    pub version: u32,
    pub hash: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitBoundaries {
    pub train: u64,
    pub val: u64,
    pub test: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub schema_version: u32,
    pub name: String,
    pub game: String,
    pub dialect: String,
    pub seed: u64,
    pub generator_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy_set: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy_set_version: Option<u32>,
    pub budget_tokens: Option<u64>,
    pub budget_nodes: Option<u64>,
    pub counts: Counts,
    /// Solved fraction of the searched problems, 4 decimal places.
    pub solved_fraction: f64,
    /// Brute-force solvable fraction when measured, 4 decimal places.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solvable_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitBoundaries>,
    pub vocab: VocabInfo,
    pub records_file: String,
    pub records_hash: String,
    pub records_written: u64,
    pub problems_file: String,
    pub problems_hash: String,
}

fn round4(x: f64) -> f64 {
    (x * 10_000.0).round() / 10_000.0
}

/// Per-index unit of work result.
struct Unit {
    problem_line: String,
    record_line: Option<String>,
    raw_text: Option<String>,
    solved: bool,
    budget_exhausted: bool,
    solvable: Option<bool>,
}

/// Generates a dataset deterministically from its spec. Returns the written
/// manifest (also saved as `{name}.manifest.json`).
pub fn generate_dataset(spec: &GenSpec, out_dir: &Path) -> Result<DatasetManifest, DatasetError> {
    validate_spec(spec)?;
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let game = spec.kind.game();
    let dialect = Dialect::new(game, spec.dialect).map_err(|e| DatasetError::Spec(e.to_string()))?;

    let records_path = out_dir.join(format!("{}.jsonl", spec.name));
    let problems_path = out_dir.join(format!("{}.problems.jsonl", spec.name));
    let raw_path = out_dir.join(format!("{}.txt", spec.name));
    let mut records_out = Hashing::new(BufWriter::new(File::create(&records_path).map_err(io_err(&records_path))?));
    let mut problems_out = Hashing::new(BufWriter::new(File::create(&problems_path).map_err(io_err(&problems_path))?));
    let mut raw_out = if spec.raw_text {
        Some(BufWriter::new(File::create(&raw_path).map_err(io_err(&raw_path))?))
    } else {
        None
    };

    let mut counts = Counts { total: spec.count, ..Counts::default() };
    let mut records_written = 0u64;
    let mut solvable_count = 0u64;

    let spec_ref = spec;
    let job = move |index: u64| run_unit(spec_ref, dialect, index);
    let mut sink = |_, unit: Unit| -> Result<(), DatasetError> {
        problems_out.line(&unit.problem_line).map_err(io_err(&problems_path))?;
        if let Some(line) = &unit.record_line {
            records_out.line(line).map_err(io_err(&records_path))?;
            records_written += 1;
        }
        if let (Some(out), Some(text)) = (raw_out.as_mut(), &unit.raw_text) {
            out.write_all(text.as_bytes()).map_err(io_err(&raw_path))?;
            out.write_all(b"\n\n").map_err(io_err(&raw_path))?;
        }
        if unit.solved {
            counts.solved += 1;
        } else if unit.budget_exhausted {
            counts.budget_exhausted += 1;
        } else {
            counts.unsolved += 1;
        }
        solvable_count += u64::from(unit.solvable == Some(true));
        Ok(())
    };
    run_pool(spec.count, spec.workers, &job, &mut sink)?;

    let (records_hash, records_file) = records_out.finish().map_err(io_err(&records_path))?;
    let (problems_hash, problems_file) = problems_out.finish().map_err(io_err(&problems_path))?;
    records_file.into_inner().map_err(|e| io_err(&records_path)(e.into_error()))?;
    problems_file.into_inner().map_err(|e| io_err(&problems_path)(e.into_error()))?;
    if let Some(out) = raw_out {
        out.into_inner().map_err(|e| io_err(&raw_path)(e.into_error()))?;
    }

    let v = vocab(game);
    let manifest = DatasetManifest {
        schema_version: MANIFEST_SCHEMA_VERSION,
        name: spec.name.clone(),
        game: game.to_string(),
        dialect: spec.dialect.to_string(),
        seed: spec.seed,
        generator_version: env!("CARGO_PKG_VERSION").to_string(),
        policy: match &spec.kind {
            JobKind::Countdown { policy, .. } => Some(policy.to_string()),
            JobKind::Sudoku { .. } => None,
        },
        strategy_set: match &spec.kind {
            JobKind::Sudoku { strategies, .. } => {
                Some(strategies.iter().map(|s| format!("{s:?}")).collect())
            }
            JobKind::Countdown { .. } => None,
        },
        strategy_set_version: matches!(&spec.kind, JobKind::Sudoku { .. }).then_some(sudoku::STRATEGY_SET_VERSION),
        budget_tokens: spec.budget.max_tokens,
        budget_nodes: spec.budget.max_nodes,
        counts,
        solved_fraction: if spec.count == 0 { 0.0 } else { round4(counts.solved as f64 / spec.count as f64) },
        solvable_fraction: spec
            .measure_solvable
            .then(|| if spec.count == 0 { 0.0 } else { round4(solvable_count as f64 / spec.count as f64) }),
        split: None,
        vocab: VocabInfo {
            game: game.to_string(),
            size: v.len(),
            version: VOCAB_VERSION,
            hash: format!("{:016x}", v.content_hash()),
        },
        records_file: records_path.file_name().unwrap().to_string_lossy().into_owned(),
        records_hash: format!("{records_hash:016x}"),
        records_written,
        problems_file: problems_path.file_name().unwrap().to_string_lossy().into_owned(),
        problems_hash: format!("{problems_hash:016x}"),
    };
    write_manifest(out_dir, &spec.name, &manifest)?;
    Ok(manifest)
}

fn validate_spec(spec: &GenSpec) -> Result<(), DatasetError> {
    if spec.name.is_empty() || spec.name.contains(['/', '\\']) {
        return Err(DatasetError::Spec(format!("bad dataset name {:?}", spec.name)));
    }
    match &spec.kind {
        JobKind::Countdown { .. } => {
            if spec.dialect == TraceMode::Think && spec.kind.game() != Game::Countdown {
                unreachable!()
            }
        }
        JobKind::Sudoku { source, strategies, .. } => {
            if spec.dialect == TraceMode::Think {
                return Err(DatasetError::Spec("think dialect applies to countdown only".into()));
            }
            if strategies.is_empty() {
                return Err(DatasetError::Spec("sudoku jobs need at least one strategy".into()));
            }
            if let SudokuSource::Corpus(rows) = source {
                if (rows.len() as u64) < spec.count {
                    return Err(DatasetError::Spec(format!(
                        "corpus holds {} boards, spec wants {}",
                        rows.len(),
                        spec.count
                    )));
                }
            }
        }
    }
    Ok(())
}

fn run_unit(spec: &GenSpec, dialect: Dialect, index: u64) -> Unit {
    match &spec.kind {
        JobKind::Countdown { variant, config, policy } => {
            let puzzle = match variant {
                Variant::Standard => countdown::generate_puzzle(spec.seed, index, config),
                Variant::Stacked => countdown::make_stacked(spec.seed, index, config),
            }
            .expect("spec validated");
            let outcome = search(&puzzle, policy, &spec.budget);
            let solvable = spec.measure_solvable.then(|| countdown::brute_force_solvable(&puzzle));
            let problem_line = serde_json::to_string(&countdown::PuzzleRecord::from(&puzzle)).unwrap();
            let solved = outcome.status == SearchStatus::Solved;
            let (record_line, raw_text) = finish_trace(
                &puzzle.id,
                outcome.trace,
                solved,
                dialect,
                spec.raw_text,
            );
            Unit {
                problem_line,
                record_line,
                raw_text,
                solved,
                budget_exhausted: outcome.status == SearchStatus::BudgetExhausted,
                solvable,
            }
        }
        JobKind::Sudoku { source, strategies, extra_fills } => {
            let (id, board, solution) = match source {
                SudokuSource::Generated(config) => {
                    let g = sudoku::generate_board(spec.seed, index, config);
                    (format!("sd-{}-{index}", spec.seed), g.board, Some(g.solution_line()))
                }
                SudokuSource::Corpus(rows) => {
                    let row = &rows[index as usize];
                    (row.id.clone(), row.board, row.solution.clone())
                }
            };
            // Easing failures (unsolvable inputs) fall back to the original
            // board, which the solver will then report as dead.
            let board = if *extra_fills > 0 {
                sudoku::ease_board(&board, *extra_fills, spec.seed ^ index).unwrap_or(board)
            } else {
                board
            };
            let outcome = solve_with_strategies(&board, &spec.budget, strategies);
            let problem_line = serde_json::to_string(&sudoku::BoardRecord {
                id: id.clone(),
                puzzle: board.to_line(),
                solution,
            })
            .unwrap();
            let solved = outcome.status == SolveStatus::Solved;
            let (record_line, raw_text) = finish_trace(&id, outcome.trace, solved, dialect, spec.raw_text);
            Unit {
                problem_line,
                record_line,
                raw_text,
                solved,
                budget_exhausted: outcome.status == SolveStatus::BudgetExhausted,
                solvable: None,
            }
        }
    }
}

/// Applies the dialect transform and renders the trace record. Direct
/// dialects only keep solved problems; backtrack and think keep everything.
fn finish_trace(
    id: &str,
    trace: SearchTrace,
    solved: bool,
    dialect: Dialect,
    raw: bool,
) -> (Option<String>, Option<String>) {
    let transformed = match dialect.mode {
        TraceMode::Backtrack => trace,
        TraceMode::Direct => {
            if !solved {
                return (None, None);
            }
            prune_to_direct(&trace).expect("solved traces prune")
        }
        TraceMode::Think => shorten_think(&trace).expect("countdown backtracking trace"),
    };
    let (problem, completion) = serialize_parts(&transformed, dialect).expect("dialect matches trace");
    // Full-text cost: prompt, separator, completion. Degenerate traces may
    // lack one part, in which case no separator is emitted either.
    let v = vocab(dialect.game);
    let full_tokens = if problem.is_empty() || completion.is_empty() {
        v.count_tokens(&problem) + v.count_tokens(&completion)
    } else {
        v.count_tokens(&problem) + 1 + v.count_tokens(&completion)
    };
    // Mistakes count on the transformed trace, so direct records score zero.
    let record = TraceRecord {
        id: id.to_string(),
        problem: problem.clone(),
        trace: completion.clone(),
        dialect: dialect.to_string(),
        solved,
        mistakes: crate::trace::count_mistakes(&transformed),
        tokens: full_tokens,
    };
    let raw_text = raw.then(|| format!("{problem}\n{completion}"));
    (Some(serde_json::to_string(&record).unwrap()), raw_text)
}

/// Ordered fan-out/fan-in: workers race over indices, the sink sees results
/// in index order regardless of completion order. Workers stay within a
/// bounded window of the flush cursor, so reorder memory is independent of
/// the dataset size.
fn run_pool<T, J, S>(count: u64, workers: usize, job: &J, sink: &mut S) -> Result<(), DatasetError>
where
    T: Send,
    J: Fn(u64) -> T + Sync,
    S: FnMut(u64, T) -> Result<(), DatasetError>,
{
    if workers <= 1 || count < 2 {
        for index in 0..count {
            sink(index, job(index))?;
        }
        return Ok(());
    }
    let window = (workers as u64 * 16).max(64);
    let next = AtomicU64::new(0);
    let flushed = AtomicU64::new(0);
    let (tx, rx) = mpsc::sync_channel::<(u64, T)>(workers * 4);
    std::thread::scope(|scope| -> Result<(), DatasetError> {
        for _ in 0..workers {
            let tx = tx.clone();
            let next = &next;
            let flushed = &flushed;
            scope.spawn(move || loop {
                let index = next.fetch_add(1, Ordering::Relaxed);
                if index >= count {
                    return;
                }
                while index.saturating_sub(flushed.load(Ordering::Acquire)) > window {
                    std::thread::yield_now();
                }
                if tx.send((index, job(index))).is_err() {
                    return;
                }
            });
        }
        drop(tx);
        // Reorder buffer: flush strictly in index order.
        let mut pending: std::collections::BTreeMap<u64, T> = std::collections::BTreeMap::new();
        let mut cursor = 0u64;
        for (index, unit) in rx {
            pending.insert(index, unit);
            while let Some(unit) = pending.remove(&cursor) {
                sink(cursor, unit)?;
                cursor += 1;
                flushed.store(cursor, Ordering::Release);
            }
        }
        while let Some(unit) = pending.remove(&cursor) {
            sink(cursor, unit)?;
            cursor += 1;
        }
        Ok(())
    })
}

/// Writer wrapper that hashes every emitted byte.
struct Hashing<W: Write> {
    inner: W,
    hash: u64,
}

impl<W: Write> Hashing<W> {
    fn new(inner: W) -> Self {
        Hashing { inner, hash: 0xcbf2_9ce4_8422_2325 }
    }

    fn line(&mut self, line: &str) -> Result<(), std::io::Error> {
        self.write_bytes(line.as_bytes())?;
        self.write_bytes(b"\n")
    }

    fn write_bytes(&mut self, bytes: &[u8]) -> Result<(), std::io::Error> {
        for &b in bytes {
            self.hash ^= b as u64;
            self.hash = self.hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
        self.inner.write_all(bytes)
    }

    fn finish(self) -> Result<(u64, W), std::io::Error> {
        let mut inner = self.inner;
        inner.flush()?;
        Ok((self.hash, inner))
    }
}

fn write_manifest(out_dir: &Path, name: &str, manifest: &DatasetManifest) -> Result<(), DatasetError> {
    let path = out_dir.join(format!("{name}.manifest.json"));
    let json = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    std::fs::write(&path, json).map_err(io_err(&path))
}

/// Contiguous split: train from the head, validation and test from the tail
/// (the last `val + test` records). Writes three `.jsonl` files plus a
/// `{name}.split.json` boundary record.
pub fn split(
    records_path: &Path,
    boundaries: &SplitBoundaries,
    out_dir: &Path,
) -> Result<SplitBoundaries, DatasetError> {
    let text = std::fs::read_to_string(records_path).map_err(io_err(records_path))?;
    let lines: Vec<&str> = text.lines().collect();
    let total = lines.len() as u64;
    let requested = boundaries.train + boundaries.val + boundaries.test;
    if requested > total {
        return Err(DatasetError::OversizedSplit { requested, available: total });
    }
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let stem = records_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());

    let write_part = |part: &str, slice: &[&str]| -> Result<(), DatasetError> {
        let path = out_dir.join(format!("{stem}.{part}.jsonl"));
        let mut out = BufWriter::new(File::create(&path).map_err(io_err(&path))?);
        for line in slice {
            out.write_all(line.as_bytes()).and_then(|_| out.write_all(b"\n")).map_err(io_err(&path))?;
        }
        out.flush().map_err(io_err(&path))
    };

    let train_end = boundaries.train as usize;
    let tail_start = (total - boundaries.val - boundaries.test) as usize;
    let test_start = (total - boundaries.test) as usize;
    write_part("train", &lines[..train_end])?;
    write_part("val", &lines[tail_start..test_start])?;
    write_part("test", &lines[test_start..])?;

    let boundary_path = out_dir.join(format!("{stem}.split.json"));
    let json = serde_json::to_string_pretty(boundaries).unwrap();
    std::fs::write(&boundary_path, json).map_err(io_err(&boundary_path))?;
    Ok(boundaries.clone())
}
