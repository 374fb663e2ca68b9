pub mod curve;
pub mod eval;
pub mod flops;
pub mod gen;
pub mod ingest;
pub mod solve;
pub mod trace;
pub mod vocab;

use anyhow::{bail, Context, Result};
use searchtrace::flops::ModelConfig;
use searchtrace::sudoku::Strategy;
use searchtrace::trace::{Dialect, Game, TraceMode};
use std::io::Read;
use std::path::{Path, PathBuf};

/// Built-in name (3M/17M/38M/144M) or a key-value config file path.
pub fn resolve_model(spec: &str) -> Result<ModelConfig> {
    if let Ok(config) = searchtrace::flops::builtin(spec) {
        return Ok(config);
    }
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return Ok(ModelConfig::from_key_values(&text)?);
    }
    bail!("unknown model config {spec:?} (expected 3M, 17M, 38M, 144M, or a config file path)")
}

pub fn parse_game(name: &str) -> Result<Game> {
    match name {
        "countdown" => Ok(Game::Countdown),
        "sudoku" => Ok(Game::Sudoku),
        _ => bail!("unknown game {name:?} (countdown or sudoku)"),
    }
}

pub fn parse_mode(name: &str) -> Result<TraceMode> {
    match name {
        "backtrack" => Ok(TraceMode::Backtrack),
        "direct" => Ok(TraceMode::Direct),
        "think" => Ok(TraceMode::Think),
        _ => bail!("unknown trace mode {name:?} (backtrack, direct, or think)"),
    }
}

pub fn parse_dialect(game: &str, mode: &str) -> Result<Dialect> {
    Ok(Dialect::new(parse_game(game)?, parse_mode(mode)?)?)
}

/// Strategy profile: `full`, `naked-single`, or a comma list of names.
pub fn parse_strategies(spec: &str) -> Result<Vec<Strategy>> {
    match spec {
        "full" => return Ok(searchtrace::sudoku::strategy_registry().to_vec()),
        "naked-single" => return Ok(vec![Strategy::NakedSingle]),
        _ => {}
    }
    spec.split(',')
        .map(|name| match name.trim() {
            "naked-single" => Ok(Strategy::NakedSingle),
            "hidden-single" => Ok(Strategy::HiddenSingle),
            "naked-pair" => Ok(Strategy::NakedPair),
            "hidden-pair" => Ok(Strategy::HiddenPair),
            "naked-triple" => Ok(Strategy::NakedTriple),
            "pointing-pair" => Ok(Strategy::PointingPair),
            "box-line" => Ok(Strategy::BoxLineReduction),
            other => bail!("unknown strategy {other:?}"),
        })
        .collect()
}

/// Reads a file, or stdin when no path is given.
pub fn read_input(path: Option<&PathBuf>) -> Result<String> {
    match path {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())),
        None => {
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text).context("reading stdin")?;
            Ok(text)
        }
    }
}

/// Writes to a file, or stdout when no path is given.
pub fn write_output(path: Option<&PathBuf>, content: &str) -> Result<()> {
    match path {
        Some(path) => std::fs::write(path, content).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

pub fn parse_u64_list(spec: &str) -> Result<Vec<u64>> {
    spec.split(',')
        .map(|p| p.trim().parse::<u64>().map_err(|e| anyhow::anyhow!("bad number {p:?}: {e}")))
        .collect()
}
