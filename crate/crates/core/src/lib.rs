//! Generation, serialization, and evaluation of combinatorial-search traces
//! for two strategic games: CountDown and Sudoku.
//!
//! The crate is organized around a small set of engines and codecs:
//!
//! - [`countdown`] — CountDown rules, move enumeration, verification,
//!   puzzle generation, and tree-size arithmetic (plus the stacked variant).
//! - [`sudoku`] — board representation, candidate-elimination strategies,
//!   guess-and-revert solving, board generation, and corpus ingestion.
//! - [`search`] — DFS/BFS traversal policies with heuristics, pruning, and
//!   the 32-policy mixture registry for CountDown.
//! - [`trace`] — the trace event model and the four text dialects
//!   (CountDown/Sudoku × backtracking/direct), including direct-solution
//!   pruning, think-style shortening, and mistake counting.
//! - [`tokenizer`] — per-game vocabularies with lossless encode/decode,
//!   used for token budgets and compute accounting.
//! - [`flops`] — exact integer inference-FLOPs accounting for the built-in
//!   transformer configurations.
//! - [`eval`] — scoring of model generations with re-verification through
//!   the game engines, plus best-of-n, pass@k, majority voting, Jaccard
//!   set similarity, and accuracy-vs-FLOPs curves.
//! - [`dataset`] — deterministic, optionally parallel dataset generation
//!   with manifests and splits.

pub mod budget;
pub mod countdown;
pub mod dataset;
pub mod eval;
pub mod flops;
pub mod search;
pub mod sudoku;
pub mod tokenizer;
pub mod trace;

mod hash;

pub use hash::fnv1a_64;
