//! Golden-file tests pinning the trace dialects byte-for-byte.
//!
//! The backtracking and direct texts reproduce the reference search on
//! `16:[96, 11, 78, 22]`; the think text applies the last-level shortening
//! rule to the same search by hand. Any byte drift here is a codec or
//! search regression.

use searchtrace::budget::SearchBudget;
use searchtrace::countdown::Puzzle;
use searchtrace::search::{search, SearchPolicy, SearchStatus};
use searchtrace::tokenizer::vocab;
use searchtrace::trace::{count_mistakes, parse, prune_to_direct, serialize, shorten_think, Dialect, Game};

const BACKTRACK: &str = include_str!("golden/countdown_backtrack.txt");
const DIRECT: &str = include_str!("golden/countdown_direct.txt");
const THINK: &str = include_str!("golden/countdown_think.txt");
const SUDOKU_BACKTRACK: &str = include_str!("golden/sudoku_backtrack.txt");
const SUDOKU_DIRECT: &str = include_str!("golden/sudoku_direct.txt");

/// The 26-given board behind the Sudoku golden texts.
const SUDOKU_BOARD: &str = "702400005000100070083000090000050010209000007000302000008040000047080009600210003";

fn golden(text: &str) -> &str {
    text.strip_suffix('\n').unwrap_or(text)
}

fn reference_search() -> searchtrace::search::SearchOutcome {
    let puzzle = Puzzle::standard("golden", 16, vec![96, 11, 78, 22]).unwrap();
    let policy = SearchPolicy::generation_default();
    search(&puzzle, &policy, &SearchBudget::default())
}

#[test]
fn backtracking_trace_matches_golden_bytes() {
    let outcome = reference_search();
    assert_eq!(outcome.status, SearchStatus::Solved);
    let text = serialize(&outcome.trace, Dialect::COUNTDOWN_BACKTRACK).unwrap();
    assert_eq!(text, golden(BACKTRACK));
}

#[test]
fn pruned_trace_matches_direct_golden_bytes() {
    let outcome = reference_search();
    let direct = prune_to_direct(&outcome.trace).unwrap();
    let text = serialize(&direct, Dialect::COUNTDOWN_DIRECT).unwrap();
    assert_eq!(text, golden(DIRECT));
}

#[test]
fn shortened_trace_matches_think_golden_bytes() {
    let outcome = reference_search();
    let think = shorten_think(&outcome.trace).unwrap();
    let text = serialize(&think, Dialect::COUNTDOWN_THINK).unwrap();
    assert_eq!(text, golden(THINK));
}

#[test]
fn golden_mistake_counts() {
    let outcome = reference_search();
    assert_eq!(count_mistakes(&outcome.trace), 4);
    let direct = prune_to_direct(&outcome.trace).unwrap();
    assert_eq!(count_mistakes(&direct), 0);
}

#[test]
fn golden_traces_parse_cleanly() {
    for (text, dialect) in [
        (BACKTRACK, Dialect::COUNTDOWN_BACKTRACK),
        (DIRECT, Dialect::COUNTDOWN_DIRECT),
        (THINK, Dialect::COUNTDOWN_THINK),
    ] {
        let (trace, report) = parse(golden(text), dialect);
        assert!(report.is_clean(), "{dialect}: {:?}", report.violations);
        assert!(report.goal_present, "{dialect}");
        assert!(!report.truncated, "{dialect}");
        // Parsing is the inverse of serialization on these texts.
        assert_eq!(serialize(&trace, dialect).unwrap(), golden(text), "{dialect}");
    }
}

#[test]
fn golden_token_count_is_pinned() {
    // Regression constant: tokenizing the golden backtracking trace. The
    // value was produced by this tokenizer once and frozen.
    let v = vocab(Game::Countdown);
    let ids = v.encode(golden(BACKTRACK), false).expect("full coverage");
    assert_eq!(v.decode(&ids).unwrap(), golden(BACKTRACK));
    assert_eq!(ids.len(), 568);
}

/// The naked-single solving profile reproduces the reference solver run on
/// the 26-given board: same forced fills, same guesses with the same
/// candidate lists, same contradictions, reverts, and final grid.
fn reference_sudoku_solve() -> searchtrace::sudoku::SolveOutcome {
    let board = searchtrace::sudoku::parse_board(SUDOKU_BOARD).unwrap();
    searchtrace::sudoku::solve_with_strategies(
        &board,
        &SearchBudget::unlimited(),
        &[searchtrace::sudoku::Strategy::NakedSingle],
    )
}

#[test]
fn sudoku_backtracking_trace_matches_golden_bytes() {
    let outcome = reference_sudoku_solve();
    assert_eq!(outcome.status, searchtrace::sudoku::SolveStatus::Solved);
    let text = serialize(&outcome.trace, Dialect::SUDOKU_BACKTRACK).unwrap();
    assert_eq!(text, golden(SUDOKU_BACKTRACK));
}

#[test]
fn sudoku_pruned_trace_matches_direct_golden_bytes() {
    let outcome = reference_sudoku_solve();
    let direct = prune_to_direct(&outcome.trace).unwrap();
    let text = serialize(&direct, Dialect::SUDOKU_DIRECT).unwrap();
    assert_eq!(text, golden(SUDOKU_DIRECT));
}

#[test]
fn sudoku_goldens_parse_cleanly_and_round_trip() {
    for (text, dialect) in [(SUDOKU_BACKTRACK, Dialect::SUDOKU_BACKTRACK), (SUDOKU_DIRECT, Dialect::SUDOKU_DIRECT)] {
        let (trace, report) = parse(golden(text), dialect);
        assert!(report.is_clean(), "{dialect}: {:?}", report.violations);
        assert!(report.goal_present);
        assert_eq!(serialize(&trace, dialect).unwrap(), golden(text), "{dialect}");
    }
    // The guess markers named in the reference run.
    let (trace, _) = parse(golden(SUDOKU_BACKTRACK), Dialect::SUDOKU_BACKTRACK);
    use searchtrace::trace::TraceEvent;
    assert!(trace.events.iter().any(|e| matches!(e,
        TraceEvent::Guess { row: 0, col: 1, candidates, value: 1 } if candidates == &[1, 6])));
    assert!(trace.events.iter().any(|e| matches!(e,
        TraceEvent::Revert { row: 0, col: 6, .. })));
    // Two wrong terminal states precede the solution.
    assert_eq!(count_mistakes(&trace), 2);
    let direct = prune_to_direct(&trace).unwrap();
    assert_eq!(count_mistakes(&direct), 0);
}

#[test]
fn sudoku_golden_vocabulary_coverage() {
    let v = vocab(Game::Sudoku);
    for text in [SUDOKU_BACKTRACK, SUDOKU_DIRECT] {
        let ids = v.encode(golden(text), false).expect("full coverage");
        assert_eq!(v.decode(&ids).unwrap(), golden(text));
    }
}

#[test]
fn think_trace_is_strictly_shorter() {
    let v = vocab(Game::Countdown);
    let outcome = reference_search();
    let think = shorten_think(&outcome.trace).unwrap();
    let original = serialize(&outcome.trace, Dialect::COUNTDOWN_BACKTRACK).unwrap();
    let shortened = serialize(&think, Dialect::COUNTDOWN_THINK).unwrap();
    assert!(v.count_tokens(&shortened) < v.count_tokens(&original));
}
