//! Guess-and-revert Sudoku solving with full trace emission.
//!
//! The solver alternates strategy propagation with guessing: the guess cell
//! is the empty cell with the fewest candidates (row-major tie-break) and
//! candidates are tried ascending. A contradiction emits the failing cell,
//! then unwinds guess frames: `REVERT ... = NONE` retries the next
//! candidate, `REVERT ... = NO_CANDIDATE` gives the frame up and passes the
//! failure to the guess above.

use super::strategies::propagate;
use super::{Board, CellAssignment};
use crate::budget::{BudgetExceeded, SearchBudget, TraceBuilder};
use crate::trace::{Dialect, FillKind, SearchTrace, TraceEvent};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Solved,
    Dead,
    BudgetExhausted,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// Final board: solved grid on success, the in-progress board otherwise.
    pub board: Board,
    pub trace: SearchTrace,
    pub tokens: u64,
    pub guesses: u64,
}

struct Frame {
    board: Board,
    row: u8,
    col: u8,
    candidates: Vec<u8>,
    next: usize,
}

/// Solves `board` with the full strategy registry.
pub fn solve(board: &Board, budget: &SearchBudget) -> SolveOutcome {
    solve_with_strategies(board, budget, super::strategy_registry())
}

/// Solves `board`, emitting the backtracking trace as it goes. The strategy
/// subset controls how much gets deduced between guesses.
pub fn solve_with_strategies(board: &Board, budget: &SearchBudget, strategies: &[super::Strategy]) -> SolveOutcome {
    let mut builder = TraceBuilder::new(Dialect::SUDOKU_BACKTRACK, *budget);
    let mut state = *board;
    let mut frames: Vec<Frame> = Vec::new();
    let mut guesses = 0u64;

    let status = 'run: {
        // Problem prompt: START, the givens row-major, solving.
        if builder.push(TraceEvent::Start).is_err() {
            break 'run SolveStatus::BudgetExhausted;
        }
        for given in board.filled() {
            if push_fill(&mut builder, given.row, given.col, given.value, FillKind::Given).is_err() {
                break 'run SolveStatus::BudgetExhausted;
            }
        }
        if builder.push(TraceEvent::Solving).is_err() || builder.push(TraceEvent::SolStart).is_err() {
            break 'run SolveStatus::BudgetExhausted;
        }

        loop {
            // Propagate deductions, emitting fills in deduction order.
            let mut fills: Vec<CellAssignment> = Vec::new();
            let mut eliminations = Vec::new();
            let contradiction = propagate(&mut state, strategies, &mut fills, &mut eliminations);
            for f in &fills {
                if push_fill(&mut builder, f.row, f.col, f.value, FillKind::Deduced).is_err() {
                    break 'run SolveStatus::BudgetExhausted;
                }
            }

            if let Some((row, col)) = contradiction {
                if builder.push(TraceEvent::NoCandidate { row, col }).is_err() {
                    break 'run SolveStatus::BudgetExhausted;
                }
                // Unwind guess frames until one has a candidate left.
                loop {
                    let Some(frame) = frames.last_mut() else {
                        break 'run SolveStatus::Dead;
                    };
                    if builder
                        .push(TraceEvent::NoCandidate { row: frame.row, col: frame.col })
                        .is_err()
                    {
                        break 'run SolveStatus::BudgetExhausted;
                    }
                    if frame.next < frame.candidates.len() {
                        if builder
                            .push(TraceEvent::Revert {
                                row: frame.row,
                                col: frame.col,
                                candidates: frame.candidates.clone(),
                            })
                            .is_err()
                        {
                            break 'run SolveStatus::BudgetExhausted;
                        }
                        state = frame.board;
                        let value = frame.candidates[frame.next];
                        frame.next += 1;
                        let (row, col) = (frame.row, frame.col);
                        let candidates = frame.candidates.clone();
                        guesses += 1;
                        if emit_guess(&mut builder, row, col, &candidates, value).is_err() {
                            break 'run SolveStatus::BudgetExhausted;
                        }
                        state.place(usize::from(row) * 9 + usize::from(col), value);
                        break;
                    }
                    if builder
                        .push(TraceEvent::RevertExhausted {
                            row: frame.row,
                            col: frame.col,
                            candidates: frame.candidates.clone(),
                        })
                        .is_err()
                    {
                        break 'run SolveStatus::BudgetExhausted;
                    }
                    state = frame.board;
                    frames.pop();
                }
                continue;
            }

            if state.is_complete() {
                if builder.push(TraceEvent::SolEnd).is_err() {
                    break 'run SolveStatus::BudgetExhausted;
                }
                break 'run SolveStatus::Solved;
            }

            // Guess: minimum remaining values, row-major ties, ascending.
            let (row, col, candidates) = pick_guess(&state);
            let frame = Frame { board: state, row, col, candidates: candidates.clone(), next: 1 };
            let value = candidates[0];
            frames.push(frame);
            guesses += 1;
            if emit_guess(&mut builder, row, col, &candidates, value).is_err() {
                break 'run SolveStatus::BudgetExhausted;
            }
            state.place(usize::from(row) * 9 + usize::from(col), value);
        }
    };

    debug_assert!(status != SolveStatus::Solved || state.is_solved());
    let tokens = builder.tokens();
    SolveOutcome { status, board: state, trace: builder.finish(), tokens, guesses }
}

fn push_fill(builder: &mut TraceBuilder, row: u8, col: u8, value: u8, kind: FillKind) -> Result<(), BudgetExceeded> {
    builder.push(TraceEvent::Fill { row, col, value, kind })
}

/// A guess line is always echoed by the fill it implies.
fn emit_guess(
    builder: &mut TraceBuilder,
    row: u8,
    col: u8,
    candidates: &[u8],
    value: u8,
) -> Result<(), BudgetExceeded> {
    builder.push(TraceEvent::Guess { row, col, candidates: candidates.to_vec(), value })?;
    push_fill(builder, row, col, value, FillKind::Guessed)
}

fn pick_guess(board: &Board) -> (u8, u8, Vec<u8>) {
    let mut best: Option<(usize, u32)> = None;
    for idx in 0..81 {
        if board.cells()[idx] != 0 {
            continue;
        }
        let n = board.candidate_mask(idx).count_ones();
        if best.is_none_or(|(_, bn)| n < bn) {
            best = Some((idx, n));
            if n == 2 {
                break;
            }
        }
    }
    let (idx, _) = best.expect("guess requested on a complete board");
    let (row, col) = ((idx / 9) as u8, (idx % 9) as u8);
    (row, col, board.candidates(row, col))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sudoku::tests::{REFERENCE_BOARD, REFERENCE_SOLUTION};
    use crate::sudoku::{parse_board, solve_oracle};
    use crate::trace::{parse, serialize};

    #[test]
    fn solves_the_reference_board_to_the_oracle_grid() {
        let board = parse_board(REFERENCE_BOARD).unwrap();
        let outcome = solve(&board, &SearchBudget::default());
        assert_eq!(outcome.status, SolveStatus::Solved);
        assert_eq!(outcome.board.to_line(), REFERENCE_SOLUTION);
        assert_eq!(outcome.board.cell(4, 4), 6);
    }

    #[test]
    fn naked_single_profile_guesses_cell_0_1_first() {
        // Under fill-by-naked-single propagation the reference board needs
        // guessing, starting at the two-candidate cell (0, 1).
        let board = parse_board(REFERENCE_BOARD).unwrap();
        let outcome = solve_with_strategies(&board, &SearchBudget::default(), &[crate::sudoku::Strategy::NakedSingle]);
        assert_eq!(outcome.status, SolveStatus::Solved);
        let first_guess = outcome.trace.events.iter().find_map(|e| match e {
            TraceEvent::Guess { row, col, candidates, value } => Some((*row, *col, candidates.clone(), *value)),
            _ => None,
        });
        assert_eq!(first_guess, Some((0, 1, vec![1, 6], 1)));
        assert!(outcome
            .trace
            .events
            .iter()
            .any(|e| matches!(e, TraceEvent::Revert { row: 0, col: 6, .. })));
    }

    #[test]
    fn full_registry_deduces_the_reference_board_without_guessing() {
        let board = parse_board(REFERENCE_BOARD).unwrap();
        let outcome = solve(&board, &SearchBudget::default());
        assert_eq!(outcome.status, SolveStatus::Solved);
        assert_eq!(outcome.guesses, 0);
    }

    #[test]
    fn near_complete_board_needs_no_guess() {
        let mut text = REFERENCE_SOLUTION.to_string();
        text.replace_range(40..41, "0");
        let board = parse_board(&text).unwrap();
        let outcome = solve(&board, &SearchBudget::default());
        assert_eq!(outcome.status, SolveStatus::Solved);
        assert_eq!(outcome.guesses, 0);
        assert!(!outcome.trace.events.iter().any(|e| matches!(e, TraceEvent::Guess { .. })));
    }

    #[test]
    fn trace_replays_to_the_returned_board() {
        let board = parse_board(REFERENCE_BOARD).unwrap();
        let outcome = solve(&board, &SearchBudget::default());
        let mut replay = board;
        for (row, col, value) in outcome.trace.sudoku_surviving_fills() {
            replay.place(usize::from(row) * 9 + usize::from(col), value);
        }
        assert_eq!(replay.to_line(), outcome.board.to_line());
    }

    #[test]
    fn trace_round_trips_through_the_codec() {
        let board = parse_board(REFERENCE_BOARD).unwrap();
        let outcome = solve(&board, &SearchBudget::default());
        let text = serialize(&outcome.trace, Dialect::SUDOKU_BACKTRACK).unwrap();
        let (trace, report) = parse(&text, Dialect::SUDOKU_BACKTRACK);
        assert!(report.is_clean(), "{:?}", report.violations);
        assert!(report.goal_present);
        assert_eq!(trace, outcome.trace);
    }

    #[test]
    fn unsolvable_board_is_dead() {
        let text = "012345678900000000800000000700000000600000000500000000400000000300000000200000000";
        let board = parse_board(text).unwrap();
        let outcome = solve(&board, &SearchBudget::default());
        assert_eq!(outcome.status, SolveStatus::Dead);
        assert!(solve_oracle(&board).is_none());
    }

    #[test]
    fn tiny_budget_exhausts() {
        let board = parse_board(REFERENCE_BOARD).unwrap();
        let outcome = solve(&board, &SearchBudget::tokens(32));
        assert_eq!(outcome.status, SolveStatus::BudgetExhausted);
        assert!(outcome.tokens <= 32);
    }
}
