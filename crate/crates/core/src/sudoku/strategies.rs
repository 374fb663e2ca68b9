//! The seven candidate-elimination strategies applied before any guessing.
//!
//! Precedence follows the registry order below; after any strategy makes
//! progress the engine restarts from the first, so cheaper deductions always
//! run ahead of expensive ones. Scan order within a strategy is fixed
//! (row-major cells, then the 27 houses in row/column/box order), which
//! makes fill order deterministic.

use super::{units, AssignmentKind, Board, CandidateElimination, CellAssignment, ALL_CANDIDATES};
use serde::{Deserialize, Serialize};

/// Bump when the strategy set changes; recorded in dataset manifests so
/// traces remain attributable to the exact deduction rules that built them.
pub const STRATEGY_SET_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    NakedSingle,
    HiddenSingle,
    NakedPair,
    HiddenPair,
    NakedTriple,
    PointingPair,
    BoxLineReduction,
}

/// The versioned strategy set, in precedence order.
pub fn strategy_registry() -> &'static [Strategy; 7] {
    &[
        Strategy::NakedSingle,
        Strategy::HiddenSingle,
        Strategy::NakedPair,
        Strategy::HiddenPair,
        Strategy::NakedTriple,
        Strategy::PointingPair,
        Strategy::BoxLineReduction,
    ]
}

/// Result of running the strategies to fixpoint.
#[derive(Debug, Clone)]
pub struct StrategyOutcome {
    pub board: Board,
    pub fills: Vec<CellAssignment>,
    pub eliminations: Vec<CandidateElimination>,
    /// A cell left with no candidates; drives backtracking, not an error.
    pub contradiction: Option<(u8, u8)>,
}

/// Applies the seven strategies to fixpoint without guessing.
pub fn apply_strategies(board: &Board) -> StrategyOutcome {
    apply_strategy_set(board, strategy_registry())
}

/// Fixpoint propagation restricted to a subset of the registry.
pub fn apply_strategy_set(board: &Board, strategies: &[Strategy]) -> StrategyOutcome {
    let mut board = *board;
    let mut fills = Vec::new();
    let mut eliminations = Vec::new();
    let contradiction = propagate(&mut board, strategies, &mut fills, &mut eliminations);
    StrategyOutcome { board, fills, eliminations, contradiction }
}

/// In-place fixpoint propagation; shared with the solver.
///
/// Contradictions are reported at the fixpoint, not eagerly: deductions keep
/// landing while a doomed cell sits empty, and only once nothing more can be
/// deduced does the first empty-candidate cell (row-major) surface. Dead
/// branches therefore carry their full deduction run in the trace.
pub(super) fn propagate(
    board: &mut Board,
    strategies: &[Strategy],
    fills: &mut Vec<CellAssignment>,
    eliminations: &mut Vec<CandidateElimination>,
) -> Option<(u8, u8)> {
    'restart: loop {
        for &strategy in strategies {
            let progressed = match strategy {
                Strategy::NakedSingle => naked_single(board, fills),
                Strategy::HiddenSingle => hidden_single(board, fills),
                Strategy::NakedPair => naked_pair(board, eliminations),
                Strategy::HiddenPair => hidden_pair(board, eliminations),
                Strategy::NakedTriple => naked_triple(board, eliminations),
                Strategy::PointingPair => pointing_pair(board, eliminations),
                Strategy::BoxLineReduction => box_line_reduction(board, eliminations),
            };
            if progressed {
                continue 'restart;
            }
        }
        return board.contradiction();
    }
}

fn fill(board: &mut Board, idx: usize, value: u8, fills: &mut Vec<CellAssignment>) {
    board.place(idx, value);
    fills.push(CellAssignment {
        row: (idx / 9) as u8,
        col: (idx % 9) as u8,
        value,
        kind: AssignmentKind::Deduced,
    });
}

/// Removes candidate bits; records each removal.
fn eliminate(
    board: &mut Board,
    idx: usize,
    mask: u16,
    strategy: Strategy,
    eliminations: &mut Vec<CandidateElimination>,
) -> bool {
    let removable = board.candidates[idx] & mask;
    if removable == 0 || board.cells[idx] != 0 {
        return false;
    }
    for d in 1..=9u8 {
        if removable & (1 << (d - 1)) != 0 {
            eliminations.push(CandidateElimination {
                row: (idx / 9) as u8,
                col: (idx % 9) as u8,
                value: d,
                strategy,
            });
        }
    }
    board.candidates[idx] &= !mask;
    true
}

fn naked_single(board: &mut Board, fills: &mut Vec<CellAssignment>) -> bool {
    let mut progressed = false;
    for idx in 0..81 {
        if board.cells[idx] == 0 && board.candidates[idx].count_ones() == 1 {
            let value = board.candidates[idx].trailing_zeros() as u8 + 1;
            fill(board, idx, value, fills);
            progressed = true;
        }
    }
    progressed
}

fn hidden_single(board: &mut Board, fills: &mut Vec<CellAssignment>) -> bool {
    let mut progressed = false;
    for unit in units() {
        for d in 1..=9u8 {
            let bit = 1u16 << (d - 1);
            let mut home = None;
            let mut count = 0;
            for &cell in unit {
                let idx = usize::from(cell);
                if board.cells[idx] == 0 && board.candidates[idx] & bit != 0 {
                    home = Some(idx);
                    count += 1;
                }
            }
            if count == 1 {
                fill(board, home.unwrap(), d, fills);
                progressed = true;
            }
        }
    }
    progressed
}

fn naked_pair(board: &mut Board, eliminations: &mut Vec<CandidateElimination>) -> bool {
    let mut progressed = false;
    for unit in units() {
        for a in 0..9 {
            let ia = usize::from(unit[a]);
            let mask = board.candidates[ia];
            if board.cells[ia] != 0 || mask.count_ones() != 2 {
                continue;
            }
            for b in a + 1..9 {
                let ib = usize::from(unit[b]);
                if board.candidates[ib] != mask {
                    continue;
                }
                for &cell in unit.iter() {
                    let ik = usize::from(cell);
                    if ik != ia && ik != ib && eliminate(board, ik, mask, Strategy::NakedPair, eliminations) {
                        progressed = true;
                    }
                }
            }
        }
    }
    progressed
}

fn hidden_pair(board: &mut Board, eliminations: &mut Vec<CandidateElimination>) -> bool {
    let mut progressed = false;
    for unit in units() {
        // Cell-position mask per digit within the unit.
        let mut homes = [0u16; 10];
        for (k, &cell) in unit.iter().enumerate() {
            let idx = usize::from(cell);
            if board.cells[idx] != 0 {
                continue;
            }
            for d in 1..=9u8 {
                if board.candidates[idx] & (1 << (d - 1)) != 0 {
                    homes[usize::from(d)] |= 1 << k;
                }
            }
        }
        for d1 in 1..=9u8 {
            if homes[usize::from(d1)].count_ones() != 2 {
                continue;
            }
            for d2 in d1 + 1..=9 {
                if homes[usize::from(d1)] != homes[usize::from(d2)] {
                    continue;
                }
                let keep = (1u16 << (d1 - 1)) | (1 << (d2 - 1));
                for (k, &cell) in unit.iter().enumerate() {
                    if homes[usize::from(d1)] & (1 << k) != 0
                        && eliminate(board, usize::from(cell), !keep & ALL_CANDIDATES, Strategy::HiddenPair, eliminations)
                    {
                        progressed = true;
                    }
                }
            }
        }
    }
    progressed
}

fn naked_triple(board: &mut Board, eliminations: &mut Vec<CandidateElimination>) -> bool {
    let mut progressed = false;
    for unit in units() {
        let open: Vec<usize> = unit
            .iter()
            .map(|&c| usize::from(c))
            .filter(|&i| board.cells[i] == 0 && (2..=3).contains(&board.candidates[i].count_ones()))
            .collect();
        for a in 0..open.len() {
            for b in a + 1..open.len() {
                for c in b + 1..open.len() {
                    let union = board.candidates[open[a]] | board.candidates[open[b]] | board.candidates[open[c]];
                    if union.count_ones() != 3 {
                        continue;
                    }
                    for &cell in unit.iter() {
                        let ik = usize::from(cell);
                        if ik != open[a]
                            && ik != open[b]
                            && ik != open[c]
                            && eliminate(board, ik, union, Strategy::NakedTriple, eliminations)
                        {
                            progressed = true;
                        }
                    }
                }
            }
        }
    }
    progressed
}

/// Box-to-line: a digit confined to one row or column inside a box cannot
/// appear elsewhere in that row or column.
fn pointing_pair(board: &mut Board, eliminations: &mut Vec<CandidateElimination>) -> bool {
    let mut progressed = false;
    for b in 0..9usize {
        let (br, bc) = (b / 3 * 3, b % 3 * 3);
        for d in 1..=9u8 {
            let bit = 1u16 << (d - 1);
            let mut rows = [false; 9];
            let mut cols = [false; 9];
            let mut any = false;
            for dr in 0..3 {
                for dc in 0..3 {
                    let idx = (br + dr) * 9 + bc + dc;
                    if board.cells[idx] == 0 && board.candidates[idx] & bit != 0 {
                        rows[br + dr] = true;
                        cols[bc + dc] = true;
                        any = true;
                    }
                }
            }
            if !any {
                continue;
            }
            if let Some(r) = single_index(&rows) {
                for c in 0..9 {
                    let idx = r * 9 + c;
                    if c / 3 != bc / 3 && eliminate(board, idx, bit, Strategy::PointingPair, eliminations) {
                        progressed = true;
                    }
                }
            }
            if let Some(c) = single_index(&cols) {
                for r in 0..9 {
                    let idx = r * 9 + c;
                    if r / 3 != br / 3 && eliminate(board, idx, bit, Strategy::PointingPair, eliminations) {
                        progressed = true;
                    }
                }
            }
        }
    }
    progressed
}

/// Line-to-box: a digit confined to one box within a row or column cannot
/// appear elsewhere in that box.
fn box_line_reduction(board: &mut Board, eliminations: &mut Vec<CandidateElimination>) -> bool {
    let mut progressed = false;
    for line in 0..18usize {
        for d in 1..=9u8 {
            let bit = 1u16 << (d - 1);
            let mut boxes = [false; 9];
            let mut any = false;
            let mut members = [0usize; 9];
            for (k, member) in members.iter_mut().enumerate() {
                let idx = if line < 9 { line * 9 + k } else { k * 9 + (line - 9) };
                *member = idx;
                if board.cells[idx] == 0 && board.candidates[idx] & bit != 0 {
                    boxes[idx / 9 / 3 * 3 + idx % 9 / 3] = true;
                    any = true;
                }
            }
            if !any {
                continue;
            }
            if let Some(b) = single_index(&boxes) {
                let (br, bc) = (b / 3 * 3, b % 3 * 3);
                for dr in 0..3 {
                    for dc in 0..3 {
                        let idx = (br + dr) * 9 + bc + dc;
                        if !members.contains(&idx) && eliminate(board, idx, bit, Strategy::BoxLineReduction, eliminations) {
                            progressed = true;
                        }
                    }
                }
            }
        }
    }
    progressed
}

fn single_index(flags: &[bool; 9]) -> Option<usize> {
    let mut found = None;
    for (i, &f) in flags.iter().enumerate() {
        if f {
            if found.is_some() {
                return None;
            }
            found = Some(i);
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sudoku::parse_board;

    #[test]
    fn naked_single_fills_the_ninth_cell() {
        // Row 0 holds 1..8; the last cell must be 9.
        let mut text = String::from("123456780");
        text.push_str(&"0".repeat(72));
        let board = parse_board(&text).unwrap();
        let outcome = apply_strategies(&board);
        assert!(outcome.contradiction.is_none());
        assert_eq!(outcome.board.cell(0, 8), 9);
        assert!(outcome
            .fills
            .iter()
            .any(|f| (f.row, f.col, f.value) == (0, 8, 9)));
    }

    #[test]
    fn hidden_single_in_a_box() {
        // Fives at (0,4), (1,6), (4,1), (8,2) leave (2,0) as the only home
        // for 5 inside box 0.
        let text = "000050000000000500000000000000000000050000000000000000000000000000000000005000000";
        let board = parse_board(text).unwrap();
        let outcome = apply_strategies(&board);
        assert!(outcome.contradiction.is_none());
        assert_eq!(outcome.board.cell(2, 0), 5);
        assert!(outcome
            .fills
            .iter()
            .any(|f| (f.row, f.col, f.value) == (2, 0, 5)));
    }

    #[test]
    fn strategies_are_monotone() {
        let board = parse_board(crate::sudoku::tests::REFERENCE_BOARD).unwrap();
        let outcome = apply_strategies(&board);
        assert!(outcome.contradiction.is_none());
        // Filled count only grows; candidates only shrink.
        assert!(outcome.board.empty_count() <= board.empty_count());
        for r in 0..9 {
            for c in 0..9 {
                if outcome.board.cell(r, c) == 0 {
                    let before: std::collections::HashSet<u8> = board.candidates(r, c).into_iter().collect();
                    for d in outcome.board.candidates(r, c) {
                        assert!(before.contains(&d));
                    }
                }
            }
        }
    }

    #[test]
    fn fixpoint_is_idempotent() {
        let board = parse_board(crate::sudoku::tests::REFERENCE_BOARD).unwrap();
        let once = apply_strategies(&board);
        let twice = apply_strategies(&once.board);
        assert!(twice.fills.is_empty());
        assert!(twice.eliminations.is_empty());
        assert_eq!(once.board, twice.board);
    }

    #[test]
    fn contradiction_is_reported_not_panicked() {
        // Row 0 forces (0,0) = 9 while column 0 already holds a 9, leaving
        // (0,0) with no candidates.
        let text = "012345678000000000000000000900000000000000000000000000000000000000000000000000000";
        let board = parse_board(text).unwrap();
        let outcome = apply_strategies(&board);
        assert_eq!(outcome.contradiction, Some((0, 0)));
    }
}
