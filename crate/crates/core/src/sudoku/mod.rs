//! Sudoku board representation, candidate-elimination strategies, and the
//! guess-and-revert solver that emits search traces.

mod generate;
mod oracle;
mod solver;
mod strategies;

pub use generate::{ease_board, generate_board, BoardGenConfig, GeneratedBoard};
pub use oracle::{count_solutions, solve_oracle};
pub use solver::{solve, solve_with_strategies, SolveOutcome, SolveStatus};
pub use strategies::{
    apply_strategies, apply_strategy_set, strategy_registry, Strategy, StrategyOutcome, STRATEGY_SET_VERSION,
};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SudokuError {
    #[error("board text must be 81 characters, got {0}")]
    BadLength(usize),
    #[error("invalid character {ch:?} at position {pos}")]
    BadChar { pos: usize, ch: char },
    #[error("conflicting givens: ({r1}, {c1}) and ({r2}, {c2}) both hold {value}")]
    ConflictingGivens { r1: u8, c1: u8, r2: u8, c2: u8, value: u8 },
    #[error("board is unsolvable")]
    Unsolvable,
    #[error("cannot fill {requested} extra cells; only {empty} are empty")]
    TooManyExtraFills { requested: usize, empty: usize },
}

/// How a cell obtained its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssignmentKind {
    Given,
    Deduced,
    Guessed,
}

/// A positioned value, the unit of Sudoku trace payloads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellAssignment {
    pub row: u8,
    pub col: u8,
    pub value: u8,
    pub kind: AssignmentKind,
}

/// One candidate removed by a strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateElimination {
    pub row: u8,
    pub col: u8,
    pub value: u8,
    pub strategy: Strategy,
}

/// 9x9 board with per-cell candidate sets kept consistent with the filled
/// values: an empty cell's candidates exclude everything its peers hold.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Board {
    cells: [u8; 81],
    /// Bit `d-1` set means digit `d` is still possible; 0 for filled cells.
    candidates: [u16; 81],
}

pub(crate) const ALL_CANDIDATES: u16 = 0x1ff;

/// 20 peers per cell: same row, column, or box.
pub(crate) fn peers(idx: usize) -> &'static [u8; 20] {
    static PEERS: OnceLock<Box<[[u8; 20]; 81]>> = OnceLock::new();
    &PEERS.get_or_init(|| {
        let mut table = Box::new([[0u8; 20]; 81]);
        for cell in 0..81 {
            let (r, c) = (cell / 9, cell % 9);
            let mut out = Vec::with_capacity(20);
            for other in 0..81 {
                if other == cell {
                    continue;
                }
                let (or, oc) = (other / 9, other % 9);
                if or == r || oc == c || (or / 3 == r / 3 && oc / 3 == c / 3) {
                    out.push(other as u8);
                }
            }
            table[cell].copy_from_slice(&out);
        }
        table
    })[idx]
}

/// The 27 houses: rows 0-8, then columns, then boxes.
pub(crate) fn units() -> &'static [[u8; 9]; 27] {
    static UNITS: OnceLock<[[u8; 9]; 27]> = OnceLock::new();
    UNITS.get_or_init(|| {
        let mut table = [[0u8; 9]; 27];
        for i in 0..9 {
            #[allow(clippy::needless_range_loop)]
            for k in 0..9 {
                table[i][k] = (i * 9 + k) as u8;
                table[9 + i][k] = (k * 9 + i) as u8;
                let (br, bc) = (i / 3 * 3, i % 3 * 3);
                table[18 + i][k] = ((br + k / 3) * 9 + bc + k % 3) as u8;
            }
        }
        table
    })
}

impl Board {
    pub fn empty() -> Self {
        Board { cells: [0; 81], candidates: [ALL_CANDIDATES; 81] }
    }

    pub fn cell(&self, row: u8, col: u8) -> u8 {
        self.cells[usize::from(row) * 9 + usize::from(col)]
    }

    pub fn cells(&self) -> &[u8; 81] {
        &self.cells
    }

    /// Candidate digits of a cell, ascending; empty for filled cells.
    pub fn candidates(&self, row: u8, col: u8) -> Vec<u8> {
        let mask = self.candidates[usize::from(row) * 9 + usize::from(col)];
        (1..=9).filter(|d| mask & (1 << (d - 1)) != 0).collect()
    }

    pub(crate) fn candidate_mask(&self, idx: usize) -> u16 {
        self.candidates[idx]
    }

    /// Places a value, eliminating it from all peers. The caller must have
    /// checked legality; this only maintains the candidate structure.
    pub(crate) fn place(&mut self, idx: usize, value: u8) {
        debug_assert_eq!(self.cells[idx], 0);
        debug_assert_ne!(self.candidates[idx] & (1 << (value - 1)), 0);
        self.cells[idx] = value;
        self.candidates[idx] = 0;
        let bit = 1u16 << (value - 1);
        for &peer in peers(idx) {
            self.candidates[usize::from(peer)] &= !bit;
        }
    }

    /// Whether `value` can legally go at `idx` given the filled peers.
    pub(crate) fn admits(&self, idx: usize, value: u8) -> bool {
        self.cells[idx] == 0 && self.candidates[idx] & (1 << (value - 1)) != 0
    }

    /// First empty cell with an empty candidate set, row-major.
    pub(crate) fn contradiction(&self) -> Option<(u8, u8)> {
        (0..81)
            .find(|&i| self.cells[i] == 0 && self.candidates[i] == 0)
            .map(|i| ((i / 9) as u8, (i % 9) as u8))
    }

    pub fn empty_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c == 0).count()
    }

    pub fn is_complete(&self) -> bool {
        self.cells.iter().all(|&c| c != 0)
    }

    /// Complete and every house a permutation of 1..=9.
    pub fn is_solved(&self) -> bool {
        self.is_complete()
            && units().iter().all(|unit| {
                let mut seen = 0u16;
                for &cell in unit {
                    seen |= 1 << (self.cells[usize::from(cell)] - 1);
                }
                seen == ALL_CANDIDATES
            })
    }

    /// Filled cells in row-major order.
    pub fn filled(&self) -> impl Iterator<Item = CellAssignment> + '_ {
        self.cells.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| CellAssignment {
            row: (i / 9) as u8,
            col: (i % 9) as u8,
            value: v,
            kind: AssignmentKind::Given,
        })
    }

    /// The 81-character line form using `0` for empty cells.
    pub fn to_line(&self) -> String {
        self.cells.iter().map(|&c| char::from(b'0' + c)).collect()
    }
}

impl fmt::Debug for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Board({})", self.to_line())
    }
}

impl fmt::Display for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..9 {
            for c in 0..9 {
                let v = self.cell(r, c);
                f.write_str(if v == 0 { "." } else { return_digit(v) })?;
                if c == 2 || c == 5 {
                    f.write_str("|")?;
                }
            }
            if r != 8 {
                f.write_str("\n")?;
                if r == 2 || r == 5 {
                    f.write_str("---+---+---\n")?;
                }
            }
        }
        Ok(())
    }
}

fn return_digit(v: u8) -> &'static str {
    const DIGITS: [&str; 10] = ["0", "1", "2", "3", "4", "5", "6", "7", "8", "9"];
    DIGITS[usize::from(v)]
}

/// Parses an 81-character board; `0` and `.` are empty. Rule-violating
/// givens are rejected.
pub fn parse_board(text: &str) -> Result<Board, SudokuError> {
    let chars: Vec<char> = text.chars().collect();
    if chars.len() != 81 {
        return Err(SudokuError::BadLength(chars.len()));
    }
    let mut board = Board::empty();
    for (pos, &ch) in chars.iter().enumerate() {
        let value = match ch {
            '0' | '.' => continue,
            '1'..='9' => ch as u8 - b'0',
            _ => return Err(SudokuError::BadChar { pos, ch }),
        };
        if !board.admits(pos, value) {
            // Locate the peer that owns the value for the error message.
            let clash = peers(pos)
                .iter()
                .find(|&&p| board.cells[usize::from(p)] == value)
                .copied()
                .unwrap_or(pos as u8);
            return Err(SudokuError::ConflictingGivens {
                r1: (clash / 9),
                c1: (clash % 9),
                r2: (pos / 9) as u8,
                c2: (pos % 9) as u8,
                value,
            });
        }
        board.place(pos, value);
    }
    Ok(board)
}

/// Wire form for Sudoku problem JSONL files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoardRecord {
    pub id: String,
    pub puzzle: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The 26-given reference board used throughout the documentation.
    pub(crate) const REFERENCE_BOARD: &str =
        "702400005000100070083000090000050010209000007000302000008040000047080009600210003";

    /// Its unique solution, transcribed from the reference solution text.
    pub(crate) const REFERENCE_SOLUTION: &str =
        "712498635964135278583726194876954312239861457451372986328549761147683529695217843";

    #[test]
    fn empty_board_has_all_candidates() {
        let board = parse_board(&"0".repeat(81)).unwrap();
        assert_eq!(board.empty_count(), 81);
        for r in 0..9 {
            for c in 0..9 {
                assert_eq!(board.candidates(r, c), (1..=9).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn dots_and_zeros_are_equivalent() {
        let dots = parse_board(&".".repeat(81)).unwrap();
        let zeros = parse_board(&"0".repeat(81)).unwrap();
        assert_eq!(dots, zeros);
    }

    #[test]
    fn duplicate_in_row_is_rejected() {
        let mut text = "0".repeat(81);
        text.replace_range(0..1, "7");
        text.replace_range(5..6, "7");
        assert!(matches!(parse_board(&text), Err(SudokuError::ConflictingGivens { value: 7, .. })));
    }

    #[test]
    fn wrong_length_and_alphabet_are_rejected() {
        assert!(matches!(parse_board("123"), Err(SudokuError::BadLength(3))));
        let mut text = "0".repeat(81);
        text.replace_range(10..11, "x");
        assert!(matches!(parse_board(&text), Err(SudokuError::BadChar { pos: 10, ch: 'x' })));
    }

    #[test]
    fn reference_board_parses_with_26_givens() {
        let board = parse_board(REFERENCE_BOARD).unwrap();
        assert_eq!(81 - board.empty_count(), 26);
        assert_eq!(board.cell(0, 0), 7);
        assert_eq!(board.cell(8, 8), 3);
        // Candidates exclude peer values.
        assert!(!board.candidates(0, 1).contains(&7));
    }

    #[test]
    fn solved_reference_grid_checks_out() {
        let board = parse_board(REFERENCE_SOLUTION).unwrap();
        assert!(board.is_solved());
        assert_eq!(board.cell(4, 4), 6);
    }

    #[test]
    fn line_round_trip() {
        let board = parse_board(REFERENCE_BOARD).unwrap();
        assert_eq!(board.to_line(), REFERENCE_BOARD);
    }
}
