//! Seeded board generation and the easy-board transform.
//!
//! Generation digs cells out of a random complete grid, keeping the board
//! uniquely solvable at every step, until it reaches the target given count
//! or runs out of removable cells. Everything is deterministic in
//! `(seed, index)`.

use super::oracle::{count_solutions, solve_oracle};
use super::{Board, SudokuError};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoardGenConfig {
    /// Digging stops once this many givens remain (or earlier when no cell
    /// can be removed without losing uniqueness).
    pub target_givens: u8,
}

impl Default for BoardGenConfig {
    fn default() -> Self {
        // Hard boards: mid-twenties givens leave plenty of guessing.
        BoardGenConfig { target_givens: 24 }
    }
}

#[derive(Debug, Clone)]
pub struct GeneratedBoard {
    pub board: Board,
    pub solution: [u8; 81],
}

impl GeneratedBoard {
    pub fn solution_line(&self) -> String {
        self.solution.iter().map(|&v| char::from(b'0' + v)).collect()
    }
}

fn index_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index ^ 0x5375_646f_6b75_0000); // distinct stream space from CountDown
    rng
}

/// Generates the `index`-th board of a seeded corpus: a uniquely solvable
/// puzzle plus its solution grid.
pub fn generate_board(seed: u64, index: u64, config: &BoardGenConfig) -> GeneratedBoard {
    let mut rng = index_rng(seed, index);
    let solution = random_complete_grid(&mut rng);

    let mut order: Vec<usize> = (0..81).collect();
    order.shuffle(&mut rng);

    let mut cells = solution;
    let mut givens = 81u8;
    for &idx in &order {
        if givens <= config.target_givens {
            break;
        }
        let saved = cells[idx];
        cells[idx] = 0;
        let line: String = cells.iter().map(|&v| char::from(b'0' + v)).collect();
        let candidate = super::parse_board(&line).expect("dug board stays well-formed");
        if count_solutions(&candidate, 2) == 1 {
            givens -= 1;
        } else {
            cells[idx] = saved;
        }
    }

    let line: String = cells.iter().map(|&v| char::from(b'0' + v)).collect();
    GeneratedBoard { board: super::parse_board(&line).unwrap(), solution }
}

/// A random complete grid via seeded backtracking with shuffled digits.
fn random_complete_grid(rng: &mut ChaCha8Rng) -> [u8; 81] {
    let mut cells = [0u8; 81];
    let mut rows = [0u16; 9];
    let mut cols = [0u16; 9];
    let mut boxes = [0u16; 9];
    // One shuffled digit order per cell, fixed up front so the recursion is
    // a pure function of the shuffle.
    let mut digit_orders: Vec<[u8; 9]> = Vec::with_capacity(81);
    for _ in 0..81 {
        let mut digits = [1u8, 2, 3, 4, 5, 6, 7, 8, 9];
        digits.shuffle(rng);
        digit_orders.push(digits);
    }

    fn rec(
        idx: usize,
        cells: &mut [u8; 81],
        rows: &mut [u16; 9],
        cols: &mut [u16; 9],
        boxes: &mut [u16; 9],
        orders: &[[u8; 9]],
    ) -> bool {
        if idx == 81 {
            return true;
        }
        let (r, c) = (idx / 9, idx % 9);
        let b = r / 3 * 3 + c / 3;
        for &d in &orders[idx] {
            let bit = 1u16 << (d - 1);
            if rows[r] & bit != 0 || cols[c] & bit != 0 || boxes[b] & bit != 0 {
                continue;
            }
            cells[idx] = d;
            rows[r] |= bit;
            cols[c] |= bit;
            boxes[b] |= bit;
            if rec(idx + 1, cells, rows, cols, boxes, orders) {
                return true;
            }
            cells[idx] = 0;
            rows[r] &= !bit;
            cols[c] &= !bit;
            boxes[b] &= !bit;
        }
        false
    }

    let ok = rec(0, &mut cells, &mut rows, &mut cols, &mut boxes, &digit_orders);
    debug_assert!(ok);
    cells
}

/// Fills `extra_fills` randomly chosen empty cells with the oracle
/// solution's values, producing an easier board with the same solution set.
pub fn ease_board(board: &Board, extra_fills: usize, seed: u64) -> Result<Board, SudokuError> {
    let solution = solve_oracle(board).ok_or(SudokuError::Unsolvable)?;
    let empties: Vec<usize> = (0..81).filter(|&i| board.cells()[i] == 0).collect();
    if extra_fills > empties.len() {
        return Err(SudokuError::TooManyExtraFills { requested: extra_fills, empty: empties.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = empties;
    chosen.shuffle(&mut rng);
    chosen.truncate(extra_fills);

    let mut eased = *board;
    for idx in chosen {
        eased.place(idx, solution[idx]);
    }
    Ok(eased)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sudoku::parse_board;
    use crate::sudoku::tests::REFERENCE_BOARD;

    #[test]
    fn generation_is_deterministic_and_unique() {
        let config = BoardGenConfig::default();
        let a = generate_board(7, 0, &config);
        let b = generate_board(7, 0, &config);
        assert_eq!(a.board.to_line(), b.board.to_line());
        assert_eq!(a.solution, b.solution);
        assert_ne!(a.board.to_line(), generate_board(7, 1, &config).board.to_line());
        assert_eq!(count_solutions(&a.board, 2), 1);
        assert_eq!(solve_oracle(&a.board).unwrap(), a.solution);
    }

    #[test]
    fn generated_boards_reach_hard_given_counts() {
        let config = BoardGenConfig::default();
        for index in 0..5 {
            let g = generate_board(11, index, &config);
            let givens = 81 - g.board.empty_count();
            assert!(givens <= 30, "index {index}: {givens} givens");
        }
    }

    #[test]
    fn ease_zero_is_identity() {
        let board = parse_board(REFERENCE_BOARD).unwrap();
        let eased = ease_board(&board, 0, 9).unwrap();
        assert_eq!(eased.to_line(), board.to_line());
    }

    #[test]
    fn ease_adds_exactly_the_requested_fills() {
        let board = parse_board(REFERENCE_BOARD).unwrap();
        let eased = ease_board(&board, 10, 9).unwrap();
        assert_eq!(81 - eased.empty_count(), 26 + 10);
        // Same unique solution.
        assert_eq!(solve_oracle(&eased).unwrap(), solve_oracle(&board).unwrap());
        assert_eq!(count_solutions(&eased, 2), 1);
        // Deterministic in the seed.
        assert_eq!(ease_board(&board, 10, 9).unwrap().to_line(), eased.to_line());
    }

    #[test]
    fn ease_rejects_impossible_requests() {
        let board = parse_board(REFERENCE_BOARD).unwrap();
        assert!(matches!(
            ease_board(&board, 80, 1),
            Err(SudokuError::TooManyExtraFills { .. })
        ));
        let unsolvable =
            parse_board("012345678900000000800000000700000000600000000500000000400000000300000000200000000")
                .unwrap();
        assert!(matches!(ease_board(&unsolvable, 1, 1), Err(SudokuError::Unsolvable)));
    }
}
