//! Plain exhaustive backtracking without strategies. The reference answer
//! generator for tests and for filling eased boards; the trace-emitting
//! solver never consults it.

use super::Board;

/// First solution found by deterministic exhaustive backtracking
/// (minimum-remaining-values cell choice, row-major ties, digits ascending),
/// or `None` for unsolvable boards.
pub fn solve_oracle(board: &Board) -> Option<[u8; 81]> {
    let mut state = State::from_board(board)?;
    if state.solve(1) == 1 {
        Some(state.first)
    } else {
        None
    }
}

/// Number of distinct solutions, counted up to `cap`.
pub fn count_solutions(board: &Board, cap: u64) -> u64 {
    if cap == 0 {
        return 0;
    }
    match State::from_board(board) {
        Some(mut state) => state.solve(cap),
        None => 0,
    }
}

struct State {
    cells: [u8; 81],
    rows: [u16; 9],
    cols: [u16; 9],
    boxes: [u16; 9],
    first: [u8; 81],
    found: u64,
}

impl State {
    fn from_board(board: &Board) -> Option<Self> {
        let mut state = State {
            cells: *board.cells(),
            rows: [0; 9],
            cols: [0; 9],
            boxes: [0; 9],
            first: [0; 81],
            found: 0,
        };
        for idx in 0..81 {
            let v = state.cells[idx];
            if v == 0 {
                continue;
            }
            let bit = 1u16 << (v - 1);
            let (r, c, b) = coords(idx);
            if state.rows[r] & bit != 0 || state.cols[c] & bit != 0 || state.boxes[b] & bit != 0 {
                return None;
            }
            state.rows[r] |= bit;
            state.cols[c] |= bit;
            state.boxes[b] |= bit;
        }
        Some(state)
    }

    fn options(&self, idx: usize) -> u16 {
        let (r, c, b) = coords(idx);
        !(self.rows[r] | self.cols[c] | self.boxes[b]) & 0x1ff
    }

    fn solve(&mut self, cap: u64) -> u64 {
        // MRV cell choice with row-major tie-break.
        let mut best: Option<(usize, u16, u32)> = None;
        for idx in 0..81 {
            if self.cells[idx] != 0 {
                continue;
            }
            let mask = self.options(idx);
            let n = mask.count_ones();
            if n == 0 {
                return self.found;
            }
            if best.is_none_or(|(_, _, bn)| n < bn) {
                best = Some((idx, mask, n));
                if n == 1 {
                    break;
                }
            }
        }
        let Some((idx, mask, _)) = best else {
            // Complete.
            if self.found == 0 {
                self.first = self.cells;
            }
            self.found += 1;
            return self.found;
        };
        let (r, c, b) = coords(idx);
        for d in 1..=9u8 {
            let bit = 1u16 << (d - 1);
            if mask & bit == 0 {
                continue;
            }
            self.cells[idx] = d;
            self.rows[r] |= bit;
            self.cols[c] |= bit;
            self.boxes[b] |= bit;
            self.solve(cap);
            self.cells[idx] = 0;
            self.rows[r] &= !bit;
            self.cols[c] &= !bit;
            self.boxes[b] &= !bit;
            if self.found >= cap {
                return self.found;
            }
        }
        self.found
    }
}

fn coords(idx: usize) -> (usize, usize, usize) {
    let (r, c) = (idx / 9, idx % 9);
    (r, c, r / 3 * 3 + c / 3)
}
