//! CountDown game rules: state transitions, move enumeration, solution
//! verification, puzzle generation, and search-tree arithmetic.
//!
//! A CountDown instance gives a target and a list of candidate numbers.
//! Every candidate must be consumed exactly once by binary arithmetic
//! operations; intermediate results are reusable. The stacked variant uses
//! eight candidates where the first four must reach the fifth (an
//! intermediate goal) before the last four play toward the final target.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::RangeInclusive;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CountdownError {
    #[error("state has fewer than two numbers")]
    TooFewNumbers,
    #[error("tree arithmetic needs at least two candidates, got {0}")]
    TreeTooSmall(usize),
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
    #[error("invalid puzzle: {0}")]
    InvalidPuzzle(String),
}

/// The four arithmetic operators, in the canonical generation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Operator {
    Add,
    Sub,
    Mul,
    Div,
}

impl Operator {
    pub const ALL: [Operator; 4] = [Operator::Add, Operator::Sub, Operator::Mul, Operator::Div];

    pub fn symbol(self) -> char {
        match self {
            Operator::Add => '+',
            Operator::Sub => '-',
            Operator::Mul => '*',
            Operator::Div => '/',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            '+' => Some(Operator::Add),
            '-' => Some(Operator::Sub),
            '*' => Some(Operator::Mul),
            '/' => Some(Operator::Div),
            _ => None,
        }
    }
}

/// One applied arithmetic step, e.g. `96-78=18`.
///
/// Subtraction and division are canonicalized as larger-minus-smaller and
/// larger-over-smaller so results stay non-negative integers. Addition and
/// multiplication keep the operands in state order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Operation {
    pub left: u64,
    pub right: u64,
    pub op: Operator,
    pub result: u64,
}

impl Operation {
    /// Recomputes the arithmetic and checks it against the claimed result.
    pub fn is_exact(&self) -> bool {
        match self.op {
            Operator::Add => self.left.checked_add(self.right) == Some(self.result),
            Operator::Sub => self.left.checked_sub(self.right) == Some(self.result),
            Operator::Mul => self.left.checked_mul(self.right) == Some(self.result),
            Operator::Div => {
                self.right != 0
                    && self.left.is_multiple_of(self.right)
                    && self.left / self.right == self.result
            }
        }
    }

    /// Parses the compact `a<op>b=r` form. Returns `None` on any deviation.
    pub fn parse(s: &str) -> Option<Operation> {
        let (lhs, result) = s.split_once('=')?;
        let result: u64 = result.parse().ok()?;
        // The operator is the first non-digit character; operands are
        // non-negative, so a leading sign never occurs.
        let op_pos = lhs.find(|c: char| !c.is_ascii_digit())?;
        let op = Operator::from_symbol(lhs[op_pos..].chars().next()?)?;
        let left: u64 = lhs[..op_pos].parse().ok()?;
        let right: u64 = lhs[op_pos + 1..].parse().ok()?;
        Some(Operation { left, right, op, result })
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}={}", self.left, self.op.symbol(), self.right, self.result)
    }
}

/// A search-tree node: the current goal, the numbers still in play, and the
/// operations applied so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub target: u64,
    pub numbers: Vec<u64>,
    pub operations: Vec<Operation>,
}

/// Game variant marker carried through datasets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Standard,
    Stacked,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Standard => f.write_str("standard"),
            Variant::Stacked => f.write_str("stacked"),
        }
    }
}

/// A CountDown instance. Standard puzzles have four candidates; stacked
/// puzzles have eight with the fifth doubling as the intermediate goal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Puzzle {
    pub id: String,
    pub target: u64,
    pub candidates: Vec<u64>,
    /// Index of the intermediate goal among the candidates; `Some(4)` for
    /// stacked puzzles, `None` for standard ones.
    pub partial_goal_index: Option<usize>,
}

impl Puzzle {
    pub fn standard(id: impl Into<String>, target: u64, candidates: Vec<u64>) -> Result<Self, CountdownError> {
        let puzzle = Puzzle { id: id.into(), target, candidates, partial_goal_index: None };
        puzzle.validate()?;
        Ok(puzzle)
    }

    pub fn stacked(id: impl Into<String>, target: u64, candidates: Vec<u64>) -> Result<Self, CountdownError> {
        let puzzle = Puzzle { id: id.into(), target, candidates, partial_goal_index: Some(4) };
        puzzle.validate()?;
        Ok(puzzle)
    }

    pub fn validate(&self) -> Result<(), CountdownError> {
        if self.target < 1 {
            return Err(CountdownError::InvalidPuzzle("target must be >= 1".into()));
        }
        if self.candidates.iter().any(|&c| c < 1) {
            return Err(CountdownError::InvalidPuzzle("candidates must be >= 1".into()));
        }
        match self.partial_goal_index {
            None if self.candidates.len() == 4 => Ok(()),
            None => Err(CountdownError::InvalidPuzzle(format!(
                "standard puzzles have 4 candidates, got {}",
                self.candidates.len()
            ))),
            Some(4) if self.candidates.len() == 8 => Ok(()),
            Some(i) => Err(CountdownError::InvalidPuzzle(format!(
                "stacked puzzles have 8 candidates and partial goal index 4, got {} candidates, index {}",
                self.candidates.len(),
                i
            ))),
        }
    }

    pub fn variant(&self) -> Variant {
        if self.partial_goal_index.is_some() { Variant::Stacked } else { Variant::Standard }
    }

    pub fn is_stacked(&self) -> bool {
        self.partial_goal_index.is_some()
    }

    /// The fifth candidate for stacked puzzles.
    pub fn intermediate_target(&self) -> Option<u64> {
        self.partial_goal_index.map(|i| self.candidates[i])
    }

    /// Numbers in play for the first half (all four for standard puzzles).
    pub fn first_half(&self) -> &[u64] {
        if self.is_stacked() { &self.candidates[..4] } else { &self.candidates }
    }

    /// Second-half numbers for stacked puzzles: the intermediate goal plus
    /// the trailing three candidates.
    pub fn second_half(&self) -> Option<&[u64]> {
        if self.is_stacked() { Some(&self.candidates[4..]) } else { None }
    }
}

/// Wire form for puzzle JSONL files: `{"id","target","nums","variant"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PuzzleRecord {
    pub id: String,
    pub target: u64,
    pub nums: Vec<u64>,
    pub variant: Variant,
}

impl From<&Puzzle> for PuzzleRecord {
    fn from(p: &Puzzle) -> Self {
        PuzzleRecord { id: p.id.clone(), target: p.target, nums: p.candidates.clone(), variant: p.variant() }
    }
}

impl TryFrom<PuzzleRecord> for Puzzle {
    type Error = CountdownError;

    fn try_from(r: PuzzleRecord) -> Result<Self, CountdownError> {
        match r.variant {
            Variant::Standard => Puzzle::standard(r.id, r.target, r.nums),
            Variant::Stacked => Puzzle::stacked(r.id, r.target, r.nums),
        }
    }
}

/// Enumerates the children of a set of in-play numbers.
///
/// For every unordered pair this yields up to four children (`+`, `-`, `*`,
/// and `/` when exact); non-exact divisions are omitted, though tree-size
/// arithmetic still counts them as actions. A child's numbers are the
/// remaining numbers in their original order with the result appended.
pub fn enumerate_moves(numbers: &[u64]) -> Result<Vec<(Operation, Vec<u64>)>, CountdownError> {
    if numbers.len() < 2 {
        return Err(CountdownError::TooFewNumbers);
    }
    let mut moves = Vec::with_capacity(numbers.len() * (numbers.len() - 1) * 2);
    for i in 0..numbers.len() {
        for j in i + 1..numbers.len() {
            let (a, b) = (numbers[i], numbers[j]);
            // Keep state order for + and *; larger first for - and /.
            let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
            for op in Operator::ALL {
                let operation = match op {
                    Operator::Add => Operation { left: a, right: b, op, result: a + b },
                    Operator::Mul => Operation { left: a, right: b, op, result: a * b },
                    Operator::Sub => Operation { left: hi, right: lo, op, result: hi - lo },
                    Operator::Div => {
                        if lo == 0 || hi % lo != 0 {
                            continue;
                        }
                        Operation { left: hi, right: lo, op, result: hi / lo }
                    }
                };
                let mut rest = Vec::with_capacity(numbers.len() - 1);
                for (k, &n) in numbers.iter().enumerate() {
                    if k != i && k != j {
                        rest.push(n);
                    }
                }
                rest.push(operation.result);
                moves.push((operation, rest));
            }
        }
    }
    Ok(moves)
}

/// Outcome of checking a claimed solution against the game rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Correct,
    RuleViolation(String),
}

impl Verdict {
    pub fn is_correct(&self) -> bool {
        matches!(self, Verdict::Correct)
    }
}

/// Replays a claimed operation list against the puzzle.
///
/// Correct means: every operation's arithmetic is exact, each operand is
/// drawn from the live multiset (candidates plus earlier results), every
/// candidate ends up consumed, and the final remaining number equals the
/// target. Stacked puzzles additionally require the first three operations
/// to reduce the leading four candidates to the intermediate goal.
pub fn verify_solution(puzzle: &Puzzle, ops: &[Operation]) -> Verdict {
    if puzzle.is_stacked() {
        if ops.len() != 6 {
            return Verdict::RuleViolation(format!("stacked solutions take 6 operations, got {}", ops.len()));
        }
        let inter = puzzle.intermediate_target().unwrap();
        if let Err(reason) = verify_half(puzzle.first_half(), &ops[..3], inter) {
            return Verdict::RuleViolation(format!("first half: {reason}"));
        }
        if let Err(reason) = verify_half(puzzle.second_half().unwrap(), &ops[3..], puzzle.target) {
            return Verdict::RuleViolation(format!("second half: {reason}"));
        }
        Verdict::Correct
    } else {
        match verify_half(&puzzle.candidates, ops, puzzle.target) {
            Ok(()) => Verdict::Correct,
            Err(reason) => Verdict::RuleViolation(reason),
        }
    }
}

fn verify_half(candidates: &[u64], ops: &[Operation], goal: u64) -> Result<(), String> {
    if ops.len() + 1 != candidates.len() {
        return Err(format!(
            "{} candidates need exactly {} operations, got {}",
            candidates.len(),
            candidates.len() - 1,
            ops.len()
        ));
    }
    let mut pool: Vec<u64> = candidates.to_vec();
    for op in ops {
        if !op.is_exact() {
            return Err(format!("bad arithmetic: {op}"));
        }
        take(&mut pool, op.left).ok_or_else(|| format!("operand {} not available in {op}", op.left))?;
        take(&mut pool, op.right).ok_or_else(|| format!("operand {} not available in {op}", op.right))?;
        pool.push(op.result);
    }
    debug_assert_eq!(pool.len(), 1);
    if pool[0] == goal {
        Ok(())
    } else {
        Err(format!("final number {} does not equal {}", pool[0], goal))
    }
}

fn take(pool: &mut Vec<u64>, value: u64) -> Option<()> {
    let idx = pool.iter().position(|&n| n == value)?;
    pool.swap_remove(idx);
    Some(())
}

/// Number of root-to-leaf paths in the complete search tree over
/// `n_candidates` numbers, counting all four operator slots per pair
/// (invalid divisions count as dead actions).
pub fn tree_path_count(n_candidates: usize) -> Result<u128, CountdownError> {
    if n_candidates < 2 {
        return Err(CountdownError::TreeTooSmall(n_candidates));
    }
    let mut total: u128 = 1;
    for n in 2..=n_candidates as u128 {
        total *= n * (n - 1) / 2 * 4;
    }
    Ok(total)
}

/// Leaf-path statistics from exhaustively enumerating one half of a game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathStats {
    /// All leaf paths, with invalid divisions retained as dead leaves that
    /// still own their nominal subtrees.
    pub paths: u128,
    /// Paths whose final number equals the goal.
    pub solving: u128,
}

/// Walks every action slot of the search tree over `numbers`.
///
/// Invalid divisions are kept as poisoned subtrees so the path count stays
/// a pure function of the candidate count; poisoned paths can never solve.
pub fn enumerate_paths(numbers: &[u64], goal: u64) -> PathStats {
    enum Node<'a> {
        Live(&'a [u64]),
        Owned(Vec<u64>),
        Poisoned(usize),
    }

    fn walk(node: &Node<'_>, goal: u64) -> PathStats {
        let numbers: &[u64] = match node {
            Node::Live(n) => n,
            Node::Owned(n) => n,
            Node::Poisoned(len) => {
                if *len <= 1 {
                    return PathStats { paths: 1, solving: 0 };
                }
                let slots = (*len as u128) * (*len as u128 - 1) / 2 * 4;
                let below = walk(&Node::Poisoned(len - 1), goal);
                return PathStats { paths: slots * below.paths, solving: 0 };
            }
        };
        if numbers.len() == 1 {
            return PathStats { paths: 1, solving: (numbers[0] == goal) as u128 };
        }
        let mut stats = PathStats { paths: 0, solving: 0 };
        for i in 0..numbers.len() {
            for j in i + 1..numbers.len() {
                let (a, b) = (numbers[i], numbers[j]);
                let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
                for op in Operator::ALL {
                    let result = match op {
                        Operator::Add => Some(a + b),
                        Operator::Mul => Some(a * b),
                        Operator::Sub => Some(hi - lo),
                        Operator::Div => (lo != 0 && hi % lo == 0).then(|| hi / lo),
                    };
                    let child = match result {
                        Some(r) => {
                            let mut rest = Vec::with_capacity(numbers.len() - 1);
                            for (k, &n) in numbers.iter().enumerate() {
                                if k != i && k != j {
                                    rest.push(n);
                                }
                            }
                            rest.push(r);
                            Node::Owned(rest)
                        }
                        None => Node::Poisoned(numbers.len() - 1),
                    };
                    let below = walk(&child, goal);
                    stats.paths += below.paths;
                    stats.solving += below.solving;
                }
            }
        }
        stats
    }

    walk(&Node::Live(numbers), goal)
}

/// Whether exhaustive search can reach the target at all.
pub fn brute_force_solvable(puzzle: &Puzzle) -> bool {
    fn solvable(numbers: &[u64], goal: u64) -> bool {
        if numbers.len() == 1 {
            return numbers[0] == goal;
        }
        enumerate_moves(numbers)
            .map(|moves| moves.iter().any(|(_, rest)| solvable(rest, goal)))
            .unwrap_or(false)
    }

    if puzzle.is_stacked() {
        let inter = puzzle.intermediate_target().unwrap();
        solvable(puzzle.first_half(), inter) && solvable(puzzle.second_half().unwrap(), puzzle.target)
    } else {
        solvable(&puzzle.candidates, puzzle.target)
    }
}

/// Sampling ranges for puzzle generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub candidate_range: RangeInclusive<u64>,
    pub target_range: RangeInclusive<u64>,
    /// Rejection-sample until the puzzle is brute-force solvable. Raw
    /// uniform draws are solvable only ~12% of the time, so datasets meant
    /// to be searched are conditioned on solvability by default.
    pub solvable_only: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { candidate_range: 1..=99, target_range: 10..=100, solvable_only: true }
    }
}

impl GenConfig {
    /// Unconditioned uniform sampling.
    pub fn raw() -> Self {
        GenConfig { solvable_only: false, ..GenConfig::default() }
    }
}

impl GenConfig {
    fn validate(&self) -> Result<(), CountdownError> {
        if self.candidate_range.is_empty() || *self.candidate_range.start() < 1 {
            return Err(CountdownError::InvalidConfig("candidate range must be non-empty and start at >= 1".into()));
        }
        if self.target_range.is_empty() || *self.target_range.start() < 1 {
            return Err(CountdownError::InvalidConfig("target range must be non-empty and start at >= 1".into()));
        }
        Ok(())
    }
}

fn index_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Generates the `index`-th standard puzzle of a seeded dataset.
///
/// Candidates are drawn i.i.d. from the candidate range and the target from
/// the target range. Deterministic in `(seed, index)` via per-index
/// generator streams; with `solvable_only` the stream is redrawn until
/// exhaustive search confirms a solution exists.
pub fn generate_puzzle(seed: u64, index: u64, config: &GenConfig) -> Result<Puzzle, CountdownError> {
    config.validate()?;
    let mut rng = index_rng(seed, index);
    for _ in 0..MAX_SOLVABLE_DRAWS {
        let candidates: Vec<u64> = (0..4).map(|_| rng.gen_range(config.candidate_range.clone())).collect();
        let target = rng.gen_range(config.target_range.clone());
        let puzzle = Puzzle::standard(format!("cd-{seed}-{index}"), target, candidates)?;
        if !config.solvable_only || brute_force_solvable(&puzzle) {
            return Ok(puzzle);
        }
    }
    Err(CountdownError::InvalidConfig(format!(
        "no solvable puzzle in {MAX_SOLVABLE_DRAWS} draws; the configured ranges may admit none"
    )))
}

/// Rejection-sampling cap: ~12% of raw draws are solvable under the default
/// ranges, so hitting this without a success means the ranges are hostile.
const MAX_SOLVABLE_DRAWS: u32 = 100_000;

/// Generates the `index`-th stacked puzzle: eight candidates where the fifth
/// serves as the intermediate goal.
pub fn make_stacked(seed: u64, index: u64, config: &GenConfig) -> Result<Puzzle, CountdownError> {
    config.validate()?;
    let mut rng = index_rng(seed, index);
    for _ in 0..MAX_SOLVABLE_DRAWS {
        let candidates: Vec<u64> = (0..8).map(|_| rng.gen_range(config.candidate_range.clone())).collect();
        let target = rng.gen_range(config.target_range.clone());
        let puzzle = Puzzle::stacked(format!("cds-{seed}-{index}"), target, candidates)?;
        if !config.solvable_only || brute_force_solvable(&puzzle) {
            return Ok(puzzle);
        }
    }
    Err(CountdownError::InvalidConfig(format!(
        "no solvable stacked puzzle in {MAX_SOLVABLE_DRAWS} draws; the configured ranges may admit none"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn puzzle(target: u64, candidates: &[u64]) -> Puzzle {
        Puzzle::standard("t", target, candidates.to_vec()).unwrap()
    }

    fn op(s: &str) -> Operation {
        Operation::parse(s).unwrap()
    }

    #[test]
    fn moves_append_result_last() {
        // From the worked 16:[96, 11, 78, 22] example: 96-78 leaves [11, 22, 18].
        let moves = enumerate_moves(&[96, 11, 78, 22]).unwrap();
        let (operation, rest) = moves
            .iter()
            .find(|(o, _)| o.op == Operator::Sub && o.left == 96 && o.right == 78)
            .unwrap();
        assert_eq!(operation.result, 18);
        assert_eq!(rest, &[11, 22, 18]);
    }

    #[test]
    fn two_number_state_has_four_candidate_ops() {
        let moves = enumerate_moves(&[18, 2]).unwrap();
        let rendered: Vec<String> = moves.iter().map(|(o, _)| o.to_string()).collect();
        assert_eq!(rendered, ["18+2=20", "18-2=16", "18*2=36", "18/2=9"]);
    }

    #[test]
    fn equal_pair_division_is_valid() {
        let moves = enumerate_moves(&[5, 5]).unwrap();
        let results: Vec<u64> = moves.iter().map(|(o, _)| o.result).collect();
        assert_eq!(results, [10, 0, 25, 1]);
    }

    #[test]
    fn too_few_numbers_is_an_error() {
        assert!(matches!(enumerate_moves(&[7]), Err(CountdownError::TooFewNumbers)));
    }

    #[test]
    fn root_move_count_counts_valid_divisions_only() {
        // 24 nominal actions at a 4-number root; invalid divisions drop out.
        let moves = enumerate_moves(&[96, 11, 78, 22]).unwrap();
        assert!(moves.len() <= 24);
        let divisions = moves.iter().filter(|(o, _)| o.op == Operator::Div).count();
        assert_eq!(moves.len(), 18 + divisions);
    }

    #[test]
    fn verify_accepts_the_reference_solution() {
        let p = puzzle(16, &[96, 11, 78, 22]);
        let ops = [op("96-78=18"), op("22/11=2"), op("18-2=16")];
        assert!(verify_solution(&p, &ops).is_correct());
    }

    #[test]
    fn verify_rejects_bad_arithmetic() {
        let p = puzzle(16, &[96, 11, 78, 22]);
        let ops = [op("96-78=18"), op("22/11=2"), op("18-2=15")];
        assert!(!verify_solution(&p, &ops).is_correct());
    }

    #[test]
    fn verify_rejects_unused_candidates() {
        let p = puzzle(18, &[96, 11, 78, 22]);
        assert!(!verify_solution(&p, &[op("96-78=18")]).is_correct());
    }

    #[test]
    fn verify_rejects_foreign_operands() {
        let p = puzzle(16, &[96, 11, 78, 22]);
        let ops = [op("96-80=16"), op("22/11=2"), op("16-2=14")];
        assert!(!verify_solution(&p, &ops).is_correct());
    }

    #[test]
    fn verify_accepts_the_stacked_reference_solution() {
        let p = Puzzle::stacked("t", 96, vec![22, 77, 24, 48, 31, 12, 36, 35]).unwrap();
        let ops = [
            op("77-22=55"),
            op("48-24=24"),
            op("55-24=31"),
            op("35-31=4"),
            op("36-12=24"),
            op("4*24=96"),
        ];
        assert!(verify_solution(&p, &ops).is_correct());
    }

    #[test]
    fn verify_rejects_stacked_solution_missing_the_partial_goal() {
        let p = Puzzle::stacked("t", 96, vec![22, 77, 24, 48, 31, 12, 36, 35]).unwrap();
        // First half reaches 30, not the required 31.
        let ops = [
            op("77-22=55"),
            op("48-24=24"),
            op("55-24=31"),
            op("36-35=1"),
            op("31-12=19"),
            op("19-1=18"),
        ];
        assert!(!verify_solution(&p, &ops).is_correct());
    }

    #[test]
    fn tree_sizes() {
        assert_eq!(tree_path_count(2).unwrap(), 4);
        assert_eq!(tree_path_count(4).unwrap(), 1152);
        assert_eq!(tree_path_count(5).unwrap(), 46080);
        assert!(tree_path_count(1).is_err());
    }

    #[test]
    fn exhaustive_enumeration_matches_tree_arithmetic() {
        // Dead divisions own their nominal subtrees, so every 4-number game
        // enumerates exactly 1,152 leaf paths.
        for candidates in [[96, 11, 78, 22], [1, 1, 1, 1], [7, 7, 7, 7], [99, 2, 51, 3]] {
            let stats = enumerate_paths(&candidates, 16);
            assert_eq!(stats.paths, 1152, "candidates {candidates:?}");
        }
    }

    #[test]
    fn enumeration_agrees_with_solvability() {
        let config = GenConfig::default();
        for index in 0..200 {
            let p = generate_puzzle(7, index, &config).unwrap();
            let stats = enumerate_paths(&p.candidates, p.target);
            assert_eq!(stats.solving > 0, brute_force_solvable(&p), "{}", p.id);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let config = GenConfig::default();
        let a = generate_puzzle(42, 3, &config).unwrap();
        let b = generate_puzzle(42, 3, &config).unwrap();
        assert_eq!(a, b);
        let c = generate_puzzle(42, 4, &config).unwrap();
        assert_ne!(a.candidates, c.candidates);
    }

    #[test]
    fn generation_respects_ranges() {
        let config = GenConfig { candidate_range: 1..=99, target_range: 10..=100, solvable_only: false };
        for index in 0..500 {
            let p = generate_puzzle(11, index, &config).unwrap();
            assert!(p.candidates.iter().all(|c| (1..=99).contains(c)));
            assert!((10..=100).contains(&p.target));
        }
    }

    #[test]
    fn stacked_generation_shape() {
        let p = make_stacked(5, 0, &GenConfig::default()).unwrap();
        assert_eq!(p.candidates.len(), 8);
        assert_eq!(p.partial_goal_index, Some(4));
        assert_eq!(p.intermediate_target(), Some(p.candidates[4]));
    }

    #[test]
    fn stacked_paper_instance_is_well_formed() {
        let p = Puzzle::stacked("t", 96, vec![22, 77, 24, 48, 31, 12, 36, 35]).unwrap();
        assert_eq!(p.intermediate_target(), Some(31));
        assert_eq!(p.first_half(), &[22, 77, 24, 48]);
        assert_eq!(p.second_half().unwrap(), &[31, 12, 36, 35]);
    }

    #[test]
    fn stacked_tree_is_a_product_of_two_standard_trees() {
        let p = Puzzle::stacked("t", 96, vec![22, 77, 24, 48, 31, 12, 36, 35]).unwrap();
        let first = enumerate_paths(p.first_half(), p.intermediate_target().unwrap());
        let second = enumerate_paths(p.second_half().unwrap(), p.target);
        assert_eq!(first.paths, 1152);
        assert_eq!(second.paths, 1152);
        assert_eq!(first.paths * second.paths, 1152 * 1152);
    }

    #[test]
    fn puzzle_record_round_trip() {
        let p = make_stacked(9, 2, &GenConfig::default()).unwrap();
        let record = PuzzleRecord::from(&p);
        let json = serde_json::to_string(&record).unwrap();
        assert!(json.contains("\"variant\":\"stacked\""));
        let back: Puzzle = serde_json::from_str::<PuzzleRecord>(&json).unwrap().try_into().unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn operation_parse_round_trip() {
        for s in ["96-78=18", "22/11=2", "18+11=29", "4*24=96", "5-5=0"] {
            assert_eq!(op(s).to_string(), s);
        }
        assert!(Operation::parse("96-78").is_none());
        assert!(Operation::parse("a-b=c").is_none());
        assert!(Operation::parse("18-2=-16").is_none());
    }
}
