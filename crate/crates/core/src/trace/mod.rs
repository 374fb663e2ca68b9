//! Trace event model and the four text dialects.
//!
//! A [`SearchTrace`] is an ordered event log of one search. The same event
//! stream serializes into different dialects: CountDown traces are
//! newline-separated lines; Sudoku traces are tab-separated elements with a
//! newline after the problem prompt. Direct dialects carry solution paths
//! only and renumber nodes sequentially from `#2`.

mod parse;
mod serialize;
mod transform;

pub use parse::{parse, ValidationReport, Violation, ViolationKind};
pub use serialize::{serialize, serialize_parts};
pub use transform::{count_mistakes, prune_to_direct, shorten_think};

pub(crate) use serialize::render_fragment;

use crate::countdown::Operation;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("dialect for {dialect:?} cannot serialize a {trace:?} trace")]
    GameMismatch { dialect: Game, trace: Game },
    #[error("think mode is defined for countdown traces only")]
    ThinkUnsupported,
    #[error("trace does not end in a goal; nothing to prune")]
    NotSolved,
    #[error("inconsistent trace: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Game {
    Countdown,
    Sudoku,
}

impl fmt::Display for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Game::Countdown => f.write_str("countdown"),
            Game::Sudoku => f.write_str("sudoku"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceMode {
    Backtrack,
    Direct,
    Think,
}

impl fmt::Display for TraceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceMode::Backtrack => f.write_str("backtrack"),
            TraceMode::Direct => f.write_str("direct"),
            TraceMode::Think => f.write_str("think"),
        }
    }
}

/// A (game, mode) pair naming one of the serialization dialects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dialect {
    pub game: Game,
    pub mode: TraceMode,
}

impl Dialect {
    pub fn new(game: Game, mode: TraceMode) -> Result<Self, CodecError> {
        if mode == TraceMode::Think && game != Game::Countdown {
            return Err(CodecError::ThinkUnsupported);
        }
        Ok(Dialect { game, mode })
    }

    pub const COUNTDOWN_BACKTRACK: Dialect = Dialect { game: Game::Countdown, mode: TraceMode::Backtrack };
    pub const COUNTDOWN_DIRECT: Dialect = Dialect { game: Game::Countdown, mode: TraceMode::Direct };
    pub const COUNTDOWN_THINK: Dialect = Dialect { game: Game::Countdown, mode: TraceMode::Think };
    pub const SUDOKU_BACKTRACK: Dialect = Dialect { game: Game::Sudoku, mode: TraceMode::Backtrack };
    pub const SUDOKU_DIRECT: Dialect = Dialect { game: Game::Sudoku, mode: TraceMode::Direct };
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.game, self.mode)
    }
}

/// Node identifier: backtracking traces use the path of child indices from
/// the root (`#0,0,2`); direct traces number path nodes sequentially (`#2`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeId {
    Path(Vec<u32>),
    Seq(u64),
}

impl NodeId {
    pub fn root() -> Self {
        NodeId::Path(vec![0])
    }

    pub fn child(&self, index: u32) -> Self {
        match self {
            NodeId::Path(p) => {
                let mut p = p.clone();
                p.push(index);
                NodeId::Path(p)
            }
            NodeId::Seq(k) => NodeId::Seq(k + u64::from(index) + 1),
        }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::Path(p) => {
                let mut first = true;
                for part in p {
                    if !first {
                        f.write_str(",")?;
                    }
                    write!(f, "{part}")?;
                    first = false;
                }
                Ok(())
            }
            NodeId::Seq(k) => write!(f, "{k}"),
        }
    }
}

/// How a Sudoku cell got its value. All three render as plain `(r, c) = v`
/// assignments; the distinction drives transforms and scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FillKind {
    Given,
    Deduced,
    Guessed,
}

/// One entry of a search log. CountDown and Sudoku use disjoint subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    // CountDown events.
    /// `Current State: {target}:[{numbers}], Operations: [...]`
    State { target: u64, numbers: Vec<u64>, operations: Vec<Operation> },
    /// `Exploring Operation: {op}, Resulting Numbers: [...]`
    Explore { op: Operation, resulting: Vec<u64> },
    /// `Generated Node #{node}: ...`
    Generated { node: NodeId, target: u64, numbers: Vec<u64>, op: Operation },
    /// `Moving to Node #{node}`
    MoveTo { node: NodeId },
    /// `{value},{goal} unequal: No Solution` when `terminal`, otherwise the
    /// bare `{value},{goal} unequal` used for stacked intermediate goals.
    DeadEnd { value: u64, goal: u64, terminal: bool },
    /// `{value},{value} equal` — a stacked game's first half succeeded.
    PartialGoal { value: u64 },
    /// `{value},{value} equal: Goal Reached`
    Goal { value: u64 },

    // Sudoku events.
    Start,
    Solving,
    SolStart,
    SolEnd,
    /// `({row}, {col}) = {value}`
    Fill { row: u8, col: u8, value: u8, kind: FillKind },
    /// `GUESS: ({row}, {col}) [{candidates}] = {value}`
    Guess { row: u8, col: u8, candidates: Vec<u8>, value: u8 },
    /// `NO_CANDIDATE: ({row}, {col})`
    NoCandidate { row: u8, col: u8 },
    /// `REVERT: ({row}, {col}) [{candidates}] = NONE`
    Revert { row: u8, col: u8, candidates: Vec<u8> },
    /// `REVERT: ({row}, {col}) [{candidates}] = NO_CANDIDATE`
    RevertExhausted { row: u8, col: u8, candidates: Vec<u8> },
}

impl TraceEvent {
    pub fn game(&self) -> Game {
        match self {
            TraceEvent::State { .. }
            | TraceEvent::Explore { .. }
            | TraceEvent::Generated { .. }
            | TraceEvent::MoveTo { .. }
            | TraceEvent::DeadEnd { .. }
            | TraceEvent::PartialGoal { .. }
            | TraceEvent::Goal { .. } => Game::Countdown,
            _ => Game::Sudoku,
        }
    }

    /// Goal events end a successful search: the CountDown goal line or the
    /// Sudoku `SOL_END` marker.
    pub fn is_goal(&self) -> bool {
        matches!(self, TraceEvent::Goal { .. } | TraceEvent::SolEnd)
    }
}

/// Ordered event log of one search, game-agnostic at the container level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchTrace {
    pub game: Game,
    pub events: Vec<TraceEvent>,
}

impl SearchTrace {
    pub fn new(game: Game) -> Self {
        SearchTrace { game, events: Vec::new() }
    }

    pub fn has_goal(&self) -> bool {
        self.events.iter().any(TraceEvent::is_goal)
    }

    /// The solution operations of a solved CountDown trace, in play order
    /// (both halves concatenated for stacked games).
    ///
    /// Think-shortened traces omit the final operation of each half; it is
    /// reconstructed from the last state's numbers and the goal value.
    pub fn countdown_solution_ops(&self) -> Option<Vec<Operation>> {
        if self.game != Game::Countdown {
            return None;
        }
        let stacked = matches!(self.events.first(), Some(TraceEvent::State { numbers, .. }) if numbers.len() == 8);
        let mut in_first_half = stacked;
        let mut ops = Vec::new();
        let mut last_state: Option<(&[Operation], &[u64])> = None;
        // Only an exploration issued after the current state line names the
        // final operation; think traces jump straight to the terminal.
        let mut last_explore: Option<&Operation> = None;

        let finish_half = |state: Option<(&[Operation], &[u64])>,
                               explore: Option<&Operation>,
                               goal: u64,
                               first_half: bool,
                               ops: &mut Vec<Operation>|
         -> Option<()> {
            let (state_ops, numbers) = state?;
            ops.extend_from_slice(state_ops);
            if let Some(op) = explore {
                ops.push(*op);
                return Some(());
            }
            let inert = if first_half { 4 } else { 0 };
            let active = numbers.get(..numbers.len().checked_sub(inert)?)?;
            let (op, _) = crate::countdown::enumerate_moves(active)
                .ok()?
                .into_iter()
                .find(|(op, rest)| rest.len() == 1 && op.result == goal)?;
            ops.push(op);
            Some(())
        };

        for event in &self.events {
            match event {
                TraceEvent::State { operations, numbers, .. } => {
                    last_state = Some((operations, numbers));
                    last_explore = None;
                }
                TraceEvent::Explore { op, .. } => last_explore = Some(op),
                TraceEvent::PartialGoal { value } => {
                    finish_half(last_state, last_explore, *value, in_first_half, &mut ops)?;
                    in_first_half = false;
                    last_state = None;
                    last_explore = None;
                }
                TraceEvent::Goal { value } => {
                    finish_half(last_state, last_explore, *value, in_first_half, &mut ops)?;
                    return Some(ops);
                }
                _ => {}
            }
        }
        None
    }

    /// The fills that survive all reverts of a Sudoku trace, in fill order.
    /// Given fills from the problem prompt are excluded.
    pub fn sudoku_surviving_fills(&self) -> Vec<(u8, u8, u8)> {
        let mut fills: Vec<(u8, u8, u8)> = Vec::new();
        // One checkpoint per live guess node: fill count before its echo.
        let mut checkpoints: Vec<(u8, u8, usize)> = Vec::new();
        let mut retrying: Option<(u8, u8)> = None;
        for event in &self.events {
            let retry = retrying.take();
            match event {
                TraceEvent::Fill { kind: FillKind::Given, .. } => {}
                TraceEvent::Fill { row, col, value, .. } => fills.push((*row, *col, *value)),
                TraceEvent::Guess { row, col, .. } => {
                    // A guess right after its own revert reuses the frame;
                    // anything else opens a new one.
                    if retry != Some((*row, *col)) {
                        checkpoints.push((*row, *col, fills.len()));
                    }
                }
                TraceEvent::Revert { row, col, .. } => {
                    if let Some(&(_, _, mark)) = checkpoints.last() {
                        fills.truncate(mark);
                    }
                    retrying = Some((*row, *col));
                }
                TraceEvent::RevertExhausted { .. } => {
                    if let Some((_, _, mark)) = checkpoints.pop() {
                        fills.truncate(mark);
                    }
                }
                _ => {}
            }
        }
        fills
    }
}
