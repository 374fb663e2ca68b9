//! Trace-to-trace transforms: direct-solution pruning, think-style
//! shortening, and mistake counting.

use super::parse::best_final_value;
use super::{CodecError, FillKind, Game, NodeId, SearchTrace, TraceEvent};
use crate::countdown::Operation;

/// Number of wrong terminal nodes explored before the first goal event
/// (all of them when the trace never reaches a goal).
///
/// CountDown terminals are the `unequal` lines. Sudoku terminals are the
/// contradictions discovered during propagation: `NO_CANDIDATE` markers that
/// are not immediately followed by a revert of the same cell (those name the
/// guess being unwound, not a new dead state).
pub fn count_mistakes(trace: &SearchTrace) -> u64 {
    let mut mistakes = 0;
    for (i, event) in trace.events.iter().enumerate() {
        match event {
            e if e.is_goal() => break,
            TraceEvent::DeadEnd { .. } => mistakes += 1,
            TraceEvent::NoCandidate { row, col } => {
                let unwinds_guess = matches!(
                    trace.events.get(i + 1),
                    Some(TraceEvent::Revert { row: r, col: c, .. } | TraceEvent::RevertExhausted { row: r, col: c, .. })
                        if r == row && c == col
                );
                if !unwinds_guess {
                    mistakes += 1;
                }
            }
            _ => {}
        }
    }
    mistakes
}

/// Prunes a solved backtracking trace down to the root-to-goal path.
///
/// CountDown nodes are renumbered sequentially from `#2` and the
/// `Moving to Node` scaffolding disappears; Sudoku guesses are downgraded to
/// plain fills and every reverted branch is dropped. The answer format and
/// the problem prompt are preserved.
pub fn prune_to_direct(trace: &SearchTrace) -> Result<SearchTrace, CodecError> {
    if !trace.has_goal() {
        return Err(CodecError::NotSolved);
    }
    match trace.game {
        Game::Countdown => prune_countdown(trace),
        Game::Sudoku => prune_sudoku(trace),
    }
}

fn prune_countdown(trace: &SearchTrace) -> Result<SearchTrace, CodecError> {
    let (target, root) = match trace.events.first() {
        Some(TraceEvent::State { target, numbers, .. }) => (*target, numbers.clone()),
        _ => return Err(CodecError::Inconsistent("trace does not start with a state line".into())),
    };
    let ops = trace
        .countdown_solution_ops()
        .ok_or_else(|| CodecError::Inconsistent("goal is not preceded by a solution path".into()))?;

    let stacked = root.len() == 8;
    let mut out = SearchTrace::new(Game::Countdown);
    let mut active: Vec<u64> = if stacked { root[..4].to_vec() } else { root.clone() };
    let mut inert: Vec<u64> = if stacked { root[4..].to_vec() } else { Vec::new() };
    let mut goal = if stacked { root[4] } else { target };
    let mut in_first_half = stacked;
    let mut done: Vec<Operation> = Vec::new();
    let mut seq = 2u64;

    let display = |active: &[u64], inert: &[u64]| {
        let mut d = active.to_vec();
        d.extend_from_slice(inert);
        d
    };

    out.events.push(TraceEvent::State { target, numbers: display(&active, &inert), operations: Vec::new() });
    for op in ops {
        let next = apply_op(&active, &op)
            .ok_or_else(|| CodecError::Inconsistent(format!("operation {op} does not apply to {active:?}")))?;
        let resulting = display(&next, &inert);
        out.events.push(TraceEvent::Explore { op, resulting: resulting.clone() });
        if next.len() == 1 {
            if next[0] != goal {
                return Err(CodecError::Inconsistent(format!("path reaches {} instead of {goal}", next[0])));
            }
            if in_first_half {
                out.events.push(TraceEvent::PartialGoal { value: goal });
                active = inert.clone();
                inert.clear();
                goal = target;
                in_first_half = false;
                done.clear();
                seq = 2;
                out.events.push(TraceEvent::State { target, numbers: active.clone(), operations: Vec::new() });
            } else {
                out.events.push(TraceEvent::Goal { value: goal });
            }
        } else {
            done.push(op);
            out.events.push(TraceEvent::Generated { node: NodeId::Seq(seq), target, numbers: resulting.clone(), op });
            out.events.push(TraceEvent::State { target, numbers: resulting, operations: done.clone() });
            seq += 1;
            active = next;
        }
    }
    Ok(out)
}

fn apply_op(active: &[u64], op: &Operation) -> Option<Vec<u64>> {
    let i = active.iter().position(|&n| n == op.left)?;
    let j = active.iter().enumerate().position(|(k, &n)| k != i && n == op.right)?;
    let mut next = Vec::with_capacity(active.len() - 1);
    for (k, &n) in active.iter().enumerate() {
        if k != i && k != j {
            next.push(n);
        }
    }
    next.push(op.result);
    Some(next)
}

fn prune_sudoku(trace: &SearchTrace) -> Result<SearchTrace, CodecError> {
    let mut out = SearchTrace::new(Game::Sudoku);
    // Problem prompt unchanged.
    for event in &trace.events {
        match event {
            TraceEvent::Start | TraceEvent::Solving | TraceEvent::Fill { kind: FillKind::Given, .. } => {
                out.events.push(event.clone());
            }
            TraceEvent::SolStart => break,
            _ => {}
        }
    }
    out.events.push(TraceEvent::SolStart);
    for (row, col, value) in trace.sudoku_surviving_fills() {
        out.events.push(TraceEvent::Fill { row, col, value, kind: FillKind::Deduced });
    }
    out.events.push(TraceEvent::SolEnd);
    Ok(out)
}

/// Shortens a CountDown backtracking trace by eliding the deepest search
/// level: at every two-numbers-remaining state the per-operation exploration
/// disappears, leaving either the goal line or a single dead-end marker
/// carrying the state's best reachable final value.
pub fn shorten_think(trace: &SearchTrace) -> Result<SearchTrace, CodecError> {
    if trace.game != Game::Countdown {
        return Err(CodecError::ThinkUnsupported);
    }
    let stacked = matches!(trace.events.first(), Some(TraceEvent::State { numbers, .. }) if numbers.len() == 8);

    let mut out = SearchTrace::new(Game::Countdown);
    let mut in_first_half = stacked;
    let mut i = 0;
    while i < trace.events.len() {
        let event = &trace.events[i];
        if let TraceEvent::PartialGoal { .. } = event {
            in_first_half = false;
        }
        let two_left = match event {
            TraceEvent::State { numbers, .. } => {
                let inert = if in_first_half { 4 } else { 0 };
                numbers.len() == inert + 2
            }
            _ => false,
        };
        if !two_left {
            out.events.push(event.clone());
            i += 1;
            continue;
        }

        // Collapse the whole block belonging to this state: alternating
        // explore/terminal pairs separated by re-entries of the same state.
        let state_numbers = match event {
            TraceEvent::State { numbers, .. } => numbers.clone(),
            _ => unreachable!(),
        };
        out.events.push(event.clone());
        let mut j = i + 1;
        let mut reached_goal: Option<TraceEvent> = None;
        while j < trace.events.len() {
            match &trace.events[j] {
                TraceEvent::Explore { .. } => j += 1,
                TraceEvent::DeadEnd { .. } => j += 1,
                TraceEvent::Goal { .. } | TraceEvent::PartialGoal { .. } => {
                    reached_goal = Some(trace.events[j].clone());
                    j += 1;
                    break;
                }
                // Re-entry of the same state: skip the move/state pair.
                TraceEvent::MoveTo { .. } => {
                    match trace.events.get(j + 1) {
                        Some(TraceEvent::State { numbers, .. }) if *numbers == state_numbers => j += 2,
                        _ => break,
                    }
                }
                _ => break,
            }
        }

        match reached_goal {
            Some(goal_event) => {
                if matches!(goal_event, TraceEvent::PartialGoal { .. }) {
                    in_first_half = false;
                }
                out.events.push(goal_event);
            }
            None => {
                let inert = if in_first_half { 4 } else { 0 };
                let active = &state_numbers[..state_numbers.len() - inert];
                let goal = block_goal(trace, in_first_half);
                let value = best_final_value(active, goal)
                    .ok_or_else(|| CodecError::Inconsistent("two-number state has no legal operation".into()))?;
                out.events.push(TraceEvent::DeadEnd { value, goal, terminal: !in_first_half });
            }
        }
        i = j;
    }
    Ok(out)
}

/// The goal a dead end at the current phase compares against.
fn block_goal(trace: &SearchTrace, in_first_half: bool) -> u64 {
    match trace.events.first() {
        Some(TraceEvent::State { target, numbers, .. }) => {
            if in_first_half && numbers.len() == 8 {
                numbers[4]
            } else {
                *target
            }
        }
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::SearchBudget;
    use crate::countdown::{verify_solution, Puzzle};
    use crate::search::{search, SearchPolicy, SearchStatus};

    fn stacked_solved() -> (Puzzle, SearchTrace) {
        let puzzle = Puzzle::stacked("s", 96, vec![22, 77, 24, 48, 31, 12, 36, 35]).unwrap();
        let outcome = search(&puzzle, &SearchPolicy::generation_default(), &SearchBudget::unlimited());
        assert_eq!(outcome.status, SearchStatus::Solved);
        (puzzle, outcome.trace)
    }

    #[test]
    fn think_shortening_is_idempotent() {
        let (_, trace) = stacked_solved();
        let once = shorten_think(&trace).unwrap();
        let twice = shorten_think(&once).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn pruning_a_think_trace_recovers_the_solution() {
        // Think traces leave the final operation of each half implicit;
        // pruning must still reconstruct a verifiable direct path.
        let (puzzle, trace) = stacked_solved();
        let think = shorten_think(&trace).unwrap();
        let direct = prune_to_direct(&think).unwrap();
        let ops = direct.countdown_solution_ops().unwrap();
        assert_eq!(ops.len(), 6);
        assert!(verify_solution(&puzzle, &ops).is_correct());
        assert_eq!(count_mistakes(&direct), 0);
    }

    #[test]
    fn pruning_requires_a_goal() {
        let unsolved = SearchTrace::new(Game::Countdown);
        assert!(matches!(prune_to_direct(&unsolved), Err(CodecError::NotSolved)));
    }

    #[test]
    fn think_rejects_sudoku_traces() {
        let trace = SearchTrace::new(Game::Sudoku);
        assert!(matches!(shorten_think(&trace), Err(CodecError::ThinkUnsupported)));
    }
}
