//! Tolerant, line-by-line parsing of trace text back into events.
//!
//! Model generations may truncate at the context limit or contain garbage,
//! so parsing never fails: every deviation is recorded in the
//! [`ValidationReport`] and the parser keeps going. Well-formed engine
//! output parses with an empty violation list and re-serializes to the
//! identical bytes.

use super::{Dialect, FillKind, Game, NodeId, SearchTrace, TraceEvent, TraceMode};
use crate::countdown::{enumerate_moves, Operation};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// The line or element does not match the dialect grammar.
    Grammar,
    /// An operation's claimed result contradicts its operands.
    Arithmetic,
    /// An event is inconsistent with the replayed game state.
    Transition,
    /// The text ends in the middle of an element.
    Truncated,
}

#[derive(Debug, Clone)]
pub struct Violation {
    /// 1-based line (CountDown) or element (Sudoku) index.
    pub line: usize,
    pub kind: ViolationKind,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub goal_present: bool,
    pub truncated: bool,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, line: usize, kind: ViolationKind, message: impl Into<String>) {
        self.violations.push(Violation { line, kind, message: message.into() });
    }
}

/// Parses trace text. Returns the recovered events plus a report of every
/// grammar, arithmetic, and state-transition problem found along the way.
pub fn parse(text: &str, dialect: Dialect) -> (SearchTrace, ValidationReport) {
    match dialect.game {
        Game::Countdown => parse_countdown(text, dialect),
        Game::Sudoku => parse_sudoku(text),
    }
}

// ---------------------------------------------------------------------------
// CountDown
// ---------------------------------------------------------------------------

fn parse_countdown(text: &str, dialect: Dialect) -> (SearchTrace, ValidationReport) {
    let mut trace = SearchTrace::new(Game::Countdown);
    let mut report = ValidationReport::default();
    let lines: Vec<&str> = text.split('\n').collect();
    let last_content = lines.iter().rposition(|l| !l.is_empty());

    for (idx, line) in lines.iter().enumerate() {
        if line.is_empty() {
            continue;
        }
        let line_no = idx + 1;
        match parse_countdown_line(line, dialect) {
            Some(event) => trace.events.push(event),
            None => {
                report.push(line_no, ViolationKind::Grammar, format!("unrecognized line: {line:?}"));
                if Some(idx) == last_content && !text.ends_with('\n') {
                    report.truncated = true;
                    report.push(line_no, ViolationKind::Truncated, "text ends mid-line");
                }
            }
        }
    }

    report.goal_present = trace.has_goal();
    validate_countdown(&trace, dialect, &mut report);
    (trace, report)
}

fn parse_countdown_line(line: &str, dialect: Dialect) -> Option<TraceEvent> {
    if let Some(rest) = line.strip_prefix("Current State: ") {
        // {target}:[{numbers}], Operations: [{ops}]
        let (target, rest) = rest.split_once(":[")?;
        let target: u64 = target.parse().ok()?;
        let (numbers, ops) = rest.split_once("], Operations: [")?;
        let numbers = parse_num_list(numbers)?;
        let operations = parse_op_list(ops.strip_suffix(']')?)?;
        return Some(TraceEvent::State { target, numbers, operations });
    }
    if let Some(rest) = line.strip_prefix("Exploring Operation: ") {
        let (op, nums) = rest.split_once(", Resulting Numbers: [")?;
        let op = Operation::parse(op)?;
        let resulting = parse_num_list(nums.strip_suffix(']')?)?;
        return Some(TraceEvent::Explore { op, resulting });
    }
    if let Some(rest) = line.strip_prefix("Generated Node #") {
        let (node, rest) = rest.split_once(": ")?;
        let node = parse_node_id(node, dialect)?;
        if dialect.mode == TraceMode::Direct {
            // [{numbers}] from Operation: {op}
            let rest = rest.strip_prefix('[')?;
            let (numbers, op) = rest.split_once("] from Operation: ")?;
            let numbers = parse_num_list(numbers)?;
            let op = Operation::parse(op)?;
            return Some(TraceEvent::Generated { node, target: 0, numbers, op });
        }
        // {target}:[{numbers}] Operation: {op}
        let (target, rest) = rest.split_once(":[")?;
        let target: u64 = target.parse().ok()?;
        let (numbers, op) = rest.split_once("] Operation: ")?;
        let numbers = parse_num_list(numbers)?;
        let op = Operation::parse(op)?;
        return Some(TraceEvent::Generated { node, target, numbers, op });
    }
    if let Some(rest) = line.strip_prefix("Moving to Node #") {
        return Some(TraceEvent::MoveTo { node: parse_node_id(rest, dialect)? });
    }
    // Terminal comparisons: "{v},{g} unequal[: No Solution]" / "{v},{v} equal[: Goal Reached]".
    let (values, verdict) = line.split_once(' ')?;
    let (value, goal) = values.split_once(',')?;
    let value: u64 = value.parse().ok()?;
    let goal: u64 = goal.parse().ok()?;
    match verdict {
        "unequal: No Solution" => Some(TraceEvent::DeadEnd { value, goal, terminal: true }),
        "unequal" => Some(TraceEvent::DeadEnd { value, goal, terminal: false }),
        // A self-contradictory equality claim is not a goal line at all.
        "equal: Goal Reached" if value == goal => Some(TraceEvent::Goal { value }),
        "equal" if value == goal => Some(TraceEvent::PartialGoal { value }),
        _ => None,
    }
}

fn parse_node_id(s: &str, dialect: Dialect) -> Option<NodeId> {
    if s.is_empty() {
        return None;
    }
    if dialect.mode == TraceMode::Direct {
        return s.parse().ok().map(NodeId::Seq);
    }
    let parts: Option<Vec<u32>> = s.split(',').map(|p| p.parse().ok()).collect();
    parts.map(NodeId::Path)
}

fn parse_num_list(s: &str) -> Option<Vec<u64>> {
    if s.is_empty() {
        return Some(Vec::new());
    }
    s.split(", ").map(|p| p.parse().ok()).collect()
}

fn parse_op_list(s: &str) -> Option<Vec<Operation>> {
    if s.is_empty() {
        return Some(Vec::new());
    }
    s.split(", ")
        .map(|p| Operation::parse(p.strip_prefix('\'')?.strip_suffix('\'')?))
        .collect()
}

/// Replays CountDown events against the rules, flagging inconsistencies.
fn validate_countdown(trace: &SearchTrace, dialect: Dialect, report: &mut ValidationReport) {
    struct NodeInfo {
        numbers: Vec<u64>,
        operations: Vec<Operation>,
    }

    let mut nodes: HashMap<String, NodeInfo> = HashMap::new();
    let mut current: Option<NodeInfo> = None;
    let mut last_explore: Option<(Operation, Vec<u64>)> = None;
    let mut root_target: Option<u64> = None;
    // Stacked games carry four inert second-half numbers at the tail of the
    // display list until the partial goal is reached.
    let mut stacked = false;
    let mut first_half = false;
    let mut intermediate: Option<u64> = None;
    let mut second_half_numbers: Vec<u64> = Vec::new();

    for (i, event) in trace.events.iter().enumerate() {
        let line = i + 1;
        match event {
            TraceEvent::State { target, numbers, operations } => {
                if let Some(root) = root_target {
                    if *target != root {
                        report.push(line, ViolationKind::Transition, format!("state target {target} differs from root target {root}"));
                    }
                    if let Some(cur) = &current {
                        if cur.numbers != *numbers || cur.operations != *operations {
                            report.push(line, ViolationKind::Transition, "state does not match the current node".to_string());
                        }
                    }
                    current = Some(NodeInfo { numbers: numbers.clone(), operations: operations.clone() });
                } else {
                    root_target = Some(*target);
                    stacked = numbers.len() == 8;
                    first_half = stacked;
                    if stacked {
                        intermediate = Some(numbers[4]);
                        second_half_numbers = numbers[4..].to_vec();
                    }
                    nodes.insert("0".to_string(), NodeInfo { numbers: numbers.clone(), operations: operations.clone() });
                    current = Some(NodeInfo { numbers: numbers.clone(), operations: operations.clone() });
                }
            }
            TraceEvent::Explore { op, resulting } => {
                if !op.is_exact() {
                    report.push(line, ViolationKind::Arithmetic, format!("bad arithmetic: {op}"));
                }
                if let Some(cur) = &current {
                    let inert = if stacked && first_half { 4 } else { 0 };
                    if cur.numbers.len() < inert + 2 {
                        report.push(line, ViolationKind::Transition, "state has too few numbers to explore".to_string());
                    } else {
                        let active = &cur.numbers[..cur.numbers.len() - inert];
                        let inert_tail = &cur.numbers[cur.numbers.len() - inert..];
                        // Duplicate values make the operand positions
                        // ambiguous; any consistent binding is accepted.
                        let candidates = apply_bindings(active, op);
                        if candidates.is_empty() {
                            report.push(line, ViolationKind::Transition, format!("operands of {op} are not available"));
                        } else if !candidates.iter().any(|next| {
                            next.len() + inert_tail.len() == resulting.len()
                                && resulting[..next.len()] == next[..]
                                && resulting[next.len()..] == *inert_tail
                        }) {
                            report.push(line, ViolationKind::Transition, format!("resulting numbers {resulting:?} do not follow from {op}"));
                        }
                    }
                }
                last_explore = Some((*op, resulting.clone()));
            }
            TraceEvent::Generated { node, target, numbers, op } => {
                match &last_explore {
                    Some((explore_op, resulting)) => {
                        if explore_op != op || resulting != numbers {
                            report.push(line, ViolationKind::Transition, "generated node does not match the preceding exploration".to_string());
                        }
                    }
                    None => report.push(line, ViolationKind::Transition, "generated node without a preceding exploration".to_string()),
                }
                if dialect.mode != TraceMode::Direct {
                    if let Some(root) = root_target {
                        if *target != root {
                            report.push(line, ViolationKind::Transition, format!("node target {target} differs from root target {root}"));
                        }
                    }
                }
                let operations = match &current {
                    Some(cur) => {
                        let mut ops = cur.operations.clone();
                        ops.push(*op);
                        ops
                    }
                    None => vec![*op],
                };
                let info = NodeInfo { numbers: numbers.clone(), operations };
                if dialect.mode == TraceMode::Direct {
                    // Direct traces advance without explicit moves.
                    current = Some(NodeInfo { numbers: info.numbers.clone(), operations: info.operations.clone() });
                }
                nodes.insert(node.to_string(), info);
                last_explore = None;
            }
            TraceEvent::MoveTo { node } => match nodes.get(&node.to_string()) {
                Some(info) => {
                    current = Some(NodeInfo { numbers: info.numbers.clone(), operations: info.operations.clone() });
                }
                None => {
                    report.push(line, ViolationKind::Transition, format!("move to unknown node #{node}"));
                    current = None;
                }
            },
            TraceEvent::DeadEnd { value, goal, terminal } => {
                let expected_goal = if first_half { intermediate } else { root_target };
                if let Some(g) = expected_goal {
                    if *goal != g {
                        report.push(line, ViolationKind::Transition, format!("dead end compares against {goal}, expected {g}"));
                    }
                }
                if *terminal == first_half {
                    report.push(line, ViolationKind::Grammar, "dead-end suffix does not match the game phase".to_string());
                }
                if *value == *goal {
                    report.push(line, ViolationKind::Transition, "dead end claims unequal for equal values".to_string());
                }
                check_terminal(*value, dialect, &current, &mut last_explore, *goal, stacked && first_half, line, report);
            }
            TraceEvent::PartialGoal { value } => {
                if !stacked || !first_half {
                    report.push(line, ViolationKind::Transition, "partial goal outside a stacked first half".to_string());
                }
                if let Some(inter) = intermediate {
                    if *value != inter {
                        report.push(line, ViolationKind::Transition, format!("partial goal {value} differs from intermediate target {inter}"));
                    }
                }
                check_terminal(*value, dialect, &current, &mut last_explore, *value, stacked && first_half, line, report);
                // The second half restarts from a fresh root.
                first_half = false;
                nodes.clear();
                let info = NodeInfo { numbers: second_half_numbers.clone(), operations: Vec::new() };
                nodes.insert("0".to_string(), NodeInfo { numbers: info.numbers.clone(), operations: Vec::new() });
                current = Some(info);
                last_explore = None;
            }
            TraceEvent::Goal { value } => {
                if first_half {
                    report.push(line, ViolationKind::Transition, "final goal inside a stacked first half".to_string());
                }
                if let Some(t) = root_target {
                    if *value != t {
                        report.push(line, ViolationKind::Transition, format!("goal value {value} differs from target {t}"));
                    }
                }
                check_terminal(*value, dialect, &current, &mut last_explore, *value, false, line, report);
            }
            _ => {}
        }
    }

    /// A terminal comparison must carry the value produced by the final
    /// operation. Think traces elide that operation at two-number states, so
    /// the check recomputes what the state could reach instead.
    #[allow(clippy::too_many_arguments)]
    fn check_terminal(
        value: u64,
        dialect: Dialect,
        current: &Option<NodeInfo>,
        last_explore: &mut Option<(Operation, Vec<u64>)>,
        goal: u64,
        in_first_half: bool,
        line: usize,
        report: &mut ValidationReport,
    ) {
        match last_explore.take() {
            Some((_, resulting)) => {
                if resulting.first() != Some(&value) {
                    report.push(line, ViolationKind::Transition, format!("terminal value {value} does not match the explored result"));
                }
            }
            None if dialect.mode == TraceMode::Think => {
                if let Some(cur) = current {
                    let inert = if in_first_half { 4 } else { 0 };
                    let active = &cur.numbers[..cur.numbers.len().saturating_sub(inert)];
                    let reachable = if value == goal {
                        enumerate_moves(active)
                            .map(|moves| moves.iter().any(|(op, _)| op.result == goal))
                            .unwrap_or(false)
                    } else {
                        best_final_value(active, goal) == Some(value)
                    };
                    if !reachable {
                        report.push(line, ViolationKind::Transition, format!("terminal value {value} is not the state's outcome"));
                    }
                }
            }
            None => {
                report.push(line, ViolationKind::Transition, "terminal comparison without a preceding exploration".to_string());
            }
        }
    }
}

/// Every child list reachable by binding the operation's operands to
/// positions in `active` (duplicated values create several).
fn apply_bindings(active: &[u64], op: &Operation) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for i in 0..active.len() {
        if active[i] != op.left {
            continue;
        }
        for j in 0..active.len() {
            if j == i || active[j] != op.right {
                continue;
            }
            let mut next = Vec::with_capacity(active.len() - 1);
            for (k, &n) in active.iter().enumerate() {
                if k != i && k != j {
                    next.push(n);
                }
            }
            next.push(op.result);
            if !out.contains(&next) {
                out.push(next);
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Sudoku
// ---------------------------------------------------------------------------

fn parse_sudoku(text: &str) -> (SearchTrace, ValidationReport) {
    let mut trace = SearchTrace::new(Game::Sudoku);
    let mut report = ValidationReport::default();

    // Elements are tab-separated within lines; the prompt and the solution
    // occupy separate lines. Element indices are global and 1-based.
    let elements: Vec<&str> = text
        .split('\n')
        .flat_map(|line| line.split('\t'))
        .collect();
    let last_content = elements.iter().rposition(|e| !e.is_empty());

    let mut in_solution = false;
    let mut last_guess: Option<(u8, u8, u8)> = None;
    for (idx, element) in elements.iter().enumerate() {
        if element.is_empty() {
            continue;
        }
        let line_no = idx + 1;
        let parsed = parse_sudoku_element(element, in_solution, &mut last_guess);
        match parsed {
            Some(event) => {
                if matches!(event, TraceEvent::SolStart) {
                    in_solution = true;
                }
                trace.events.push(event);
            }
            None => {
                report.push(line_no, ViolationKind::Grammar, format!("unrecognized element: {element:?}"));
                if Some(idx) == last_content && !text.ends_with('\n') && !text.ends_with('\t') {
                    report.truncated = true;
                    report.push(line_no, ViolationKind::Truncated, "text ends mid-element");
                }
            }
        }
    }

    report.goal_present = trace.has_goal();
    validate_sudoku(&trace, &mut report);
    (trace, report)
}

fn parse_sudoku_element(
    element: &str,
    in_solution: bool,
    last_guess: &mut Option<(u8, u8, u8)>,
) -> Option<TraceEvent> {
    match element {
        "START" => return Some(TraceEvent::Start),
        "solving" => return Some(TraceEvent::Solving),
        "SOL_START" => return Some(TraceEvent::SolStart),
        // "SOL END" appears as a typesetting variant; accept it.
        "SOL_END" | "SOL END" => return Some(TraceEvent::SolEnd),
        _ => {}
    }
    if let Some(rest) = element.strip_prefix("GUESS: ") {
        let (row, col, rest) = parse_cell(rest)?;
        let rest = rest.strip_prefix(" [")?;
        let (candidates, value) = rest.split_once("] = ")?;
        let candidates = parse_cand_list(candidates)?;
        let value: u8 = value.parse().ok()?;
        *last_guess = Some((row, col, value));
        return Some(TraceEvent::Guess { row, col, candidates, value });
    }
    // The uppercase forms are canonical; the spaced and lowercase variants
    // appear once each in the reference figures and are accepted on input.
    if let Some(rest) = element.strip_prefix("NO_CANDIDATE: ").or_else(|| element.strip_prefix("NO CANDIDATE: ")) {
        let (row, col, rest) = parse_cell(rest)?;
        if !rest.is_empty() {
            return None;
        }
        return Some(TraceEvent::NoCandidate { row, col });
    }
    if let Some(rest) = element.strip_prefix("REVERT: ").or_else(|| element.strip_prefix("revert: ")) {
        let (row, col, rest) = parse_cell(rest)?;
        let rest = rest.strip_prefix(" [")?;
        let (candidates, tail) = rest.split_once("] = ")?;
        let candidates = parse_cand_list(candidates)?;
        return match tail {
            "NONE" => Some(TraceEvent::Revert { row, col, candidates }),
            "NO_CANDIDATE" => Some(TraceEvent::RevertExhausted { row, col, candidates }),
            _ => None,
        };
    }
    // Plain fill: "(r, c) = v".
    let (row, col, rest) = parse_cell(element)?;
    let value: u8 = rest.strip_prefix(" = ")?.parse().ok()?;
    let kind = if !in_solution {
        FillKind::Given
    } else if last_guess.take() == Some((row, col, value)) {
        FillKind::Guessed
    } else {
        FillKind::Deduced
    };
    Some(TraceEvent::Fill { row, col, value, kind })
}

/// Parses a leading "(r, c)" and returns the remainder of the element.
fn parse_cell(s: &str) -> Option<(u8, u8, &str)> {
    let rest = s.strip_prefix('(')?;
    let (row, rest) = rest.split_once(", ")?;
    let (col, rest) = rest.split_once(')')?;
    Some((row.parse().ok()?, col.parse().ok()?, rest))
}

fn parse_cand_list(s: &str) -> Option<Vec<u8>> {
    if s.is_empty() {
        return Some(Vec::new());
    }
    s.split(", ").map(|p| p.parse().ok()).collect()
}

/// Replays Sudoku events against board rules.
fn validate_sudoku(trace: &SearchTrace, report: &mut ValidationReport) {
    let mut cells = [0u8; 81];
    let mut frames: Vec<(u8, u8, [u8; 81])> = Vec::new();

    for (i, event) in trace.events.iter().enumerate() {
        let line = i + 1;
        match event {
            TraceEvent::Fill { row, col, value, .. } => {
                place(&mut cells, *row, *col, *value, line, report);
            }
            TraceEvent::Guess { row, col, candidates, value } => {
                if !candidates.contains(value) {
                    report.push(line, ViolationKind::Transition, format!("guessed value {value} not among candidates {candidates:?}"));
                }
                if candidates.iter().any(|c| !(1..=9).contains(c)) {
                    report.push(line, ViolationKind::Grammar, "candidate out of range".to_string());
                }
                // A fresh guess snapshots the board; a retry after a revert
                // reuses the existing frame.
                if frames.last().map(|f| (f.0, f.1)) != Some((*row, *col)) {
                    frames.push((*row, *col, cells));
                }
            }
            TraceEvent::Revert { row, col, .. } => match frames.last() {
                Some((r, c, snapshot)) if (*r, *c) == (*row, *col) => cells = *snapshot,
                _ => report.push(line, ViolationKind::Transition, format!("revert of ({row}, {col}) does not match the innermost guess")),
            },
            TraceEvent::RevertExhausted { row, col, .. } => match frames.pop() {
                Some((r, c, snapshot)) if (r, c) == (*row, *col) => cells = snapshot,
                _ => report.push(line, ViolationKind::Transition, format!("revert of ({row}, {col}) does not match the innermost guess")),
            },
            _ => {}
        }
    }
}

fn place(cells: &mut [u8; 81], row: u8, col: u8, value: u8, line: usize, report: &mut ValidationReport) {
    if row > 8 || col > 8 || !(1..=9).contains(&value) {
        report.push(line, ViolationKind::Grammar, format!("assignment ({row}, {col}) = {value} out of range"));
        return;
    }
    let idx = usize::from(row) * 9 + usize::from(col);
    if cells[idx] != 0 {
        report.push(line, ViolationKind::Transition, format!("cell ({row}, {col}) is already filled"));
        return;
    }
    for (peer, &held) in cells.iter().enumerate() {
        let (pr, pc) = (peer / 9, peer % 9);
        let same_unit = pr == usize::from(row)
            || pc == usize::from(col)
            || (pr / 3 == usize::from(row) / 3 && pc / 3 == usize::from(col) / 3);
        if same_unit && held == value {
            report.push(line, ViolationKind::Transition, format!("({row}, {col}) = {value} conflicts with ({}, {})", pr, pc));
            return;
        }
    }
    cells[idx] = value;
}

// Re-exported through the module root; kept here because the countdown
// validator and this logic share the enumeration helper.
pub(super) fn best_final_value(active: &[u64], goal: u64) -> Option<u64> {
    let moves = enumerate_moves(active).ok()?;
    moves
        .iter()
        .map(|(op, _)| op.result)
        .min_by_key(|&r| r.abs_diff(goal))
}
