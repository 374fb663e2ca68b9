//! Text emission for the trace dialects. The byte layout is normative:
//! golden-file tests pin the exact output, and the tokenizers cover
//! exactly this grammar.

use super::{CodecError, Dialect, Game, SearchTrace, TraceEvent, TraceMode};
use crate::countdown::Operation;
use std::fmt::Write;

/// Renders the full trace text. CountDown events become newline-separated
/// lines; Sudoku events are tab-separated with a single newline after the
/// `solving` marker that ends the problem prompt.
pub fn serialize(trace: &SearchTrace, dialect: Dialect) -> Result<String, CodecError> {
    let rendered = render_events(&trace.events, trace.game, dialect)?;
    Ok(rendered)
}

/// Renders the prompt (the problem statement) and the completion (the search
/// itself) separately; `prompt + "\n" + completion` equals [`serialize`].
pub fn serialize_parts(trace: &SearchTrace, dialect: Dialect) -> Result<(String, String), CodecError> {
    let split = match trace.game {
        // The CountDown prompt is the root state line.
        Game::Countdown => 1.min(trace.events.len()),
        // The Sudoku prompt runs through the `solving` marker.
        Game::Sudoku => trace
            .events
            .iter()
            .position(|e| matches!(e, TraceEvent::Solving))
            .map(|i| i + 1)
            .unwrap_or(0),
    };
    let prompt = render_events(&trace.events[..split], trace.game, dialect)?;
    let completion = render_events(&trace.events[split..], trace.game, dialect)?;
    Ok((prompt, completion))
}

/// The text of one event plus the separator that precedes it when it is not
/// the first element. Used for incremental token accounting during search.
pub(crate) fn render_fragment(
    event: &TraceEvent,
    prev: Option<&TraceEvent>,
    dialect: Dialect,
) -> Result<(char, String), CodecError> {
    if event.game() != dialect.game {
        return Err(CodecError::GameMismatch { dialect: dialect.game, trace: event.game() });
    }
    let sep = match (dialect.game, prev) {
        (Game::Countdown, _) => '\n',
        (Game::Sudoku, Some(TraceEvent::Solving)) => '\n',
        (Game::Sudoku, _) => '\t',
    };
    Ok((sep, render_event(event, dialect)))
}

fn render_events(events: &[TraceEvent], game: Game, dialect: Dialect) -> Result<String, CodecError> {
    if dialect.game != game {
        return Err(CodecError::GameMismatch { dialect: dialect.game, trace: game });
    }
    if dialect.mode == TraceMode::Think && game != Game::Countdown {
        return Err(CodecError::ThinkUnsupported);
    }
    let mut out = String::new();
    let mut prev: Option<&TraceEvent> = None;
    for event in events {
        let (sep, text) = render_fragment(event, prev, dialect)?;
        if prev.is_some() {
            out.push(sep);
        }
        out.push_str(&text);
        prev = Some(event);
    }
    Ok(out)
}

fn render_event(event: &TraceEvent, dialect: Dialect) -> String {
    match event {
        TraceEvent::State { target, numbers, operations } => {
            let mut line = format!("Current State: {target}:[");
            push_num_list(&mut line, numbers);
            line.push_str("], Operations: [");
            push_op_list(&mut line, operations);
            line.push(']');
            line
        }
        TraceEvent::Explore { op, resulting } => {
            let mut line = format!("Exploring Operation: {op}, Resulting Numbers: [");
            push_num_list(&mut line, resulting);
            line.push(']');
            line
        }
        TraceEvent::Generated { node, target, numbers, op } => {
            let mut line = format!("Generated Node #{node}: ");
            if dialect.mode == TraceMode::Direct {
                line.push('[');
                push_num_list(&mut line, numbers);
                line.push_str("] from Operation: ");
            } else {
                write!(line, "{target}:[").unwrap();
                push_num_list(&mut line, numbers);
                line.push_str("] Operation: ");
            }
            write!(line, "{op}").unwrap();
            line
        }
        TraceEvent::MoveTo { node } => format!("Moving to Node #{node}"),
        TraceEvent::DeadEnd { value, goal, terminal } => {
            if *terminal {
                format!("{value},{goal} unequal: No Solution")
            } else {
                format!("{value},{goal} unequal")
            }
        }
        TraceEvent::PartialGoal { value } => format!("{value},{value} equal"),
        TraceEvent::Goal { value } => format!("{value},{value} equal: Goal Reached"),

        TraceEvent::Start => "START".to_string(),
        TraceEvent::Solving => "solving".to_string(),
        TraceEvent::SolStart => "SOL_START".to_string(),
        TraceEvent::SolEnd => "SOL_END".to_string(),
        TraceEvent::Fill { row, col, value, .. } => format!("({row}, {col}) = {value}"),
        TraceEvent::Guess { row, col, candidates, value } => {
            let mut line = format!("GUESS: ({row}, {col}) [");
            push_cand_list(&mut line, candidates);
            write!(line, "] = {value}").unwrap();
            line
        }
        TraceEvent::NoCandidate { row, col } => format!("NO_CANDIDATE: ({row}, {col})"),
        TraceEvent::Revert { row, col, candidates } => {
            let mut line = format!("REVERT: ({row}, {col}) [");
            push_cand_list(&mut line, candidates);
            line.push_str("] = NONE");
            line
        }
        TraceEvent::RevertExhausted { row, col, candidates } => {
            let mut line = format!("REVERT: ({row}, {col}) [");
            push_cand_list(&mut line, candidates);
            line.push_str("] = NO_CANDIDATE");
            line
        }
    }
}

fn push_num_list(out: &mut String, numbers: &[u64]) {
    for (i, n) in numbers.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write!(out, "{n}").unwrap();
    }
}

fn push_cand_list(out: &mut String, candidates: &[u8]) {
    for (i, c) in candidates.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write!(out, "{c}").unwrap();
    }
}

fn push_op_list(out: &mut String, ops: &[Operation]) {
    for (i, op) in ops.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write!(out, "'{op}'").unwrap();
    }
}
