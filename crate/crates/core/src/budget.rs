//! Search budgets and the incremental trace builder that enforces them.

use crate::tokenizer::{vocab, Vocabulary};
use crate::trace::{render_fragment, Dialect, SearchTrace, TraceEvent};

/// Caps on one search run. Token counts are of the serialized trace under
/// the game's vocabulary; nodes are state entries (CountDown) or guesses
/// (Sudoku). The default mirrors a 4096-token context window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_tokens: Option<u64>,
    pub max_nodes: Option<u64>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_tokens: Some(4096), max_nodes: None }
    }
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget { max_tokens: None, max_nodes: None }
    }

    pub fn tokens(max: u64) -> Self {
        SearchBudget { max_tokens: Some(max), max_nodes: None }
    }
}

/// Signal that the budget refused an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetExceeded;

/// Accumulates trace events while accounting their serialized token cost.
///
/// An event that would push the trace past the budget is rejected and the
/// builder locks, so the recorded trace is always a well-formed prefix that
/// fits the budget exactly as serialized.
pub struct TraceBuilder {
    trace: SearchTrace,
    dialect: Dialect,
    vocab: &'static Vocabulary,
    budget: SearchBudget,
    tokens: u64,
    nodes: u64,
    exhausted: bool,
}

impl TraceBuilder {
    pub fn new(dialect: Dialect, budget: SearchBudget) -> Self {
        TraceBuilder {
            trace: SearchTrace::new(dialect.game),
            dialect,
            vocab: vocab(dialect.game),
            budget,
            tokens: 0,
            nodes: 0,
            exhausted: false,
        }
    }

    pub fn push(&mut self, event: TraceEvent) -> Result<(), BudgetExceeded> {
        if self.exhausted {
            return Err(BudgetExceeded);
        }
        let (_, text) = render_fragment(&event, self.trace.events.last(), self.dialect)
            .expect("builder events match the builder game");
        let mut cost = self.vocab.count_tokens(&text);
        if !self.trace.events.is_empty() {
            cost += 1; // separator token
        }
        if let Some(max) = self.budget.max_tokens {
            if self.tokens + cost > max {
                self.exhausted = true;
                return Err(BudgetExceeded);
            }
        }
        let is_node = matches!(event, TraceEvent::State { .. } | TraceEvent::Guess { .. });
        if is_node {
            if let Some(max) = self.budget.max_nodes {
                if self.nodes + 1 > max {
                    self.exhausted = true;
                    return Err(BudgetExceeded);
                }
            }
        }
        self.tokens += cost;
        self.nodes += u64::from(is_node);
        self.trace.events.push(event);
        Ok(())
    }

    pub fn tokens(&self) -> u64 {
        self.tokens
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    pub fn exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn finish(self) -> SearchTrace {
        self.trace
    }
}
