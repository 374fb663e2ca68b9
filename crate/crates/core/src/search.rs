//! Traversal policies for CountDown: DFS and beam-limited BFS over the game
//! tree, guided by the sum or multiply heuristic, with optional pruning.
//!
//! The sum heuristic of a state is the mean absolute distance between its
//! in-play numbers and the current goal; the multiply heuristic is the
//! smallest distance between any number and any factor of the goal. Children
//! are explored in heuristic order and a policy may prune children whose
//! score exceeds `multiplier x goal` from a configurable depth on.

use crate::budget::{BudgetExceeded, SearchBudget, TraceBuilder};
use crate::countdown::{enumerate_moves, Operation, Puzzle};
use crate::trace::{Dialect, NodeId, SearchTrace, TraceEvent};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolicyError {
    #[error("malformed policy string {0:?}")]
    Malformed(String),
    #[error("beam width must be at least 1")]
    ZeroBeam,
    #[error("prune multiplier must be positive")]
    ZeroMultiplier,
}

/// Child-ordering heuristics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Heuristic {
    Sum,
    Multiply,
}

/// An exact rational heuristic score (`num / den`), kept in integers so
/// ordering and pruning are reproducible bit-for-bit everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Score {
    pub num: u64,
    pub den: u64,
}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl Score {
    /// score > multiplier * goal, evaluated exactly.
    fn exceeds(&self, multiplier: Multiplier, goal: u64) -> bool {
        self.num as u128 * multiplier.den as u128
            > multiplier.num as u128 * goal as u128 * self.den as u128
    }
}

/// Scores a set of in-play numbers against the current goal.
pub fn heuristic_score(heuristic: Heuristic, numbers: &[u64], goal: u64) -> Score {
    match heuristic {
        Heuristic::Sum => {
            let num: u64 = numbers.iter().map(|&n| n.abs_diff(goal)).sum();
            Score { num, den: numbers.len().max(1) as u64 }
        }
        Heuristic::Multiply => {
            let mut best = u64::MAX;
            for f in factors(goal) {
                for &n in numbers {
                    best = best.min(n.abs_diff(f));
                }
            }
            if best == u64::MAX {
                best = 0;
            }
            Score { num: best, den: 1 }
        }
    }
}

/// All divisors of `n`, including 1 and `n` itself, in no particular order.
fn factors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out
}

/// Exact rational pruning multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Multiplier {
    pub num: u32,
    pub den: u32,
}

impl Multiplier {
    pub const ONE: Multiplier = Multiplier { num: 1, den: 1 };

    pub fn new(num: u32, den: u32) -> Result<Self, PolicyError> {
        if num == 0 || den == 0 {
            return Err(PolicyError::ZeroMultiplier);
        }
        let g = gcd(num, den);
        Ok(Multiplier { num: num / g, den: den / g })
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 { a } else { gcd(b, a % b) }
}

impl fmt::Display for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            return write!(f, "{}", self.num);
        }
        // Prefer a short exact decimal when one exists.
        let mut den = self.den;
        let mut twos = 0u32;
        while den.is_multiple_of(2) {
            den /= 2;
            twos += 1;
        }
        let mut fives = 0u32;
        while den.is_multiple_of(5) {
            den /= 5;
            fives += 1;
        }
        let shift = twos.max(fives);
        if den == 1 && shift <= 9 {
            let scaled = self.num as u64 * 10u64.pow(shift) / self.den as u64;
            let whole = scaled / 10u64.pow(shift);
            let frac = scaled % 10u64.pow(shift);
            return write!(f, "{whole}.{frac:0width$}", width = shift as usize);
        }
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Multiplier {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self, PolicyError> {
        let bad = || PolicyError::Malformed(s.to_string());
        if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num.parse().map_err(|_| bad())?;
            let den: u32 = den.parse().map_err(|_| bad())?;
            return Multiplier::new(num, den);
        }
        if let Some((whole, frac)) = s.split_once('.') {
            let whole: u64 = whole.parse().map_err(|_| bad())?;
            if frac.is_empty() || frac.len() > 9 || frac.chars().any(|c| !c.is_ascii_digit()) {
                return Err(bad());
            }
            let scale = 10u64.pow(frac.len() as u32);
            let frac: u64 = frac.parse().map_err(|_| bad())?;
            let num = whole.checked_mul(scale).and_then(|w| w.checked_add(frac)).ok_or_else(bad)?;
            let num: u32 = num.try_into().map_err(|_| bad())?;
            let den: u32 = scale.try_into().map_err(|_| bad())?;
            return Multiplier::new(num, den);
        }
        Multiplier::new(s.parse().map_err(|_| bad())?, 1)
    }
}

/// Whether and when children get pruned by their heuristic score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PruneRule {
    Off,
    /// Drop children with score > `multiplier x goal` once the child sits at
    /// depth >= `min_depth` (root children are depth 1).
    Threshold { multiplier: Multiplier, min_depth: u32 },
}

impl PruneRule {
    pub const DEFAULT_THRESHOLD: PruneRule = PruneRule::Threshold { multiplier: Multiplier::ONE, min_depth: 0 };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChildOrder {
    Ascending,
    Descending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Traversal {
    Dfs,
    Bfs { beam_width: u32 },
}

/// A complete search configuration, serializable as a compact string like
/// `dfs:sum:asc:prune@0x1` or `bfs2:mult:desc:off`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchPolicy {
    pub traversal: Traversal,
    pub heuristic: Heuristic,
    pub child_order: ChildOrder,
    pub prune: PruneRule,
}

impl SearchPolicy {
    /// The profile used to generate backtracking datasets: depth-first with
    /// the sum heuristic, ascending children, pruning at `1 x goal`.
    pub fn generation_default() -> SearchPolicy {
        SearchPolicy {
            traversal: Traversal::Dfs,
            heuristic: Heuristic::Sum,
            child_order: ChildOrder::Ascending,
            prune: PruneRule::DEFAULT_THRESHOLD,
        }
    }

    pub fn with_multiplier(mut self, multiplier: Multiplier) -> SearchPolicy {
        if let PruneRule::Threshold { min_depth, .. } = self.prune {
            self.prune = PruneRule::Threshold { multiplier, min_depth };
        }
        self
    }
}

impl fmt::Display for SearchPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.traversal {
            Traversal::Dfs => f.write_str("dfs")?,
            Traversal::Bfs { beam_width } => write!(f, "bfs{beam_width}")?,
        }
        match self.heuristic {
            Heuristic::Sum => f.write_str(":sum")?,
            Heuristic::Multiply => f.write_str(":mult")?,
        }
        match self.child_order {
            ChildOrder::Ascending => f.write_str(":asc")?,
            ChildOrder::Descending => f.write_str(":desc")?,
        }
        match self.prune {
            PruneRule::Off => f.write_str(":off"),
            PruneRule::Threshold { multiplier, min_depth } => write!(f, ":prune@{min_depth}x{multiplier}"),
        }
    }
}

impl FromStr for SearchPolicy {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self, PolicyError> {
        let bad = || PolicyError::Malformed(s.to_string());
        let mut parts = s.split(':');
        let trav = parts.next().ok_or_else(bad)?;
        let traversal = if trav == "dfs" {
            Traversal::Dfs
        } else if let Some(width) = trav.strip_prefix("bfs") {
            let beam_width: u32 = width.parse().map_err(|_| bad())?;
            if beam_width == 0 {
                return Err(PolicyError::ZeroBeam);
            }
            Traversal::Bfs { beam_width }
        } else {
            return Err(bad());
        };
        let heuristic = match parts.next().ok_or_else(bad)? {
            "sum" => Heuristic::Sum,
            "mult" | "multiply" => Heuristic::Multiply,
            _ => return Err(bad()),
        };
        let child_order = match parts.next().ok_or_else(bad)? {
            "asc" => ChildOrder::Ascending,
            "desc" => ChildOrder::Descending,
            _ => return Err(bad()),
        };
        let prune = match parts.next().ok_or_else(bad)? {
            "off" => PruneRule::Off,
            spec => {
                let rest = spec.strip_prefix("prune@").ok_or_else(bad)?;
                let (depth, mult) = rest.split_once('x').ok_or_else(bad)?;
                PruneRule::Threshold {
                    min_depth: depth.parse().map_err(|_| bad())?,
                    multiplier: mult.parse()?,
                }
            }
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(SearchPolicy { traversal, heuristic, child_order, prune })
    }
}

/// The fixed 32-policy mixture: eight traversal profiles crossed with both
/// heuristics and both child orders, in this documented order.
pub fn mixture_registry() -> Vec<SearchPolicy> {
    let traversals = [
        (Traversal::Dfs, PruneRule::Off),
        (Traversal::Bfs { beam_width: 1 }, PruneRule::Off),
        (Traversal::Bfs { beam_width: 2 }, PruneRule::Off),
        (Traversal::Bfs { beam_width: 3 }, PruneRule::Off),
        (Traversal::Bfs { beam_width: 4 }, PruneRule::Off),
        (Traversal::Bfs { beam_width: 5 }, PruneRule::Off),
        (Traversal::Dfs, PruneRule::DEFAULT_THRESHOLD),
        (Traversal::Bfs { beam_width: 2 }, PruneRule::DEFAULT_THRESHOLD),
    ];
    let mut registry = Vec::with_capacity(32);
    for (traversal, prune) in traversals {
        for heuristic in [Heuristic::Sum, Heuristic::Multiply] {
            for child_order in [ChildOrder::Ascending, ChildOrder::Descending] {
                registry.push(SearchPolicy { traversal, heuristic, child_order, prune });
            }
        }
    }
    registry
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Solved,
    Failed,
    BudgetExhausted,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub trace: SearchTrace,
    /// Solution operations in play order when solved (both halves
    /// concatenated for stacked games).
    pub solution: Option<Vec<Operation>>,
    /// Token cost of the trace as serialized in the backtracking dialect.
    pub tokens: u64,
    pub nodes: u64,
}

enum Walk {
    Goal,
    Dead,
    /// The whole search is over without a solution (a stacked second half
    /// failed; retrying other first-half routes cannot change it).
    FailAll,
    Abort,
}

struct Half<'p> {
    goal: u64,
    inert: &'p [u64],
    final_half: bool,
}

/// Runs `policy` over `puzzle`, emitting the backtracking trace as it goes.
/// Deterministic for fixed inputs.
pub fn search(puzzle: &Puzzle, policy: &SearchPolicy, budget: &SearchBudget) -> SearchOutcome {
    let mut searcher = Searcher {
        policy: *policy,
        builder: TraceBuilder::new(Dialect::COUNTDOWN_BACKTRACK, *budget),
        puzzle,
        first_half_solution: None,
        solution: None,
    };
    let walk = searcher.run();
    let status = match walk {
        Walk::Goal => SearchStatus::Solved,
        Walk::Dead | Walk::FailAll => SearchStatus::Failed,
        Walk::Abort => SearchStatus::BudgetExhausted,
    };
    let tokens = searcher.builder.tokens();
    let nodes = searcher.builder.nodes();
    SearchOutcome { status, trace: searcher.builder.finish(), solution: searcher.solution, tokens, nodes }
}

struct Searcher<'p> {
    policy: SearchPolicy,
    builder: TraceBuilder,
    puzzle: &'p Puzzle,
    first_half_solution: Option<Vec<Operation>>,
    solution: Option<Vec<Operation>>,
}

impl<'p> Searcher<'p> {
    fn run(&mut self) -> Walk {
        let puzzle = self.puzzle;
        let (active, half) = if puzzle.is_stacked() {
            (
                puzzle.first_half().to_vec(),
                Half { goal: puzzle.intermediate_target().unwrap(), inert: puzzle.second_half().unwrap(), final_half: false },
            )
        } else {
            (puzzle.candidates.clone(), Half { goal: puzzle.target, inert: &[], final_half: true })
        };
        if self
            .push(TraceEvent::State { target: puzzle.target, numbers: display(&active, half.inert), operations: Vec::new() })
            .is_err()
        {
            return Walk::Abort;
        }
        match self.policy.traversal {
            Traversal::Dfs => self.dfs(&half, &active, &[], &NodeId::root(), 0),
            Traversal::Bfs { beam_width } => self.bfs(&half, &active, beam_width),
        }
    }

    fn push(&mut self, event: TraceEvent) -> Result<(), BudgetExceeded> {
        self.builder.push(event)
    }

    /// Children of `active`, pruned and ordered per the policy. Ties are
    /// broken by the printed form: (left, right, operator symbol).
    fn ordered_children(&self, half: &Half<'_>, active: &[u64], depth: u32) -> Vec<(Operation, Vec<u64>)> {
        let moves = match enumerate_moves(active) {
            Ok(moves) => moves,
            Err(_) => return Vec::new(),
        };
        let mut scored: Vec<(Score, Operation, Vec<u64>)> = moves
            .into_iter()
            .map(|(op, next)| (heuristic_score(self.policy.heuristic, &next, half.goal), op, next))
            .collect();
        if let PruneRule::Threshold { multiplier, min_depth } = self.policy.prune {
            if depth + 1 >= min_depth {
                scored.retain(|(score, _, _)| !score.exceeds(multiplier, half.goal));
            }
        }
        let descending = self.policy.child_order == ChildOrder::Descending;
        scored.sort_by(|(sa, oa, _), (sb, ob, _)| {
            let by_score = if descending { sb.cmp(sa) } else { sa.cmp(sb) };
            by_score.then_with(|| (oa.left, oa.right, oa.op.symbol()).cmp(&(ob.left, ob.right, ob.op.symbol())))
        });
        scored.into_iter().map(|(_, op, next)| (op, next)).collect()
    }

    /// Handles a one-number child: goal, partial goal (with the hand-off to
    /// the second half), or dead end.
    fn leaf(&mut self, half: &Half<'_>, value: u64, ops: &[Operation], op: Operation) -> Option<Walk> {
        if value != half.goal {
            if self
                .push(TraceEvent::DeadEnd { value, goal: half.goal, terminal: half.final_half })
                .is_err()
            {
                return Some(Walk::Abort);
            }
            return None;
        }
        let mut path = ops.to_vec();
        path.push(op);
        if half.final_half {
            if self.push(TraceEvent::Goal { value }).is_err() {
                return Some(Walk::Abort);
            }
            let mut solution = self.first_half_solution.clone().unwrap_or_default();
            solution.extend(path);
            self.solution = Some(solution);
            return Some(Walk::Goal);
        }
        // First half done: restart on the second half from a fresh root.
        if self.push(TraceEvent::PartialGoal { value }).is_err() {
            return Some(Walk::Abort);
        }
        self.first_half_solution = Some(path);
        let active = self.puzzle.second_half().unwrap().to_vec();
        let half2 = Half { goal: self.puzzle.target, inert: &[], final_half: true };
        if self
            .push(TraceEvent::State { target: self.puzzle.target, numbers: active.clone(), operations: Vec::new() })
            .is_err()
        {
            return Some(Walk::Abort);
        }
        let walk = match self.policy.traversal {
            Traversal::Dfs => self.dfs(&half2, &active, &[], &NodeId::root(), 0),
            Traversal::Bfs { beam_width } => self.bfs(&half2, &active, beam_width),
        };
        Some(match walk {
            Walk::Dead => Walk::FailAll,
            other => other,
        })
    }

    fn dfs(&mut self, half: &Half<'_>, active: &[u64], ops: &[Operation], id: &NodeId, depth: u32) -> Walk {
        let children = self.ordered_children(half, active, depth);
        let count = children.len();
        let mut generated = 0u32;
        for (k, (op, next_active)) in children.into_iter().enumerate() {
            let last = k + 1 == count;
            let resulting = display(&next_active, half.inert);
            if self.push(TraceEvent::Explore { op, resulting: resulting.clone() }).is_err() {
                return Walk::Abort;
            }
            if next_active.len() == 1 {
                match self.leaf(half, next_active[0], ops, op) {
                    Some(walk) => return walk,
                    None => {
                        if !last && self.reenter(id, active, ops, half).is_err() {
                            return Walk::Abort;
                        }
                    }
                }
            } else {
                let child_id = id.child(generated);
                generated += 1;
                let mut child_ops = ops.to_vec();
                child_ops.push(op);
                if self
                    .push(TraceEvent::Generated {
                        node: child_id.clone(),
                        target: self.puzzle.target,
                        numbers: resulting.clone(),
                        op,
                    })
                    .is_err()
                {
                    return Walk::Abort;
                }
                if self.push(TraceEvent::MoveTo { node: child_id.clone() }).is_err() {
                    return Walk::Abort;
                }
                if self
                    .push(TraceEvent::State { target: self.puzzle.target, numbers: resulting, operations: child_ops.clone() })
                    .is_err()
                {
                    return Walk::Abort;
                }
                match self.dfs(half, &next_active, &child_ops, &child_id, depth + 1) {
                    Walk::Dead => {
                        if !last && self.reenter(id, active, ops, half).is_err() {
                            return Walk::Abort;
                        }
                    }
                    other => return other,
                }
            }
        }
        Walk::Dead
    }

    /// Re-announces the node about to issue the next exploration.
    fn reenter(&mut self, id: &NodeId, active: &[u64], ops: &[Operation], half: &Half<'_>) -> Result<(), BudgetExceeded> {
        self.push(TraceEvent::MoveTo { node: id.clone() })?;
        self.push(TraceEvent::State {
            target: self.puzzle.target,
            numbers: display(active, half.inert),
            operations: ops.to_vec(),
        })
    }

    fn bfs(&mut self, half: &Half<'_>, root_active: &[u64], beam_width: u32) -> Walk {
        struct BeamNode {
            active: Vec<u64>,
            ops: Vec<Operation>,
            id: NodeId,
            is_root: bool,
        }

        let mut frontier = vec![BeamNode {
            active: root_active.to_vec(),
            ops: Vec::new(),
            id: NodeId::root(),
            is_root: true,
        }];
        let mut depth = 0u32;
        loop {
            let mut candidates: Vec<(Score, BeamNode)> = Vec::new();
            for node in &frontier {
                if !node.is_root {
                    if self.push(TraceEvent::MoveTo { node: node.id.clone() }).is_err() {
                        return Walk::Abort;
                    }
                    if self
                        .push(TraceEvent::State {
                            target: self.puzzle.target,
                            numbers: display(&node.active, half.inert),
                            operations: node.ops.clone(),
                        })
                        .is_err()
                    {
                        return Walk::Abort;
                    }
                }
                let children = self.ordered_children(half, &node.active, depth);
                let mut generated = 0u32;
                for (op, next_active) in children {
                    let resulting = display(&next_active, half.inert);
                    if self.push(TraceEvent::Explore { op, resulting: resulting.clone() }).is_err() {
                        return Walk::Abort;
                    }
                    if next_active.len() == 1 {
                        if let Some(walk) = self.leaf(half, next_active[0], &node.ops, op) {
                            return walk;
                        }
                    } else {
                        let child_id = node.id.child(generated);
                        generated += 1;
                        if self
                            .push(TraceEvent::Generated {
                                node: child_id.clone(),
                                target: self.puzzle.target,
                                numbers: resulting,
                                op,
                            })
                            .is_err()
                        {
                            return Walk::Abort;
                        }
                        let score = heuristic_score(self.policy.heuristic, &next_active, half.goal);
                        let mut child_ops = node.ops.clone();
                        child_ops.push(op);
                        candidates.push((score, BeamNode { active: next_active, ops: child_ops, id: child_id, is_root: false }));
                    }
                }
            }
            if candidates.is_empty() {
                return Walk::Dead;
            }
            // Keep the best `beam_width` frontier nodes, stable in
            // generation order; descending policies prefer high scores.
            let descending = self.policy.child_order == ChildOrder::Descending;
            candidates.sort_by(|(sa, _), (sb, _)| if descending { sb.cmp(sa) } else { sa.cmp(sb) });
            candidates.truncate(beam_width as usize);
            frontier = candidates.into_iter().map(|(_, node)| node).collect();
            depth += 1;
        }
    }
}

fn display(active: &[u64], inert: &[u64]) -> Vec<u64> {
    let mut numbers = active.to_vec();
    numbers.extend_from_slice(inert);
    numbers
}

/// Fraction of seeded puzzles a policy solves under the budget.
pub fn measure_solve_rate(
    seed: u64,
    count: u64,
    config: &crate::countdown::GenConfig,
    policy: &SearchPolicy,
    budget: &SearchBudget,
) -> f64 {
    if count == 0 {
        return 0.0;
    }
    let mut solved = 0u64;
    for index in 0..count {
        let puzzle = crate::countdown::generate_puzzle(seed, index, config).expect("valid config");
        if search(&puzzle, policy, budget).status == SearchStatus::Solved {
            solved += 1;
        }
    }
    solved as f64 / count as f64
}

/// Picks the pruning multiplier whose solve rate over a seeded sample lands
/// closest to `target_rate`. Returns the chosen multiplier and its rate.
pub fn calibrate_multiplier(
    seed: u64,
    count: u64,
    config: &crate::countdown::GenConfig,
    target_rate: f64,
    grid: &[Multiplier],
    budget: &SearchBudget,
) -> (Multiplier, f64) {
    let mut best = (Multiplier::ONE, f64::INFINITY, 0.0);
    for &multiplier in grid {
        let policy = SearchPolicy::generation_default().with_multiplier(multiplier);
        let rate = measure_solve_rate(seed, count, config, &policy, budget);
        let miss = (rate - target_rate).abs();
        if miss < best.1 {
            best = (multiplier, miss, rate);
        }
    }
    (best.0, best.2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::countdown::GenConfig;

    fn reference_puzzle() -> Puzzle {
        Puzzle::standard("ref", 16, vec![96, 11, 78, 22]).unwrap()
    }

    #[test]
    fn policy_strings_round_trip() {
        for policy in mixture_registry() {
            let s = policy.to_string();
            assert_eq!(s.parse::<SearchPolicy>().unwrap(), policy, "{s}");
        }
        let p: SearchPolicy = "dfs:sum:asc:prune@2x1.5".parse().unwrap();
        assert_eq!(
            p.prune,
            PruneRule::Threshold { multiplier: Multiplier { num: 3, den: 2 }, min_depth: 2 }
        );
        assert_eq!(p.to_string(), "dfs:sum:asc:prune@2x1.5");
        assert!("dfs:sum:asc".parse::<SearchPolicy>().is_err());
        assert!("bfs0:sum:asc:off".parse::<SearchPolicy>().is_err());
    }

    #[test]
    fn registry_is_32_distinct_policies() {
        let registry = mixture_registry();
        assert_eq!(registry.len(), 32);
        let unique: std::collections::HashSet<String> = registry.iter().map(|p| p.to_string()).collect();
        assert_eq!(unique.len(), 32);
    }

    #[test]
    fn sum_heuristic_is_mean_distance() {
        // (|18-16| + |2-16|) / 2
        assert_eq!(heuristic_score(Heuristic::Sum, &[18, 2], 16), Score { num: 16, den: 2 });
        assert_eq!(heuristic_score(Heuristic::Sum, &[16], 16), Score { num: 0, den: 1 });
    }

    #[test]
    fn multiply_heuristic_is_min_factor_distance() {
        // Factors of 16: 1, 2, 4, 8, 16. Closest |number - factor| is |18-16| = 2.
        assert_eq!(heuristic_score(Heuristic::Multiply, &[18, 11], 16), Score { num: 2, den: 1 });
        assert_eq!(heuristic_score(Heuristic::Multiply, &[8, 30], 16), Score { num: 0, den: 1 });
    }

    #[test]
    fn first_root_child_has_minimal_sum_score() {
        let puzzle = reference_puzzle();
        let policy: SearchPolicy = "dfs:sum:asc:off".parse().unwrap();
        let outcome = search(&puzzle, &policy, &SearchBudget::unlimited());
        assert_eq!(outcome.status, SearchStatus::Solved);
        let first_explore = outcome
            .trace
            .events
            .iter()
            .find_map(|e| match e {
                TraceEvent::Explore { op, .. } => Some(*op),
                _ => None,
            })
            .unwrap();
        assert_eq!(first_explore.to_string(), "96-78=18");
    }

    #[test]
    fn reference_search_makes_four_mistakes() {
        let puzzle = reference_puzzle();
        let policy = SearchPolicy::generation_default();
        let outcome = search(&puzzle, &policy, &SearchBudget::default());
        assert_eq!(outcome.status, SearchStatus::Solved);
        let dead_ends = outcome
            .trace
            .events
            .iter()
            .filter(|e| matches!(e, TraceEvent::DeadEnd { .. }))
            .count();
        assert_eq!(dead_ends, 4);
        let ops = outcome.solution.unwrap();
        let rendered: Vec<String> = ops.iter().map(|o| o.to_string()).collect();
        assert_eq!(rendered, ["96-78=18", "22/11=2", "18-2=16"]);
    }

    #[test]
    fn searches_are_deterministic() {
        let puzzle = crate::countdown::generate_puzzle(3, 17, &GenConfig::default()).unwrap();
        let policy = SearchPolicy::generation_default();
        let a = search(&puzzle, &policy, &SearchBudget::default());
        let b = search(&puzzle, &policy, &SearchBudget::default());
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.tokens, b.tokens);
    }

    #[test]
    fn unpruned_dfs_matches_brute_force() {
        let config = GenConfig::default();
        let policy: SearchPolicy = "dfs:sum:asc:off".parse().unwrap();
        for index in 0..100 {
            let puzzle = crate::countdown::generate_puzzle(21, index, &config).unwrap();
            let outcome = search(&puzzle, &policy, &SearchBudget::unlimited());
            assert_eq!(
                outcome.status == SearchStatus::Solved,
                crate::countdown::brute_force_solvable(&puzzle),
                "{}",
                puzzle.id
            );
            if let Some(ops) = &outcome.solution {
                assert!(crate::countdown::verify_solution(&puzzle, ops).is_correct());
            }
        }
    }

    #[test]
    fn beam_width_caps_expansions_per_level() {
        let puzzle = Puzzle::standard("b", 2, vec![97, 89, 83, 79]).unwrap();
        for beam in [1u32, 2, 3] {
            let policy = SearchPolicy {
                traversal: Traversal::Bfs { beam_width: beam },
                heuristic: Heuristic::Sum,
                child_order: ChildOrder::Ascending,
                prune: PruneRule::Off,
            };
            let outcome = search(&puzzle, &policy, &SearchBudget::unlimited());
            // Expanded nodes per level = MoveTo events at that depth; level
            // sizes are bounded by the beam width.
            let mut per_level = std::collections::HashMap::new();
            for event in &outcome.trace.events {
                if let TraceEvent::MoveTo { node } = event {
                    let NodeId::Path(p) = node else { panic!() };
                    *per_level.entry(p.len()).or_insert(0u32) += 1;
                }
            }
            for (_, count) in per_level {
                assert!(count <= beam, "beam {beam} exceeded: {count}");
            }
        }
    }

    #[test]
    fn bfs_solves_a_stacked_puzzle_across_both_halves() {
        let puzzle = crate::countdown::make_stacked(12, 5, &GenConfig::default()).unwrap();
        let policy: SearchPolicy = "bfs5:sum:asc:off".parse().unwrap();
        let outcome = search(&puzzle, &policy, &SearchBudget::unlimited());
        assert_eq!(outcome.status, SearchStatus::Solved);
        let ops = outcome.solution.unwrap();
        assert_eq!(ops.len(), 6);
        assert!(crate::countdown::verify_solution(&puzzle, &ops).is_correct());
        let text = crate::trace::serialize(&outcome.trace, crate::trace::Dialect::COUNTDOWN_BACKTRACK).unwrap();
        let (_, report) = crate::trace::parse(&text, crate::trace::Dialect::COUNTDOWN_BACKTRACK);
        assert!(report.is_clean(), "{:?}", report.violations);
    }

    #[test]
    fn bfs_abandons_the_search_when_the_second_half_is_dead() {
        // This instance reaches the intermediate goal under beam search,
        // but its second half cannot reach the target from there; any other
        // first-half route would face the same second half, so the search
        // concludes instead of revisiting the first half.
        let puzzle = Puzzle::stacked("s", 96, vec![22, 77, 24, 48, 31, 12, 36, 35]).unwrap();
        let policy: SearchPolicy = "bfs5:mult:asc:off".parse().unwrap();
        let outcome = search(&puzzle, &policy, &SearchBudget::unlimited());
        assert_eq!(outcome.status, SearchStatus::Failed);
        let partials = outcome
            .trace
            .events
            .iter()
            .filter(|e| matches!(e, TraceEvent::PartialGoal { .. }))
            .count();
        assert_eq!(partials, 1);
        let text = crate::trace::serialize(&outcome.trace, crate::trace::Dialect::COUNTDOWN_BACKTRACK).unwrap();
        let (_, report) = crate::trace::parse(&text, crate::trace::Dialect::COUNTDOWN_BACKTRACK);
        assert!(report.is_clean(), "{:?}", report.violations);
    }

    #[test]
    fn narrow_beam_misses_solvable_puzzles() {
        // A beam of one keeps only the greedy child per level, so some
        // solvable puzzle must slip through with a short failed trace.
        let config = GenConfig::default();
        let policy: SearchPolicy = "bfs1:sum:asc:off".parse().unwrap();
        let found = (0..500u64).find_map(|index| {
            let puzzle = crate::countdown::generate_puzzle(31, index, &config).unwrap();
            let outcome = search(&puzzle, &policy, &SearchBudget::unlimited());
            (outcome.status == SearchStatus::Failed).then_some((puzzle, outcome))
        });
        let (puzzle, outcome) = found.expect("greedy search should fail somewhere in 500 solvable puzzles");
        assert!(crate::countdown::brute_force_solvable(&puzzle));
        // Greedy traces are short: one node expanded per level.
        let explores = outcome
            .trace
            .events
            .iter()
            .filter(|e| matches!(e, TraceEvent::Explore { .. }))
            .count();
        assert!(explores <= 3 * 24, "greedy trace explored {explores} children");
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let puzzle = Puzzle::standard("hard", 1, vec![97, 89, 83, 79]).unwrap();
        let policy: SearchPolicy = "dfs:sum:asc:off".parse().unwrap();
        let outcome = search(&puzzle, &policy, &SearchBudget::tokens(64));
        assert_eq!(outcome.status, SearchStatus::BudgetExhausted);
        assert!(outcome.tokens <= 64);
    }

    #[test]
    fn stacked_search_solves_and_verifies() {
        let puzzle = Puzzle::stacked("s", 96, vec![22, 77, 24, 48, 31, 12, 36, 35]).unwrap();
        let policy = SearchPolicy::generation_default();
        let outcome = search(&puzzle, &policy, &SearchBudget::unlimited());
        assert_eq!(outcome.status, SearchStatus::Solved);
        let ops = outcome.solution.unwrap();
        assert_eq!(ops.len(), 6);
        assert!(crate::countdown::verify_solution(&puzzle, &ops).is_correct());
        assert!(outcome.trace.events.iter().any(|e| matches!(e, TraceEvent::PartialGoal { .. })));
        // Stacked grammar is fully covered by the vocabulary.
        let text = crate::trace::serialize(&outcome.trace, crate::trace::Dialect::COUNTDOWN_BACKTRACK).unwrap();
        let vocab = crate::tokenizer::vocab(crate::trace::Game::Countdown);
        assert!(vocab.encode(&text, false).is_ok());
    }
}
