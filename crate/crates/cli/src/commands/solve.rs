use super::parse_strategies;
use anyhow::{bail, Result};
use clap::{Args, Subcommand};
use searchtrace::budget::SearchBudget;
use searchtrace::countdown::Puzzle;
use searchtrace::search::{search, SearchPolicy, SearchStatus};
use searchtrace::sudoku::{parse_board, solve_with_strategies, SolveStatus};
use searchtrace::trace::{serialize, Dialect, TraceMode};

#[derive(Args)]
pub struct SolveArgs {
    #[command(subcommand)]
    game: SolveGame,
}

#[derive(Subcommand)]
enum SolveGame {
    /// Search a CountDown puzzle.
    Countdown {
        /// Target number.
        #[arg(long)]
        target: u64,
        /// Comma-separated candidate numbers (4, or 8 with --stacked).
        #[arg(long)]
        nums: String,
        /// Eight candidates with the fifth as intermediate goal.
        #[arg(long)]
        stacked: bool,
        /// Search policy, e.g. dfs:sum:asc:prune@0x1 or bfs2:mult:desc:off.
        #[arg(long, default_value_t = SearchPolicy::generation_default())]
        policy: SearchPolicy,
        /// Serialize the trace in this mode (backtrack, direct, think).
        #[arg(long, default_value = "backtrack")]
        mode: String,
        #[arg(long)]
        budget_tokens: Option<u64>,
        #[arg(long)]
        budget_nodes: Option<u64>,
    },
    /// Solve a Sudoku board.
    Sudoku {
        /// 81-character board ('0' or '.' for empty cells).
        #[arg(long)]
        board: String,
        /// Strategy profile: full, naked-single, or a comma list.
        #[arg(long, default_value = "full")]
        strategies: String,
        /// Serialize the trace in this mode (backtrack or direct).
        #[arg(long, default_value = "backtrack")]
        mode: String,
        #[arg(long)]
        budget_tokens: Option<u64>,
        #[arg(long)]
        budget_nodes: Option<u64>,
    },
}

fn budget(tokens: Option<u64>, nodes: Option<u64>) -> SearchBudget {
    SearchBudget { max_tokens: tokens.or(Some(4096)), max_nodes: nodes }
}

pub fn run(args: SolveArgs) -> Result<bool> {
    match args.game {
        SolveGame::Countdown { target, nums, stacked, policy, mode, budget_tokens, budget_nodes } => {
            let numbers: Vec<u64> = nums
                .split(',')
                .map(|p| p.trim().parse().map_err(|e| anyhow::anyhow!("bad number {p:?}: {e}")))
                .collect::<Result<_>>()?;
            let puzzle = if stacked {
                Puzzle::stacked("cli", target, numbers)?
            } else {
                Puzzle::standard("cli", target, numbers)?
            };
            let budget = budget(budget_tokens, budget_nodes);
            eprintln!(
                "solve countdown: target={target} nums={:?} policy={policy} budget_tokens={:?} budget_nodes={:?}",
                puzzle.candidates, budget.max_tokens, budget.max_nodes
            );
            let outcome = search(&puzzle, &policy, &budget);
            let mode = super::parse_mode(&mode)?;
            let trace = match mode {
                TraceMode::Backtrack => outcome.trace.clone(),
                TraceMode::Direct => {
                    if outcome.status != SearchStatus::Solved {
                        bail!("cannot emit a direct trace: search did not solve the puzzle");
                    }
                    searchtrace::trace::prune_to_direct(&outcome.trace)?
                }
                TraceMode::Think => searchtrace::trace::shorten_think(&outcome.trace)?,
            };
            println!("{}", serialize(&trace, Dialect::new(searchtrace::trace::Game::Countdown, mode)?)?);
            eprintln!("status: {:?}; tokens: {}; nodes: {}", outcome.status, outcome.tokens, outcome.nodes);
            Ok(outcome.status == SearchStatus::Solved)
        }
        SolveGame::Sudoku { board, strategies, mode, budget_tokens, budget_nodes } => {
            let board = parse_board(&board)?;
            let strategies = parse_strategies(&strategies)?;
            let budget = budget(budget_tokens, budget_nodes);
            eprintln!(
                "solve sudoku: givens={} strategies={strategies:?} budget_tokens={:?} budget_nodes={:?}",
                81 - board.empty_count(),
                budget.max_tokens,
                budget.max_nodes
            );
            let outcome = solve_with_strategies(&board, &budget, &strategies);
            let mode = super::parse_mode(&mode)?;
            let trace = match mode {
                TraceMode::Backtrack => outcome.trace.clone(),
                TraceMode::Direct => {
                    if outcome.status != SolveStatus::Solved {
                        bail!("cannot emit a direct trace: board was not solved");
                    }
                    searchtrace::trace::prune_to_direct(&outcome.trace)?
                }
                TraceMode::Think => bail!("think mode applies to countdown only"),
            };
            println!("{}", serialize(&trace, Dialect::new(searchtrace::trace::Game::Sudoku, mode)?)?);
            eprintln!("status: {:?}; tokens: {}; guesses: {}", outcome.status, outcome.tokens, outcome.guesses);
            Ok(outcome.status == SolveStatus::Solved)
        }
    }
}
