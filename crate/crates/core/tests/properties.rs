//! Property tests for the cross-module invariants.

use proptest::prelude::*;
use searchtrace::budget::SearchBudget;
use searchtrace::countdown::{enumerate_moves, verify_solution, Operator, Puzzle};
use searchtrace::search::{mixture_registry, search, Multiplier, SearchPolicy, SearchStatus};
use searchtrace::tokenizer::vocab;
use searchtrace::trace::{parse, prune_to_direct, serialize, Dialect, Game, TraceEvent};

proptest! {
    /// Moves per state never exceed the nominal action count, and every
    /// subtraction or division child is an exact non-negative integer.
    #[test]
    fn move_enumeration_respects_action_arithmetic(
        numbers in prop::collection::vec(0u64..=99, 2..=5),
    ) {
        let moves = enumerate_moves(&numbers).unwrap();
        let nominal = numbers.len() * (numbers.len() - 1) / 2 * 4;
        prop_assert!(moves.len() <= nominal);
        let divisions_dropped = nominal - moves.len();
        let valid_divisions = moves.iter().filter(|(op, _)| op.op == Operator::Div).count();
        prop_assert_eq!(divisions_dropped + valid_divisions, nominal / 4);
        for (op, rest) in &moves {
            prop_assert!(op.is_exact());
            if op.op == Operator::Sub || op.op == Operator::Div {
                prop_assert!(op.left >= op.right);
            }
            prop_assert_eq!(rest.len(), numbers.len() - 1);
            prop_assert_eq!(*rest.last().unwrap(), op.result);
        }
    }

    /// A solved search replays through the rules and its pruned form
    /// re-verifies too.
    #[test]
    fn solved_searches_verify(
        candidates in prop::collection::vec(1u64..=99, 4),
        target in 10u64..=100,
        policy_index in 0usize..32,
    ) {
        let puzzle = Puzzle::standard("prop", target, candidates).unwrap();
        let policy = mixture_registry()[policy_index];
        let outcome = search(&puzzle, &policy, &SearchBudget::default());
        if outcome.status == SearchStatus::Solved {
            let ops = outcome.solution.clone().unwrap();
            prop_assert!(verify_solution(&puzzle, &ops).is_correct());
            let direct = prune_to_direct(&outcome.trace).unwrap();
            let extracted = direct.countdown_solution_ops().unwrap();
            prop_assert!(verify_solution(&puzzle, &extracted).is_correct());
            let has_exploration_residue = direct
                .events
                .iter()
                .any(|e| matches!(e, TraceEvent::DeadEnd { .. } | TraceEvent::MoveTo { .. }));
            prop_assert!(!has_exploration_residue);
        }
    }

    /// Every registry policy yields a trace that parses cleanly and
    /// reserializes to the same bytes.
    #[test]
    fn registry_traces_round_trip(
        candidates in prop::collection::vec(1u64..=99, 4),
        target in 10u64..=100,
        policy_index in 0usize..32,
    ) {
        let puzzle = Puzzle::standard("prop", target, candidates).unwrap();
        let policy = mixture_registry()[policy_index];
        let outcome = search(&puzzle, &policy, &SearchBudget::default());
        let text = serialize(&outcome.trace, Dialect::COUNTDOWN_BACKTRACK).unwrap();
        let (trace, report) = parse(&text, Dialect::COUNTDOWN_BACKTRACK);
        prop_assert!(report.is_clean(), "{:?}", report.violations);
        prop_assert_eq!(serialize(&trace, Dialect::COUNTDOWN_BACKTRACK).unwrap(), text);
    }

    /// Tokenizer encoding round-trips on covered text and counts add at
    /// line boundaries.
    #[test]
    fn tokenizer_round_trip_and_additivity(
        candidates in prop::collection::vec(1u64..=99, 4),
        target in 10u64..=100,
    ) {
        let puzzle = Puzzle::standard("prop", target, candidates).unwrap();
        let outcome = search(&puzzle, &SearchPolicy::generation_default(), &SearchBudget::default());
        let text = serialize(&outcome.trace, Dialect::COUNTDOWN_BACKTRACK).unwrap();
        let v = vocab(Game::Countdown);
        let ids = v.encode(&text, false).unwrap();
        prop_assert_eq!(v.decode(&ids).unwrap(), text.clone());
        if let Some(split) = text.find('\n') {
            let (head, tail) = text.split_at(split + 1);
            prop_assert_eq!(v.count_tokens(head) + v.count_tokens(tail), ids.len() as u64);
        }
    }

    /// Multiplier strings round-trip through display and parse.
    #[test]
    fn multiplier_round_trip(num in 1u32..10_000, den in 1u32..10_000) {
        let m = Multiplier::new(num, den).unwrap();
        let parsed: Multiplier = m.to_string().parse().unwrap();
        prop_assert_eq!(parsed, m);
    }

    /// A trace's serialized token count equals the search's own accounting.
    #[test]
    fn budget_accounting_matches_serialization(
        candidates in prop::collection::vec(1u64..=99, 4),
        target in 10u64..=100,
    ) {
        let puzzle = Puzzle::standard("prop", target, candidates).unwrap();
        let outcome = search(&puzzle, &SearchPolicy::generation_default(), &SearchBudget::default());
        let text = serialize(&outcome.trace, Dialect::COUNTDOWN_BACKTRACK).unwrap();
        prop_assert_eq!(vocab(Game::Countdown).count_tokens(&text), outcome.tokens);
        prop_assert!(outcome.tokens <= 4096);
    }
}
