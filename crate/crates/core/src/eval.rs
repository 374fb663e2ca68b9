//! Scoring of model generations and the aggregate metric suite: binary
//! verdicts re-derived through the game engines, best-of-n, pass@k,
//! majority voting, solved-set Jaccard similarity, and accuracy-vs-FLOPs
//! curves.
//!
//! The scorer never trusts a trace's own goal claim: CountDown solutions
//! are replayed through rule verification against the referenced puzzle,
//! and Sudoku boards are rebuilt from the problem's givens plus the fills
//! that survive the trace's reverts.

use crate::countdown::{verify_solution, Puzzle};
use crate::flops::{total_flops, ModelConfig};
use crate::sudoku::Board;
use crate::tokenizer::vocab;
use crate::trace::{count_mistakes, parse, Dialect};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("unknown problem id {0:?}")]
    UnknownProblem(String),
    #[error("need {need} samples, have {have}")]
    InsufficientSamples { need: usize, have: usize },
    #[error("pass@k domain violation: n={n}, c={c}, k={k}")]
    PassAtKDomain { n: u64, c: u64, k: u64 },
    #[error("majority vote needs at least one sample")]
    NoSamples,
    #[error("records do not cover the requested curve: missing {0:?}")]
    MissingCoverage(Vec<(String, u64)>),
}

/// A problem the harness can score against.
#[derive(Debug, Clone)]
pub enum Problem {
    Countdown(Puzzle),
    Sudoku(Board),
}

/// Problems keyed by id.
#[derive(Debug, Clone, Default)]
pub struct ProblemSet {
    problems: BTreeMap<String, Problem>,
}

impl ProblemSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert_countdown(&mut self, puzzle: Puzzle) {
        self.problems.insert(puzzle.id.clone(), Problem::Countdown(puzzle));
    }

    pub fn insert_sudoku(&mut self, id: impl Into<String>, board: Board) {
        self.problems.insert(id.into(), Problem::Sudoku(board));
    }

    pub fn get(&self, id: &str) -> Option<&Problem> {
        self.problems.get(id)
    }

    pub fn len(&self) -> usize {
        self.problems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.problems.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.problems.keys().map(String::as_str)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Correct,
    Incorrect,
}

/// One scored generation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub problem_id: String,
    pub sample_id: u64,
    pub verdict: Verdict,
    pub mistakes: u64,
    pub tokens: u64,
    pub flops: u128,
}

impl EvalRecord {
    pub fn is_correct(&self) -> bool {
        self.verdict == Verdict::Correct
    }
}

/// Wire form of a raw model generation awaiting scoring.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub problem_id: String,
    pub sample_id: u64,
    pub text: String,
}

/// Scores generations against a problem set under one dialect.
pub struct Scorer<'a> {
    problems: &'a ProblemSet,
    dialect: Dialect,
    /// When set, per-record FLOPs are the cost of one sequence of the
    /// record's token count under this architecture.
    pub model: Option<ModelConfig>,
}

impl<'a> Scorer<'a> {
    pub fn new(problems: &'a ProblemSet, dialect: Dialect) -> Self {
        Scorer { problems, dialect, model: None }
    }

    pub fn with_model(mut self, model: ModelConfig) -> Self {
        self.model = Some(model);
        self
    }

    /// Parses, re-verifies, and measures one generation.
    pub fn score(&self, problem_id: &str, sample_id: u64, text: &str) -> Result<EvalRecord, EvalError> {
        let problem = self
            .problems
            .get(problem_id)
            .ok_or_else(|| EvalError::UnknownProblem(problem_id.to_string()))?;
        let (trace, _report) = parse(text, self.dialect);
        let correct = match problem {
            Problem::Countdown(puzzle) => trace
                .countdown_solution_ops()
                .map(|ops| verify_solution(puzzle, &ops).is_correct())
                .unwrap_or(false),
            Problem::Sudoku(board) => {
                // Rebuild from the authoritative givens; the verdict is the
                // board state alone, not the trace's completion marker.
                let mut replay = *board;
                let mut legal = true;
                for (row, col, value) in trace.sudoku_surviving_fills() {
                    if row > 8 || col > 8 || !(1..=9).contains(&value) {
                        legal = false;
                        break;
                    }
                    let idx = usize::from(row) * 9 + usize::from(col);
                    if !replay.admits(idx, value) {
                        legal = false;
                        break;
                    }
                    replay.place(idx, value);
                }
                legal && replay.is_solved()
            }
        };
        let mistakes = count_mistakes(&trace);
        let tokens = vocab(self.dialect.game).count_tokens(text);
        let flops = match &self.model {
            Some(config) => total_flops(config, tokens, 1).unwrap_or(0),
            None => 0,
        };
        Ok(EvalRecord {
            problem_id: problem_id.to_string(),
            sample_id,
            verdict: if correct { Verdict::Correct } else { Verdict::Incorrect },
            mistakes,
            tokens,
            flops,
        })
    }

    /// Normalized solution key used for majority voting: the operation list
    /// for CountDown, the final grid for Sudoku. Unverifiable generations
    /// normalize to themselves so distinct garbage stays distinct.
    pub fn solution_key(&self, problem_id: &str, text: &str) -> Result<String, EvalError> {
        let problem = self
            .problems
            .get(problem_id)
            .ok_or_else(|| EvalError::UnknownProblem(problem_id.to_string()))?;
        let (trace, _) = parse(text, self.dialect);
        let key = match problem {
            Problem::Countdown(_) => trace.countdown_solution_ops().map(|ops| {
                ops.iter().map(|op| op.to_string()).collect::<Vec<_>>().join(";")
            }),
            Problem::Sudoku(board) => {
                let mut replay = *board;
                let mut legal = true;
                for (row, col, value) in trace.sudoku_surviving_fills() {
                    let idx = usize::from(row) * 9 + usize::from(col);
                    if row > 8 || col > 8 || !(1..=9).contains(&value) || !replay.admits(idx, value) {
                        legal = false;
                        break;
                    }
                    replay.place(idx, value);
                }
                (legal && replay.is_complete()).then(|| replay.to_line())
            }
        };
        Ok(key.unwrap_or_else(|| format!("!unparsed:{text}")))
    }

    /// Plurality vote over normalized solutions; ties break by a seeded
    /// uniform draw so aggregate outputs are reproducible.
    pub fn majority_vote(&self, problem_id: &str, samples: &[String], seed: u64) -> Result<String, EvalError> {
        if samples.is_empty() {
            return Err(EvalError::NoSamples);
        }
        let mut classes: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for (i, text) in samples.iter().enumerate() {
            let key = self.solution_key(problem_id, text)?;
            let entry = classes.entry(key).or_insert((0, i));
            entry.0 += 1;
        }
        let best = classes.values().map(|(count, _)| *count).max().unwrap();
        // Tied classes ordered by first occurrence keeps the draw stable.
        let mut winners: Vec<usize> = classes.values().filter(|(c, _)| *c == best).map(|(_, i)| *i).collect();
        winners.sort_unstable();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chosen = winners[rng.gen_range(0..winners.len())];
        Ok(samples[chosen].clone())
    }
}

/// Whether any of the first `n` samples (by sample id) is correct.
pub fn best_of_n(records: &[EvalRecord], n: usize) -> Result<bool, EvalError> {
    if records.len() < n {
        return Err(EvalError::InsufficientSamples { need: n, have: records.len() });
    }
    let mut sorted: Vec<&EvalRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.sample_id);
    Ok(sorted[..n].iter().any(|r| r.is_correct()))
}

/// An exact non-negative rational, reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fraction {
    pub num: u128,
    pub den: u128,
}

impl Fraction {
    pub fn new(num: u128, den: u128) -> Self {
        debug_assert_ne!(den, 0);
        let g = gcd(num, den);
        Fraction { num: num / g, den: den / g }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        if a == 0 { 1 } else { a }
    } else {
        gcd(b, a % b)
    }
}

fn pass_at_k_domain(n: u64, c: u64, k: u64) -> Result<(), EvalError> {
    if c > n || k == 0 || k > n {
        return Err(EvalError::PassAtKDomain { n, c, k });
    }
    Ok(())
}

/// Unbiased pass@k estimator `1 - C(n-c, k) / C(n, k)`, computed with the
/// numerically stable telescoping product.
pub fn pass_at_k(n: u64, c: u64, k: u64) -> Result<f64, EvalError> {
    pass_at_k_domain(n, c, k)?;
    if n - c < k {
        return Ok(1.0);
    }
    let mut miss = 1.0f64;
    for i in 0..k {
        miss *= (n - c - i) as f64 / (n - i) as f64;
    }
    Ok(1.0 - miss)
}

/// The same estimator as an exact fraction. `None` when the intermediate
/// products overflow `u128` (far beyond any realistic sample count).
pub fn pass_at_k_exact(n: u64, c: u64, k: u64) -> Result<Option<Fraction>, EvalError> {
    pass_at_k_domain(n, c, k)?;
    if n - c < k {
        return Ok(Some(Fraction::new(1, 1)));
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        let (Some(next_num), Some(next_den)) =
            (num.checked_mul((n - c - i) as u128), den.checked_mul((n - i) as u128))
        else {
            return Ok(None);
        };
        let g = gcd(next_num, next_den);
        num = next_num / g;
        den = next_den / g;
    }
    Ok(Some(Fraction::new(den - num, den)))
}

/// How a record qualifies for a solved set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MistakeBudget {
    /// Cumulative: solved with at most this many mistakes.
    AtMost(u64),
    /// Exact-bucket variant.
    Exactly(u64),
}

/// The problems an agent solves within a mistake budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvedSet {
    pub budget: MistakeBudget,
    pub problems: BTreeSet<String>,
}

/// Collects the problems having a correct record within the budget.
pub fn solved_set(records: &[EvalRecord], budget: MistakeBudget) -> SolvedSet {
    let problems = records
        .iter()
        .filter(|r| {
            r.is_correct()
                && match budget {
                    MistakeBudget::AtMost(m) => r.mistakes <= m,
                    MistakeBudget::Exactly(m) => r.mistakes == m,
                }
        })
        .map(|r| r.problem_id.clone())
        .collect();
    SolvedSet { budget, problems }
}

/// Jaccard index `|a ∩ b| / |a ∪ b|`; 1 when both sets are empty. Both sets
/// should be built under the same budget semantics.
pub fn jaccard(a: &SolvedSet, b: &SolvedSet) -> Fraction {
    let intersection = a.problems.intersection(&b.problems).count() as u128;
    let union = a.problems.union(&b.problems).count() as u128;
    if union == 0 {
        return Fraction::new(1, 1);
    }
    Fraction::new(intersection, union)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveMode {
    Sequential,
    Parallel,
}

impl fmt::Display for CurveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveMode::Sequential => f.write_str("sequential"),
            CurveMode::Parallel => f.write_str("parallel"),
        }
    }
}

/// One point of an accuracy-vs-FLOPs curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub flops: u128,
    pub accuracy: f64,
    pub mode: CurveMode,
    /// Token budget (sequential) or sample count (parallel).
    pub budget: u64,
}

/// Sequential scaling: one autoregressive generation per problem, truncated
/// at each token budget. A generation counts at budget `b` iff it is correct
/// and its goal arrived within `b` tokens; x is the cost of one sequence of
/// `b` tokens.
pub fn sequential_curve(
    records: &[EvalRecord],
    config: &ModelConfig,
    token_budgets: &[u64],
) -> Result<Vec<CurvePoint>, EvalError> {
    // Sequential mode wants exactly one autoregressive generation per
    // problem; anything else is a mis-shaped record set.
    let mut by_problem: HashMap<&str, &EvalRecord> = HashMap::new();
    let mut duplicates = Vec::new();
    for record in records {
        if by_problem.insert(&record.problem_id, record).is_some() {
            duplicates.push((record.problem_id.clone(), record.sample_id));
        }
    }
    if !duplicates.is_empty() {
        return Err(EvalError::MissingCoverage(duplicates));
    }
    let total = by_problem.len() as f64;
    let mut points = Vec::with_capacity(token_budgets.len());
    for &budget in token_budgets {
        let solved = by_problem
            .values()
            .filter(|r| r.is_correct() && r.tokens <= budget)
            .count();
        points.push(CurvePoint {
            flops: total_flops(config, budget, 1).unwrap_or(0),
            accuracy: solved as f64 / total,
            mode: CurveMode::Sequential,
            budget,
        });
    }
    Ok(points)
}

/// Parallel scaling: best-of-n over temperature samples of a fixed length;
/// x is the cost of `n` sequences of `tokens_per_sample` tokens.
pub fn parallel_curve(
    records: &[EvalRecord],
    config: &ModelConfig,
    sample_counts: &[u64],
    tokens_per_sample: u64,
) -> Result<Vec<CurvePoint>, EvalError> {
    let mut by_problem: BTreeMap<&str, Vec<&EvalRecord>> = BTreeMap::new();
    for record in records {
        by_problem.entry(&record.problem_id).or_default().push(record);
    }
    let need = sample_counts.iter().copied().max().unwrap_or(0) as usize;
    let missing: Vec<(String, u64)> = by_problem
        .iter()
        .filter(|(_, rs)| rs.len() < need)
        .map(|(id, rs)| (id.to_string(), rs.len() as u64))
        .collect();
    if !missing.is_empty() {
        return Err(EvalError::MissingCoverage(missing));
    }
    for records in by_problem.values_mut() {
        records.sort_by_key(|r| r.sample_id);
    }
    let total = by_problem.len() as f64;
    let mut points = Vec::with_capacity(sample_counts.len());
    for &n in sample_counts {
        let solved = by_problem
            .values()
            .filter(|rs| rs[..n as usize].iter().any(|r| r.is_correct()))
            .count();
        points.push(CurvePoint {
            flops: total_flops(config, tokens_per_sample, n).unwrap_or(0),
            accuracy: solved as f64 / total,
            mode: CurveMode::Parallel,
            budget: n,
        });
    }
    Ok(points)
}

/// CSV export with the fixed header `flops,accuracy,mode,budget`.
pub fn curve_to_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from("flops,accuracy,mode,budget\n");
    for p in points {
        out.push_str(&format!("{},{},{},{}\n", p.flops, p.accuracy, p.mode, p.budget));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(problem: &str, sample: u64, correct: bool, mistakes: u64, tokens: u64) -> EvalRecord {
        EvalRecord {
            problem_id: problem.to_string(),
            sample_id: sample,
            verdict: if correct { Verdict::Correct } else { Verdict::Incorrect },
            mistakes,
            tokens,
            flops: 0,
        }
    }

    #[test]
    fn best_of_n_prefix_semantics() {
        let records = vec![record("p", 0, false, 0, 10), record("p", 1, true, 0, 10)];
        assert!(!best_of_n(&records, 1).unwrap());
        assert!(best_of_n(&records, 2).unwrap());
        assert!(matches!(best_of_n(&records, 3), Err(EvalError::InsufficientSamples { .. })));
    }

    #[test]
    fn best_of_n_all_incorrect() {
        let records: Vec<EvalRecord> = (0..64).map(|i| record("p", i, false, 0, 10)).collect();
        assert!(!best_of_n(&records, 64).unwrap());
    }

    #[test]
    fn pass_at_k_boundaries() {
        assert_eq!(pass_at_k(64, 64, 1).unwrap(), 1.0);
        for k in 1..=64 {
            assert_eq!(pass_at_k(64, 0, k).unwrap(), 0.0);
        }
        assert!(pass_at_k(4, 5, 1).is_err());
        assert!(pass_at_k(4, 2, 0).is_err());
        assert!(pass_at_k(4, 2, 5).is_err());
    }

    #[test]
    fn pass_at_k_exact_small_case() {
        // Enumerating the C(4,2)=6 sample pairs with 2 correct among 4:
        // 5 of 6 pairs contain a correct sample.
        let exact = pass_at_k_exact(4, 2, 2).unwrap().unwrap();
        assert_eq!(exact, Fraction::new(5, 6));
        assert_eq!(pass_at_k(4, 2, 2).unwrap(), 5.0 / 6.0);
    }

    #[test]
    fn pass_at_k_exact_matches_float() {
        for n in [1u64, 4, 16, 64] {
            for c in 0..=n {
                for k in 1..=n {
                    let exact = pass_at_k_exact(n, c, k).unwrap().unwrap().to_f64();
                    let float = pass_at_k(n, c, k).unwrap();
                    assert!((exact - float).abs() < 1e-12, "n={n} c={c} k={k}");
                }
            }
        }
    }

    #[test]
    fn jaccard_corner_cases() {
        let set = |ids: &[&str]| SolvedSet {
            budget: MistakeBudget::AtMost(0),
            problems: ids.iter().map(|s| s.to_string()).collect(),
        };
        assert_eq!(jaccard(&set(&["a", "b"]), &set(&["a", "b"])), Fraction::new(1, 1));
        assert_eq!(jaccard(&set(&["a"]), &set(&["b"])), Fraction::new(0, 1));
        assert_eq!(jaccard(&set(&[]), &set(&[])), Fraction::new(1, 1));
        assert_eq!(jaccard(&set(&["1", "2", "3"]), &set(&["2", "3", "4"])), Fraction::new(1, 2));
    }

    #[test]
    fn solved_sets_are_cumulative() {
        let records = vec![
            record("a", 0, true, 0, 10),
            record("b", 0, true, 3, 10),
            record("c", 0, true, 7, 10),
            record("d", 0, false, 0, 10),
        ];
        let at = |m| solved_set(&records, MistakeBudget::AtMost(m)).problems;
        assert!(at(0).is_subset(&at(3)));
        assert!(at(3).is_subset(&at(7)));
        assert_eq!(at(7).len(), 3);
        let exactly = solved_set(&records, MistakeBudget::Exactly(3)).problems;
        assert_eq!(exactly.len(), 1);
    }

    #[test]
    fn sequential_curve_uses_token_thresholds() {
        let config = crate::flops::builtin("17M").unwrap();
        let records = vec![
            record("a", 0, true, 0, 100),
            record("b", 0, true, 0, 1000),
            record("c", 0, false, 0, 50),
            record("d", 0, true, 0, 3000),
        ];
        let points = sequential_curve(&records, &config, &[512, 2048, 4096]).unwrap();
        let accs: Vec<f64> = points.iter().map(|p| p.accuracy).collect();
        assert_eq!(accs, [0.25, 0.5, 0.75]);
        assert!(points.windows(2).all(|w| w[0].flops < w[1].flops));
    }

    #[test]
    fn parallel_curve_doubles_flops_with_samples() {
        let config = crate::flops::builtin("17M").unwrap();
        let mut records = Vec::new();
        for p in ["a", "b"] {
            for s in 0..4u64 {
                records.push(record(p, s, p == "a" && s == 3, 0, 512));
            }
        }
        let points = parallel_curve(&records, &config, &[1, 2, 4], 512).unwrap();
        assert_eq!(points[2].flops, 2 * points[1].flops);
        assert_eq!(points[1].flops, 2 * points[0].flops);
        assert_eq!(points[2].accuracy, 0.5);
        let err = parallel_curve(&records, &config, &[8], 512);
        assert!(matches!(err, Err(EvalError::MissingCoverage(_))));
    }

    #[test]
    fn eval_record_json_round_trip() {
        let r = record("cd-1-2", 3, true, 4, 568);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"verdict\":\"correct\""));
        let back: EvalRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    fn reference_setup() -> (ProblemSet, String) {
        let puzzle = Puzzle::standard("ref", 16, vec![96, 11, 78, 22]).unwrap();
        let outcome = crate::search::search(
            &puzzle,
            &crate::search::SearchPolicy::generation_default(),
            &crate::budget::SearchBudget::default(),
        );
        let text = crate::trace::serialize(&outcome.trace, Dialect::COUNTDOWN_BACKTRACK).unwrap();
        let mut problems = ProblemSet::new();
        problems.insert_countdown(puzzle);
        (problems, text)
    }

    #[test]
    fn scoring_reverifies_the_reference_trace() {
        let (problems, text) = reference_setup();
        let scorer = Scorer::new(&problems, Dialect::COUNTDOWN_BACKTRACK)
            .with_model(crate::flops::builtin("17M").unwrap());
        let record = scorer.score("ref", 0, &text).unwrap();
        assert_eq!(record.verdict, Verdict::Correct);
        assert_eq!(record.mistakes, 4);
        assert_eq!(record.tokens, 568);
        assert!(record.flops > 0);
        assert!(matches!(
            scorer.score("missing", 0, &text),
            Err(EvalError::UnknownProblem(_))
        ));
    }

    #[test]
    fn scoring_rejects_a_false_goal_claim() {
        let (problems, text) = reference_setup();
        let scorer = Scorer::new(&problems, Dialect::COUNTDOWN_BACKTRACK);
        // Claim 18-2=15 on the final operation while keeping the goal line.
        let lied = text.replace("Exploring Operation: 18-2=16", "Exploring Operation: 18-2=15");
        let record = scorer.score("ref", 0, &lied).unwrap();
        assert_eq!(record.verdict, Verdict::Incorrect);
    }

    #[test]
    fn incomplete_sudoku_is_incorrect() {
        let full = "712498635964135278583726194876954312239861457451372986328549761147683529695217843";
        let mut text = full.to_string();
        text.replace_range(0..2, "00");
        let board = crate::sudoku::parse_board(&text).unwrap();
        let mut problems = ProblemSet::new();
        problems.insert_sudoku("s", board);
        let scorer = Scorer::new(&problems, Dialect::SUDOKU_BACKTRACK);
        // Filling only one of the two empty cells leaves the board open.
        let one = "START\t(0, 2) = 2\tsolving\nSOL_START\t(0, 0) = 7\tSOL_END";
        assert_eq!(scorer.score("s", 0, one).unwrap().verdict, Verdict::Incorrect);
        let both = "START\t(0, 2) = 2\tsolving\nSOL_START\t(0, 0) = 7\t(0, 1) = 1\tSOL_END";
        assert_eq!(scorer.score("s", 0, both).unwrap().verdict, Verdict::Correct);
        // A fill conflicting with the givens cannot be correct.
        let clash = "START\tsolving\nSOL_START\t(0, 0) = 9\t(0, 1) = 1\tSOL_END";
        assert_eq!(scorer.score("s", 0, clash).unwrap().verdict, Verdict::Incorrect);
    }

    #[test]
    fn think_dialect_generations_score_correct() {
        // The final operation is implicit in think traces; the scorer must
        // reconstruct it before verification.
        let puzzle = Puzzle::standard("ref", 16, vec![96, 11, 78, 22]).unwrap();
        let outcome = crate::search::search(
            &puzzle,
            &crate::search::SearchPolicy::generation_default(),
            &crate::budget::SearchBudget::default(),
        );
        let think = crate::trace::shorten_think(&outcome.trace).unwrap();
        let text = crate::trace::serialize(&think, Dialect::COUNTDOWN_THINK).unwrap();
        let mut problems = ProblemSet::new();
        problems.insert_countdown(puzzle);
        let scorer = Scorer::new(&problems, Dialect::COUNTDOWN_THINK);
        let record = scorer.score("ref", 0, &text).unwrap();
        assert_eq!(record.verdict, Verdict::Correct);
        // A goal value the final state cannot reach scores incorrect.
        let broken = text.replace("16,16 equal: Goal Reached", "14,16 unequal: No Solution");
        assert_eq!(scorer.score("ref", 0, &broken).unwrap().verdict, Verdict::Incorrect);
    }

    #[test]
    fn majority_vote_prefers_the_plurality() {
        let (problems, text) = reference_setup();
        let scorer = Scorer::new(&problems, Dialect::COUNTDOWN_BACKTRACK);
        let other = text.replace("Exploring Operation: 18-2=16", "Exploring Operation: 18-2=15");
        let samples = vec![text.clone(), text.clone(), other];
        let chosen = scorer.majority_vote("ref", &samples, 1).unwrap();
        assert_eq!(chosen, text);
    }

    #[test]
    fn majority_vote_ties_break_deterministically() {
        let (problems, text) = reference_setup();
        let scorer = Scorer::new(&problems, Dialect::COUNTDOWN_BACKTRACK);
        let other = text.replace("Exploring Operation: 18-2=16", "Exploring Operation: 18-2=15");
        let samples = vec![text, other];
        for seed in [0u64, 1, 7, 99] {
            let a = scorer.majority_vote("ref", &samples, seed).unwrap();
            let b = scorer.majority_vote("ref", &samples, seed).unwrap();
            assert_eq!(a, b, "seed {seed}");
        }
        // All-identical samples elect themselves.
        let same = vec![samples[0].clone(), samples[0].clone()];
        assert_eq!(scorer.majority_vote("ref", &same, 3).unwrap(), samples[0]);
        assert!(matches!(scorer.majority_vote("ref", &[], 0), Err(EvalError::NoSamples)));
    }
}
