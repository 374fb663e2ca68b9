//! Per-game vocabularies with lossless greedy encoding.
//!
//! Each vocabulary is derived mechanically from its trace grammar: every
//! fixed phrase is one token, digits encode digit-by-digit, and newline/tab
//! separators are standalone tokens. No token spans a separator, so token
//! counts add up across line boundaries — the property the search budgets
//! rely on when they account tokens incrementally.

use crate::trace::Game;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;
use thiserror::Error;

/// Bump when a token inventory changes; recorded in dataset manifests.
pub const VOCAB_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum TokenizerError {
    #[error("input not covered by the vocabulary at byte {position}: {snippet:?}")]
    Coverage { position: usize, snippet: String },
    #[error("unknown token id {0}")]
    UnknownId(u32),
    #[error("malformed vocabulary file: {0}")]
    MalformedFile(String),
}

/// The four ids reserved at the head of every vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpecialTokens {
    pub pad: u32,
    pub bos: u32,
    pub eos: u32,
    pub unk: u32,
}

pub const SPECIALS: SpecialTokens = SpecialTokens { pad: 0, bos: 1, eos: 2, unk: 3 };
const SPECIAL_STRINGS: [&str; 4] = ["<pad>", "<bos>", "<eos>", "<unk>"];

const COUNTDOWN_TOKENS: &[&str] = &[
    "\n",
    "0", "1", "2", "3", "4", "5", "6", "7", "8", "9",
    "Current State: ",
    ":[",
    "], Operations: [",
    "]",
    "[",
    ", ",
    "'",
    "Exploring Operation: ",
    ", Resulting Numbers: [",
    "Generated Node #",
    "Moving to Node #",
    ": ",
    " Operation: ",
    " from Operation: ",
    ",",
    "+",
    "-",
    "*",
    "/",
    "=",
    " unequal: No Solution",
    " unequal",
    " equal: Goal Reached",
    " equal",
];

const SUDOKU_TOKENS: &[&str] = &[
    "\n",
    "\t",
    "0", "1", "2", "3", "4", "5", "6", "7", "8", "9",
    "START",
    "solving",
    "SOL_START",
    "SOL_END",
    "(",
    ")",
    ", ",
    ") = ",
    ") [",
    "] = ",
    "GUESS: (",
    "NO_CANDIDATE: (",
    "REVERT: (",
    "NONE",
    "NO_CANDIDATE",
];

/// An ordered token inventory for one game's trace grammar.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Vocabulary {
    pub game: Game,
    pub version: u32,
    /// All tokens, specials first; index = token id.
    tokens: Vec<String>,
    /// Token indices sorted by decreasing byte length for greedy matching.
    #[serde(skip)]
    by_length: Vec<u32>,
}

impl Vocabulary {
    fn from_tokens(game: Game, body: &[&str]) -> Self {
        let mut tokens: Vec<String> = SPECIAL_STRINGS.iter().map(|s| s.to_string()).collect();
        tokens.extend(body.iter().map(|s| s.to_string()));
        let mut vocab = Vocabulary { game, version: VOCAB_VERSION, tokens, by_length: Vec::new() };
        vocab.rebuild_index();
        vocab
    }

    fn rebuild_index(&mut self) {
        // Specials never match raw text.
        let mut ids: Vec<u32> = (4..self.tokens.len() as u32).collect();
        ids.sort_by_key(|&id| std::cmp::Reverse(self.tokens[id as usize].len()));
        self.by_length = ids;
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn token(&self, id: u32) -> Option<&str> {
        self.tokens.get(id as usize).map(String::as_str)
    }

    /// Greedy longest-match encoding. Uncovered input is an error unless
    /// `allow_unk`, in which case each uncovered byte becomes one `<unk>`.
    pub fn encode(&self, text: &str, allow_unk: bool) -> Result<Vec<u32>, TokenizerError> {
        let mut ids = Vec::new();
        let mut pos = 0;
        let bytes = text.as_bytes();
        'outer: while pos < bytes.len() {
            for &id in &self.by_length {
                let token = self.tokens[id as usize].as_bytes();
                if bytes[pos..].starts_with(token) {
                    ids.push(id);
                    pos += token.len();
                    continue 'outer;
                }
            }
            if allow_unk {
                ids.push(SPECIALS.unk);
                // Skip one whole character, not one byte.
                let step = text[pos..].chars().next().map(char::len_utf8).unwrap_or(1);
                pos += step;
            } else {
                let end = (pos + 12).min(bytes.len());
                return Err(TokenizerError::Coverage {
                    position: pos,
                    snippet: String::from_utf8_lossy(&bytes[pos..end]).into_owned(),
                });
            }
        }
        Ok(ids)
    }

    /// Token count of `text`; uncovered fragments count as unk tokens.
    pub fn count_tokens(&self, text: &str) -> u64 {
        self.encode(text, true).map(|ids| ids.len() as u64).unwrap_or(0)
    }

    pub fn decode(&self, ids: &[u32]) -> Result<String, TokenizerError> {
        let mut out = String::new();
        for &id in ids {
            let token = self.token(id).ok_or(TokenizerError::UnknownId(id))?;
            out.push_str(token);
        }
        Ok(out)
    }

    /// Stable fingerprint of the full inventory, recorded in manifests.
    pub fn content_hash(&self) -> u64 {
        crate::fnv1a_64(self.to_file_string().as_bytes())
    }

    /// File form: one token per line in id order, with `\n`, `\t`, and `\\`
    /// escaped. The first four lines are the special tokens.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for token in &self.tokens {
            out.push_str(&escape(token));
            out.push('\n');
        }
        out
    }

    pub fn from_file_string(game: Game, text: &str) -> Result<Self, TokenizerError> {
        let mut tokens = Vec::new();
        for line in text.lines() {
            tokens.push(unescape(line)?);
        }
        if tokens.len() < 4 || tokens[..4] != SPECIAL_STRINGS.map(String::from) {
            return Err(TokenizerError::MalformedFile("missing 4-line special-token header".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for token in &tokens {
            if !seen.insert(token.clone()) {
                return Err(TokenizerError::MalformedFile(format!("duplicate token {token:?}")));
            }
        }
        let mut vocab = Vocabulary { game, version: VOCAB_VERSION, tokens, by_length: Vec::new() };
        vocab.rebuild_index();
        Ok(vocab)
    }
}

fn escape(token: &str) -> String {
    token.replace('\\', "\\\\").replace('\n', "\\n").replace('\t', "\\t")
}

fn unescape(line: &str) -> Result<String, TokenizerError> {
    let mut out = String::new();
    let mut chars = line.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('n') => out.push('\n'),
            Some('t') => out.push('\t'),
            other => return Err(TokenizerError::MalformedFile(format!("bad escape \\{other:?}"))),
        }
    }
    Ok(out)
}

/// Builds the deterministic vocabulary for a game's trace grammar.
pub fn build_vocab(game: Game) -> Vocabulary {
    match game {
        Game::Countdown => Vocabulary::from_tokens(game, COUNTDOWN_TOKENS),
        Game::Sudoku => Vocabulary::from_tokens(game, SUDOKU_TOKENS),
    }
}

/// Shared instances for hot paths (budget accounting during search).
pub fn vocab(game: Game) -> &'static Vocabulary {
    static COUNTDOWN: OnceLock<Vocabulary> = OnceLock::new();
    static SUDOKU: OnceLock<Vocabulary> = OnceLock::new();
    match game {
        Game::Countdown => COUNTDOWN.get_or_init(|| build_vocab(Game::Countdown)),
        Game::Sudoku => SUDOKU.get_or_init(|| build_vocab(Game::Sudoku)),
    }
}
