//! Exact inference-FLOPs accounting for the built-in transformer
//! configurations.
//!
//! The model counts the per-token linear work of every layer (attention
//! projections with grouped-query key/value heads, plus the gated MLP) and
//! the quadratic attention interaction over generated tokens. Embedding,
//! softmax, and normalization work is excluded as negligible. All arithmetic
//! is exact in `u128`, so golden values match on every platform.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FlopsError {
    #[error("heads ({heads}) must divide evenly into kv heads ({kv_heads})")]
    HeadGrouping { heads: u64, kv_heads: u64 },
    #[error("d_model ({d_model}) must divide evenly by heads ({heads})")]
    HeadWidth { d_model: u64, heads: u64 },
    #[error("config fields must be positive")]
    ZeroField,
    #[error("unknown model config {0:?}")]
    UnknownConfig(String),
    #[error("malformed config line {0:?}")]
    MalformedLine(String),
}

/// Transformer architecture parameters relevant to inference cost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub name: String,
    pub d_model: u64,
    pub layers: u64,
    pub heads: u64,
    pub kv_heads: u64,
    pub d_ff: u64,
}

impl ModelConfig {
    pub fn new(
        name: impl Into<String>,
        d_model: u64,
        layers: u64,
        heads: u64,
        kv_heads: u64,
        d_ff: u64,
    ) -> Result<Self, FlopsError> {
        let config = ModelConfig { name: name.into(), d_model, layers, heads, kv_heads, d_ff };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), FlopsError> {
        if self.d_model == 0 || self.layers == 0 || self.heads == 0 || self.kv_heads == 0 || self.d_ff == 0 {
            return Err(FlopsError::ZeroField);
        }
        if !self.heads.is_multiple_of(self.kv_heads) {
            return Err(FlopsError::HeadGrouping { heads: self.heads, kv_heads: self.kv_heads });
        }
        if !self.d_model.is_multiple_of(self.heads) {
            return Err(FlopsError::HeadWidth { d_model: self.d_model, heads: self.heads });
        }
        Ok(())
    }

    /// Key/value projection width under grouped-query attention:
    /// `(d_model / heads) * kv_heads`.
    pub fn kv_dim(&self) -> Result<u64, FlopsError> {
        self.validate()?;
        Ok(self.d_model / self.heads * self.kv_heads)
    }

    /// Parses the plain `key=value` config format (one pair per line,
    /// `#` comments allowed). Keys: name, d_model, layers, heads, kv_heads, d_ff.
    pub fn from_key_values(text: &str) -> Result<Self, FlopsError> {
        let mut name = String::from("custom");
        let mut fields = [None; 5];
        const KEYS: [&str; 5] = ["d_model", "layers", "heads", "kv_heads", "d_ff"];
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| FlopsError::MalformedLine(line.to_string()))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "name" {
                name = value.to_string();
                continue;
            }
            let slot = KEYS
                .iter()
                .position(|&k| k == key)
                .ok_or_else(|| FlopsError::MalformedLine(line.to_string()))?;
            fields[slot] = Some(value.parse::<u64>().map_err(|_| FlopsError::MalformedLine(line.to_string()))?);
        }
        let missing = |i: usize| FlopsError::MalformedLine(format!("missing {}", KEYS[i]));
        ModelConfig::new(
            name,
            fields[0].ok_or_else(|| missing(0))?,
            fields[1].ok_or_else(|| missing(1))?,
            fields[2].ok_or_else(|| missing(2))?,
            fields[3].ok_or_else(|| missing(3))?,
            fields[4].ok_or_else(|| missing(4))?,
        )
    }
}

impl fmt::Display for ModelConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (d_model={}, layers={}, heads={}, kv_heads={}, d_ff={})",
            self.name, self.d_model, self.layers, self.heads, self.kv_heads, self.d_ff
        )
    }
}

/// The four built-in model sizes.
pub fn builtin_configs() -> Vec<ModelConfig> {
    vec![
        ModelConfig::new("3M", 256, 6, 4, 1, 512).unwrap(),
        ModelConfig::new("17M", 512, 8, 4, 1, 1024).unwrap(),
        ModelConfig::new("38M", 512, 10, 8, 2, 2048).unwrap(),
        ModelConfig::new("144M", 1024, 12, 8, 2, 3072).unwrap(),
    ]
}

/// Looks up a built-in config by its size label.
pub fn builtin(name: &str) -> Result<ModelConfig, FlopsError> {
    builtin_configs()
        .into_iter()
        .find(|c| c.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| FlopsError::UnknownConfig(name.to_string()))
}

/// One accounting query: `tokens` generated per sequence, `sequences` drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetQuery {
    pub tokens: u64,
    pub sequences: u64,
}

/// Exact FLOPs decomposition for a query against one config.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlopsBreakdown {
    /// Per-layer, per-token linear work:
    /// `2*d_model^2 + 2*d_model*d_kv + 3*d_model*d_ff`.
    pub linear_per_token: u128,
    /// Per-layer quadratic attention work: `d_model * T*(T+1)/2`.
    pub attention_quadratic: u128,
    /// One sequence across all layers:
    /// `layers * (linear_per_token * T + attention_quadratic)`.
    pub per_sequence: u128,
    /// All sequences: `sequences * per_sequence`.
    pub total: u128,
}

/// Evaluates the inference-cost model exactly.
pub fn flops_breakdown(config: &ModelConfig, query: BudgetQuery) -> Result<FlopsBreakdown, FlopsError> {
    let d_model = config.d_model as u128;
    let d_kv = config.kv_dim()? as u128;
    let d_ff = config.d_ff as u128;
    let t = query.tokens as u128;

    let linear_per_token = 2 * d_model * d_model + 2 * d_model * d_kv + 3 * d_model * d_ff;
    let attention_quadratic = d_model * t * (t + 1) / 2;
    let per_sequence = config.layers as u128 * (linear_per_token * t + attention_quadratic);
    let total = query.sequences as u128 * per_sequence;
    Ok(FlopsBreakdown { linear_per_token, attention_quadratic, per_sequence, total })
}

/// Total FLOPs for `sequences` generations of `tokens` tokens each.
pub fn total_flops(config: &ModelConfig, tokens: u64, sequences: u64) -> Result<u128, FlopsError> {
    Ok(flops_breakdown(config, BudgetQuery { tokens, sequences })?.total)
}
