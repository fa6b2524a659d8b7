//! Text to species counts.

use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_segmentation::UnicodeSegmentation;

use crate::histogram::SpeciesCounts;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("input is not valid UTF-8 (at byte {0})")]
    InvalidUtf8(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tokenizer {
    /// Split on Unicode whitespace.
    #[default]
    Whitespace,
    /// Unicode word boundaries (UAX #29), dropping punctuation and spaces.
    UnicodeWord,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CorpusConfig {
    pub tokenizer: Tokenizer,
    pub lowercase: bool,
    /// Species seen fewer times are dropped after counting.
    pub min_count: u64,
}

pub fn count_text(text: &str, config: &CorpusConfig) -> SpeciesCounts {
    let mut counts = SpeciesCounts::new();
    let mut push = |tok: &str| {
        if config.lowercase {
            counts.observe(&tok.to_lowercase());
        } else {
            counts.observe(tok);
        }
    };
    match config.tokenizer {
        Tokenizer::Whitespace => text.split_whitespace().for_each(&mut push),
        Tokenizer::UnicodeWord => text.unicode_words().for_each(&mut push),
    }
    if config.min_count > 1 {
        counts.retain_min_count(config.min_count);
    }
    counts
}

/// Reads the whole stream, validates UTF-8 and counts tokens.
pub fn tokenize_and_count<R: Read>(
    mut input: R,
    config: &CorpusConfig,
) -> Result<SpeciesCounts, IngestError> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let text =
        std::str::from_utf8(&bytes).map_err(|e| IngestError::InvalidUtf8(e.valid_up_to()))?;
    Ok(count_text(text, config))
}
