use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid character {ch:?} at offset {offset}: words are strings of '0' and '1'")]
    InvalidLetter { ch: char, offset: usize },

    #[error("{0} is undefined for the empty word")]
    EmptyWord(&'static str),

    #[error("position {pos} is outside [1..{len}]")]
    PositionOutOfRange { pos: usize, len: usize },

    #[error("interval [{start}..{end}] is not valid in a word of length {len}")]
    InvalidInterval { start: usize, end: usize, len: usize },

    #[error("interval [{start}..{end}] is not period-maximal")]
    NotPeriodMaximal { start: usize, end: usize },

    #[error("bound is degenerate for d={d}, m={m}: need m >= d + 3")]
    DegenerateBound { d: usize, m: usize },

    #[error("table has no entry for d={0}")]
    MissingTableEntry(usize),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("enumeration over length {requested} exceeds the budget of {limit} (set RUNSLAB_BUDGET to raise it)")]
    BudgetExceeded { requested: usize, limit: usize },

    #[error("malformed checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
