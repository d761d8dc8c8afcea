use thiserror::Error;

/// Errors surfaced by the engine and its text front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank must be at least 1")]
    InvalidRank,
    #[error("mode level must be nonzero")]
    ZeroLevel,
    #[error("color {color} out of range 1..={rank}")]
    ColorOutOfRange { color: u32, rank: u32 },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: u32, right: u32 },
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("degenerate window for {var}: {lo} > {hi}")]
    DegenerateWindow { var: &'static str, lo: i64, hi: i64 },
    #[error("window is missing variable {0}")]
    MissingVariable(&'static str),
    #[error("internal summation box of {cells} cells exceeds limit {limit}")]
    WindowTooLarge { cells: u64, limit: u64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("estimated work {estimate} exceeds budget {budget}")]
    Infeasible { estimate: u64, budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
