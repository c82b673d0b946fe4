use crate::partition::Partition;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parts must be non-increasing (offending index {0})")]
    NonMonotone(usize),
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("rank {0} is too large: lcm(1..=rank) overflows")]
    RankTooLarge(usize),
    #[error("partition {partition} has {len} parts, exceeding rank {rank}")]
    LengthExceedsRank {
        partition: Partition,
        len: usize,
        rank: usize,
    },
    #[error("weights differ: {left} vs {right}")]
    WeightMismatch { left: u64, right: u64 },
    #[error("the zero partition is not allowed here")]
    ZeroPartition,
    #[error("composition blocks sum to {got}, expected {want}")]
    LengthMismatch { got: usize, want: usize },
    #[error("weight cap {cap} is below mu * |a| = {min}")]
    CapTooSmall { cap: u64, min: u64 },
    #[error("{b} is not dominated by {a}")]
    NotDominated { b: Partition, a: Partition },
    #[error(
        "no decomposition of {b} with remainder in the basis (weight cap {cap}); \
         recompute the basis with a larger cap"
    )]
    NoDecomposition { b: Partition, cap: u64 },
    #[error("hypothesis does not hold: {0}")]
    HypothesisFailed(&'static str),
    #[error("all multipliers are zero; nothing to verify")]
    ZeroMultipliers,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("cache line {line}: stored value {stored} disagrees with recomputed {fresh}")]
    Stale {
        line: usize,
        stored: String,
        fresh: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
