use alloc::string::String;

use crate::market_data::Column;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong inside the core pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dataset has no records")]
    EmptyDataset,
    #[error("row {row}: {reason}")]
    InvalidRecord { row: usize, reason: String },
    #[error("duplicate month label {label:?} at row {row}")]
    DuplicateMonth { label: String, row: usize },
    #[error("unknown column {0:?} (expected open, high, low or close)")]
    UnknownColumn(String),

    #[error("degenerate normalization: max ({max}) must exceed min ({min})")]
    DegenerateSpec { min: f64, max: f64 },
    #[error("invalid normalization range: high ({high}) must exceed low ({low})")]
    InvalidRange { low: f64, high: f64 },
    #[error("unknown normalization method {0:?}")]
    UnknownMethod(String),
    #[error("series contains a non-finite value at index {0}")]
    NonFiniteValue(usize),

    #[error("invalid topology: {0}")]
    InvalidTopology(&'static str),
    #[error("shape mismatch for {what}: expected {expected}, got {actual}")]
    Shape {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("weight vector contains a non-finite entry at index {0}")]
    NonFiniteWeight(usize),
    #[error("unknown transfer function {0:?}")]
    UnknownTransfer(String),

    #[error("invalid PSO config: {0}")]
    InvalidConfig(&'static str),
    #[error("non-finite fitness for particle {particle} at iteration {iteration}")]
    NonFiniteFitness { particle: usize, iteration: usize },
    #[error("unknown benchmark function {0:?} (expected sphere, rosenbrock or rastrigin)")]
    UnknownBenchmark(String),

    #[error("no training windows to evaluate")]
    EmptyWindows,
    #[error("{column} series has {len} usable points; window {window} needs at least {needed}")]
    TooShortSeries {
        column: Column,
        len: usize,
        window: usize,
        needed: usize,
    },
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("error reduction is undefined for a zero baseline")]
    UndefinedReduction,
    #[error("length mismatch: {predicted} predictions vs {actual} actuals")]
    LengthMismatch { predicted: usize, actual: usize },
    #[error("metrics need at least one point")]
    EmptyMetrics,
    #[error("MAPE undefined: actual value at index {0} is zero")]
    ZeroActual(usize),
    #[error("probability {name} = {value} is outside [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },
    #[error("conditional probability undefined for P(B) = 0")]
    UndefinedConditional,
    #[error("inconsistent probabilities: posterior {0} exceeds 1")]
    InconsistentProbability(f64),
}
