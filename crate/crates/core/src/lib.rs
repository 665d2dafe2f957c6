//! Gradient-free training of small feedforward networks with global-best
//! particle swarm optimization, and recursive forecasting of monthly OHLC
//! price columns with them.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the run
//! manifest and the command line live in the `swarmcast` crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

mod error;
pub mod forecaster;
pub mod market_data;
pub mod neural_net;
pub mod normalize;
pub mod pso;

pub use error::{Error, Result};
pub use forecaster::{
    apply_error_offset, bayes_posterior, error_reduction, fitness_mse, forecast_recursive,
    forecast_report, metrics, train, train_with, ForecastReport, Metrics, PipelineConfig,
    TrainedModel, TrainingRun,
};
pub use market_data::{make_windows, Column, MarketDataset, OhlcRecord, TrainingWindow};
pub use neural_net::{NetworkTopology, Transfer, WeightVector};
pub use normalize::{Method, NormalizationSpec};
pub use pso::{optimize, Benchmark, Coefficients, Fitness, Optimum, Particle, PsoConfig, Swarm};
