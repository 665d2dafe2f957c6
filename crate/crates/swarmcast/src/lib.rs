//! File formats, run manifests and the command-line front end for
//! [`swarmcast_core`].

#![forbid(unsafe_code)]

pub mod cli;
pub mod commands;
pub mod config;
mod error;
pub mod labels;
pub mod manifest;
pub mod ohlc_csv;
pub mod parallel;

pub use error::{Error, Result};
pub use swarmcast_core as core;
