//! Command-line surface. Flags override the JSON config, which overrides
//! the built-in defaults.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use swarmcast_core::{Benchmark, Coefficients, Column, PsoConfig};

use crate::commands;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::labels::LabelStyle;
use crate::manifest::Manifest;

#[derive(Debug, Parser)]
#[command(
    name = "swarmcast",
    version,
    about = "Forecast monthly OHLC series with PSO-trained networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a Month,Open,High,Low,Close file and summarize it
    Validate {
        /// Data file; defaults to the configured path
        data: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Train one network per column and write run manifests
    Train {
        #[arg(long)]
        data: Option<PathBuf>,
        /// Trailing months withheld from training and scored afterwards
        #[arg(long)]
        holdout: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Forecast future months from run manifests
    Forecast {
        /// Manifest files; defaults to the manifests under --out
        #[arg(long = "manifest")]
        manifests: Vec<PathBuf>,
        /// Label forecast months like "Jan 15" instead of "2015-01"
        #[arg(long)]
        short_labels: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Minimize a benchmark function and record its convergence
    Bench {
        #[arg(long, value_parser = parse_benchmark)]
        function: Benchmark,
        #[arg(long, default_value_t = 10)]
        dim: usize,
        #[arg(long)]
        inertia: Option<f64>,
        #[arg(long)]
        c1: Option<f64>,
        #[arg(long)]
        c2: Option<f64>,
        /// Defaults to the function's usual domain bound
        #[arg(long)]
        v_max: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        x_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        x_max: Option<f64>,
        /// Draw r1, r2 for every dimension instead of once per particle
        #[arg(long)]
        per_dimension: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Apply two error offsets to a Month,value file, truncating to cents
    ErrorTable {
        #[arg(long)]
        base: PathBuf,
        /// Two comma-separated offsets, e.g. 0.4369,0.3480
        #[arg(long, value_parser = parse_offsets, allow_hyphen_values = true)]
        errors: (f64, f64),
        /// Write error_table.csv here instead of printing it
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ColumnArg {
    Open,
    High,
    Low,
    Close,
    All,
}

impl ColumnArg {
    fn columns(self) -> Vec<Column> {
        match self {
            ColumnArg::Open => vec![Column::Open],
            ColumnArg::High => vec![Column::High],
            ColumnArg::Low => vec![Column::Low],
            ColumnArg::Close => vec![Column::Close],
            ColumnArg::All => Column::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub column: Option<ColumnArg>,
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub particles: Option<usize>,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Threads for particle evaluation
    #[arg(long)]
    pub threads: Option<usize>,
}

fn parse_offsets(s: &str) -> std::result::Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b] = parts[..] else {
        return Err("expected two comma-separated offsets".into());
    };
    let parse = |v: &str| {
        v.parse::<f64>()
            .map_err(|_| format!("{v:?} is not a number"))
    };
    Ok((parse(a)?, parse(b)?))
}

fn parse_benchmark(s: &str) -> std::result::Result<Benchmark, String> {
    s.parse().map_err(|_| {
        let names: Vec<_> = Benchmark::ALL.iter().map(|b| b.name()).collect();
        format!(
            "unknown function {s:?}; expected one of {}",
            names.join(", ")
        )
    })
}

impl Common {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(out) = &self.out {
            config.out = out.clone();
        }
        if let Some(column) = self.column {
            config.data.columns = column.columns();
        }
        if let Some(window) = self.window {
            config.network.window = window;
        }
        if let Some(particles) = self.particles {
            config.pso.swarm_size = particles;
        }
        if let Some(iters) = self.iters {
            config.pso.max_iterations = iters;
        }
        if let Some(horizon) = self.horizon {
            config.forecast.horizon = horizon;
        }
        if let Some(threads) = self.threads {
            config.threads = Some(threads);
        }
        Ok(config)
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Validate { data, common } => {
            let config = common.resolve()?;
            let path = data.unwrap_or(config.data.path);
            commands::validate(&path, out, err)?;
        }
        Command::Train {
            data,
            holdout,
            common,
        } => {
            let mut config = common.resolve()?;
            if let Some(path) = data {
                config.data.path = path;
            }
            if let Some(k) = holdout {
                config.data.holdout = k;
            }
            commands::train(&config, out)?;
        }
        Command::Forecast {
            manifests,
            short_labels,
            common,
        } => {
            let config = common.resolve()?;
            let manifests = if manifests.is_empty() {
                discover(&config, common.column.is_some())?
            } else {
                manifests
            };
            // only an explicit choice overrides the manifests' own horizon
            let horizon = common
                .horizon
                .or(common.config.as_ref().map(|_| config.forecast.horizon));
            let style = if short_labels || config.forecast.short_labels {
                LabelStyle::Short
            } else {
                LabelStyle::Iso
            };
            commands::forecast(&manifests, horizon, style, &config.out, out)?;
        }
        Command::Bench {
            function,
            dim,
            inertia,
            c1,
            c2,
            v_max,
            x_min,
            x_max,
            per_dimension,
            common,
        } => {
            let config = common.resolve()?;
            let bound = function.default_bound();
            let mut pso: PsoConfig = config.pso.to_pso(dim, config.seed);
            pso.x_min = x_min.unwrap_or(-bound);
            pso.x_max = x_max.unwrap_or(bound);
            pso.v_max = v_max.unwrap_or(bound);
            pso.inertia = inertia.unwrap_or(pso.inertia);
            pso.c1 = c1.unwrap_or(pso.c1);
            pso.c2 = c2.unwrap_or(pso.c2);
            if per_dimension {
                pso.coefficients = Coefficients::PerDimension;
            }
            let out_dir = common
                .out
                .as_deref()
                .or(common.config.as_ref().map(|_| config.out.as_path()));
            commands::bench(function, &pso, config.threads, out_dir, out)?;
        }
        Command::ErrorTable {
            base,
            errors,
            out: dir,
        } => {
            commands::error_table_file(&base, errors.0, errors.1, dir.as_deref(), out)?;
        }
    }
    Ok(())
}

/// Manifests under the output directory for the selected columns. With no
/// explicit column selection, whichever ones exist.
fn discover(config: &RunConfig, explicit: bool) -> Result<Vec<PathBuf>> {
    let mut found = Vec::new();
    for column in config.columns() {
        let path = config.out.join(Manifest::file_name(column));
        if path.is_file() {
            found.push(path);
        } else if explicit {
            return Err(Error::Usage(format!("no manifest at {}", path.display())));
        }
    }
    if found.is_empty() {
        return Err(Error::Usage(format!(
            "no manifests found in {}; run train first or pass --manifest",
            config.out.display()
        )));
    }
    Ok(found)
}
