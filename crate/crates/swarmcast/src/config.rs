//! JSON run configuration. Every section and field is optional; absent
//! values take the defaults below and CLI flags override whatever is loaded.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use swarmcast_core::{Coefficients, Column, Method, PipelineConfig, PsoConfig, Transfer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub data: DataSection,
    pub network: NetworkSection,
    pub normalization: NormalizationSection,
    pub pso: PsoSection,
    pub forecast: ForecastSection,
    pub seed: u64,
    pub out: PathBuf,
    /// Worker threads for particle evaluation; `None` uses all cores.
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            data: DataSection::default(),
            network: NetworkSection::default(),
            normalization: NormalizationSection::default(),
            pso: PsoSection::default(),
            forecast: ForecastSection::default(),
            seed: 0,
            out: PathBuf::from("out"),
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataSection {
    pub path: PathBuf,
    /// Empty means all four columns.
    pub columns: Vec<Column>,
    pub holdout: usize,
}

impl Default for DataSection {
    fn default() -> Self {
        Self {
            path: PathBuf::from("data/sensex_monthly.csv"),
            columns: Vec::new(),
            holdout: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkSection {
    pub window: usize,
    pub hidden_layers: Vec<usize>,
    pub hidden_transfer: Transfer,
    pub output_transfer: Transfer,
}

impl Default for NetworkSection {
    fn default() -> Self {
        let p = PipelineConfig::default();
        Self {
            window: p.window,
            hidden_layers: p.hidden_layers,
            hidden_transfer: p.hidden_transfer,
            output_transfer: p.output_transfer,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormalizationSection {
    pub method: Method,
    pub low: f64,
    pub high: f64,
}

impl Default for NormalizationSection {
    fn default() -> Self {
        let p = PipelineConfig::default();
        Self {
            method: p.normalization,
            low: p.low,
            high: p.high,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsoSection {
    pub swarm_size: usize,
    pub c1: f64,
    pub c2: f64,
    pub inertia: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub v_max: f64,
    pub max_iterations: usize,
    pub coefficients: Coefficients,
}

impl Default for PsoSection {
    fn default() -> Self {
        let p = PsoConfig::default();
        Self {
            swarm_size: p.swarm_size,
            c1: p.c1,
            c2: p.c2,
            inertia: p.inertia,
            x_min: p.x_min,
            x_max: p.x_max,
            v_max: p.v_max,
            max_iterations: p.max_iterations,
            coefficients: p.coefficients,
        }
    }
}

impl PsoSection {
    pub fn to_pso(&self, dim: usize, seed: u64) -> PsoConfig {
        PsoConfig {
            swarm_size: self.swarm_size,
            dim,
            c1: self.c1,
            c2: self.c2,
            inertia: self.inertia,
            x_min: self.x_min,
            x_max: self.x_max,
            v_max: self.v_max,
            max_iterations: self.max_iterations,
            seed,
            coefficients: self.coefficients,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForecastSection {
    pub horizon: usize,
    pub short_labels: bool,
}

impl Default for ForecastSection {
    fn default() -> Self {
        Self {
            horizon: 4,
            short_labels: false,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| Error::Config {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn columns(&self) -> Vec<Column> {
        if self.data.columns.is_empty() {
            Column::ALL.to_vec()
        } else {
            self.data.columns.clone()
        }
    }

    /// The pipeline config for training; the PSO dimension is filled in from
    /// the topology and the whole thing is validated.
    pub fn pipeline(&self) -> Result<PipelineConfig> {
        let mut config = PipelineConfig {
            window: self.network.window,
            hidden_layers: self.network.hidden_layers.clone(),
            hidden_transfer: self.network.hidden_transfer,
            output_transfer: self.network.output_transfer,
            normalization: self.normalization.method,
            low: self.normalization.low,
            high: self.normalization.high,
            pso: self.pso.to_pso(1, self.seed),
            holdout: self.data.holdout,
        };
        config.pso = config.effective_pso()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.pipeline()?;
        if self.forecast.horizon == 0 {
            return Err(swarmcast_core::Error::ZeroHorizon.into());
        }
        if self.threads == Some(0) {
            return Err(Error::Usage("threads must be at least 1".into()));
        }
        Ok(())
    }
}
