//! Per-column run manifests: everything needed to replay a training run
//! bit-exactly and to forecast from it without the original files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use swarmcast_core::{
    error_reduction, forecast_report, train_with, Column, MarketDataset, Metrics, PipelineConfig,
    TrainedModel, TrainingRun, WeightVector,
};

use crate::error::{Error, Result};
use crate::parallel::Threaded;

pub const FORMAT: &str = "swarmcast-manifest/1";
pub const STOP_RULE: &str = "stop once t >= max_iterations";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub format: String,
    pub column: Column,
    pub data_path: PathBuf,
    pub stop_rule: String,
    /// Pipeline config as used, with the PSO dimension and seed resolved.
    pub config: PipelineConfig,
    pub seed: u64,
    pub horizon: usize,
    pub dataset: MarketDataset,
    pub model: TrainedModel,
    /// Mean MSE of the initial swarm positions.
    pub initial_mean_fitness: f64,
    pub error_reduction_percent: f64,
    pub holdout_metrics: Option<Metrics>,
}

impl Manifest {
    pub fn from_run(
        data_path: &Path,
        dataset: &MarketDataset,
        config: &PipelineConfig,
        horizon: usize,
        run: &TrainingRun,
    ) -> Result<Self> {
        let series = dataset.column(run.model.column);
        // holdout metrics need the report; the predictions themselves are
        // regenerated by the forecast command
        let report = forecast_report(&run.model, &series, horizon, config)?;
        let initial = run.mean_initial_fitness();
        Ok(Self {
            format: FORMAT.into(),
            column: run.model.column,
            data_path: data_path.to_path_buf(),
            stop_rule: STOP_RULE.into(),
            config: config.clone(),
            seed: config.pso.seed,
            horizon,
            dataset: dataset.clone(),
            model: run.model.clone(),
            initial_mean_fitness: initial,
            error_reduction_percent: error_reduction(initial, run.model.training_fitness)?,
            holdout_metrics: report.holdout_metrics,
        })
    }

    pub fn file_name(column: Column) -> String {
        format!("manifest_{column}.json")
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str, path: &Path) -> Result<Self> {
        let bad = |msg: String| Error::Manifest {
            path: path.to_path_buf(),
            source: serde::de::Error::custom(msg),
        };
        let manifest: Self = serde_json::from_str(text).map_err(|source| Error::Manifest {
            path: path.to_path_buf(),
            source,
        })?;
        if manifest.format != FORMAT {
            return Err(bad(format!("unsupported format {:?}", manifest.format)));
        }
        let model = &manifest.model;
        if model.column != manifest.column {
            return Err(bad(format!(
                "model column {} differs from manifest column {}",
                model.column, manifest.column
            )));
        }
        let topology = manifest.config.topology()?;
        if topology != model.topology || model.window != topology.inputs() {
            return Err(bad("model topology does not match the config".into()));
        }
        WeightVector::new(&topology, model.weights.as_slice().to_vec())?;
        if manifest.config.effective_pso()? != manifest.config.pso {
            return Err(bad("PSO dimension does not match the topology".into()));
        }
        if manifest.horizon == 0 {
            return Err(swarmcast_core::Error::ZeroHorizon.into());
        }
        Ok(manifest)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text, path)
    }

    /// Retrains from the embedded dataset and config.
    pub fn replay(&self, evaluator: &Threaded) -> Result<TrainingRun> {
        Ok(train_with(
            &self.dataset,
            self.column,
            &self.config,
            evaluator,
        )?)
    }
}
