//! Column-wise forecasting pipeline: normalize, window, train a network with
//! PSO against windowed MSE, then forecast recursively.

mod evaluation;

pub use evaluation::{
    apply_error_offset, bayes_posterior, error_reduction, metrics, truncate_cents, Metrics,
};

use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::market_data::{make_windows, Column, MarketDataset, TrainingWindow};
use crate::neural_net::{NetworkTopology, Scratch, Transfer, WeightVector};
use crate::normalize::{Method, NormalizationSpec};
use crate::pso::{self, Evaluator, Fitness, PsoConfig, Sequential, Swarm};

/// Everything that shapes one training run.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PipelineConfig {
    /// Number of past values fed to the network.
    pub window: usize,
    pub hidden_layers: Vec<usize>,
    pub hidden_transfer: Transfer,
    pub output_transfer: Transfer,
    pub normalization: Method,
    /// Range bounds for the range-based normalization methods.
    pub low: f64,
    pub high: f64,
    /// `dim` is overwritten with the network dimension when training.
    pub pso: PsoConfig,
    /// Trailing points withheld from training and scored afterwards.
    pub holdout: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            window: 4,
            hidden_layers: vec![8],
            hidden_transfer: Transfer::Sigmoid,
            output_transfer: Transfer::Linear,
            normalization: Method::Symmetric,
            low: 0.1,
            high: 0.9,
            pso: PsoConfig::default(),
            holdout: 0,
        }
    }
}

impl PipelineConfig {
    /// `[window, hidden..., 1]` with the configured transfers.
    pub fn topology(&self) -> Result<NetworkTopology> {
        if self.window == 0 {
            return Err(Error::InvalidTopology("window must be at least 1"));
        }
        let mut sizes = Vec::with_capacity(self.hidden_layers.len() + 2);
        sizes.push(self.window);
        sizes.extend_from_slice(&self.hidden_layers);
        sizes.push(1);
        NetworkTopology::new(sizes, self.hidden_transfer, self.output_transfer)
    }

    /// The swarm config actually used: `dim` set from the topology.
    pub fn effective_pso(&self) -> Result<PsoConfig> {
        let pso = PsoConfig {
            dim: self.topology()?.dimension(),
            ..self.pso.clone()
        };
        pso.validate()?;
        Ok(pso)
    }
}

/// Mean squared one-step error of the network `position` over `windows`.
pub fn fitness_mse(
    position: &[f64],
    topology: &NetworkTopology,
    windows: &[TrainingWindow],
) -> Result<f64> {
    if windows.is_empty() {
        return Err(Error::EmptyWindows);
    }
    let mut scratch = Scratch::new(topology);
    let mut total = 0.0;
    for window in windows {
        let out = topology.forward_with(position, &window.inputs, &mut scratch)?;
        let e = out[0] - window.target;
        total += e * e;
    }
    Ok(total / windows.len() as f64)
}

/// [`fitness_mse`] packaged as a PSO objective over a fixed window set.
#[derive(Debug, Clone)]
pub struct MseFitness<'a> {
    topology: &'a NetworkTopology,
    windows: &'a [TrainingWindow],
}

impl<'a> MseFitness<'a> {
    pub fn new(topology: &'a NetworkTopology, windows: &'a [TrainingWindow]) -> Result<Self> {
        if windows.is_empty() {
            return Err(Error::EmptyWindows);
        }
        Ok(Self { topology, windows })
    }
}

impl Fitness for MseFitness<'_> {
    fn evaluate(&self, position: &[f64]) -> f64 {
        // a malformed position scores NaN, which the swarm reports as non-finite
        fitness_mse(position, self.topology, self.windows).unwrap_or(f64::NAN)
    }
}

/// A trained network plus what is needed to feed it and read it back.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrainedModel {
    pub column: Column,
    pub window: usize,
    pub topology: NetworkTopology,
    pub weights: WeightVector,
    pub spec: NormalizationSpec,
    /// Final global-best MSE in normalized units.
    pub training_fitness: f64,
}

/// A trained model together with the optimizer trace that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingRun {
    pub model: TrainedModel,
    /// Global-best fitness after initialization and after each step.
    pub history: Vec<f64>,
    /// Fitness of every particle's initial position.
    pub initial_fitness: Vec<f64>,
}

impl TrainingRun {
    pub fn mean_initial_fitness(&self) -> f64 {
        self.initial_fitness.iter().sum::<f64>() / self.initial_fitness.len() as f64
    }
}

/// Training portion of a column, normalization and windows, as used by [`train`].
pub struct PreparedData {
    pub topology: NetworkTopology,
    pub spec: NormalizationSpec,
    pub windows: Vec<TrainingWindow>,
}

pub fn prepare(series: &[f64], column: Column, config: &PipelineConfig) -> Result<PreparedData> {
    let topology = config.topology()?;
    let usable = series.len().saturating_sub(config.holdout);
    let needed = config.window + 1;
    if usable < needed {
        return Err(Error::TooShortSeries {
            column,
            len: usable,
            window: config.window,
            needed,
        });
    }
    let train = &series[..usable];
    let spec = NormalizationSpec::fit(train, config.normalization, config.low, config.high)?;
    let normalized: Vec<f64> = train.iter().map(|&y| spec.normalize(y)).collect();
    Ok(PreparedData {
        topology,
        spec,
        windows: make_windows(&normalized, config.window),
    })
}

pub fn train(
    dataset: &MarketDataset,
    column: Column,
    config: &PipelineConfig,
) -> Result<TrainedModel> {
    train_with(dataset, column, config, &Sequential).map(|run| run.model)
}

/// Trains one column. Deterministic for a given `config.pso.seed` whatever
/// the evaluator, as long as it scores every particle.
pub fn train_with<E>(
    dataset: &MarketDataset,
    column: Column,
    config: &PipelineConfig,
    evaluator: &E,
) -> Result<TrainingRun>
where
    E: for<'a> Evaluator<MseFitness<'a>> + ?Sized,
{
    let series = dataset.column(column);
    let data = prepare(&series, column, config)?;
    let pso_config = config.effective_pso()?;
    let fitness = MseFitness::new(&data.topology, &data.windows)?;

    let mut initial_fitness = Vec::new();
    let optimum = pso::optimize_with(&pso_config, &fitness, evaluator, |swarm: &Swarm| {
        if swarm.iteration == 0 {
            initial_fitness = swarm.particles.iter().map(|p| p.pbest_fitness).collect();
        }
        ControlFlow::Continue(())
    })?;

    let weights = WeightVector::new(&data.topology, optimum.position)?;
    Ok(TrainingRun {
        model: TrainedModel {
            column,
            window: config.window,
            topology: data.topology,
            weights,
            spec: data.spec,
            training_fitness: optimum.fitness,
        },
        history: optimum.history,
        initial_fitness,
    })
}

/// Iterated one-step forecast: each prediction is appended to the working
/// series and becomes an input for the next step. Returns prices.
pub fn forecast_recursive(
    model: &TrainedModel,
    series: &[f64],
    horizon: usize,
) -> Result<Vec<f64>> {
    if horizon == 0 {
        return Err(Error::ZeroHorizon);
    }
    if series.len() < model.window {
        return Err(Error::Shape {
            what: "forecast seed series",
            expected: model.window,
            actual: series.len(),
        });
    }
    let mut inputs: Vec<f64> = series[series.len() - model.window..]
        .iter()
        .map(|&y| model.spec.normalize(y))
        .collect();
    let mut scratch = Scratch::new(&model.topology);
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let next = model
            .topology
            .forward_with(model.weights.as_slice(), &inputs, &mut scratch)?[0];
        out.push(model.spec.denormalize(next));
        inputs.remove(0);
        inputs.push(next);
    }
    Ok(out)
}

/// Forecast of one column plus, when a holdout is configured, the error of
/// forecasting the held-out tail from the training portion.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ForecastReport {
    pub column: Column,
    pub horizon: usize,
    pub predictions: Vec<f64>,
    pub holdout_metrics: Option<Metrics>,
    pub config: PipelineConfig,
}

pub fn forecast_report(
    model: &TrainedModel,
    series: &[f64],
    horizon: usize,
    config: &PipelineConfig,
) -> Result<ForecastReport> {
    let predictions = forecast_recursive(model, series, horizon)?;
    let holdout_metrics = match config.holdout {
        0 => None,
        k => {
            let split = series.len().saturating_sub(k);
            let predicted = forecast_recursive(model, &series[..split], k)?;
            Some(metrics(&predicted, &series[split..])?)
        }
    };
    Ok(ForecastReport {
        column: model.column,
        horizon,
        predictions,
        holdout_metrics,
        config: config.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market_data::OhlcRecord;
    use alloc::format;

    fn identity_model(window: usize) -> TrainedModel {
        // linear net returning its most recent input
        let topology =
            NetworkTopology::new(vec![window, 1], Transfer::Linear, Transfer::Linear).unwrap();
        let mut w = vec![0.0; window + 1];
        w[window - 1] = 1.0;
        TrainedModel {
            column: Column::Close,
            window,
            weights: WeightVector::new(&topology, w).unwrap(),
            topology,
            spec: NormalizationSpec::new(Method::Symmetric, 100.0, 200.0, 0.0, 1.0).unwrap(),
            training_fitness: 0.0,
        }
    }

    fn dataset(closes: &[f64]) -> MarketDataset {
        let records = closes
            .iter()
            .enumerate()
            .map(|(i, &c)| OhlcRecord::new(format!("m{i}"), c, c + 1.0, c - 1.0, c))
            .collect();
        MarketDataset::new(records).unwrap()
    }

    fn tiny_config(window: usize, iterations: usize) -> PipelineConfig {
        PipelineConfig {
            window,
            hidden_layers: vec![],
            hidden_transfer: Transfer::Sigmoid,
            output_transfer: Transfer::Linear,
            pso: PsoConfig {
                max_iterations: iterations,
                seed: 5,
                ..PsoConfig::default()
            },
            ..PipelineConfig::default()
        }
    }

    #[test]
    fn mse_examples() {
        let t = NetworkTopology::new(vec![1, 1], Transfer::Linear, Transfer::Linear).unwrap();
        let windows = make_windows(&[2.0, 3.0], 1)
            .into_iter()
            .chain(make_windows(&[4.0, 4.0], 1))
            .collect::<Vec<_>>();
        assert_eq!(fitness_mse(&[1.0, 0.0], &t, &windows).unwrap(), 0.5);

        let perfect = make_windows(&[1.0, 1.0, 1.0], 1);
        assert_eq!(fitness_mse(&[1.0, 0.0], &t, &perfect).unwrap(), 0.0);

        let t = NetworkTopology::new(vec![2, 3, 1], Transfer::Sigmoid, Transfer::Linear).unwrap();
        let flat = make_windows(&[0.7, -0.1, 0.2, 0.2, 0.2], 2);
        let zero = vec![0.0; t.dimension()];
        assert!((fitness_mse(&zero, &t, &flat).unwrap() - 0.04).abs() < 1e-15);

        assert_eq!(fitness_mse(&zero, &t, &[]), Err(Error::EmptyWindows));
    }

    #[test]
    fn default_topology() {
        let t = PipelineConfig::default().topology().unwrap();
        assert_eq!(t.layer_sizes(), &[4, 8, 1]);
        assert_eq!(t.dimension(), 49);
        assert_eq!(PipelineConfig::default().effective_pso().unwrap().dim, 49);
    }

    #[test]
    fn identity_forecast_repeats_last_value() {
        let model = identity_model(3);
        let series = [120.0, 150.0, 173.25];
        assert_eq!(
            forecast_recursive(&model, &series, 5).unwrap(),
            vec![173.25; 5]
        );
    }

    #[test]
    fn one_step_is_forward_plus_denormalize() {
        let mut model = identity_model(2);
        model.weights = WeightVector::new(&model.topology, vec![0.25, 0.5, -0.1]).unwrap();
        let series = [110.0, 140.0, 190.0];
        let x: Vec<f64> = series[1..]
            .iter()
            .map(|&y| model.spec.normalize(y))
            .collect();
        let out = model
            .topology
            .forward(model.weights.as_slice(), &x)
            .unwrap()[0];
        assert_eq!(
            forecast_recursive(&model, &series, 1).unwrap(),
            vec![model.spec.denormalize(out)]
        );
        let four = forecast_recursive(&model, &series, 4).unwrap();
        assert_eq!(four.len(), 4);
        assert_eq!(four[0], model.spec.denormalize(out));
    }

    #[test]
    fn forecast_shape_errors() {
        let model = identity_model(3);
        assert_eq!(
            forecast_recursive(&model, &[1.0, 2.0, 3.0], 0),
            Err(Error::ZeroHorizon)
        );
        assert!(matches!(
            forecast_recursive(&model, &[1.0, 2.0], 1),
            Err(Error::Shape {
                expected: 3,
                actual: 2,
                ..
            })
        ));
    }

    #[test]
    fn too_short_series() {
        let ds = dataset(&[100.0, 110.0, 120.0]);
        let cfg = tiny_config(3, 5);
        assert_eq!(
            train(&ds, Column::Close, &cfg),
            Err(Error::TooShortSeries {
                column: Column::Close,
                len: 3,
                window: 3,
                needed: 4
            })
        );
        let cfg = PipelineConfig {
            holdout: 1,
            ..tiny_config(2, 5)
        };
        assert!(matches!(
            train(&ds, Column::Close, &cfg),
            Err(Error::TooShortSeries { len: 2, .. })
        ));
    }

    #[test]
    fn constant_column_is_degenerate() {
        let ds = dataset(&[100.0; 6]);
        assert!(matches!(
            train(&ds, Column::Close, &tiny_config(2, 5)),
            Err(Error::DegenerateSpec { .. })
        ));
    }

    #[test]
    fn training_is_seeded() {
        let ds = dataset(&[100.0, 130.0, 115.0, 160.0, 150.0, 170.0, 140.0, 190.0]);
        let cfg = tiny_config(2, 40);
        let a = train(&ds, Column::Close, &cfg).unwrap();
        let b = train(&ds, Column::Close, &cfg).unwrap();
        assert_eq!(a, b);
        let other = PipelineConfig {
            pso: PsoConfig {
                seed: 6,
                ..cfg.pso.clone()
            },
            ..cfg
        };
        assert_ne!(
            a.weights,
            train(&ds, Column::Close, &other).unwrap().weights
        );
    }

    #[test]
    fn training_never_worse_than_initial_swarm() {
        let ds = dataset(&[100.0, 130.0, 115.0, 160.0, 150.0, 170.0, 140.0, 190.0]);
        let run = train_with(&ds, Column::Close, &tiny_config(3, 30), &Sequential).unwrap();
        assert_eq!(run.initial_fitness.len(), 30);
        assert!(run
            .initial_fitness
            .iter()
            .all(|&f| run.model.training_fitness <= f));
        assert_eq!(run.history.len(), 31);
    }

    #[test]
    fn holdout_report_scores_tail() {
        let model = identity_model(2);
        let series = [120.0, 150.0, 160.0, 170.0];
        let cfg = PipelineConfig {
            holdout: 2,
            ..PipelineConfig::default()
        };
        let report = forecast_report(&model, &series, 3, &cfg).unwrap();
        assert_eq!(report.predictions, vec![170.0; 3]);
        // from [120, 150] the identity model predicts 150, 150 against 160, 170
        let m = report.holdout_metrics.unwrap();
        assert_eq!(m.mse, (100.0 + 400.0) / 2.0);

        let none = forecast_report(&model, &series, 1, &PipelineConfig::default()).unwrap();
        assert!(none.holdout_metrics.is_none());
    }
}
