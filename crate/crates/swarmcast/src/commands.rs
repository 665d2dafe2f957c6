//! The work behind each subcommand. Data goes to files or `out`; the caller
//! decides what to do with errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use swarmcast_core::pso::{optimize_with, Swarm};
use swarmcast_core::{
    apply_error_offset, forecast_recursive, train_with, Benchmark, Column, MarketDataset, Optimum,
    PsoConfig,
};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::labels::{continue_labels, LabelStyle};
use crate::manifest::Manifest;
use crate::ohlc_csv::{self, column_slot, ForecastRow};
use crate::parallel::Threaded;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn say(out: &mut dyn Write, line: std::fmt::Arguments<'_>) -> Result<()> {
    out.write_fmt(line)
        .and_then(|_| out.write_all(b"\n"))
        .map_err(|e| Error::io("<stdout>", e))
}

pub fn load_dataset(path: &Path) -> Result<MarketDataset> {
    ohlc_csv::parse_dataset(&read(path)?)
}

/// `iteration,gbest_fitness`, one row per history entry.
pub fn history_csv(history: &[f64]) -> String {
    let mut text = String::from("iteration,gbest_fitness\n");
    for (t, f) in history.iter().enumerate() {
        text.push_str(&format!("{t},{f:e}\n"));
    }
    text
}

/// Prints the dataset summary; range warnings go to `warn`.
pub fn validate(path: &Path, out: &mut dyn Write, warn: &mut dyn Write) -> Result<MarketDataset> {
    let dataset = load_dataset(path)?;
    say(
        out,
        format_args!(
            "{} records, {} to {}",
            dataset.len(),
            dataset.first().month,
            dataset.last().month
        ),
    )?;
    for column in Column::ALL {
        let values = dataset.column(column);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        say(out, format_args!("{column:<5} min {min:.2} max {max:.2}"))?;
    }
    for w in dataset.warnings() {
        say(warn, format_args!("warning: {w}"))?;
    }
    Ok(dataset)
}

/// Trains every configured column and writes `manifest_{column}.json` and
/// `history_{column}.csv` under `config.out`. Returns the manifest paths.
pub fn train(config: &RunConfig, out: &mut dyn Write) -> Result<Vec<PathBuf>> {
    config.validate()?;
    let pipeline = config.pipeline()?;
    let dataset = load_dataset(&config.data.path)?;
    let evaluator = Threaded::new(config.threads).map_err(|e| Error::Usage(e.to_string()))?;

    let mut paths = Vec::new();
    for column in config.columns() {
        let run = train_with(&dataset, column, &pipeline, &evaluator)?;
        let manifest = Manifest::from_run(
            &config.data.path,
            &dataset,
            &pipeline,
            config.forecast.horizon,
            &run,
        )?;
        let path = config.out.join(Manifest::file_name(column));
        write(&path, &manifest.to_json())?;
        write(
            &config.out.join(format!("history_{column}.csv")),
            &history_csv(&run.history),
        )?;
        say(
            out,
            format_args!(
                "{column}: training mse {:e} (initial mean {:e}, reduction {:.2}%) -> {}",
                run.model.training_fitness,
                manifest.initial_mean_fitness,
                manifest.error_reduction_percent,
                path.display()
            ),
        )?;
        paths.push(path);
    }
    Ok(paths)
}

/// Forecasts `horizon` months past the end of the embedded dataset from one
/// or more manifests (at most one per column) and writes `forecast.csv`.
/// With `horizon = None` the manifests' own horizon is used.
pub fn forecast(
    manifests: &[PathBuf],
    horizon: Option<usize>,
    style: LabelStyle,
    out_dir: &Path,
    out: &mut dyn Write,
) -> Result<PathBuf> {
    if manifests.is_empty() {
        return Err(Error::Usage("no manifests to forecast from".into()));
    }
    let loaded = manifests
        .iter()
        .map(|p| Manifest::load(p))
        .collect::<Result<Vec<_>>>()?;
    let first = &loaded[0];
    for (m, path) in loaded.iter().zip(manifests).skip(1) {
        if m.dataset != first.dataset {
            return Err(Error::Usage(format!(
                "{} was trained on different data than {}",
                path.display(),
                manifests[0].display()
            )));
        }
    }
    let mut columns: Vec<Column> = loaded.iter().map(|m| m.column).collect();
    columns.sort();
    if columns.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Usage(
            "more than one manifest for the same column".into(),
        ));
    }

    let horizon = match horizon {
        Some(h) => h,
        None if loaded.iter().all(|m| m.horizon == first.horizon) => first.horizon,
        None => {
            return Err(Error::Usage(
                "manifests disagree on the horizon; pass --horizon".into(),
            ))
        }
    };
    if horizon == 0 {
        return Err(swarmcast_core::Error::ZeroHorizon.into());
    }

    let labels = continue_labels(&first.dataset.last().month, horizon, style)?;
    let mut rows: Vec<ForecastRow> = labels
        .into_iter()
        .map(|month| ForecastRow {
            month,
            values: [None; 4],
        })
        .collect();
    for m in &loaded {
        let predictions = forecast_recursive(&m.model, &m.dataset.column(m.column), horizon)?;
        for (row, value) in rows.iter_mut().zip(predictions) {
            row.values[column_slot(m.column)] = Some(value);
        }
    }

    let path = out_dir.join("forecast.csv");
    write(&path, &ohlc_csv::write_forecast(&first.dataset, &rows))?;
    say(
        out,
        format_args!("{} forecast rows -> {}", rows.len(), path.display()),
    )?;
    Ok(path)
}

/// Minimizes a benchmark function and, with `out_dir`, writes
/// `bench_{name}.csv`.
pub fn bench(
    function: Benchmark,
    config: &PsoConfig,
    threads: Option<usize>,
    out_dir: Option<&Path>,
    out: &mut dyn Write,
) -> Result<Optimum> {
    config.validate()?;
    let evaluator = Threaded::new(threads).map_err(|e| Error::Usage(e.to_string()))?;
    let optimum = optimize_with(config, &function, &evaluator, |_: &Swarm| {
        std::ops::ControlFlow::Continue(())
    })?;
    say(
        out,
        format_args!(
            "{function} D={} S={}: final gbest {:e} after {} iterations",
            config.dim,
            config.swarm_size,
            optimum.fitness,
            optimum.history.len() - 1
        ),
    )?;
    if let Some(dir) = out_dir {
        let path = dir.join(format!("bench_{function}.csv"));
        write(&path, &history_csv(&optimum.history))?;
        say(out, format_args!("history -> {}", path.display()))?;
    }
    Ok(optimum)
}

/// `Month,value_with_err_1,value_with_err_2,base` for a `Month,value` file.
pub fn error_table(base_csv: &str, e1: f64, e2: f64) -> Result<String> {
    if !e1.is_finite() || !e2.is_finite() {
        return Err(Error::Usage("error offsets must be finite".into()));
    }
    let rows = ohlc_csv::parse_base(base_csv)?;
    let mut text = String::from("Month,value_with_err_1,value_with_err_2,base\n");
    for (month, base) in rows {
        text.push_str(&format!(
            "{month},{:.2},{:.2},{base:.2}\n",
            apply_error_offset(base, e1),
            apply_error_offset(base, e2)
        ));
    }
    Ok(text)
}

pub fn error_table_file(
    base: &Path,
    e1: f64,
    e2: f64,
    out_dir: Option<&Path>,
    out: &mut dyn Write,
) -> Result<()> {
    let table = error_table(&read(base)?, e1, e2)?;
    match out_dir {
        Some(dir) => {
            let path = dir.join("error_table.csv");
            write(&path, &table)?;
            say(out, format_args!("error table -> {}", path.display()))
        }
        None => out
            .write_all(table.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_table_rows() {
        let table = error_table("Month,Open\nJan 15,20390.19\n", 0.4369, 0.3480).unwrap();
        assert_eq!(
            table,
            "Month,value_with_err_1,value_with_err_2,base\nJan 15,20390.62,20390.53,20390.19\n"
        );
        let table = error_table("Month,High\nJan 15,21379.63\n", 0.4369, 0.3480).unwrap();
        assert!(table.ends_with("Jan 15,21380.06,21379.97,21379.63\n"));
        let table = error_table("Month,High\nJan 15,21379.63\n", 0.0, 0.0).unwrap();
        assert!(table.ends_with("Jan 15,21379.63,21379.63,21379.63\n"));
        assert!(error_table("Month,High\nJan 15,oops\n", 0.1, 0.2).is_err());
        assert!(error_table("Month,High\nJan 15,1\n", f64::NAN, 0.2).is_err());
    }

    #[test]
    fn history_layout() {
        assert_eq!(
            history_csv(&[2.5, 0.125]),
            "iteration,gbest_fitness\n0,2.5e0\n1,1.25e-1\n"
        );
    }
}
