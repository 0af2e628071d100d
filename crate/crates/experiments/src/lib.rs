//! Scenario runner for the homogen engines: TOML configs in, CSV tables and
//! gnuplot scripts out.

pub mod catalog;
pub mod config;
pub mod error;
pub mod scenarios;
pub mod sweep;
pub mod table;

use std::path::{Path, PathBuf};

pub use catalog::Scenario;
pub use config::{Model, Params, ScenarioConfig, Value};
pub use error::{ExperimentError, Result};
pub use sweep::{run_sweep, SweepReport};
pub use table::{Check, Metadata, ResultTable};

/// Runs one resolved parameter set.
pub fn run_point(scenario: &Scenario, params: &Params) -> Result<ResultTable> {
    let computed = scenario.compute(params)?;
    let metadata = Metadata::new(
        scenario.name,
        scenario.model,
        scenario.target,
        params.values().clone(),
        computed.checks,
    );
    let mut table = ResultTable::new(computed.columns, metadata);
    for row in computed.rows {
        table.push_row(row);
    }
    Ok(table)
}

/// Runs a config without a sweep. Failed checks are reported in the
/// metadata; see [`ensure_checks`].
pub fn run_scenario(config: &ScenarioConfig) -> Result<ResultTable> {
    if config.has_sweep() {
        return Err(ExperimentError::Config("config defines a sweep; run it with `homogen sweep`".into()));
    }
    let params = config.resolve(&[])?;
    run_point(config.scenario()?, &params)
}

pub fn ensure_checks(table: &ResultTable) -> Result<()> {
    let failed: Vec<String> = table
        .metadata
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| match c.value {
            Some(v) => format!("{} {} = {v:e} (tolerance {:e})", c.subject, c.quantity, c.tolerance),
            None => format!("{} {} (tolerance {:e})", c.subject, c.quantity, c.tolerance),
        })
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(ExperimentError::Validation(failed.join("; ")))
    }
}

/// `output_dir/<output or scenario>.csv`, with `_<index>` before the
/// extension for sweep points.
pub fn output_path(output_dir: &Path, table: &ResultTable, index: Option<usize>) -> PathBuf {
    let given = match table.metadata.parameters.get("output") {
        Some(Value::Text(s)) => PathBuf::from(s),
        _ => PathBuf::from(format!("{}.csv", table.metadata.scenario)),
    };
    let path = if given.is_absolute() { given } else { output_dir.join(given) };
    match index {
        None => path,
        Some(i) => {
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let ext = path.extension().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into());
            path.with_file_name(format!("{stem}_{i:03}.{ext}"))
        }
    }
}
