use rayon::prelude::*;

use crate::config::{ScenarioConfig, Value};
use crate::error::{ExperimentError, Result};
use crate::table::ResultTable;
use crate::{ensure_checks, run_point};

#[derive(Debug)]
pub struct PointOutcome {
    pub index: usize,
    pub assignments: Vec<(String, Value)>,
    /// The table, or why it could not be produced. A table whose checks
    /// failed is still `Ok`; see [`SweepReport::failures`].
    pub result: Result<ResultTable>,
}

impl PointOutcome {
    pub fn label(&self) -> String {
        if self.assignments.is_empty() {
            return "(no sweep)".into();
        }
        self.assignments
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Exit status and message for a failed point; failed checks count as
    /// validation failures.
    pub fn failure(&self) -> Option<(i32, String)> {
        let err = match &self.result {
            Err(e) => e,
            Ok(table) => return ensure_checks(table).err().map(|e| (e.exit_code(), e.to_string())),
        };
        Some((err.exit_code(), err.to_string()))
    }
}

#[derive(Debug)]
pub struct SweepReport {
    /// Ordered by sweep index.
    pub outcomes: Vec<PointOutcome>,
}

impl SweepReport {
    pub fn tables(&self) -> impl Iterator<Item = &ResultTable> {
        self.outcomes.iter().filter_map(|o| o.result.as_ref().ok())
    }

    /// `(index, exit status, message)` for every failed point.
    pub fn failures(&self) -> Vec<(usize, i32, String)> {
        self.outcomes
            .iter()
            .filter_map(|o| o.failure().map(|(code, msg)| (o.index, code, msg)))
            .collect()
    }

    pub fn summary(&self) -> String {
        let failures = self.failures();
        let mut s = format!("{} of {} sweep points succeeded", self.outcomes.len() - failures.len(), self.outcomes.len());
        for (i, _, msg) in &failures {
            s.push_str(&format!("\n  point {i} ({}): {msg}", self.outcomes[*i].label()));
        }
        s
    }

    /// Exit status of the first failing point, 0 if none failed.
    pub fn exit_code(&self) -> i32 {
        self.failures().first().map_or(0, |(_, code, _)| *code)
    }
}

/// Resolves every point up front, then runs them on `workers` threads
/// (`None` for one per core). A failing point does not stop the others.
pub fn run_sweep(config: &ScenarioConfig, workers: Option<usize>) -> Result<SweepReport> {
    let scenario = config.scenario()?;
    let points = config.resolve_all()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| ExperimentError::Config(format!("cannot start {workers:?} workers: {e}")))?;
    let outcomes = pool.install(|| {
        points
            .into_par_iter()
            .enumerate()
            .map(|(index, (assignments, params))| PointOutcome {
                index,
                result: run_point(scenario, &params),
                assignments,
            })
            .collect()
    });
    Ok(SweepReport { outcomes })
}
