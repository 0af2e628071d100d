//! Scenario bodies. Each takes fully resolved parameters and returns the
//! table columns, rows and the checks it performed.

pub mod gaussian;
pub mod qubit;

use crate::config::Params;
use crate::error::{ExperimentError, Result};
use crate::table::Check;

#[derive(Debug, Clone, PartialEq)]
pub struct Computed {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub checks: Vec<Check>,
}

/// Collects checks, keeping one entry per `(subject, quantity)` with the
/// worst value seen.
#[derive(Debug, Default)]
pub(crate) struct Checks(Vec<Check>);

impl Checks {
    fn slot(&mut self, subject: &str, quantity: &str, tolerance: f64) -> &mut Check {
        let pos = self.0.iter().position(|c| c.subject == subject && c.quantity == quantity);
        let i = pos.unwrap_or_else(|| {
            self.0.push(Check::new(subject, quantity, None, tolerance, true));
            self.0.len() - 1
        });
        &mut self.0[i]
    }

    /// Records a nonnegative deviation that must stay within `tolerance`.
    pub fn deviation(&mut self, subject: &str, quantity: &str, value: f64, tolerance: f64) {
        let c = self.slot(subject, quantity, tolerance);
        let worst = match c.value {
            Some(v) if !(value > v) && !value.is_nan() => v,
            _ => value,
        };
        c.value = Some(worst);
        c.passed &= worst <= tolerance;
    }

    pub fn flag(&mut self, subject: &str, quantity: &str, passed: bool, tolerance: f64) {
        self.slot(subject, quantity, tolerance).passed &= passed;
    }

    pub fn into_vec(self) -> Vec<Check> {
        self.0
    }
}

/// `n_collisions` defaults to `N_A` and may not exceed it.
pub(crate) fn settle_collisions(params: &mut Params) -> Result<()> {
    let n = params.count("n_ancillas");
    match params.opt_count("n_collisions") {
        None => params.set("n_collisions", crate::config::Value::Int(n as u64)),
        Some(m) if m > n => {
            return Err(ExperimentError::parameter(
                "n_collisions",
                format!("{m} collisions need at least {m} ancillas, N_A = {n}"),
            ))
        }
        Some(_) => {}
    }
    Ok(())
}

/// Maps a core error raised by a parameter-dependent constructor onto the
/// parameter that caused it.
pub(crate) fn blame(key: &str) -> impl Fn(homogen_core::Error) -> ExperimentError + '_ {
    move |e| match e {
        homogen_core::Error::InvalidParameter(_)
        | homogen_core::Error::TooManyCoefficients { .. }
        | homogen_core::Error::Domain(_)
        | homogen_core::Error::NotSymmetric { .. } => ExperimentError::parameter(key, e.to_string()),
        other => other.into(),
    }
}
