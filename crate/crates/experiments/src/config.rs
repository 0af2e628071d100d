//! Run configuration: a TOML file naming the model, the scenario, its
//! parameters and an optional sweep.
//!
//! ```toml
//! model = "qubit"
//! scenario = "fig3_population_dynamics"
//!
//! [parameters]
//! N_A = 16
//! k = 0.7
//!
//! [[sweep]]
//! parameter = "tau"
//! values = [0.1, 0.5, 1.0, 1.5]
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::catalog::{self, Scenario};
use crate::error::{ExperimentError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Qubit,
    Gaussian,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Qubit => "qubit",
            Self::Gaussian => "gaussian",
        })
    }
}

impl FromStr for Model {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qubit" => Ok(Self::Qubit),
            "gaussian" => Ok(Self::Gaussian),
            other => Err(ExperimentError::parameter(
                "model",
                format!("expected \"qubit\" or \"gaussian\", got \"{other}\""),
            )),
        }
    }
}

/// A validated parameter value. Lists are never empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(u64),
    Real(f64),
    Ints(Vec<u64>),
    Reals(Vec<f64>),
    Text(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

/// Real interval with optionally open ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    pub const ANY: Self = Self::closed(f64::NEG_INFINITY, f64::INFINITY);

    pub const fn closed(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    pub const fn above(lo: f64) -> Self {
        Self {
            lo,
            hi: f64::INFINITY,
            lo_open: true,
            hi_open: false,
        }
    }

    pub const fn at_least(lo: f64) -> Self {
        Self::closed(lo, f64::INFINITY)
    }

    pub fn contains(&self, x: f64) -> bool {
        let lo = if self.lo_open { x > self.lo } else { x >= self.lo };
        let hi = if self.hi_open { x < self.hi } else { x <= self.hi };
        x.is_finite() && lo && hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_open { '(' } else { '[' };
        let r = if self.hi_open || self.hi.is_infinite() { ')' } else { ']' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Kind {
    Count { min: u64, max: u64 },
    Real(Interval),
    /// A list of reals with `len` in the inclusive range; a bare number is
    /// accepted as a one-element list when `scalar_ok`.
    Reals {
        min_len: usize,
        max_len: usize,
        each: Interval,
        scalar_ok: bool,
    },
    Counts { min: u64, max: u64 },
    Choice(&'static [&'static str]),
    Path,
}

impl Kind {
    pub const fn count(min: u64) -> Self {
        Self::Count { min, max: u64::MAX }
    }

    pub const fn reals(min_len: usize, max_len: usize, each: Interval) -> Self {
        Self::Reals {
            min_len,
            max_len,
            each,
            scalar_ok: false,
        }
    }

    /// Checks and normalises a raw TOML value.
    pub fn parse(&self, key: &str, raw: &toml::Value) -> Result<Value> {
        let bad = |msg: String| ExperimentError::parameter(key, msg);
        let as_real = |v: &toml::Value| -> Option<f64> {
            match v {
                toml::Value::Float(x) => Some(*x),
                toml::Value::Integer(i) => Some(*i as f64),
                _ => None,
            }
        };
        let as_count = |v: &toml::Value, min: u64, max: u64| -> Result<u64> {
            let toml::Value::Integer(i) = v else {
                return Err(bad(format!("expected an integer, got {}", v.type_str())));
            };
            let i = u64::try_from(*i).map_err(|_| bad(format!("{i} is negative")))?;
            if i < min || i > max {
                return Err(bad(format!("{i} outside {min}..={max}")));
            }
            Ok(i)
        };
        match self {
            Self::Count { min, max } => Ok(Value::Int(as_count(raw, *min, *max)?)),
            Self::Real(range) => {
                let x = as_real(raw).ok_or_else(|| bad(format!("expected a number, got {}", raw.type_str())))?;
                if !range.contains(x) {
                    return Err(bad(format!("{x} outside {range}")));
                }
                Ok(Value::Real(x))
            }
            Self::Reals {
                min_len,
                max_len,
                each,
                scalar_ok,
            } => {
                let items: Vec<toml::Value> = match raw {
                    toml::Value::Array(a) => a.clone(),
                    v @ (toml::Value::Float(_) | toml::Value::Integer(_)) if *scalar_ok => vec![v.clone()],
                    v => return Err(bad(format!("expected a list of numbers, got {}", v.type_str()))),
                };
                if items.len() < *min_len || items.len() > *max_len {
                    return Err(bad(format!(
                        "expected {min_len}..={max_len} entries, got {}",
                        items.len()
                    )));
                }
                let mut out = Vec::with_capacity(items.len());
                for v in &items {
                    let x = as_real(v).ok_or_else(|| bad(format!("list entry {v} is not a number")))?;
                    if !each.contains(x) {
                        return Err(bad(format!("list entry {x} outside {each}")));
                    }
                    out.push(x);
                }
                Ok(Value::Reals(out))
            }
            Self::Counts { min, max } => {
                let toml::Value::Array(items) = raw else {
                    return Err(bad(format!("expected a list of integers, got {}", raw.type_str())));
                };
                if items.is_empty() {
                    return Err(bad("list is empty".into()));
                }
                Ok(Value::Ints(
                    items.iter().map(|v| as_count(v, *min, *max)).collect::<Result<_>>()?,
                ))
            }
            Self::Choice(options) => match raw {
                toml::Value::String(s) if options.contains(&s.as_str()) => Ok(Value::Text(s.clone())),
                v => Err(bad(format!("expected one of {options:?}, got {v}"))),
            },
            Self::Path => match raw {
                toml::Value::String(s) if !s.is_empty() => Ok(Value::Text(s.clone())),
                v => Err(bad(format!("expected a non-empty path string, got {v}"))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: Kind,
    pub default: Option<Value>,
    pub help: &'static str,
}

impl ParamSpec {
    pub fn new(name: &'static str, kind: Kind, default: Option<Value>, help: &'static str) -> Self {
        Self {
            name,
            kind,
            default,
            help,
        }
    }
}

/// Short spellings accepted in config files.
pub const ALIASES: &[(&str, &str)] = &[("N_A", "n_ancillas"), ("K", "decay_constant")];

pub fn canonical_key(key: &str) -> &str {
    ALIASES
        .iter()
        .find(|(alias, _)| *alias == key)
        .map_or(key, |(_, name)| name)
}

/// Fully resolved parameters of one run, defaults included.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Params {
    values: BTreeMap<String, Value>,
    explicit: BTreeSet<String>,
}

impl Params {
    pub fn values(&self) -> &BTreeMap<String, Value> {
        &self.values
    }

    pub fn contains(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    /// Whether the key was set in the config rather than defaulted.
    pub fn is_explicit(&self, key: &str) -> bool {
        self.explicit.contains(key)
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.values.insert(key.to_string(), value);
    }

    /// Drops a parameter that does not apply to this run, failing if the
    /// config set it.
    pub fn discard_unused(&mut self, key: &str, reason: &str) -> Result<()> {
        if self.is_explicit(key) {
            return Err(ExperimentError::parameter(key, format!("unused {reason}")));
        }
        self.values.remove(key);
        Ok(())
    }

    fn get(&self, key: &str) -> &Value {
        self.values
            .get(key)
            .unwrap_or_else(|| panic!("parameter `{key}` missing after resolution"))
    }

    pub fn count(&self, key: &str) -> usize {
        match self.get(key) {
            Value::Int(i) => *i as usize,
            v => panic!("parameter `{key}` is {v}, not an integer"),
        }
    }

    pub fn opt_count(&self, key: &str) -> Option<usize> {
        self.contains(key).then(|| self.count(key))
    }

    pub fn real(&self, key: &str) -> f64 {
        match self.get(key) {
            Value::Real(x) => *x,
            v => panic!("parameter `{key}` is {v}, not a number"),
        }
    }

    pub fn reals(&self, key: &str) -> &[f64] {
        match self.get(key) {
            Value::Reals(x) => x,
            v => panic!("parameter `{key}` is {v}, not a list of numbers"),
        }
    }

    pub fn counts(&self, key: &str) -> Vec<usize> {
        match self.get(key) {
            Value::Ints(x) => x.iter().map(|&i| i as usize).collect(),
            v => panic!("parameter `{key}` is {v}, not a list of integers"),
        }
    }

    pub fn text(&self, key: &str) -> &str {
        match self.get(key) {
            Value::Text(s) => s,
            v => panic!("parameter `{key}` is {v}, not a string"),
        }
    }

    pub fn opt_text(&self, key: &str) -> Option<&str> {
        self.contains(key).then(|| self.text(key))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub parameter: String,
    pub values: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub model: Model,
    pub scenario: String,
    /// Validated parameters under their canonical names.
    pub parameters: BTreeMap<String, Value>,
    pub sweep: Vec<SweepAxis>,
}

const TOP_LEVEL_KEYS: &[&str] = &["model", "scenario", "parameters", "sweep"];

impl ScenarioConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| ExperimentError::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| ExperimentError::Config(e.to_string()))?;
        if let Some(key) = table.keys().find(|k| !TOP_LEVEL_KEYS.contains(&k.as_str())) {
            return Err(ExperimentError::parameter(key.clone(), "unknown top-level key"));
        }
        let string_field = |key: &str| -> Result<&str> {
            match table.get(key) {
                Some(toml::Value::String(s)) => Ok(s),
                Some(v) => Err(ExperimentError::parameter(key, format!("expected a string, got {}", v.type_str()))),
                None => Err(ExperimentError::parameter(key, "missing")),
            }
        };
        let model: Model = string_field("model")?.parse()?;
        let name = string_field("scenario")?;
        let scenario = catalog::find(name)?;
        if scenario.model != model {
            return Err(ExperimentError::parameter(
                "model",
                format!("scenario {name} runs on the {} model, not {model}", scenario.model),
            ));
        }

        let mut parameters = BTreeMap::new();
        match table.get("parameters") {
            None => {}
            Some(toml::Value::Table(raw)) => {
                for (key, raw_value) in raw {
                    let canon = canonical_key(key);
                    let spec = lookup(scenario, key)?;
                    let value = spec.kind.parse(key, raw_value)?;
                    if parameters.insert(canon.to_string(), value).is_some() {
                        return Err(ExperimentError::parameter(key.clone(), "given twice (alias and full name)"));
                    }
                }
            }
            Some(v) => {
                return Err(ExperimentError::parameter("parameters", format!("expected a table, got {}", v.type_str())))
            }
        }

        let mut sweep = Vec::new();
        match table.get("sweep") {
            None => {}
            Some(toml::Value::Array(axes)) => {
                for axis in axes {
                    sweep.push(parse_axis(scenario, axis, &parameters, &sweep)?);
                }
            }
            Some(v) => {
                return Err(ExperimentError::parameter(
                    "sweep",
                    format!("expected an array of tables ([[sweep]]), got {}", v.type_str()),
                ))
            }
        }

        Ok(Self {
            model,
            scenario: name.to_string(),
            parameters,
            sweep,
        })
    }

    pub fn scenario(&self) -> Result<&'static Scenario> {
        catalog::find(&self.scenario)
    }

    pub fn has_sweep(&self) -> bool {
        !self.sweep.is_empty()
    }

    /// Cartesian product of the sweep axes, first axis slowest. A config
    /// without a sweep has exactly one point with no assignments.
    pub fn sweep_assignments(&self) -> Vec<Vec<(String, Value)>> {
        let mut points: Vec<Vec<(String, Value)>> = vec![Vec::new()];
        for axis in &self.sweep {
            points = points
                .into_iter()
                .flat_map(|prefix| {
                    axis.values.iter().map(move |v| {
                        let mut p = prefix.clone();
                        p.push((axis.parameter.clone(), v.clone()));
                        p
                    })
                })
                .collect();
        }
        points
    }

    /// Parameters for one point: config values, then sweep assignments, then
    /// defaults, followed by the scenario's cross-checks.
    pub fn resolve(&self, assignments: &[(String, Value)]) -> Result<Params> {
        let scenario = self.scenario()?;
        let mut params = Params::default();
        for (key, value) in self.parameters.iter().chain(assignments.iter().map(|(k, v)| (k, v))) {
            params.values.insert(key.clone(), value.clone());
            params.explicit.insert(key.clone());
        }
        for spec in &scenario.params {
            if let (false, Some(default)) = (params.contains(spec.name), &spec.default) {
                params.values.insert(spec.name.to_string(), default.clone());
            }
        }
        scenario.finish(&mut params)?;
        Ok(params)
    }

    /// Resolves every point, so that no computation starts on a config with
    /// a bad point anywhere in the sweep.
    pub fn resolve_all(&self) -> Result<Vec<(Vec<(String, Value)>, Params)>> {
        self.sweep_assignments()
            .into_iter()
            .map(|a| {
                let p = self.resolve(&a)?;
                Ok((a, p))
            })
            .collect()
    }
}

fn lookup<'a>(scenario: &'a Scenario, key: &str) -> Result<&'a ParamSpec> {
    let canon = canonical_key(key);
    scenario.params.iter().find(|p| p.name == canon).ok_or_else(|| {
        let known: Vec<&str> = scenario.params.iter().map(|p| p.name).collect();
        ExperimentError::parameter(
            key,
            format!("unknown parameter for scenario {} (accepted: {})", scenario.name, known.join(", ")),
        )
    })
}

fn parse_axis(
    scenario: &Scenario,
    axis: &toml::Value,
    parameters: &BTreeMap<String, Value>,
    previous: &[SweepAxis],
) -> Result<SweepAxis> {
    let toml::Value::Table(t) = axis else {
        return Err(ExperimentError::parameter("sweep", "each [[sweep]] entry must be a table"));
    };
    if let Some(key) = t.keys().find(|k| *k != "parameter" && *k != "values") {
        return Err(ExperimentError::parameter(format!("sweep.{key}"), "unknown key"));
    }
    let key = match t.get("parameter") {
        Some(toml::Value::String(s)) => s.as_str(),
        _ => return Err(ExperimentError::parameter("sweep.parameter", "missing or not a string")),
    };
    let spec = lookup(scenario, key)?;
    let canon = canonical_key(key);
    if spec.kind == Kind::Path {
        return Err(ExperimentError::parameter(key, "cannot be swept"));
    }
    if parameters.contains_key(canon) {
        return Err(ExperimentError::parameter(key, "set both in [parameters] and in a sweep"));
    }
    if previous.iter().any(|a| a.parameter == canon) {
        return Err(ExperimentError::parameter(key, "swept twice"));
    }
    let values = match t.get("values") {
        Some(toml::Value::Array(v)) if !v.is_empty() => v,
        _ => return Err(ExperimentError::parameter(format!("sweep.values for {key}"), "missing or empty")),
    };
    Ok(SweepAxis {
        parameter: canon.to_string(),
        values: values.iter().map(|v| spec.kind.parse(key, v)).collect::<Result<_>>()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_bounds() {
        assert!(Interval::above(1.0).contains(1.5));
        assert!(!Interval::above(1.0).contains(1.0));
        assert!(Interval::at_least(0.0).contains(0.0));
        assert!(!Interval::ANY.contains(f64::NAN));
        assert!(!Interval::ANY.contains(f64::INFINITY));
    }

    #[test]
    fn integers_accepted_as_reals() {
        let v = Kind::Real(Interval::ANY).parse("k", &toml::Value::Integer(2)).unwrap();
        assert_eq!(v, Value::Real(2.0));
        assert!(Kind::count(1).parse("n", &toml::Value::Float(2.0)).is_err());
        assert!(Kind::count(1).parse("n", &toml::Value::Integer(-3)).is_err());
    }

    #[test]
    fn scalar_promoted_to_list_when_allowed() {
        let kind = Kind::Reals {
            min_len: 1,
            max_len: 8,
            each: Interval::above(1.0),
            scalar_ok: true,
        };
        assert_eq!(kind.parse("K", &toml::Value::Float(10.0)).unwrap(), Value::Reals(vec![10.0]));
        assert!(kind.parse("K", &toml::Value::Float(0.5)).is_err());
        assert!(Kind::reals(1, 2, Interval::ANY).parse("z", &toml::Value::Float(1.0)).is_err());
    }

    #[test]
    fn value_json_is_stable() {
        let v = Value::Reals(vec![1.0, 0.1]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(serde_json::from_str::<Value>(&s).unwrap(), v);
        assert_eq!(serde_json::from_str::<Value>("3").unwrap(), Value::Int(3));
        assert_eq!(serde_json::from_str::<Value>("3.0").unwrap(), Value::Real(3.0));
    }
}
