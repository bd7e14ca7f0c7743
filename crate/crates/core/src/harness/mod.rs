//! Scenario files, built-in use-cases, parameter sweeps and the invariant
//! suite behind the command-line tool.

mod scenario;
mod sweep;
mod usecases;
mod validate;

pub use scenario::{
    stream_seed, BuiltForces, EngagementSpec, ForceSpec, GraphSpec, IntegratorSpec, NodeValues,
    Scenario, SeedStream,
};
pub use sweep::{
    emit_contour, outcome, run_sweep, Axis, CellResult, SweepGrid, SweepSpec, PLOT_SCRIPT,
};
pub use usecases::{build_usecase, default_axes, usecase_toml, USECASE_IDS};
pub use validate::{check_invariants, random_scenario, InvariantReport};

use crate::error::ModelError;
use crate::graphs::GraphError;
use thiserror::Error;

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("scenario parse: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("scenario: {0}")]
    Config(String),
    #[error("override: {0}")]
    Override(String),
    #[error("unknown use-case {0} (expected 1, 2 or 3)")]
    UnknownUseCase(u32),
    #[error("sweep: {0}")]
    Sweep(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl HarnessError {
    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            HarnessError::Parse(_) | HarnessError::Config(_) => "scenario",
            HarnessError::Override(_) => "override",
            HarnessError::UnknownUseCase(_) => "usecase",
            HarnessError::Sweep(_) => "sweep",
            HarnessError::Io { .. } => "io",
            HarnessError::Model(ModelError::Integrate(_)) => "integrate",
            HarnessError::Model(_) => "model",
            HarnessError::Graph(_) => "graph",
        }
    }
}

/// Model tier a run or sweep uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tier {
    Global,
    Reduced,
    Networked,
}

impl Tier {
    pub const ALL: [Tier; 3] = [Tier::Global, Tier::Reduced, Tier::Networked];

    pub fn name(self) -> &'static str {
        match self {
            Tier::Global => "global",
            Tier::Reduced => "reduced",
            Tier::Networked => "networked",
        }
    }
}

impl std::str::FromStr for Tier {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tier::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown tier {s:?} (expected global, reduced or networked)"))
    }
}

/// Parses an override value: a number, a `pi` expression (`pi`, `pi/2`,
/// `3*pi/4`, `-pi/6`), any TOML value, or else a bare string.
pub fn parse_value(raw: &str) -> toml::Value {
    if let Ok(i) = raw.parse::<i64>() {
        return toml::Value::Integer(i);
    }
    if let Ok(x) = raw.parse::<f64>() {
        return toml::Value::Float(x);
    }
    if let Some(x) = parse_pi(raw) {
        return toml::Value::Float(x);
    }
    if let Ok(t) = format!("v = {raw}").parse::<toml::Table>() {
        if let Some(v) = t.get("v") {
            return v.clone();
        }
    }
    toml::Value::String(raw.to_string())
}

fn parse_pi(raw: &str) -> Option<f64> {
    let s: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b.parse::<f64>().ok()?),
        None => (s.as_str(), 1.0),
    };
    let (sign, num) = match num.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, num),
    };
    let coeff = match num {
        "pi" | "π" => 1.0,
        _ => num
            .strip_suffix("*pi")
            .or_else(|| num.strip_suffix("*π"))?
            .parse::<f64>()
            .ok()?,
    };
    Some(sign * coeff * std::f64::consts::PI / den)
}

/// Keys a scenario may omit, so an override may create them.
const OPTIONAL_KEYS: &[&str] = &["extinction_threshold", "rel_tol", "abs_tol", "output_samples", "mean"];

/// Sets a dotted path (`sigma_B`, `blue.omega`, `integrator.rel_tol`) in a
/// scenario table. The path must already exist unless its parent is a table
/// that accepts optional keys (`integrator`, `extinction_threshold`).
/// Integers written into float slots are promoted.
pub fn set_path(
    root: &mut toml::Value,
    path: &str,
    value: toml::Value,
) -> Result<(), HarnessError> {
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(HarnessError::Override(format!("malformed path {path:?}")));
    }
    let (last, parents) = keys.split_last().expect("split yields at least one key");
    let mut cur = root;
    for k in parents {
        let table = cur
            .as_table_mut()
            .ok_or_else(|| HarnessError::Override(format!("{path}: {k} is not inside a table")))?;
        if !table.contains_key(*k) && *k == "integrator" {
            table.insert("integrator".into(), toml::Value::Table(toml::Table::new()));
        }
        cur = table
            .get_mut(*k)
            .ok_or_else(|| HarnessError::Override(format!("unknown key {k:?} in {path}")))?;
    }
    let table = cur
        .as_table_mut()
        .ok_or_else(|| HarnessError::Override(format!("{path}: parent is not a table")))?;
    if !table.contains_key(*last) && !OPTIONAL_KEYS.contains(last) {
        return Err(HarnessError::Override(format!("unknown key {last:?} in {path}")));
    }
    let value = match (table.get(*last), value) {
        (Some(toml::Value::Float(_)), toml::Value::Integer(i)) => toml::Value::Float(i as f64),
        (_, v) => v,
    };
    table.insert(last.to_string(), value);
    Ok(())
}

/// Header lines (`# key: value`) stamped on every output file.
pub fn output_header(scn: &Scenario, extra: &[(&str, String)]) -> String {
    let mut s = format!(
        "# tool: {TOOL_VERSION}\n# scenario: {}\n# seed: {}\n# scenario_hash: {}\n",
        scn.name,
        scn.seed,
        scn.hash()
    );
    for (k, v) in extra {
        s.push_str(&format!("# {k}: {v}\n"));
    }
    s
}
