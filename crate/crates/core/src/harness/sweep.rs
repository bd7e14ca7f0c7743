use super::scenario::Scenario;
use super::{output_header, set_path, HarnessError, Tier};
use crate::error::{fmt_num, ModelError};
use crate::global::global_outcome;
use crate::integrate::{IntegrateError, IntegratorSettings};
use crate::networked::networked_outcome;
use crate::reduced::reduced_outcome;
use rayon::prelude::*;
use std::path::Path;

/// One sweep axis. `path` is a scenario key; `a+b` moves two keys together
/// (e.g. `zeta_BR+zeta_RB`).
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub path: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    /// Parses `path:min:max:steps`; `min`/`max` accept `pi` expressions.
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let bad = || HarnessError::Sweep(format!("axis {text:?}: expected path:min:max:steps"));
        let parts: Vec<&str> = text.split(':').collect();
        let [path, min, max, steps] = parts[..] else {
            return Err(bad());
        };
        let num = |s: &str| {
            super::parse_value(s)
                .as_float()
                .or_else(|| super::parse_value(s).as_integer().map(|i| i as f64))
        };
        Ok(Self {
            path: path.to_string(),
            min: num(min).ok_or_else(bad)?,
            max: num(max).ok_or_else(bad)?,
            steps: steps.parse().map_err(|_| bad())?,
        })
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.max
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.value(i)).collect()
    }

    fn keys(&self) -> impl Iterator<Item = &str> {
        self.path.split('+').map(str::trim)
    }

    fn describe(&self) -> String {
        format!(
            "{} in [{}, {}], {} steps",
            self.path, self.min, self.max, self.steps
        )
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub axis1: Axis,
    pub axis2: Axis,
    pub tier: Tier,
    pub base: Scenario,
    pub t_final: f64,
    pub workers: usize,
    /// Overrides the scenario's own integrator settings.
    pub settings: Option<IntegratorSettings>,
}

impl SweepSpec {
    pub fn new(base: Scenario, tier: Tier, axis1: Axis, axis2: Axis) -> Self {
        Self {
            t_final: base.t_final,
            axis1,
            axis2,
            tier,
            base,
            workers: 1,
            settings: None,
        }
    }

    fn validate(&self) -> Result<(), HarnessError> {
        let base = self.base.to_value();
        for ax in [&self.axis1, &self.axis2] {
            if ax.steps < 2 {
                return Err(HarnessError::Sweep(format!(
                    "{}: need at least 2 steps",
                    ax.path
                )));
            }
            if !(ax.min.is_finite() && ax.max.is_finite()) {
                return Err(HarnessError::Sweep(format!(
                    "{}: non-finite range",
                    ax.path
                )));
            }
            for key in ax.keys() {
                let mut v = base.clone();
                set_path(&mut v, key, toml::Value::Float(ax.min))?;
                Scenario::from_value(v, None)
                    .map_err(|e| HarnessError::Sweep(format!("axis path {key}: {e}")))?;
            }
        }
        if self.workers == 0 {
            return Err(HarnessError::Sweep("workers must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellResult {
    pub p_final: f64,
    /// `ok`, an integrator status label, or a failure category.
    pub status: &'static str,
}

impl CellResult {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

/// Row-major outcome grid: `cells[i * axis2.steps + j]` is axis1 value `i`,
/// axis2 value `j`.
#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub axis1: Axis,
    pub axis2: Axis,
    pub tier: Tier,
    pub cells: Vec<CellResult>,
    /// Output header lines (without trailing newline).
    pub header: String,
}

impl SweepGrid {
    pub fn cell(&self, i: usize, j: usize) -> &CellResult {
        &self.cells[i * self.axis2.steps + j]
    }

    pub fn p_final(&self, i: usize, j: usize) -> f64 {
        self.cell(i, j).p_final
    }

    /// Fraction of successful cells with `p_final > 0` and `< 0`.
    pub fn win_fractions(&self) -> (f64, f64) {
        let ok: Vec<f64> = self
            .cells
            .iter()
            .filter(|c| c.is_ok())
            .map(|c| c.p_final)
            .collect();
        let n = ok.len().max(1) as f64;
        (
            ok.iter().filter(|&&p| p > 0.0).count() as f64 / n,
            ok.iter().filter(|&&p| p < 0.0).count() as f64 / n,
        )
    }

    /// `axis1,axis2,p_final,status` preceded by the `#` header.
    pub fn to_csv(&self) -> String {
        let mut s = self.header.clone();
        s.push_str("axis1,axis2,p_final,status\n");
        for i in 0..self.axis1.steps {
            for j in 0..self.axis2.steps {
                let c = self.cell(i, j);
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt_num(self.axis1.value(i)),
                    fmt_num(self.axis2.value(j)),
                    fmt_num(c.p_final),
                    c.status
                ));
            }
        }
        s
    }
}

fn status_of(err: &HarnessError) -> &'static str {
    match err {
        HarnessError::Model(ModelError::Integrate(IntegrateError::Failed(st))) => st.label(),
        HarnessError::Model(ModelError::NonFinite { .. }) => "non_finite",
        HarnessError::Model(ModelError::InvalidParameter(_)) | HarnessError::Config(_) => "invalid",
        _ => "error",
    }
}

/// Outcome of one scenario on one tier.
pub fn outcome(
    scn: &Scenario,
    tier: Tier,
    t_final: f64,
    settings: &IntegratorSettings,
) -> Result<f64, HarnessError> {
    Ok(match tier {
        Tier::Global => global_outcome(&scn.global()?, t_final, settings)?,
        Tier::Reduced => reduced_outcome(&scn.global()?, t_final, settings)?,
        Tier::Networked => networked_outcome(&scn.networked()?, t_final, settings)?,
    })
}

fn run_cell(spec: &SweepSpec, base: &toml::Value, x1: f64, x2: f64) -> CellResult {
    let result = (|| {
        let mut v = base.clone();
        for key in spec.axis1.keys() {
            set_path(&mut v, key, toml::Value::Float(x1))?;
        }
        for key in spec.axis2.keys() {
            set_path(&mut v, key, toml::Value::Float(x2))?;
        }
        let scn = Scenario::from_value(v, spec.base.base_dir.clone())?;
        let settings = spec
            .settings
            .clone()
            .unwrap_or_else(|| scn.integrator_settings(spec.t_final));
        outcome(&scn, spec.tier, spec.t_final, &settings)
    })();
    match result {
        Ok(p_final) => CellResult {
            p_final,
            status: "ok",
        },
        Err(e) => CellResult {
            p_final: f64::NAN,
            status: status_of(&e),
        },
    }
}

/// Evaluates every cell of the grid on a pool of `workers` threads. Cells
/// are independent and written back by index, so the grid does not depend
/// on the worker count or on scheduling.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepGrid, HarnessError> {
    spec.validate()?;
    let base = spec.base.to_value();
    let (n1, n2) = (spec.axis1.steps, spec.axis2.steps);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| HarnessError::Sweep(format!("thread pool: {e}")))?;
    let cells: Vec<CellResult> = pool.install(|| {
        (0..n1 * n2)
            .into_par_iter()
            .map(|k| {
                run_cell(
                    spec,
                    &base,
                    spec.axis1.value(k / n2),
                    spec.axis2.value(k % n2),
                )
            })
            .collect()
    });
    let header = output_header(
        &spec.base,
        &[
            ("tier", spec.tier.name().to_string()),
            ("t_final", spec.t_final.to_string()),
            ("axis1", spec.axis1.describe()),
            ("axis2", spec.axis2.describe()),
        ],
    );
    Ok(SweepGrid {
        axis1: spec.axis1.clone(),
        axis2: spec.axis2.clone(),
        tier: spec.tier,
        cells,
        header,
    })
}

/// Self-contained matplotlib script for `grid.csv` in the same directory.
pub const PLOT_SCRIPT: &str = include_str!("plot_grid.py");

/// Writes `grid.csv` and `plot_grid.py` into `dir`.
pub fn emit_contour(grid: &SweepGrid, dir: impl AsRef<Path>) -> Result<(), HarnessError> {
    let dir = dir.as_ref();
    let io = |path: &Path| {
        let path = path.display().to_string();
        move |source| HarnessError::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let csv_path = dir.join("grid.csv");
    std::fs::write(&csv_path, grid.to_csv()).map_err(io(&csv_path))?;
    let script = dir.join("plot_grid.py");
    std::fs::write(&script, PLOT_SCRIPT).map_err(io(&script))?;
    Ok(())
}
