//! Adaptive explicit ODE integration shared by every model tier.
//!
//! The solver is the Dormand–Prince 5(4) embedded pair with PI step-size
//! control and its native quartic dense output. Output is sampled on an
//! equispaced grid over `[0, t_final]` through the interpolant, so the
//! internal step sequence never has to hit sample times.
//!
//! Extinction is handled by [`integrate_with_freeze`]: watched components
//! that reach their threshold are latched into a frozen set between accepted
//! steps, their derivatives are forced to zero from then on, and a step that
//! would carry a watched component below its threshold is retried at a size
//! that covers half the remaining (secant-estimated) distance. Once that size
//! drops under `h_min` the state is advanced by a single Euler step onto the
//! threshold and the group is frozen there. The smoothed Heaviside used by
//! the models is effectively a jump at zero population, so without this the
//! step controller would grind down to `h_min` at every extinction.
//!
//! Error control uses the max-norm of the mixed absolute/relative error. The
//! max-norm does not depend on component order, which keeps runs of
//! mirror-image scenarios bitwise mirror-symmetric.

mod dopri;
mod freeze;

pub use dopri::{integrate, integrate_until, integrate_with_freeze};
pub use freeze::{FreezeGroup, FreezeRules};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegrateError {
    #[error("invalid integrator settings: {0}")]
    InvalidSettings(String),
    #[error("initial state has {got} components, rhs expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("freeze group {group} refers to component {index} outside the state (len {len})")]
    FreezeIndex {
        group: usize,
        index: usize,
        len: usize,
    },
    #[error("integration failed: {0}")]
    Failed(Status),
}

/// Step-size and tolerance configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    /// Number of equispaced output samples, including `t = 0` and `t_final`.
    pub output_samples: usize,
    pub max_steps: u64,
}

impl IntegratorSettings {
    /// Defaults scaled to the integration span: rel 1e-8, abs 1e-10,
    /// 2000 samples, `h_min = 1e-12 * t_final`, at most 5e7 steps.
    pub fn for_span(t_final: f64) -> Self {
        let h_min = 1e-12 * t_final;
        let h_max = t_final / 10.0;
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            h_init: (1e-6 * t_final).clamp(h_min, h_max),
            h_min,
            h_max,
            output_samples: 2000,
            max_steps: 50_000_000,
        }
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_samples(mut self, output_samples: usize) -> Self {
        self.output_samples = output_samples;
        self
    }

    pub fn validate(&self, t_final: f64) -> Result<(), IntegrateError> {
        let bad = |msg: String| Err(IntegrateError::InvalidSettings(msg));
        if !(t_final.is_finite() && t_final > 0.0) {
            return bad(format!(
                "t_final must be positive and finite, got {t_final}"
            ));
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return bad(format!(
                "tolerances must be positive (rel {}, abs {})",
                self.rel_tol, self.abs_tol
            ));
        }
        if !(self.h_min > 0.0 && self.h_min <= self.h_init && self.h_init <= self.h_max) {
            return bad(format!(
                "need 0 < h_min <= h_init <= h_max, got {} / {} / {}",
                self.h_min, self.h_init, self.h_max
            ));
        }
        if self.output_samples < 2 {
            return bad("output_samples must be at least 2".into());
        }
        if self.max_steps == 0 {
            return bad("max_steps must be positive".into());
        }
        Ok(())
    }

    /// Time of output sample `k`.
    pub fn sample_time(&self, k: usize, t_final: f64) -> f64 {
        if k + 1 == self.output_samples {
            t_final
        } else {
            t_final * k as f64 / (self.output_samples - 1) as f64
        }
    }
}

/// Terminal condition of an integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Status {
    Completed,
    /// Stopped early because the halt predicate fired after a freeze event.
    Halted {
        t: f64,
    },
    StepUnderflow {
        t: f64,
        h: f64,
    },
    MaxSteps {
        t: f64,
    },
}

impl Status {
    pub fn is_success(&self) -> bool {
        matches!(self, Status::Completed | Status::Halted { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Status::Completed => "completed",
            Status::Halted { .. } => "halted",
            Status::StepUnderflow { .. } => "step_underflow",
            Status::MaxSteps { .. } => "max_steps",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Status::Completed => write!(f, "completed"),
            Status::Halted { t } => write!(f, "halted at t={t}"),
            Status::StepUnderflow { t, h } => {
                write!(
                    f,
                    "step underflow at t={t} (required step {h:e} below h_min)"
                )
            }
            Status::MaxSteps { t } => write!(f, "step budget exhausted at t={t}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreezeEvent {
    pub t: f64,
    pub group: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: u64,
    pub rejected: u64,
    /// Trial steps shortened to land on a freeze threshold.
    pub freeze_retries: u64,
    pub rhs_evals: u64,
}

/// Sampled solution of an initial value problem.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub status: Status,
    pub freeze_events: Vec<FreezeEvent>,
    /// Per freeze group, whether it ended frozen.
    pub frozen: Vec<bool>,
    pub stats: StepStats,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> &[f64] {
        self.states.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn last_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    /// Converts failure statuses into an error.
    pub fn into_success(self) -> Result<Self, IntegrateError> {
        if self.status.is_success() {
            Ok(self)
        } else {
            Err(IntegrateError::Failed(self.status))
        }
    }
}
