//! Homogeneous-force model: two adversarial Kuramoto–Sakaguchi networks whose
//! collective phase lead and coherence set the lethality of a pair of scalar
//! Lanchester populations.
//!
//! State layout is `[θ_B (|B|), θ_R (|R|), p_B, p_R]`.

mod classical;
mod rhs;
mod run;

pub use classical::{
    classical_closed_form, classical_lanchester_rhs, run_classical, square_law_invariant,
};
pub(crate) use rhs::attrition;
pub use rhs::{global_rhs, GlobalRhs};
pub use run::{global_outcome, run_global, write_global_csv, GlobalObservables, GlobalRun};

use crate::error::{check_len, ModelError};
use crate::graphs::{EngagementMap, ForceGraph};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

pub const EPS1_DEFAULT: f64 = 1e-15;
pub const EPS2_DEFAULT: f64 = 1e-20;
/// Regulator inside the effort-gain attenuation `1 / (p/p0 + ε)`.
pub const EFFORT_GAIN_EPS: f64 = 1e-3;
const TANH_CLAMP: f64 = 50.0;

/// `[1 + tanh((x - eps1)/eps2)] / 2` with the tanh argument clamped to ±50,
/// which is exact in double precision and avoids overflow for tiny `eps2`.
pub fn smooth_heaviside(x: f64, eps1: f64, eps2: f64) -> f64 {
    let z = ((x - eps1) / eps2).clamp(-TANH_CLAMP, TANH_CLAMP);
    0.5 * (1.0 + z.tanh())
}

/// Kuramoto order parameter `|Σ e^{iθ}| / N`.
pub fn order_parameter(phases: &[f64]) -> Result<f64, ModelError> {
    if phases.is_empty() {
        return Err(ModelError::EmptyPhases);
    }
    Ok(coherence(phases).0)
}

/// Element-wise sine and cosine.
///
/// Kept as two separate passes on purpose: inside one loop the optimiser may
/// fuse some iterations into a `sincos` call and leave others as `sin` and
/// `cos`, and the two library paths can differ in the last bit. That would
/// make the result depend on where a phase sits in the state vector and
/// break exact Blue/Red mirror symmetry.
pub(crate) fn fill_sin_cos(phases: &[f64], sin: &mut [f64], cos: &mut [f64]) {
    for (s, &th) in sin.iter_mut().zip(phases) {
        *s = th.sin();
    }
    for (c, &th) in cos.iter_mut().zip(phases) {
        *c = th.cos();
    }
}

/// Order parameter and arithmetic mean phase (the centroid uses unwrapped
/// phases, not the argument of the mean phasor).
pub(crate) fn coherence(phases: &[f64]) -> (f64, f64) {
    let (mut c, mut s, mut sum) = (0.0, 0.0, 0.0);
    for &th in phases {
        c += th.cos();
        sum += th;
    }
    for &th in phases {
        s += th.sin();
    }
    let n = phases.len() as f64;
    ((c.hypot(s) / n).min(1.0), sum / n)
}

/// `(Ω_BR, Ω_RB) = (O_B (1 + sin Δ)/2, O_R (1 - sin Δ)/2)` with `Δ = Θ_B - Θ_R`.
pub fn organisational_factors(o_b: f64, o_r: f64, delta_br: f64) -> (f64, f64) {
    let s = delta_br.sin();
    (o_b * 0.5 * (1.0 + s), o_r * 0.5 * (1.0 - s))
}

/// `θ_j = -π/4 + (π/2)(j-1)/(N-1)`: equally spaced over a quarter turn.
pub fn sector_phases(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n)
            .map(|j| -FRAC_PI_4 + FRAC_PI_2 * j as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// How attrition feeds back into the inter-network coupling `ζ`.
/// The intra-network factor `f` is 1 in every mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feedback {
    #[default]
    None,
    /// `g = p / p0`: losses erode focus on the adversary.
    FocusLoss,
    /// `g = 1 / (p/p0 + 1e-3)`: losses provoke extra effort.
    EffortGain,
}

impl Feedback {
    pub fn g(self, p: f64, p0: f64) -> f64 {
        match self {
            Feedback::None => 1.0,
            Feedback::FocusLoss => p / p0,
            Feedback::EffortGain => 1.0 / (p / p0 + EFFORT_GAIN_EPS),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Feedback::None => "none",
            Feedback::FocusLoss => "focus_loss",
            Feedback::EffortGain => "effort_gain",
        }
    }
}

/// Complete specification of a homogeneous-force engagement.
#[derive(Debug, Clone)]
pub struct GlobalScenario {
    pub blue_graph: ForceGraph,
    pub red_graph: ForceGraph,
    pub engagement: EngagementMap,
    pub sigma_b: f64,
    pub sigma_r: f64,
    pub zeta_br: f64,
    pub zeta_rb: f64,
    pub phi_br: f64,
    pub phi_rb: f64,
    pub kappa_br: f64,
    pub kappa_rb: f64,
    pub omega_b: Vec<f64>,
    pub omega_r: Vec<f64>,
    pub theta0_b: Vec<f64>,
    pub theta0_r: Vec<f64>,
    pub p_b0: f64,
    pub p_r0: f64,
    pub feedback: Feedback,
    pub eps1: f64,
    pub eps2: f64,
}

impl GlobalScenario {
    pub fn n_blue(&self) -> usize {
        self.blue_graph.n()
    }

    pub fn n_red(&self) -> usize {
        self.red_graph.n()
    }

    pub fn dim(&self) -> usize {
        self.n_blue() + self.n_red() + 2
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let (nb, nr) = (self.n_blue(), self.n_red());
        if nb == 0 || nr == 0 {
            return Err(ModelError::InvalidParameter(
                "both forces need at least one node".into(),
            ));
        }
        check_len("engagement blue side", nb, self.engagement.n_blue())?;
        check_len("engagement red side", nr, self.engagement.n_red())?;
        check_len("omega_B", nb, self.omega_b.len())?;
        check_len("omega_R", nr, self.omega_r.len())?;
        check_len("theta0_B", nb, self.theta0_b.len())?;
        check_len("theta0_R", nr, self.theta0_r.len())?;
        let nonneg = [
            ("sigma_B", self.sigma_b),
            ("sigma_R", self.sigma_r),
            ("zeta_BR", self.zeta_br),
            ("zeta_RB", self.zeta_rb),
            ("kappa_BR", self.kappa_br),
            ("kappa_RB", self.kappa_rb),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(ModelError::InvalidParameter(format!(
                    "{name} = {v} must be >= 0"
                )));
            }
        }
        for (name, v) in [("p_B0", self.p_b0), ("p_R0", self.p_r0)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ModelError::InvalidParameter(format!(
                    "{name} = {v} must be > 0"
                )));
            }
        }
        for (name, v) in [("phi_BR", self.phi_br), ("phi_RB", self.phi_rb)] {
            if !(0.0..TAU).contains(&v) {
                return Err(ModelError::InvalidParameter(format!(
                    "{name} = {v} not in [0, 2π)"
                )));
            }
        }
        if !(self.eps1 > self.eps2 && self.eps2 > 0.0) {
            return Err(ModelError::InvalidParameter(format!(
                "need eps1 > eps2 > 0, got {} and {}",
                self.eps1, self.eps2
            )));
        }
        let all_finite = self
            .omega_b
            .iter()
            .chain(&self.omega_r)
            .chain(&self.theta0_b)
            .chain(&self.theta0_r)
            .all(|x| x.is_finite());
        if !all_finite {
            return Err(ModelError::InvalidParameter(
                "non-finite frequency or phase".into(),
            ));
        }
        Ok(())
    }

    pub fn initial_state(&self) -> Vec<f64> {
        let mut y = Vec::with_capacity(self.dim());
        y.extend_from_slice(&self.theta0_b);
        y.extend_from_slice(&self.theta0_r);
        y.push(self.p_b0);
        y.push(self.p_r0);
        y
    }

    /// Index of `p_B` in the state vector (`p_R` follows).
    pub fn population_offset(&self) -> usize {
        self.n_blue() + self.n_red()
    }

    /// Exchanges the roles of Blue and Red throughout.
    pub fn mirrored(&self) -> Self {
        Self {
            blue_graph: self.red_graph.clone(),
            red_graph: self.blue_graph.clone(),
            engagement: self.engagement.swapped(),
            sigma_b: self.sigma_r,
            sigma_r: self.sigma_b,
            zeta_br: self.zeta_rb,
            zeta_rb: self.zeta_br,
            phi_br: self.phi_rb,
            phi_rb: self.phi_br,
            kappa_br: self.kappa_rb,
            kappa_rb: self.kappa_br,
            omega_b: self.omega_r.clone(),
            omega_r: self.omega_b.clone(),
            theta0_b: self.theta0_r.clone(),
            theta0_r: self.theta0_b.clone(),
            p_b0: self.p_r0,
            p_r0: self.p_b0,
            feedback: self.feedback,
            eps1: self.eps1,
            eps2: self.eps2,
        }
    }
}
