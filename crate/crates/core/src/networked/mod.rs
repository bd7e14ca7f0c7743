//! Networked tier: per-node populations that fight across engagement edges
//! and flow along the manoeuvre network, with each node's decision phase
//! coupled to its neighbours and adversaries.
//!
//! Nodes are numbered Blue first, then Red. The state is
//! `[θ (all nodes), p (all nodes)]`. A node whose population falls to the
//! extinction threshold is frozen: its phase and population stop changing,
//! and it stops contributing to its neighbours.

mod rhs;
mod run;

pub use rhs::NetworkedRhs;
pub use run::{networked_outcome, run_networked, write_networked_csv, NetworkedRun};

use crate::error::{check_len, ModelError};
use crate::global::{EPS1_DEFAULT, EPS2_DEFAULT};
use crate::graphs::{EngagementMap, ForceGraph};
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Force {
    Blue,
    Red,
}

impl Force {
    pub fn label(self) -> &'static str {
        match self {
            Force::Blue => "B",
            Force::Red => "R",
        }
    }
}

/// Coupling attenuation driven by relative node strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetFeedback {
    #[default]
    None,
    /// Intra-force edge `i ← j` scales `σ` by `2 p_j / (p_i + p_j)`; engagement
    /// edge `i` vs adversary `j` scales `ζ` by `2 p_i / (p_i + p_j)`.
    Pairwise,
}

impl NetFeedback {
    pub fn name(self) -> &'static str {
        match self {
            NetFeedback::None => "none",
            NetFeedback::Pairwise => "pairwise",
        }
    }
}

/// `2 a / (a + b)`, or 1 when both are zero.
#[inline]
pub(crate) fn pair_weight(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s == 0.0 {
        1.0
    } else {
        2.0 * a / s
    }
}

/// Full networked engagement. Per-node vectors have length `|B| + |R|`,
/// Blue nodes first.
#[derive(Debug, Clone)]
pub struct NetworkedScenario {
    pub blue_graph: ForceGraph,
    pub red_graph: ForceGraph,
    pub engagement: EngagementMap,
    pub omega: Vec<f64>,
    pub theta0: Vec<f64>,
    pub p0: Vec<f64>,
    pub sigma_b: f64,
    pub sigma_r: f64,
    pub zeta_br: f64,
    pub zeta_rb: f64,
    pub phi_br: f64,
    pub phi_rb: f64,
    /// Blue's lethality against Red nodes.
    pub kappa_br: f64,
    /// Red's lethality against Blue nodes.
    pub kappa_rb: f64,
    pub gamma_b: f64,
    pub gamma_r: f64,
    pub standing_force: f64,
    pub feedback: NetFeedback,
    pub extinction_threshold: f64,
    pub eps1: f64,
    pub eps2: f64,
}

impl NetworkedScenario {
    /// Scenario with the given graphs and per-node vectors and every scalar
    /// at a neutral default (couplings and rates zero, `standing_force = 1`,
    /// threshold `eps1`).
    pub fn new(
        blue_graph: ForceGraph,
        red_graph: ForceGraph,
        engagement: EngagementMap,
        omega: Vec<f64>,
        theta0: Vec<f64>,
        p0: Vec<f64>,
    ) -> Self {
        Self {
            blue_graph,
            red_graph,
            engagement,
            omega,
            theta0,
            p0,
            sigma_b: 0.0,
            sigma_r: 0.0,
            zeta_br: 0.0,
            zeta_rb: 0.0,
            phi_br: 0.0,
            phi_rb: 0.0,
            kappa_br: 0.0,
            kappa_rb: 0.0,
            gamma_b: 0.0,
            gamma_r: 0.0,
            standing_force: 1.0,
            feedback: NetFeedback::None,
            extinction_threshold: EPS1_DEFAULT,
            eps1: EPS1_DEFAULT,
            eps2: EPS2_DEFAULT,
        }
    }

    pub fn n_blue(&self) -> usize {
        self.blue_graph.n()
    }

    pub fn n_red(&self) -> usize {
        self.red_graph.n()
    }

    pub fn n_nodes(&self) -> usize {
        self.n_blue() + self.n_red()
    }

    pub fn dim(&self) -> usize {
        2 * self.n_nodes()
    }

    pub fn force_of(&self, node: usize) -> Force {
        if node < self.n_blue() {
            Force::Blue
        } else {
            Force::Red
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let n = self.n_nodes();
        if self.n_blue() == 0 || self.n_red() == 0 {
            return Err(ModelError::InvalidParameter(
                "both forces need at least one node".into(),
            ));
        }
        check_len(
            "engagement blue side",
            self.n_blue(),
            self.engagement.n_blue(),
        )?;
        check_len("engagement red side", self.n_red(), self.engagement.n_red())?;
        check_len("omega", n, self.omega.len())?;
        check_len("theta0", n, self.theta0.len())?;
        check_len("p0", n, self.p0.len())?;
        let nonneg = [
            ("sigma_B", self.sigma_b),
            ("sigma_R", self.sigma_r),
            ("zeta_BR", self.zeta_br),
            ("zeta_RB", self.zeta_rb),
            ("kappa_BR", self.kappa_br),
            ("kappa_RB", self.kappa_rb),
            ("gamma_B", self.gamma_b),
            ("gamma_R", self.gamma_r),
            ("extinction_threshold", self.extinction_threshold),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(ModelError::InvalidParameter(format!(
                    "{name} = {v} must be >= 0"
                )));
            }
        }
        if !(self.standing_force > 0.0 && self.standing_force.is_finite()) {
            return Err(ModelError::InvalidParameter(format!(
                "standing_force = {} must be > 0",
                self.standing_force
            )));
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
        if let Some(k) = self.p0.iter().position(|&p| !(p >= 0.0 && p.is_finite())) {
            return Err(ModelError::InvalidParameter(format!(
                "p0 of {} node {} is {}",
                self.force_of(k).label(),
                self.local_index(k) + 1,
                self.p0[k]
            )));
        }
        if !self.omega.iter().chain(&self.theta0).all(|x| x.is_finite()) {
            return Err(ModelError::InvalidParameter(
                "non-finite frequency or phase".into(),
            ));
        }
        Ok(())
    }

    /// Index of `node` within its own force.
    pub fn local_index(&self, node: usize) -> usize {
        match self.force_of(node) {
            Force::Blue => node,
            Force::Red => node - self.n_blue(),
        }
    }

    pub fn initial_state(&self) -> Vec<f64> {
        let mut y = self.theta0.clone();
        y.extend_from_slice(&self.p0);
        y
    }

    /// `(Σ_B p, Σ_R p)` of a state vector.
    pub fn force_totals(&self, y: &[f64]) -> (f64, f64) {
        let (n, nb) = (self.n_nodes(), self.n_blue());
        let p = &y[n..2 * n];
        (p[..nb].iter().sum(), p[nb..].iter().sum())
    }

    /// Exchanges the roles of Blue and Red throughout.
    pub fn mirrored(&self) -> Self {
        let nb = self.n_blue();
        let swap = |v: &[f64]| -> Vec<f64> { v[nb..].iter().chain(&v[..nb]).copied().collect() };
        Self {
            blue_graph: self.red_graph.clone(),
            red_graph: self.blue_graph.clone(),
            engagement: self.engagement.swapped(),
            omega: swap(&self.omega),
            theta0: swap(&self.theta0),
            p0: swap(&self.p0),
            sigma_b: self.sigma_r,
            sigma_r: self.sigma_b,
            zeta_br: self.zeta_rb,
            zeta_rb: self.zeta_br,
            phi_br: self.phi_rb,
            phi_rb: self.phi_br,
            kappa_br: self.kappa_rb,
            kappa_rb: self.kappa_br,
            gamma_b: self.gamma_r,
            gamma_r: self.gamma_b,
            ..self.clone()
        }
    }
}

/// Local order parameter of node `k`: coherence of its living manoeuvre
/// neighbours, `(|Σ H e^{iθ}| + ε₂) / (Σ H + ε₂)`. Isolated nodes get 1.
pub fn local_order(scn: &NetworkedScenario, state: &[f64], k: usize) -> Result<f64, ModelError> {
    check_len("networked state", scn.dim(), state.len())?;
    if k >= scn.n_nodes() {
        return Err(ModelError::InvalidParameter(format!(
            "node {} out of range",
            k + 1
        )));
    }
    let mut rhs = NetworkedRhs::new(scn);
    rhs.prepare(state);
    Ok(rhs.local_orders()[k])
}

/// Per-node flow moderator `δ_k = 1/(Σ_E p + standing_force)` and engagement
/// divisor `d_k = 1/(Σ_E H(p) + ε₂)`.
pub fn flow_moderators(
    scn: &NetworkedScenario,
    state: &[f64],
) -> Result<(Vec<f64>, Vec<f64>), ModelError> {
    check_len("networked state", scn.dim(), state.len())?;
    let mut rhs = NetworkedRhs::new(scn);
    rhs.prepare(state);
    Ok((
        rhs.flow_moderator().to_vec(),
        rhs.engagement_divisor().to_vec(),
    ))
}

/// Derivative with dimension and finiteness checks.
pub fn networked_rhs(
    scn: &NetworkedScenario,
    state: &[f64],
    dstate: &mut [f64],
) -> Result<(), ModelError> {
    check_len("networked state", scn.dim(), state.len())?;
    check_len("networked derivative", scn.dim(), dstate.len())?;
    let mut rhs = NetworkedRhs::new(scn);
    rhs.eval(state, dstate);
    match rhs.first_nonfinite() {
        Some(k) => Err(ModelError::NonFinite {
            force: scn.force_of(k).label(),
            node: scn.local_index(k) + 1,
        }),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests;
