use super::{pair_weight, NetFeedback, NetworkedScenario};
use crate::global::{fill_sin_cos, smooth_heaviside};

/// Per-node constants of one force, expanded to every node.
struct NodeParams {
    omega: f64,
    sigma: f64,
    zeta: f64,
    sin_phi: f64,
    cos_phi: f64,
    gamma: f64,
    /// Lethality of the adversaries that engage this node.
    kappa_in: f64,
}

/// Reusable evaluator for the networked right-hand side.
///
/// Nodes at or below the extinction threshold count as dead: their
/// derivatives are zero and they contribute nothing to anyone else.
pub struct NetworkedRhs<'a> {
    scn: &'a NetworkedScenario,
    n: usize,
    params: Vec<NodeParams>,
    manoeuvre: Vec<Vec<usize>>,
    engage: Vec<Vec<usize>>,
    alive: Vec<bool>,
    h: Vec<f64>,
    sin: Vec<f64>,
    cos: Vec<f64>,
    order: Vec<f64>,
    delta: Vec<f64>,
    divisor: Vec<f64>,
    nonfinite: Option<usize>,
}

impl<'a> NetworkedRhs<'a> {
    pub fn new(scn: &'a NetworkedScenario) -> Self {
        let (nb, n) = (scn.n_blue(), scn.n_nodes());
        let (sb, cb) = scn.phi_br.sin_cos();
        let (sr, cr) = scn.phi_rb.sin_cos();
        let params = (0..n)
            .map(|k| {
                if k < nb {
                    NodeParams {
                        omega: scn.omega[k],
                        sigma: scn.sigma_b,
                        zeta: scn.zeta_br,
                        sin_phi: sb,
                        cos_phi: cb,
                        gamma: scn.gamma_b,
                        kappa_in: scn.kappa_rb,
                    }
                } else {
                    NodeParams {
                        omega: scn.omega[k],
                        sigma: scn.sigma_r,
                        zeta: scn.zeta_rb,
                        sin_phi: sr,
                        cos_phi: cr,
                        gamma: scn.gamma_r,
                        kappa_in: scn.kappa_br,
                    }
                }
            })
            .collect();
        let manoeuvre = (0..n)
            .map(|k| {
                if k < nb {
                    scn.blue_graph.neighbors(k).to_vec()
                } else {
                    scn.red_graph
                        .neighbors(k - nb)
                        .iter()
                        .map(|&j| j + nb)
                        .collect()
                }
            })
            .collect();
        let engage = (0..n)
            .map(|k| {
                if k < nb {
                    scn.engagement
                        .blue_targets(k)
                        .iter()
                        .map(|&r| r + nb)
                        .collect()
                } else {
                    scn.engagement.red_targets(k - nb).to_vec()
                }
            })
            .collect();
        Self {
            scn,
            n,
            params,
            manoeuvre,
            engage,
            alive: vec![true; n],
            h: vec![0.0; n],
            sin: vec![0.0; n],
            cos: vec![0.0; n],
            order: vec![0.0; n],
            delta: vec![0.0; n],
            divisor: vec![0.0; n],
            nonfinite: None,
        }
    }

    /// Computes the per-node auxiliaries (living mask, Heaviside weights,
    /// local order, δ and d) for state `y`.
    pub fn prepare(&mut self, y: &[f64]) {
        let scn = self.scn;
        let n = self.n;
        let (theta, p) = y.split_at(n);
        for k in 0..n {
            self.alive[k] = p[k] > scn.extinction_threshold;
            self.h[k] = if self.alive[k] {
                smooth_heaviside(p[k], scn.eps1, scn.eps2)
            } else {
                0.0
            };
        }
        fill_sin_cos(theta, &mut self.sin, &mut self.cos);
        for k in 0..n {
            let (mut c, mut s, mut w) = (0.0, 0.0, 0.0);
            for &m in &self.manoeuvre[k] {
                c += self.h[m] * self.cos[m];
                s += self.h[m] * self.sin[m];
                w += self.h[m];
            }
            self.order[k] = ((c.hypot(s) + scn.eps2) / (w + scn.eps2)).min(1.0);
            let (mut pe, mut he) = (0.0, 0.0);
            for &m in &self.engage[k] {
                pe += p[m];
                he += self.h[m];
            }
            self.delta[k] = 1.0 / (pe + scn.standing_force);
            self.divisor[k] = 1.0 / (he + scn.eps2);
        }
    }

    pub fn local_orders(&self) -> &[f64] {
        &self.order
    }

    pub fn flow_moderator(&self) -> &[f64] {
        &self.delta
    }

    pub fn engagement_divisor(&self) -> &[f64] {
        &self.divisor
    }

    /// First node (global index) whose derivative came out non-finite in the
    /// most recent evaluation.
    pub fn first_nonfinite(&self) -> Option<usize> {
        self.nonfinite
    }

    pub fn eval(&mut self, y: &[f64], dy: &mut [f64]) {
        self.prepare(y);
        let n = self.n;
        let pairwise = self.scn.feedback == NetFeedback::Pairwise;
        let p = &y[n..];
        let (dtheta, dp) = dy.split_at_mut(n);
        self.nonfinite = None;
        for i in 0..n {
            if !self.alive[i] {
                dtheta[i] = 0.0;
                dp[i] = 0.0;
                if p[i].is_nan() && self.nonfinite.is_none() {
                    self.nonfinite = Some(i);
                }
                continue;
            }
            let par = &self.params[i];
            let (si, ci) = (self.sin[i], self.cos[i]);
            let hi = self.h[i];

            let mut intra = 0.0;
            let mut flow = 0.0;
            for &j in &self.manoeuvre[i] {
                if !self.alive[j] {
                    continue;
                }
                let (sj, cj) = (self.sin[j], self.cos[j]);
                let w = if pairwise {
                    pair_weight(p[j], p[i])
                } else {
                    1.0
                };
                intra += self.h[j] * w * (si * cj - ci * sj);
                let gamma = 0.5 * (par.gamma + self.params[j].gamma);
                let agree = 0.5 * (ci * cj + si * sj + 1.0);
                flow += self.h[j] * gamma * (self.delta[j] * p[j] - self.delta[i] * p[i]) * agree;
            }

            let mut inter = 0.0;
            let mut loss = 0.0;
            for &k in &self.engage[i] {
                if !self.alive[k] {
                    continue;
                }
                let (sk, ck) = (self.sin[k], self.cos[k]);
                let w = if pairwise {
                    pair_weight(p[i], p[k])
                } else {
                    1.0
                };
                // sin(θ_i − θ_k − φ)
                let sin_ik = si * ck - ci * sk;
                let cos_ik = ci * ck + si * sk;
                inter += self.h[k] * w * (sin_ik * par.cos_phi - cos_ik * par.sin_phi);
                // sin(θ_k − θ_i) = −sin_ik
                loss += self.h[k] * p[k] * self.divisor[k] * 0.5 * (1.0 - sin_ik) * self.order[k];
            }

            dtheta[i] = hi * (par.omega - par.sigma * intra - par.zeta * inter);
            dp[i] = hi * (flow - par.kappa_in * loss);
            if self.nonfinite.is_none() && !(dtheta[i].is_finite() && dp[i].is_finite()) {
                self.nonfinite = Some(i);
            }
        }
    }
}
