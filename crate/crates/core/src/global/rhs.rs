use super::{coherence, fill_sin_cos, smooth_heaviside, GlobalScenario};
use crate::error::{check_len, ModelError};
use crate::graphs::ForceGraph;

/// Reusable evaluator for the global right-hand side.
///
/// Each phase's sine and cosine are computed once per call and the coupling
/// sums use `sin(a-b) = sin a cos b - cos a sin b`. Blue and Red go through
/// the same code with roles swapped, so a mirrored scenario produces a
/// bitwise-mirrored derivative.
pub struct GlobalRhs<'a> {
    scn: &'a GlobalScenario,
    blue_targets: Vec<Vec<usize>>,
    red_targets: Vec<Vec<usize>>,
    sin: Vec<f64>,
    cos: Vec<f64>,
}

struct Side<'s> {
    graph: &'s ForceGraph,
    targets: &'s [Vec<usize>],
    omega: &'s [f64],
    sigma: f64,
    zeta: f64,
    phi: f64,
}

impl<'a> GlobalRhs<'a> {
    pub fn new(scn: &'a GlobalScenario) -> Self {
        let n = scn.n_blue() + scn.n_red();
        Self {
            scn,
            blue_targets: (0..scn.n_blue())
                .map(|b| scn.engagement.blue_targets(b).to_vec())
                .collect(),
            red_targets: (0..scn.n_red())
                .map(|r| scn.engagement.red_targets(r).to_vec())
                .collect(),
            sin: vec![0.0; n],
            cos: vec![0.0; n],
        }
    }

    /// Writes the derivative of `y` into `dy`; both must have length
    /// `scn.dim()`.
    pub fn eval(&mut self, y: &[f64], dy: &mut [f64]) {
        let scn = self.scn;
        let nb = scn.n_blue();
        let off = scn.population_offset();
        fill_sin_cos(&y[..off], &mut self.sin, &mut self.cos);
        let (p_b, p_r) = (y[off], y[off + 1]);
        let g_b = scn.feedback.g(p_b, scn.p_b0);
        let g_r = scn.feedback.g(p_r, scn.p_r0);

        let blue = Side {
            graph: &scn.blue_graph,
            targets: &self.blue_targets,
            omega: &scn.omega_b,
            sigma: scn.sigma_b,
            zeta: scn.zeta_br * g_b,
            phi: scn.phi_br,
        };
        let red = Side {
            graph: &scn.red_graph,
            targets: &self.red_targets,
            omega: &scn.omega_r,
            sigma: scn.sigma_r,
            zeta: scn.zeta_rb * g_r,
            phi: scn.phi_rb,
        };
        let (sin_b, sin_r) = self.sin.split_at(nb);
        let (cos_b, cos_r) = self.cos.split_at(nb);
        let (d_b, rest) = dy.split_at_mut(nb);
        let (d_r, d_p) = rest.split_at_mut(off - nb);
        phase_derivatives(&blue, (sin_b, cos_b), (sin_r, cos_r), d_b);
        phase_derivatives(&red, (sin_r, cos_r), (sin_b, cos_b), d_r);

        let (o_b, th_b) = coherence(&y[..nb]);
        let (o_r, th_r) = coherence(&y[nb..off]);
        d_p[0] = attrition(scn.kappa_rb, o_r, th_b - th_r, p_r, p_b, scn.eps1, scn.eps2);
        d_p[1] = attrition(scn.kappa_br, o_b, th_r - th_b, p_b, p_r, scn.eps1, scn.eps2);
    }
}

/// `dθ_i = ω_i - σ Σ_{j~i} sin(θ_i - θ_j) - ζ Σ_{j engaged} sin(θ_i - θ_j - φ)`.
fn phase_derivatives(side: &Side, own: (&[f64], &[f64]), other: (&[f64], &[f64]), out: &mut [f64]) {
    let (own_sin, own_cos) = own;
    let (other_sin, other_cos) = other;
    let (sphi, cphi) = side.phi.sin_cos();
    for (i, d) in out.iter_mut().enumerate() {
        let (si, ci) = (own_sin[i], own_cos[i]);
        let (mut nc, mut ns) = (0.0, 0.0);
        for &j in side.graph.neighbors(i) {
            nc += own_cos[j];
            ns += own_sin[j];
        }
        let (mut ec, mut es) = (0.0, 0.0);
        for &j in &side.targets[i] {
            ec += other_cos[j];
            es += other_sin[j];
        }
        let intra = si * nc - ci * ns;
        let sin_diff = si * ec - ci * es;
        let cos_diff = ci * ec + si * es;
        let inter = sin_diff * cphi - cos_diff * sphi;
        *d = side.omega[i] - side.sigma * intra - side.zeta * inter;
    }
}

/// Loss rate of force X: `-κ_YX O_Y (1 - sin Δ_XY)/2 p_Y H(p_X)`.
pub(crate) fn attrition(
    kappa_yx: f64,
    o_y: f64,
    delta_xy: f64,
    p_y: f64,
    p_x: f64,
    eps1: f64,
    eps2: f64,
) -> f64 {
    -kappa_yx * o_y * 0.5 * (1.0 - delta_xy.sin()) * p_y * smooth_heaviside(p_x, eps1, eps2)
}

/// One-shot evaluation with dimension checks.
pub fn global_rhs(
    scn: &GlobalScenario,
    state: &[f64],
    dstate: &mut [f64],
) -> Result<(), ModelError> {
    check_len("global state", scn.dim(), state.len())?;
    check_len("global derivative", scn.dim(), dstate.len())?;
    GlobalRhs::new(scn).eval(state, dstate);
    Ok(())
}
