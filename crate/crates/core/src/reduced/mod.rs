//! Clustered reduction of the global model.
//!
//! When both forces are internally synchronised, the phase dynamics collapse
//! onto the gap `Δ = Θ_B − Θ_R` of the two global phases, and the populations
//! see `O_B = O_R = 1`. That leaves three state variables, `[Δ, p_B, p_R]`.
//!
//! With `g ≡ 1`, the `Δ` equation is `Δ' = w − C sin Δ + S cos Δ` with
//! `w = ω̄_B − ω̄_R`. Substituting `u = tan(Δ/2)` turns it into a constant
//! coefficient Riccati equation, which is solved in closed form when
//! `K = C² + S² − w² > 0`.

use crate::error::{fmt_num, ModelError};
use crate::global::{attrition, Feedback, GlobalScenario};
use crate::integrate::{
    integrate_until, integrate_with_freeze, FreezeRules, IntegratorSettings, Trajectory,
};

/// Lumped coupling constants of the reduced `Δ` equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedConstants {
    pub c: f64,
    pub s: f64,
    pub k: f64,
    pub omega_bar_b: f64,
    pub omega_bar_r: f64,
    pub d_t_br: usize,
    pub d_t_rb: usize,
    pub n_blue: usize,
    pub n_red: usize,
    /// `ζ_BR d_T / |B|`.
    pub a: f64,
    /// `ζ_RB d_T / |R|`.
    pub b: f64,
    pub phi_br: f64,
    pub phi_rb: f64,
}

impl ReducedConstants {
    /// `ω̄_B − ω̄_R`.
    pub fn w(&self) -> f64 {
        self.omega_bar_b - self.omega_bar_r
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn reduced_constants(scn: &GlobalScenario) -> ReducedConstants {
    let d_t = scn.engagement.d_total();
    let (nb, nr) = (scn.n_blue(), scn.n_red());
    let a = scn.zeta_br * d_t as f64 / nb as f64;
    let b = scn.zeta_rb * d_t as f64 / nr as f64;
    let c = a * scn.phi_br.cos() + b * scn.phi_rb.cos();
    let s = a * scn.phi_br.sin() - b * scn.phi_rb.sin();
    let omega_bar_b = mean(&scn.omega_b);
    let omega_bar_r = mean(&scn.omega_r);
    let w = omega_bar_b - omega_bar_r;
    ReducedConstants {
        c,
        s,
        k: c * c + s * s - w * w,
        omega_bar_b,
        omega_bar_r,
        d_t_br: d_t,
        d_t_rb: d_t,
        n_blue: nb,
        n_red: nr,
        a,
        b,
        phi_br: scn.phi_br,
        phi_rb: scn.phi_rb,
    }
}

/// Closed-form `Δ(t)` from `Δ(0) = delta0` (tanh branch, `K > 0` only).
pub fn delta_analytic(rc: &ReducedConstants, t: f64, delta0: f64) -> Result<f64, ModelError> {
    if !(rc.k > 0.0) {
        return Err(ModelError::Domain(format!(
            "closed form needs K > 0 (got {}); integrate the reduced ODE instead",
            rc.k
        )));
    }
    let alpha = rc.w() - rc.s;
    if alpha == 0.0 {
        return Err(ModelError::Domain("closed form needs w != S".into()));
    }
    let sk = rc.k.sqrt();
    let arg = (rc.c - alpha * (0.5 * delta0).tan()) / sk;
    if !(arg.abs() < 1.0) {
        return Err(ModelError::Domain(format!(
            "initial condition outside the tanh branch: |artanh argument| = {} >= 1",
            arg.abs()
        )));
    }
    let shift = 2.0 / sk * arg.atanh();
    let u = (rc.c - sk * (0.5 * (t + shift) * sk).tanh()) / alpha;
    Ok(2.0 * u.atan())
}

/// Stable fixed point `2 atan[(C − √K)/(w − S)]`.
///
/// Evaluated through whichever of the two equivalent quotients
/// `(C − √K)/(w − S) = (w + S)/(C + √K)` has the larger denominator, so the
/// `w = S` case needs no special treatment.
pub fn delta_asymptotic(rc: &ReducedConstants) -> Result<f64, ModelError> {
    if rc.k < 0.0 {
        return Err(ModelError::Domain(format!(
            "K = {} < 0: Δ is periodic and has no fixed point",
            rc.k
        )));
    }
    let sk = rc.k.sqrt();
    let (w, s, c) = (rc.w(), rc.s, rc.c);
    let d1 = w - s;
    let d2 = c + sk;
    if d1 == 0.0 && d2 == 0.0 {
        // u = tan(Δ/2) runs off to infinity: the fixed point is Δ = π.
        return Ok(std::f64::consts::PI);
    }
    let u = if d2.abs() >= d1.abs() {
        (w + s) / d2
    } else {
        (c - sk) / d1
    };
    Ok(2.0 * u.atan())
}

/// `Δ'(0) = ω̄_B − ω̄_R + S` for `Δ(0) = 0`.
pub fn delta_dot_initial(rc: &ReducedConstants) -> f64 {
    rc.w() + rc.s
}

/// Everything the reduced right-hand side needs. The intra-network
/// attenuation `f` drops out of the zero-mode projection, so there is no
/// field for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedModel {
    pub consts: ReducedConstants,
    pub feedback: Feedback,
    pub kappa_br: f64,
    pub kappa_rb: f64,
    pub p_b0: f64,
    pub p_r0: f64,
    pub eps1: f64,
    pub eps2: f64,
}

impl ReducedModel {
    pub fn from_scenario(scn: &GlobalScenario) -> Self {
        Self {
            consts: reduced_constants(scn),
            feedback: scn.feedback,
            kappa_br: scn.kappa_br,
            kappa_rb: scn.kappa_rb,
            p_b0: scn.p_b0,
            p_r0: scn.p_r0,
            eps1: scn.eps1,
            eps2: scn.eps2,
        }
    }
}

/// Derivative of `[Δ, p_B, p_R]`.
pub fn reduced_rhs(state: &[f64; 3], m: &ReducedModel) -> [f64; 3] {
    let [delta, p_b, p_r] = *state;
    let rc = &m.consts;
    let g_b = m.feedback.g(p_b, m.p_b0);
    let g_r = m.feedback.g(p_r, m.p_r0);
    let d_delta =
        rc.w() - (rc.a * g_b * (delta - rc.phi_br).sin() + rc.b * g_r * (delta + rc.phi_rb).sin());
    [
        d_delta,
        attrition(m.kappa_rb, 1.0, delta, p_r, p_b, m.eps1, m.eps2),
        attrition(m.kappa_br, 1.0, -delta, p_b, p_r, m.eps1, m.eps2),
    ]
}

#[derive(Debug, Clone)]
pub struct ReducedRun {
    /// States are `[Δ, p_B, p_R]`.
    pub trajectory: Trajectory,
    pub p_final: f64,
}

/// `Δ(0)` is the difference of the mean initial phases.
fn initial_state(scn: &GlobalScenario) -> [f64; 3] {
    [
        mean(&scn.theta0_b) - mean(&scn.theta0_r),
        scn.p_b0,
        scn.p_r0,
    ]
}

fn extinction_rules(m: &ReducedModel) -> FreezeRules {
    FreezeRules::per_component(&[1, 2], m.eps1, Some(0.0))
}

fn rhs_fn(m: &ReducedModel) -> impl FnMut(f64, &[f64], &mut [f64]) + '_ {
    move |_, y, dy| dy.copy_from_slice(&reduced_rhs(&[y[0], y[1], y[2]], m))
}

pub fn run_reduced(
    scn: &GlobalScenario,
    t_final: f64,
    settings: &IntegratorSettings,
) -> Result<ReducedRun, ModelError> {
    scn.validate()?;
    let m = ReducedModel::from_scenario(scn);
    let traj = integrate_with_freeze(
        rhs_fn(&m),
        &extinction_rules(&m),
        &initial_state(scn),
        t_final,
        settings,
    )?
    .into_success()?;
    let y = traj.last_state();
    Ok(ReducedRun {
        p_final: y[1] - y[2],
        trajectory: traj,
    })
}

/// `p_final` only, stopping at the first extinction.
pub fn reduced_outcome(
    scn: &GlobalScenario,
    t_final: f64,
    settings: &IntegratorSettings,
) -> Result<f64, ModelError> {
    scn.validate()?;
    let m = ReducedModel::from_scenario(scn);
    let traj = integrate_until(
        rhs_fn(&m),
        &extinction_rules(&m),
        |frozen| frozen.iter().any(|&f| f),
        &initial_state(scn),
        t_final,
        &settings.clone().with_samples(2),
    )?
    .into_success()?;
    let y = traj.last_state();
    Ok(y[1] - y[2])
}

/// CSV with columns `t,Delta_BR,p_B,p_R`.
pub fn write_reduced_csv<W: std::io::Write>(out: W, run: &ReducedRun) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "Delta_BR", "p_B", "p_R"])?;
    for (t, y) in run.trajectory.times.iter().zip(&run.trajectory.states) {
        w.write_record([*t, y[0], y[1], y[2]].iter().map(|&x| fmt_num(x)))?;
    }
    w.flush()?;
    Ok(())
}
