//! Classical Lanchester square law, the baseline and integration oracle.
//! `alphas` is always `(α_RB, α_BR)`: Red's lethality against Blue first.

use crate::integrate::{integrate, IntegrateError, IntegratorSettings, Trajectory};

/// `(dp_B, dp_R) = (-α_RB p_R, -α_BR p_B)`.
pub fn classical_lanchester_rhs(p: (f64, f64), alphas: (f64, f64)) -> (f64, f64) {
    let (a_rb, a_br) = alphas;
    (-a_rb * p.1, -a_br * p.0)
}

/// Closed-form solution of the linear system at time `t` (no floor at zero).
pub fn classical_closed_form(p0: (f64, f64), alphas: (f64, f64), t: f64) -> (f64, f64) {
    let (a_rb, a_br) = alphas;
    let (pb0, pr0) = p0;
    if a_rb == 0.0 || a_br == 0.0 {
        return (pb0 - a_rb * pr0 * t, pr0 - a_br * pb0 * t);
    }
    let gamma = (a_br * a_rb).sqrt();
    let (ch, sh) = ((gamma * t).cosh(), (gamma * t).sinh());
    (
        pb0 * ch - (a_rb / a_br).sqrt() * pr0 * sh,
        pr0 * ch - (a_br / a_rb).sqrt() * pb0 * sh,
    )
}

/// Square-law conserved quantity `α_BR p_B² - α_RB p_R²`.
pub fn square_law_invariant(p: (f64, f64), alphas: (f64, f64)) -> f64 {
    let (a_rb, a_br) = alphas;
    a_br * p.0 * p.0 - a_rb * p.1 * p.1
}

/// Integrates the square law; states are `[p_B, p_R]`.
pub fn run_classical(
    p0: (f64, f64),
    alphas: (f64, f64),
    t_final: f64,
    settings: &IntegratorSettings,
) -> Result<Trajectory, IntegrateError> {
    integrate(
        |_, y, dy| {
            let (db, dr) = classical_lanchester_rhs((y[0], y[1]), alphas);
            dy[0] = db;
            dy[1] = dr;
        },
        &[p0.0, p0.1],
        t_final,
        settings,
    )
}
