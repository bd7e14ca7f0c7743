use super::{coherence, organisational_factors, GlobalRhs, GlobalScenario};
use crate::error::{fmt_num, ModelError};
use crate::integrate::{
    integrate_until, integrate_with_freeze, FreezeGroup, FreezeRules, IntegratorSettings,
    Trajectory,
};

/// Collective quantities derived from one global state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalObservables {
    pub o_b: f64,
    pub o_r: f64,
    pub theta_b: f64,
    pub theta_r: f64,
    pub delta_br: f64,
    pub omega_br: f64,
    pub omega_rb: f64,
}

impl GlobalObservables {
    pub fn from_state(scn: &GlobalScenario, y: &[f64]) -> Self {
        let nb = scn.n_blue();
        let off = scn.population_offset();
        let (o_b, theta_b) = coherence(&y[..nb]);
        let (o_r, theta_r) = coherence(&y[nb..off]);
        let delta_br = theta_b - theta_r;
        let (omega_br, omega_rb) = organisational_factors(o_b, o_r, delta_br);
        Self {
            o_b,
            o_r,
            theta_b,
            theta_r,
            delta_br,
            omega_br,
            omega_rb,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GlobalRun {
    pub trajectory: Trajectory,
    pub observables: Vec<GlobalObservables>,
    pub p_final: f64,
    population_offset: usize,
}

impl GlobalRun {
    pub fn p_b(&self, k: usize) -> f64 {
        self.trajectory.states[k][self.population_offset]
    }

    pub fn p_r(&self, k: usize) -> f64 {
        self.trajectory.states[k][self.population_offset + 1]
    }
}

/// Each population freezes (snapped to exactly 0) once it falls to `eps1`.
fn extinction_rules(scn: &GlobalScenario) -> FreezeRules {
    let off = scn.population_offset();
    let mut rules = FreezeRules::none();
    for k in [off, off + 1] {
        rules.push(FreezeGroup {
            watch: k,
            threshold: scn.eps1,
            members: vec![k],
            snap_to: Some(0.0),
        });
    }
    rules
}

fn p_final_of(scn: &GlobalScenario, traj: &Trajectory) -> f64 {
    let off = scn.population_offset();
    let y = traj.last_state();
    y[off] - y[off + 1]
}

/// Integrates the global model; `p_final = p_B(t_final) - p_R(t_final)`.
pub fn run_global(
    scn: &GlobalScenario,
    t_final: f64,
    settings: &IntegratorSettings,
) -> Result<GlobalRun, ModelError> {
    scn.validate()?;
    let mut rhs = GlobalRhs::new(scn);
    let traj = integrate_with_freeze(
        |_, y, dy| rhs.eval(y, dy),
        &extinction_rules(scn),
        &scn.initial_state(),
        t_final,
        settings,
    )?
    .into_success()?;
    let observables = traj
        .states
        .iter()
        .map(|y| GlobalObservables::from_state(scn, y))
        .collect();
    Ok(GlobalRun {
        p_final: p_final_of(scn, &traj),
        trajectory: traj,
        observables,
        population_offset: scn.population_offset(),
    })
}

/// `p_final` only. Stops as soon as either force is extinct, after which
/// neither population can change, so the result equals that of
/// [`run_global`] without integrating the remaining span.
pub fn global_outcome(
    scn: &GlobalScenario,
    t_final: f64,
    settings: &IntegratorSettings,
) -> Result<f64, ModelError> {
    scn.validate()?;
    let mut rhs = GlobalRhs::new(scn);
    let settings = settings.clone().with_samples(2);
    let traj = integrate_until(
        |_, y, dy| rhs.eval(y, dy),
        &extinction_rules(scn),
        |frozen| frozen.iter().any(|&f| f),
        &scn.initial_state(),
        t_final,
        &settings,
    )?
    .into_success()?;
    Ok(p_final_of(scn, &traj))
}

/// CSV with columns `t,p_B,p_R,O_B,O_R,Theta_B,Theta_R,Delta_BR,Omega_BR,Omega_RB`.
pub fn write_global_csv<W: std::io::Write>(out: W, run: &GlobalRun) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "t", "p_B", "p_R", "O_B", "O_R", "Theta_B", "Theta_R", "Delta_BR", "Omega_BR", "Omega_RB",
    ])?;
    for (k, (t, ob)) in run
        .trajectory
        .times
        .iter()
        .zip(&run.observables)
        .enumerate()
    {
        let row = [
            *t,
            run.p_b(k),
            run.p_r(k),
            ob.o_b,
            ob.o_r,
            ob.theta_b,
            ob.theta_r,
            ob.delta_br,
            ob.omega_br,
            ob.omega_rb,
        ];
        w.write_record(row.iter().map(|&x| fmt_num(x)))?;
    }
    w.flush()?;
    Ok(())
}
