use super::{NetworkedRhs, NetworkedScenario};
use crate::error::{fmt_num, ModelError};
use crate::integrate::{integrate_until, FreezeGroup, FreezeRules, IntegratorSettings, Trajectory};
use std::cell::Cell;

#[derive(Debug, Clone)]
pub struct NetworkedRun {
    pub trajectory: Trajectory,
    /// Local order parameter of every node at every output sample.
    pub local_order: Vec<Vec<f64>>,
    pub p_final: f64,
}

/// One group per node: the node's phase and population freeze together once
/// its population reaches the extinction threshold. The population is
/// pinned to the threshold itself, so the frozen value is still classed as
/// dead and the total is continuous across the event.
fn extinction_rules(scn: &NetworkedScenario) -> FreezeRules {
    let n = scn.n_nodes();
    let thr = scn.extinction_threshold;
    let mut rules = FreezeRules::none();
    for k in 0..n {
        rules.push(FreezeGroup {
            watch: n + k,
            threshold: thr,
            members: vec![k, n + k],
            snap_to: Some(thr),
        });
    }
    rules
}

fn p_final_of(scn: &NetworkedScenario, y: &[f64]) -> f64 {
    let (b, r) = scn.force_totals(y);
    b - r
}

fn solve(
    scn: &NetworkedScenario,
    t_final: f64,
    settings: &IntegratorSettings,
    halt_when_disengaged: bool,
) -> Result<Trajectory, ModelError> {
    scn.validate()?;
    let nb = scn.n_blue();
    let pairs: Vec<(usize, usize)> = scn
        .engagement
        .pairs()
        .iter()
        .map(|&(b, r)| (b, nb + r))
        .collect();
    let mut rhs = NetworkedRhs::new(scn);
    let bad_node = Cell::new(None);
    let traj = integrate_until(
        |_, y, dy| {
            rhs.eval(y, dy);
            if bad_node.get().is_none() {
                bad_node.set(rhs.first_nonfinite());
            }
        },
        &extinction_rules(scn),
        |frozen| halt_when_disengaged && pairs.iter().all(|&(b, r)| frozen[b] || frozen[r]),
        &scn.initial_state(),
        t_final,
        settings,
    )?;
    if let Some(k) = bad_node.get() {
        return Err(ModelError::NonFinite {
            force: scn.force_of(k).label(),
            node: scn.local_index(k) + 1,
        });
    }
    Ok(traj.into_success()?)
}

/// Integrates the networked model over `[0, t_final]`;
/// `p_final = Σ_B p − Σ_R p` at `t_final`.
pub fn run_networked(
    scn: &NetworkedScenario,
    t_final: f64,
    settings: &IntegratorSettings,
) -> Result<NetworkedRun, ModelError> {
    let traj = solve(scn, t_final, settings, false)?;
    let mut rhs = NetworkedRhs::new(scn);
    let local_order = traj
        .states
        .iter()
        .map(|y| {
            rhs.prepare(y);
            rhs.local_orders().to_vec()
        })
        .collect();
    Ok(NetworkedRun {
        p_final: p_final_of(scn, traj.last_state()),
        trajectory: traj,
        local_order,
    })
}

/// `p_final` only. Stops once every engagement edge has lost an endpoint:
/// from then on nothing fights, and manoeuvre only moves resource within a
/// force, so both totals are fixed up to integration error.
pub fn networked_outcome(
    scn: &NetworkedScenario,
    t_final: f64,
    settings: &IntegratorSettings,
) -> Result<f64, ModelError> {
    let traj = solve(scn, t_final, &settings.clone().with_samples(2), true)?;
    Ok(p_final_of(scn, traj.last_state()))
}

/// Long-format CSV `t,node,force,p,theta,O_local`; nodes are numbered from 1
/// within their force.
pub fn write_networked_csv<W: std::io::Write>(
    out: W,
    scn: &NetworkedScenario,
    run: &NetworkedRun,
) -> csv::Result<()> {
    let n = scn.n_nodes();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "node", "force", "p", "theta", "O_local"])?;
    for ((t, y), order) in run
        .trajectory
        .times
        .iter()
        .zip(&run.trajectory.states)
        .zip(&run.local_order)
    {
        let t = fmt_num(*t);
        for k in 0..n {
            w.write_record([
                t.as_str(),
                &(scn.local_index(k) + 1).to_string(),
                scn.force_of(k).label(),
                &fmt_num(y[n + k]),
                &fmt_num(y[k]),
                &fmt_num(order[k]),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
