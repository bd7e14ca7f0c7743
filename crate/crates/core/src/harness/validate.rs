//! Invariant suite run by `validate` and by the randomised acceptance sweep.

use super::scenario::{EngagementSpec, ForceSpec, GraphSpec, NodeValues, Scenario};
use super::HarnessError;
use crate::global::{global_outcome, run_global, Feedback, EPS1_DEFAULT, EPS2_DEFAULT};
use crate::integrate::{IntegratorSettings, Trajectory};
use crate::networked::{networked_outcome, run_networked, NetFeedback, NetworkedScenario};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

#[derive(Debug, Clone)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct InvariantReport {
    pub checks: Vec<InvariantCheck>,
}

impl InvariantReport {
    fn push(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.checks.push(InvariantCheck {
            name,
            passed,
            detail: detail.into(),
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &InvariantCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

const SAMPLES: usize = 401;
/// Outcome tolerance for relabelling, relative to the total initial force.
const MIRROR_REL: f64 = 1e-6;
const CONSERVATION_REL: f64 = 1e-8;

fn in_unit(x: f64) -> bool {
    (0.0..=1.0).contains(&x)
}

/// Every sample after a group's freeze time leaves `members` untouched.
fn frozen_stay_frozen(
    traj: &Trajectory,
    members: impl Fn(usize) -> Vec<usize>,
) -> Result<(), String> {
    for ev in &traj.freeze_events {
        let Some(first) = traj.times.iter().position(|&t| t >= ev.t) else {
            continue;
        };
        let reference = &traj.states[first];
        for (t, y) in traj.times[first..].iter().zip(&traj.states[first..]) {
            for m in members(ev.group) {
                if y[m] != reference[m] {
                    return Err(format!("group {} component {} moved at t={t}", ev.group, m));
                }
            }
        }
    }
    Ok(())
}

fn global_checks(
    scn: &Scenario,
    t_final: f64,
    settings: &IntegratorSettings,
    rep: &mut InvariantReport,
) -> Result<(), HarnessError> {
    let g = scn.global()?;
    let run = run_global(&g, t_final, settings)?;
    let floor = -10.0 * g.eps1;
    let bounded = run
        .observables
        .iter()
        .all(|o| in_unit(o.o_b) && in_unit(o.o_r) && in_unit(o.omega_br) && in_unit(o.omega_rb));
    rep.push("global.order_bounds", bounded, "O and Omega within [0, 1]");
    let min_p = (0..run.trajectory.len())
        .map(|k| run.p_b(k).min(run.p_r(k)))
        .fold(f64::INFINITY, f64::min);
    rep.push(
        "global.population_floor",
        min_p >= floor,
        format!("min p = {min_p:e}"),
    );
    let off = g.population_offset();
    let frozen = frozen_stay_frozen(&run.trajectory, |grp| vec![off + grp]);
    rep.push(
        "global.frozen_stay_frozen",
        frozen.is_ok(),
        frozen.err().unwrap_or_default(),
    );
    let mirrored = global_outcome(&g.mirrored(), t_final, settings)?;
    let direct = global_outcome(&g, t_final, settings)?;
    let tol = MIRROR_REL * (g.p_b0 + g.p_r0);
    rep.push(
        "global.mirror_antisymmetry",
        (direct + mirrored).abs() <= tol,
        format!("p_final {direct:e}, mirrored {mirrored:e}"),
    );
    Ok(())
}

fn networked_checks(
    scn: &Scenario,
    t_final: f64,
    settings: &IntegratorSettings,
    rep: &mut InvariantReport,
) -> Result<(), HarnessError> {
    let net = scn.networked()?;
    let n = net.n_nodes();
    let run = run_networked(&net, t_final, settings)?;
    let bounded = run.local_order.iter().flatten().all(|&o| in_unit(o));
    rep.push("networked.order_bounds", bounded, "local O within [0, 1]");
    let floor = -10.0 * net.eps1;
    let min_p = run
        .trajectory
        .states
        .iter()
        .flat_map(|y| y[n..].iter().copied())
        .fold(f64::INFINITY, f64::min);
    rep.push(
        "networked.population_floor",
        min_p >= floor,
        format!("min p = {min_p:e}"),
    );
    let frozen = frozen_stay_frozen(&run.trajectory, |k| vec![k, n + k]);
    rep.push(
        "networked.frozen_stay_frozen",
        frozen.is_ok(),
        frozen.err().unwrap_or_default(),
    );

    let total0: f64 = net.p0.iter().sum();
    let direct = networked_outcome(&net, t_final, settings)?;
    let mirrored = networked_outcome(&net.mirrored(), t_final, settings)?;
    rep.push(
        "networked.mirror_antisymmetry",
        (direct + mirrored).abs() <= MIRROR_REL * total0,
        format!("p_final {direct:e}, mirrored {mirrored:e}"),
    );

    let quiet = NetworkedScenario {
        kappa_br: 0.0,
        kappa_rb: 0.0,
        ..net.clone()
    };
    let still = run_networked(&quiet, t_final, &settings.clone().with_samples(2))?;
    let (b0, r0) = quiet.force_totals(&quiet.initial_state());
    let (b1, r1) = quiet.force_totals(still.trajectory.last_state());
    let drift = ((b1 - b0).abs() / b0.max(f64::MIN_POSITIVE))
        .max((r1 - r0).abs() / r0.max(f64::MIN_POSITIVE));
    rep.push(
        "networked.conservation_without_attrition",
        drift <= CONSERVATION_REL,
        format!("relative drift {drift:e}"),
    );
    Ok(())
}

/// Runs the invariant suite for `scn` on the global and networked tiers.
/// Model errors abort; violated invariants are reported.
pub fn check_invariants(scn: &Scenario, t_final: f64) -> Result<InvariantReport, HarnessError> {
    let settings = scn.integrator_settings(t_final).with_samples(SAMPLES);
    let mut rep = InvariantReport::default();
    global_checks(scn, t_final, &settings, &mut rep)?;
    networked_checks(scn, t_final, &settings, &mut rep)?;
    Ok(rep)
}

fn random_graph(rng: &mut ChaCha8Rng) -> GraphSpec {
    match rng.random_range(0..6) {
        0 => GraphSpec::Path {
            n: rng.random_range(2..7),
        },
        1 => GraphSpec::Complete {
            n: rng.random_range(2..6),
        },
        2 => GraphSpec::ErdosRenyi {
            n: rng.random_range(3..8),
            p: rng.random_range(0.4..0.9),
        },
        3 => GraphSpec::KaryTree {
            branching: rng.random_range(2..4),
            depth: 1,
        },
        4 => GraphSpec::Edgeless {
            n: rng.random_range(1..5),
        },
        _ => GraphSpec::FightingFish,
    }
}

fn node_count(g: &GraphSpec) -> usize {
    match *g {
        GraphSpec::Path { n }
        | GraphSpec::Complete { n }
        | GraphSpec::ErdosRenyi { n, .. }
        | GraphSpec::Edgeless { n } => n,
        GraphSpec::KaryTree { branching, depth } => {
            (0..=depth as u32).map(|d| branching.pow(d)).sum()
        }
        GraphSpec::RandomGeometric { n, .. } => n,
        GraphSpec::FightingFish => 12,
        GraphSpec::File { .. } => unreachable!("random scenarios never load files"),
    }
}

fn random_force(rng: &mut ChaCha8Rng) -> ForceSpec {
    let graph = random_graph(rng);
    let n = node_count(&graph);
    ForceSpec {
        graph,
        omega: NodeValues::List((0..n).map(|_| rng.random_range(0.0..2.0)).collect()),
        theta0: NodeValues::List((0..n).map(|_| rng.random_range(-3.0..3.0)).collect()),
        p0: NodeValues::List((0..n).map(|_| rng.random_range(1.0..100.0)).collect()),
    }
}

/// Small random engagement for the invariant sweep: a few nodes per force,
/// random couplings, lethalities high enough that some runs annihilate
/// nodes or whole forces within `t_final`.
pub fn random_scenario(seed: u64) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blue = random_force(&mut rng);
    let red = random_force(&mut rng);
    let (nb, nr) = (node_count(&blue.graph), node_count(&red.graph));
    let m = rng.random_range(1..=nb.min(nr).min(4));
    let mut pairs: Vec<[usize; 2]> = (0..m)
        .map(|_| [rng.random_range(1..=nb), rng.random_range(1..=nr)])
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    let feedback = *[Feedback::None, Feedback::FocusLoss, Feedback::EffortGain]
        .choose(&mut rng)
        .expect("non-empty");
    let net_feedback = *[NetFeedback::None, NetFeedback::Pairwise]
        .choose(&mut rng)
        .expect("non-empty");
    Scenario {
        name: format!("random-{seed}"),
        seed,
        t_final: 100.0,
        sigma_b: rng.random_range(0.0..3.0),
        sigma_r: rng.random_range(0.0..3.0),
        zeta_br: rng.random_range(0.0..1.5),
        zeta_rb: rng.random_range(0.0..1.5),
        phi_br: rng.random_range(0.0..TAU),
        phi_rb: rng.random_range(0.0..TAU),
        kappa_br: rng.random_range(0.0..0.3),
        kappa_rb: rng.random_range(0.0..0.3),
        gamma_b: rng.random_range(0.0..2.0),
        gamma_r: rng.random_range(0.0..2.0),
        feedback,
        net_feedback,
        standing_force: 1.0,
        extinction_threshold: None,
        eps1: EPS1_DEFAULT,
        eps2: EPS2_DEFAULT,
        blue,
        red,
        engagement: EngagementSpec::Pairs { pairs },
        integrator: Default::default(),
        base_dir: None,
    }
}
