//! The three reference engagements and their default sweep axes.

use super::scenario::{EngagementSpec, ForceSpec, GraphSpec, NodeValues, Scenario};
use super::sweep::Axis;
use super::HarnessError;
use crate::global::{Feedback, EPS1_DEFAULT, EPS2_DEFAULT};
use crate::networked::NetFeedback;
use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, PI};

pub const USECASE_IDS: [u32; 3] = [1, 2, 3];

const SECTOR: &str = "sector";

fn base(
    name: &str,
    seed: u64,
    t_final: f64,
    blue: ForceSpec,
    red: ForceSpec,
    engagement: EngagementSpec,
) -> Scenario {
    Scenario {
        name: name.into(),
        seed,
        t_final,
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
        feedback: Feedback::None,
        net_feedback: NetFeedback::None,
        standing_force: 1.0,
        extinction_threshold: None,
        eps1: EPS1_DEFAULT,
        eps2: EPS2_DEFAULT,
        blue,
        red,
        engagement,
        integrator: Default::default(),
        base_dir: None,
    }
}

/// 4-ary tree (21 nodes) against a connected Erdős–Rényi graph, leaves
/// 6–21 engaged one-to-one, 100 per node.
fn usecase1() -> Scenario {
    let force = |graph, lo: f64, hi: f64, mean| ForceSpec {
        graph,
        omega: NodeValues::Uniform {
            uniform: [lo, hi],
            mean: Some(mean),
        },
        theta0: NodeValues::Keyword(SECTOR.into()),
        p0: NodeValues::Scalar(100.0),
    };
    let mut s = base(
        "usecase1",
        1,
        1e4,
        force(
            GraphSpec::KaryTree {
                branching: 4,
                depth: 2,
            },
            0.0,
            1.0,
            0.503,
        ),
        force(GraphSpec::ErdosRenyi { n: 21, p: 0.4 }, 0.0, 1.0, 0.551),
        EngagementSpec::SameIndex {
            same_index: [6, 21],
        },
    );
    s.sigma_b = 8.0;
    s.sigma_r = 0.5;
    s.zeta_br = 0.4;
    s.zeta_rb = 0.4;
    s.phi_br = FRAC_PI_4;
    s.phi_rb = FRAC_PI_6;
    s.kappa_br = 0.005;
    s.kappa_rb = 0.005;
    s.gamma_b = 1.0;
    s.gamma_r = 1.0;
    s
}

/// Fighting fish: ring-plus-hub graphs with reserves on the far side.
fn usecase2() -> Scenario {
    let force = || ForceSpec {
        graph: GraphSpec::FightingFish,
        omega: NodeValues::Scalar(1.0),
        theta0: NodeValues::Keyword(SECTOR.into()),
        p0: NodeValues::Fill {
            fill: 10.0,
            head: vec![10.0; 10].into_iter().chain([100.0, 100.0]).collect(),
        },
    };
    let mut s = base(
        "usecase2",
        2,
        1e3,
        force(),
        force(),
        EngagementSpec::SameIndex { same_index: [1, 3] },
    );
    s.sigma_b = 1.0;
    s.sigma_r = 1.0;
    s.zeta_br = 0.5;
    s.zeta_rb = 0.5;
    s.phi_br = FRAC_PI_4;
    s.phi_rb = FRAC_PI_4;
    s.kappa_br = 0.1;
    s.kappa_rb = 0.1;
    s.gamma_b = 1.0;
    s.gamma_r = 1.0;
    s.net_feedback = NetFeedback::Pairwise;
    s
}

/// 50-node Blue transport network against five detached Red nodes of
/// concentrated force.
fn usecase3() -> Scenario {
    let blue = ForceSpec {
        graph: GraphSpec::RandomGeometric {
            n: 50,
            mean_degree: 4.0,
        },
        omega: NodeValues::Uniform {
            uniform: [0.0, 2.0],
            mean: Some(1.104),
        },
        theta0: NodeValues::Keyword(SECTOR.into()),
        p0: NodeValues::Fill {
            fill: 250.0,
            head: vec![500.0; 5],
        },
    };
    let red = ForceSpec {
        graph: GraphSpec::Edgeless { n: 5 },
        omega: NodeValues::Uniform {
            uniform: [0.0, 2.0],
            mean: None,
        },
        theta0: NodeValues::Keyword(SECTOR.into()),
        p0: NodeValues::Scalar(2750.0),
    };
    let mut s = base(
        "usecase3",
        3,
        1e3,
        blue,
        red,
        EngagementSpec::SameIndex { same_index: [1, 5] },
    );
    s.sigma_b = 0.25;
    s.sigma_r = 0.0;
    s.zeta_br = 0.5;
    s.zeta_rb = 0.5;
    s.phi_br = FRAC_PI_4;
    s.phi_rb = 0.0;
    s.kappa_br = 0.01;
    s.kappa_rb = 0.01;
    s.gamma_b = 1.0;
    s.gamma_r = 0.0;
    s.net_feedback = NetFeedback::Pairwise;
    s
}

/// Built-in use-case `id` with `path=value` overrides applied.
pub fn build_usecase<S: AsRef<str>>(id: u32, overrides: &[S]) -> Result<Scenario, HarnessError> {
    let s = match id {
        1 => usecase1(),
        2 => usecase2(),
        3 => usecase3(),
        _ => return Err(HarnessError::UnknownUseCase(id)),
    };
    s.with_overrides(overrides)
}

/// Annotated scenario file shipped for use-case `id`.
pub fn usecase_toml(id: u32) -> Result<&'static str, HarnessError> {
    match id {
        1 => Ok(include_str!("../../scenarios/usecase1.toml")),
        2 => Ok(include_str!("../../scenarios/usecase2.toml")),
        3 => Ok(include_str!("../../scenarios/usecase3.toml")),
        _ => Err(HarnessError::UnknownUseCase(id)),
    }
}

/// Default 33×33 sweep axes: the frustration square for use-case 1, the
/// intra-coupling square for use-case 2, and lethality against Blue
/// coupling for use-case 3.
pub fn default_axes(id: u32) -> Result<(Axis, Axis), HarnessError> {
    let ax = |path: &str, min, max| Axis {
        path: path.into(),
        min,
        max,
        steps: 33,
    };
    match id {
        1 => Ok((ax("phi_BR", 0.0, PI), ax("phi_RB", 0.0, PI))),
        2 => Ok((ax("sigma_R", 0.0, 5.0), ax("sigma_B", 0.0, 5.0))),
        3 => Ok((ax("kappa_BR", 0.0, 0.03), ax("sigma_B", 0.0, 0.5))),
        _ => Err(HarnessError::UnknownUseCase(id)),
    }
}
