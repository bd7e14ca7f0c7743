use super::*;
use crate::global::{sector_phases, smooth_heaviside};
use crate::graphs::{
    build_complete_kary_tree, build_edgeless, build_erdos_renyi, build_fighting_fish, build_path,
};
use crate::integrate::IntegratorSettings;
use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, PI};

fn fish_p0() -> Vec<f64> {
    let mut p = vec![10.0; 10];
    p.extend([100.0, 100.0]);
    p
}

/// Two fighting-fish forces engaging on nodes 1–3.
fn fish(sigma_b: f64, sigma_r: f64, zeta: f64) -> NetworkedScenario {
    let phases: Vec<f64> = sector_phases(12)
        .into_iter()
        .chain(sector_phases(12))
        .collect();
    let p0: Vec<f64> = fish_p0().into_iter().chain(fish_p0()).collect();
    let mut scn = NetworkedScenario::new(
        build_fighting_fish(),
        build_fighting_fish(),
        EngagementMap::same_index(12, 12, 0..3).unwrap(),
        vec![1.0; 24],
        phases,
        p0,
    );
    scn.sigma_b = sigma_b;
    scn.sigma_r = sigma_r;
    scn.zeta_br = zeta;
    scn.zeta_rb = zeta;
    scn.phi_br = FRAC_PI_4;
    scn.phi_rb = FRAC_PI_4;
    scn.kappa_br = 0.1;
    scn.kappa_rb = 0.1;
    scn.gamma_b = 1.0;
    scn.gamma_r = 1.0;
    scn.feedback = NetFeedback::Pairwise;
    scn
}

/// Two-node Blue chain, one isolated Red node, no engagement.
fn chain(p: [f64; 2]) -> NetworkedScenario {
    let mut scn = NetworkedScenario::new(
        build_path(2),
        build_edgeless(1),
        EngagementMap::new(2, 1, []).unwrap(),
        vec![0.0; 3],
        vec![0.0; 3],
        vec![p[0], p[1], 5.0],
    );
    scn.gamma_b = 1.0;
    scn
}

fn tree_vs_random(phi_br: f64, phi_rb: f64) -> NetworkedScenario {
    let phases: Vec<f64> = sector_phases(21)
        .into_iter()
        .chain(sector_phases(21))
        .collect();
    let omega = (0..21)
        .map(|i| 0.503 + 0.4 * (1.7 * i as f64).sin())
        .chain((0..21).map(|i| 0.551 + 0.4 * (2.3 * i as f64).cos()))
        .collect();
    let mut scn = NetworkedScenario::new(
        build_complete_kary_tree(4, 2).unwrap(),
        build_erdos_renyi(21, 0.4, 2).unwrap(),
        EngagementMap::same_index(21, 21, 5..21).unwrap(),
        omega,
        phases,
        vec![100.0; 42],
    );
    scn.sigma_b = 8.0;
    scn.sigma_r = 0.5;
    scn.zeta_br = 0.4;
    scn.zeta_rb = 0.4;
    scn.phi_br = phi_br;
    scn.phi_rb = phi_rb;
    scn.kappa_br = 0.005;
    scn.kappa_rb = 0.005;
    scn.gamma_b = 1.0;
    scn.gamma_r = 1.0;
    scn
}

fn state_with(scn: &NetworkedScenario, theta: &[f64], p: &[f64]) -> Vec<f64> {
    assert_eq!(theta.len(), scn.n_nodes());
    theta.iter().chain(p).copied().collect()
}

#[test]
fn local_order_examples() {
    // Blue path 1-2-3, Red single node.
    let scn = NetworkedScenario::new(
        build_path(3),
        build_edgeless(1),
        EngagementMap::new(3, 1, []).unwrap(),
        vec![0.0; 4],
        vec![0.0; 4],
        vec![1.0; 4],
    );
    let y = state_with(&scn, &[0.3, 1.0, 0.3, 2.0], &[1.0; 4]);
    assert_eq!(local_order(&scn, &y, 3).unwrap(), 1.0);
    assert_abs_diff_eq!(local_order(&scn, &y, 1).unwrap(), 1.0, epsilon = 1e-15);
    let y = state_with(&scn, &[0.0, 1.0, PI, 2.0], &[1.0; 4]);
    assert!(local_order(&scn, &y, 1).unwrap() < 1e-15);
    // A dead neighbour does not count: only node 1 remains, so O = 1.
    let y = state_with(&scn, &[0.0, 1.0, PI, 2.0], &[1.0, 1.0, 0.0, 1.0]);
    assert_abs_diff_eq!(local_order(&scn, &y, 1).unwrap(), 1.0, epsilon = 1e-15);
    assert!(local_order(&scn, &y, 7).is_err());
}

#[test]
fn flow_moderator_examples() {
    // Blue 1 engages Red 1; Blue 2 engages Red 1 and Red 2; Blue 3 idle.
    let mut scn = NetworkedScenario::new(
        build_path(3),
        build_path(2),
        EngagementMap::new(3, 2, [(0, 0), (1, 0), (1, 1)]).unwrap(),
        vec![0.0; 5],
        vec![0.0; 5],
        vec![1.0; 5],
    );
    scn.eps2 = 1e-20;
    let y = state_with(&scn, &[0.0; 5], &[7.0, 7.0, 7.0, 100.0, 30.0]);
    let (delta, d) = flow_moderators(&scn, &y).unwrap();
    assert_eq!(delta[0], 1.0 / 101.0);
    assert_eq!(delta[1], 1.0 / 131.0);
    assert_eq!(delta[2], 1.0);
    assert_eq!(d[2], 1e20);
    assert_abs_diff_eq!(d[1], 0.5, epsilon = 1e-15);
    assert_abs_diff_eq!(d[3], 0.5, epsilon = 1e-15);
    assert_abs_diff_eq!(d[4], 1.0, epsilon = 1e-15);
}

#[test]
fn balanced_flows_are_stationary() {
    let mut scn = fish(1.0, 1.0, 0.5);
    scn.kappa_br = 0.0;
    scn.kappa_rb = 0.0;
    scn.engagement = EngagementMap::new(12, 12, []).unwrap();
    let y = state_with(&scn, &[0.4; 24], &[10.0; 24]);
    let mut dy = vec![0.0; 48];
    networked_rhs(&scn, &y, &mut dy).unwrap();
    assert!(dy[24..].iter().all(|&d| d == 0.0));
}

#[test]
fn chain_flow_by_hand() {
    // No engagement: δ = 1 on both nodes; equal phases so the agreement
    // factor is 1; flow into node 2 is γ (δ₁p₁ − δ₂p₂) = 10 − 1.
    let scn = chain([10.0, 1.0]);
    let mut dy = vec![0.0; 6];
    networked_rhs(&scn, &scn.initial_state(), &mut dy).unwrap();
    assert_eq!(dy[4], 9.0);
    assert_eq!(dy[3], -9.0);
    assert_eq!(dy[5], 0.0);

    // An empty node is extinct: it neither receives nor sends.
    let scn = chain([10.0, 0.0]);
    networked_rhs(&scn, &scn.initial_state(), &mut dy).unwrap();
    assert_eq!((dy[3], dy[4]), (0.0, 0.0));
    assert_eq!(dy[3], -dy[4]);
}

#[test]
fn mirrored_fish_derivatives_match() {
    let scn = fish(1.3, 1.3, 0.5);
    let mut dy = vec![0.0; 48];
    networked_rhs(&scn, &scn.initial_state(), &mut dy).unwrap();
    let blue: f64 = dy[24..36].iter().sum();
    let red: f64 = dy[36..].iter().sum();
    assert!(blue < 0.0);
    assert_eq!(blue, red);
    assert_eq!(&dy[..12], &dy[12..24]);
}

#[test]
fn nonfinite_derivative_reports_node() {
    let scn = chain([10.0, 1.0]);
    let y = scn.initial_state();
    let mut dy = vec![0.0; 6];
    let mut bad = scn.clone();
    bad.omega[2] = f64::NAN;
    match networked_rhs(&bad, &y, &mut dy) {
        Err(ModelError::NonFinite { force, node }) => assert_eq!((force, node), ("R", 1)),
        other => panic!("expected NonFinite, got {other:?}"),
    }
    let mut y_bad = y.clone();
    y_bad[4] = f64::NAN;
    match networked_rhs(&scn, &y_bad, &mut dy) {
        Err(ModelError::NonFinite { force, node }) => assert_eq!((force, node), ("B", 2)),
        other => panic!("expected NonFinite, got {other:?}"),
    }
    assert!(matches!(
        networked_rhs(&scn, &y[..5], &mut dy),
        Err(ModelError::DimensionMismatch { .. })
    ));
}

/// Term-by-term transcription over dense matrices, sharing no code with
/// `NetworkedRhs`.
fn dense_oracle(scn: &NetworkedScenario, y: &[f64]) -> Vec<f64> {
    let (n, nb) = (scn.n_nodes(), scn.n_blue());
    let mut m = vec![vec![0.0; n]; n];
    let mut e = vec![vec![0.0; n]; n];
    for (i, j) in scn.blue_graph.edges() {
        m[i][j] = 1.0;
        m[j][i] = 1.0;
    }
    for (i, j) in scn.red_graph.edges() {
        m[nb + i][nb + j] = 1.0;
        m[nb + j][nb + i] = 1.0;
    }
    for &(b, r) in scn.engagement.pairs() {
        e[b][nb + r] = 1.0;
        e[nb + r][b] = 1.0;
    }
    let blue = |k: usize| k < nb;
    let (th, p) = (&y[..n], &y[n..]);
    let dead = |k: usize| p[k] <= scn.extinction_threshold;
    let h = |k: usize| {
        if dead(k) {
            0.0
        } else {
            smooth_heaviside(p[k], scn.eps1, scn.eps2)
        }
    };
    let pw = scn.feedback == NetFeedback::Pairwise;
    let w = |a: f64, b: f64| {
        if pw && a + b != 0.0 {
            2.0 * a / (a + b)
        } else {
            1.0
        }
    };
    let order = |k: usize| {
        let (mut re, mut im, mut den) = (0.0, 0.0, 0.0);
        for mm in 0..n {
            re += m[k][mm] * h(mm) * th[mm].cos();
            im += m[k][mm] * h(mm) * th[mm].sin();
            den += m[k][mm] * h(mm);
        }
        ((re * re + im * im).sqrt() + scn.eps2) / (den + scn.eps2)
    };
    let delta =
        |k: usize| 1.0 / ((0..n).map(|mm| e[k][mm] * p[mm]).sum::<f64>() + scn.standing_force);
    let dd = |k: usize| 1.0 / ((0..n).map(|mm| e[k][mm] * h(mm)).sum::<f64>() + scn.eps2);
    let mut out = vec![0.0; 2 * n];
    for i in 0..n {
        if dead(i) {
            continue;
        }
        let (sigma, zeta, phi, gamma, kappa) = if blue(i) {
            (
                scn.sigma_b,
                scn.zeta_br,
                scn.phi_br,
                scn.gamma_b,
                scn.kappa_rb,
            )
        } else {
            (
                scn.sigma_r,
                scn.zeta_rb,
                scn.phi_rb,
                scn.gamma_r,
                scn.kappa_br,
            )
        };
        let mut s = scn.omega[i];
        let mut flow = 0.0;
        let mut loss = 0.0;
        for j in 0..n {
            s -= h(j) * m[i][j] * sigma * w(p[j], p[i]) * (th[i] - th[j]).sin();
            s -= h(j) * e[i][j] * zeta * w(p[i], p[j]) * (th[i] - th[j] - phi).sin();
            flow += h(j)
                * m[i][j]
                * gamma
                * (delta(j) * p[j] - delta(i) * p[i])
                * ((th[j] - th[i]).cos() + 1.0)
                / 2.0;
            loss += h(j) * e[i][j] * kappa * p[j] * dd(j) * ((th[j] - th[i]).sin() + 1.0) / 2.0
                * order(j);
        }
        out[i] = h(i) * s;
        out[n + i] = h(i) * (flow - loss);
    }
    out
}

#[test]
fn rhs_matches_dense_oracle() {
    let mut scn = fish(0.7, 2.1, 1.5);
    scn.kappa_br = 0.3;
    scn.gamma_r = 2.5;
    scn.standing_force = 0.5;
    let theta: Vec<f64> = (0..24).map(|k| (k as f64 * 0.77).sin() * 2.0).collect();
    let mut p: Vec<f64> = (0..24)
        .map(|k| 5.0 + 3.0 * (k as f64 * 1.3).cos())
        .collect();
    p[1] = 0.0; // dead engaged Blue node
    p[14] = 0.0; // dead Red node
    let y = state_with(&scn, &theta, &p);
    let mut dy = vec![0.0; 48];
    for fb in [NetFeedback::None, NetFeedback::Pairwise] {
        scn.feedback = fb;
        networked_rhs(&scn, &y, &mut dy).unwrap();
        let oracle = dense_oracle(&scn, &y);
        for (k, (a, b)) in dy.iter().zip(&oracle).enumerate() {
            assert!(
                (a - b).abs() <= 1e-12 * (1.0 + b.abs()),
                "component {k}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn manoeuvre_conserves_force_totals() {
    let mut scn = fish(1.0, 2.5, 0.5);
    scn.kappa_br = 0.0;
    scn.kappa_rb = 0.0;
    let run = run_networked(
        &scn,
        1e3,
        &IntegratorSettings::for_span(1e3).with_samples(201),
    )
    .unwrap();
    for y in &run.trajectory.states {
        let (b, r) = scn.force_totals(y);
        assert!((b - 300.0).abs() < 1e-8 * 300.0, "blue total {b}");
        assert!((r - 300.0).abs() < 1e-8 * 300.0, "red total {r}");
    }
    // Reserves did move toward the engagement.
    let last = run.trajectory.last_state();
    assert!(last[24 + 10] < 100.0);
}

#[test]
fn symmetric_fish_is_a_draw() {
    let scn = fish(1.5, 1.5, 0.5);
    let run = run_networked(
        &scn,
        1e3,
        &IntegratorSettings::for_span(1e3).with_samples(11),
    )
    .unwrap();
    assert!(
        run.p_final.abs() < 1e-6 * 240.0,
        "p_final = {}",
        run.p_final
    );
}

#[test]
fn mirroring_negates_outcome() {
    let scn = fish(0.5, 2.0, 1.0);
    let settings = IntegratorSettings::for_span(1e3);
    let a = networked_outcome(&scn, 1e3, &settings).unwrap();
    let b = networked_outcome(&scn.mirrored(), 1e3, &settings).unwrap();
    assert!(a.abs() > 1.0);
    assert!((a + b).abs() < 1e-6 * 300.0, "{a} vs {b}");
}

/// Red out-guns Blue on the engaged nodes until they are annihilated.
fn lopsided() -> NetworkedScenario {
    let mut scn = fish(1.0, 1.0, 0.5);
    scn.kappa_rb = 2.0;
    scn.kappa_br = 0.05;
    scn.gamma_b = 0.05;
    scn
}

#[test]
fn extinction_trajectory_invariants() {
    let scn = lopsided();
    let settings = IntegratorSettings::for_span(300.0).with_samples(3001);
    let run = run_networked(&scn, 300.0, &settings).unwrap();
    let traj = &run.trajectory;
    assert!(
        !traj.freeze_events.is_empty(),
        "expected at least one annihilated node"
    );
    let n = scn.n_nodes();
    for (y, order) in traj.states.iter().zip(&run.local_order) {
        assert!(y[n..].iter().all(|&p| p >= -10.0 * scn.eps1));
        assert!(order.iter().all(|&o| (0.0..=1.0).contains(&o)));
    }
    // Once dead, a node's phase and population never change again.
    for ev in &traj.freeze_events {
        let k = ev.group;
        let first = traj.times.iter().position(|&t| t >= ev.t).unwrap();
        for y in &traj.states[first..] {
            assert_eq!(y[n + k], scn.extinction_threshold);
            assert_eq!(y[k], traj.states[first][k]);
        }
    }
    // Force totals carry no jump across the freeze events.
    for ev in &traj.freeze_events {
        let k = traj.times.iter().position(|&t| t >= ev.t).unwrap();
        let dt = traj.times[k] - traj.times[k - 1];
        let slope = |j: usize| {
            let (b0, _) = scn.force_totals(&traj.states[j - 1]);
            let (b1, _) = scn.force_totals(&traj.states[j]);
            (b1 - b0) / dt
        };
        // Increment across the event is bounded by the neighbouring rates.
        let jump = (slope(k) * dt).abs();
        let envelope = (slope(k - 1)
            .abs()
            .max(slope((k + 1).min(traj.len() - 1)).abs())
            + 1e-6)
            * dt;
        assert!(
            jump <= 2.0 * envelope + settings.abs_tol,
            "jump {jump} envelope {envelope}"
        );
    }
}

#[test]
fn outcome_matches_full_run() {
    let scn = lopsided();
    let settings = IntegratorSettings::for_span(1e3);
    let full = run_networked(&scn, 1e3, &settings).unwrap();
    let quick = networked_outcome(&scn, 1e3, &settings).unwrap();
    assert!(full.p_final > -300.0 && full.p_final < 0.0);
    assert!(
        (full.p_final - quick).abs() < 1e-6 * 300.0,
        "{} vs {quick}",
        full.p_final
    );
}

#[test]
fn attrition_tracks_global_rates_when_synchronised() {
    // With homogeneous populations and near-complete synchrony, the summed
    // Blue loss rate should match κ Ω_RB P_R of the merged force.
    let scn = tree_vs_random(FRAC_PI_4, FRAC_PI_6);
    let run = run_networked(
        &scn,
        200.0,
        &IntegratorSettings::for_span(200.0).with_samples(201),
    )
    .unwrap();
    let n = scn.n_nodes();
    let mut dy = vec![0.0; 2 * n];
    let mut checked = 0;
    for (y, order) in run.trajectory.states.iter().zip(&run.local_order) {
        if order.iter().any(|&o| o < 0.99) {
            continue;
        }
        networked_rhs(&scn, y, &mut dy).unwrap();
        let (th_b, th_r) = (&y[..21], &y[21..42]);
        let delta = th_b.iter().sum::<f64>() / 21.0 - th_r.iter().sum::<f64>() / 21.0;
        let engaged_red: f64 = (5..21).map(|r| y[n + 21 + r]).sum();
        let global_rate = -scn.kappa_rb * 0.5 * (1.0 - delta.sin()) * engaged_red;
        // Manoeuvre moves resource but does not change the force total.
        let net_rate: f64 = dy[n..n + 21].iter().sum();
        assert!(
            (net_rate - global_rate).abs() <= 0.05 * global_rate.abs(),
            "{net_rate} vs {global_rate}"
        );
        checked += 1;
    }
    assert!(checked > 50, "only {checked} synchronised samples");
}

#[test]
fn csv_schema() {
    let scn = chain([10.0, 1.0]);
    let run = run_networked(
        &scn,
        1.0,
        &IntegratorSettings::for_span(1.0).with_samples(3),
    )
    .unwrap();
    let mut buf = Vec::new();
    write_networked_csv(&mut buf, &scn, &run).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,node,force,p,theta,O_local");
    assert_eq!(lines.len(), 1 + 3 * 3);
    let row: Vec<&str> = lines[3].split(',').collect();
    assert_eq!((row[1], row[2]), ("1", "R"));
    assert_eq!(row[3].parse::<f64>().unwrap(), 5.0);
}

#[test]
fn validation_rejects_bad_inputs() {
    let mut scn = chain([1.0, 1.0]);
    scn.standing_force = 0.0;
    assert!(scn.validate().is_err());
    let mut scn = chain([1.0, 1.0]);
    scn.p0[1] = -1.0;
    assert!(scn.validate().is_err());
    let mut scn = chain([1.0, 1.0]);
    scn.omega.pop();
    assert!(scn.validate().is_err());
    let mut scn = chain([1.0, 1.0]);
    scn.phi_rb = 7.0;
    assert!(scn.validate().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn local_order_in_unit_interval(
        theta in prop::collection::vec(-10.0..10.0f64, 24),
        p in prop::collection::vec(0.0..50.0f64, 24),
    ) {
        let scn = fish(1.0, 1.0, 1.0);
        let y = state_with(&scn, &theta, &p);
        for k in 0..24 {
            let o = local_order(&scn, &y, k).unwrap();
            prop_assert!((0.0..=1.0).contains(&o));
        }
    }

    #[test]
    fn flow_is_pairwise_antisymmetric(
        theta in prop::collection::vec(-3.0..3.0f64, 24),
        p in prop::collection::vec(0.0..50.0f64, 24),
        gb in 0.0..5.0f64, gr in 0.0..5.0f64,
    ) {
        let mut scn = fish(1.0, 2.0, 1.0);
        scn.kappa_br = 0.0;
        scn.kappa_rb = 0.0;
        scn.gamma_b = gb;
        scn.gamma_r = gr;
        let y = state_with(&scn, &theta, &p);
        let mut dy = vec![0.0; 48];
        networked_rhs(&scn, &y, &mut dy).unwrap();
        let b: f64 = dy[24..36].iter().sum();
        let r: f64 = dy[36..].iter().sum();
        prop_assert!(b.abs() < 1e-12 * 1000.0 && r.abs() < 1e-12 * 1000.0, "{b} {r}");
    }

    #[test]
    fn attrition_never_adds(
        theta in prop::collection::vec(-3.0..3.0f64, 24),
        p in prop::collection::vec(0.0..50.0f64, 24),
    ) {
        let mut scn = fish(1.0, 2.0, 1.0);
        scn.gamma_b = 0.0;
        scn.gamma_r = 0.0;
        let y = state_with(&scn, &theta, &p);
        let mut dy = vec![0.0; 48];
        networked_rhs(&scn, &y, &mut dy).unwrap();
        prop_assert!(dy[24..].iter().all(|&d| d <= 0.0));
    }
}

#[test]
fn pair_weight_degenerate() {
    assert_eq!(pair_weight(0.0, 0.0), 1.0);
    assert_eq!(pair_weight(3.0, 3.0), 1.0);
    assert_eq!(pair_weight(3.0, 1.0), 1.5);
}
