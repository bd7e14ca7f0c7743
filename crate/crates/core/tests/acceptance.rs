//! Acceptance suite: each criterion prints one `[PASS]`/`[FAIL]` line.
//!
//! Runs as a plain binary (`harness = false`) so the report is never
//! captured. Criteria listed in `KNOWN_FAILURES` are still evaluated and
//! reported as `[FAIL]`; they do not change the exit status. Every other
//! failure does.

use lanchester_c2::global::{
    classical_closed_form, run_classical, run_global, square_law_invariant, Feedback,
};
use lanchester_c2::harness::{
    build_usecase, check_invariants, random_scenario, run_sweep, Axis, SweepGrid, SweepSpec, Tier,
};
use lanchester_c2::integrate::{integrate, IntegratorSettings};
use lanchester_c2::networked::{networked_outcome, run_networked, NetworkedScenario};
use lanchester_c2::reduced::{
    delta_analytic, delta_asymptotic, delta_dot_initial, reduced_rhs, ReducedConstants,
    ReducedModel,
};
use std::time::{Duration, Instant};

/// Outcome analysed in the decisions log: the effort-gain imbalance does
/// not shrink on strict sign areas for the frequency draw used here.
const KNOWN_FAILURES: &[&str] = &["C6b"];

type Verdict = Result<String, String>;

struct Report {
    unexpected: Vec<String>,
}

impl Report {
    fn record(
        &mut self,
        id: &str,
        name: &str,
        budget: Option<Duration>,
        f: impl FnOnce() -> Verdict,
    ) -> Verdict {
        let start = Instant::now();
        let mut verdict = f();
        let took = start.elapsed();
        if let (Ok(detail), Some(b)) = (&verdict, budget) {
            if took > b {
                verdict = Err(format!("{detail}; over budget {b:?}"));
            }
        }
        let (tag, detail) = match &verdict {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        let known = if verdict.is_err() && KNOWN_FAILURES.contains(&id) {
            " (known)"
        } else {
            ""
        };
        println!(
            "[{tag}] {id} {name}: {detail} [{:.1}s]{known}",
            took.as_secs_f64()
        );
        if verdict.is_err() && known.is_empty() {
            self.unexpected.push(id.to_string());
        }
        verdict
    }
}

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn grid(id: u32, sets: &[&str], tier: Tier, a1: &str, a2: &str) -> SweepGrid {
    let scn = build_usecase(id, sets).expect("use-case");
    let spec = SweepSpec::new(
        scn,
        tier,
        Axis::parse(a1).unwrap(),
        Axis::parse(a2).unwrap(),
    );
    let g = run_sweep(&spec).expect("sweep");
    assert!(
        g.cells.iter().all(|c| c.is_ok()),
        "failed cells in {sets:?} {}",
        tier.name()
    );
    g
}

fn sign_areas(g: &SweepGrid) -> (usize, usize) {
    let blue = g.cells.iter().filter(|c| c.p_final > 0.0).count();
    let red = g.cells.iter().filter(|c| c.p_final < 0.0).count();
    (blue, red)
}

fn sign_agreement(a: &SweepGrid, b: &SweepGrid) -> f64 {
    let same = a
        .cells
        .iter()
        .zip(&b.cells)
        .filter(|(x, y)| x.p_final.signum() == y.p_final.signum())
        .count();
    same as f64 / a.cells.len() as f64
}

fn global_p_final(sets: &[&str]) -> f64 {
    let scn = build_usecase(1, sets).unwrap();
    run_global(
        &scn.global().unwrap(),
        scn.t_final,
        &scn.integrator_settings(scn.t_final).with_samples(2),
    )
    .unwrap()
    .p_final
}

fn c1() -> Verdict {
    let alphas = (0.005, 0.005);
    let p0 = (2100.0, 2079.0);
    // Red reaches zero near t = 529; stop while both sides are well away from it.
    let t_final = 400.0;
    let traj = run_classical(
        p0,
        alphas,
        t_final,
        &IntegratorSettings::for_span(t_final).with_samples(401),
    )
    .map_err(|e| e.to_string())?;
    let h0 = square_law_invariant(p0, alphas);
    let (mut err, mut drift) = (0.0f64, 0.0f64);
    for (t, y) in traj.times.iter().zip(&traj.states) {
        let (eb, er) = classical_closed_form(p0, alphas, *t);
        err = err
            .max((y[0] - eb).abs() / eb.abs())
            .max((y[1] - er).abs() / er.abs());
        drift = drift.max((square_law_invariant((y[0], y[1]), alphas) - h0).abs() / h0.abs());
    }
    check(
        err < 1e-6 && drift < 1e-6,
        format!("max rel err {err:.2e}, invariant drift {drift:.2e}"),
    )
}

fn c2() -> Verdict {
    let scn = build_usecase(1, &["zeta_BR=0", "zeta_RB=0", "t_final=100"]).unwrap();
    let run = run_global(
        &scn.global().unwrap(),
        100.0,
        &scn.integrator_settings(100.0).with_samples(11),
    )
    .map_err(|e| e.to_string())?;
    let last = run.observables.last().unwrap();
    check(
        last.o_b > 0.99 && last.o_r > 0.99,
        format!("O_B = {:.5}, O_R = {:.5} at t = 100", last.o_b, last.o_r),
    )
}

/// Classical RK4 on the phase gap alone (g = 1, no attrition).
fn rk4_gap(rc: &ReducedConstants, t_end: f64, h: f64) -> Vec<(f64, f64)> {
    let f = |d: f64| rc.w() - (rc.a * (d - rc.phi_br).sin() + rc.b * (d + rc.phi_rb).sin());
    let steps = (t_end / h).round() as usize;
    let mut d = 0.0;
    let mut out = vec![(0.0, 0.0)];
    for k in 1..=steps {
        let k1 = f(d);
        let k2 = f(d + 0.5 * h * k1);
        let k3 = f(d + 0.5 * h * k2);
        let k4 = f(d + h * k3);
        d += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.push((k as f64 * h, d));
    }
    out
}

fn gap_model(sets: &[&str]) -> ReducedModel {
    let g = build_usecase(1, sets).unwrap().global().unwrap();
    let mut m = ReducedModel::from_scenario(&g);
    m.feedback = Feedback::None;
    m.kappa_br = 0.0;
    m.kappa_rb = 0.0;
    m
}

/// Library-integrated `Δ(t)`, backwards in time when `sign < 0`.
fn gap_at(m: &ReducedModel, t: f64, sign: f64) -> f64 {
    let y0 = [0.0, m.p_b0, m.p_r0];
    let rhs = |_: f64, y: &[f64], dy: &mut [f64]| {
        let d = reduced_rhs(&[y[0], y[1], y[2]], m);
        for (o, v) in dy.iter_mut().zip(d) {
            *o = sign * v;
        }
    };
    let settings = IntegratorSettings::for_span(t)
        .with_tolerances(1e-12, 1e-14)
        .with_samples(2);
    integrate(rhs, &y0, t, &settings).unwrap().last_state()[0]
}

fn c3() -> Verdict {
    let m = gap_model(&["phi_BR=pi/4", "phi_RB=pi/6"]);
    let rc = m.consts;
    let mut err_a = 0.0f64;
    for (t, d) in rk4_gap(&rc, 100.0, 1e-3).into_iter().step_by(100) {
        err_a = err_a.max((delta_analytic(&rc, t, 0.0).map_err(|e| e.to_string())? - d).abs());
    }
    let fixed = delta_asymptotic(&rc).map_err(|e| e.to_string())?;
    let err_b = (gap_at(&m, 500.0, 1.0) - fixed).abs();
    let h = 1e-4;
    let fd = |m: &ReducedModel| (gap_at(m, h, 1.0) - gap_at(m, h, -1.0)) / (2.0 * h);
    let err_c = (fd(&m) - delta_dot_initial(&rc)).abs();
    let right = gap_model(&["phi_BR=pi/2", "phi_RB=pi/2"]);
    let fd_right = fd(&right);
    let err_right = (fd_right - delta_dot_initial(&right.consts))
        .abs()
        .max((fd_right + 0.048).abs());
    check(
        err_a < 1e-6 && err_b < 1e-3 && err_c < 1e-3 && err_right < 1e-3,
        format!(
            "(a) max |analytic - ODE| {err_a:.2e}; (b) |Delta(500) - Delta_inf| {err_b:.2e}; \
             (c) finite-difference error {err_c:.2e}, right angles Delta'(0) = {fd_right:.4}"
        ),
    )
}

fn c4(g9: &SweepGrid) -> Verdict {
    let anchor_blue = global_p_final(&["phi_BR=pi/4", "phi_RB=pi/6"]);
    let anchor_red = global_p_final(&["phi_BR=pi/2", "phi_RB=pi/2"]);
    let (blue, red) = sign_areas(g9);
    // (π/2, π/2) is the centre cell of the 9×9 grid over [0, π]².
    let centre = g9.p_final(4, 4);
    check(
        anchor_blue > 0.0 && anchor_red < 0.0 && blue > 0 && red > 0 && centre < 0.0,
        format!(
            "p_final(pi/4, pi/6) = {anchor_blue:.1}, p_final(pi/2, pi/2) = {anchor_red:.1}; \
             9x9 grid Blue {blue} / Red {red} cells, centre {centre:.1}"
        ),
    )
}

fn main() {
    let mut rep = Report {
        unexpected: Vec::new(),
    };
    let frustration = |n: usize| (format!("phi_BR:0:pi:{n}"), format!("phi_RB:0:pi:{n}"));

    rep.record(
        "C1",
        "classical square law",
        Some(Duration::from_secs(1)),
        c1,
    )
    .ok();
    rep.record(
        "C2",
        "synchronisation without inter-coupling",
        Some(Duration::from_secs(5)),
        c2,
    )
    .ok();
    rep.record("C3", "reduced analytics", Some(Duration::from_secs(5)), c3)
        .ok();

    let (a9, b9) = frustration(9);
    let mut global9 = None;
    rep.record(
        "C4",
        "global frustration sign anchors",
        Some(Duration::from_secs(60)),
        || {
            let g = grid(1, &[], Tier::Global, &a9, &b9);
            let v = c4(&g);
            global9 = Some(g);
            v
        },
    )
    .ok();
    let global9 = global9.expect("C4 grid");

    let (a17, b17) = frustration(17);
    let mut global17 = None;
    rep.record(
        "C5",
        "reduced vs global sign agreement",
        Some(Duration::from_secs(15 * 60)),
        || {
            let full = grid(1, &[], Tier::Global, &a17, &b17);
            let reduced = grid(1, &[], Tier::Reduced, &a17, &b17);
            let agree = sign_agreement(&full, &reduced);
            global17 = Some(full);
            check(
                agree >= 0.90,
                format!("{:.2}% of 17x17 cells agree (need 90%)", 100.0 * agree),
            )
        },
    )
    .ok();
    let global17 = global17.expect("C5 grid");

    let (b_none, r_none) = sign_areas(&global17);
    rep.record("C6a", "focus loss expands Red area", None, || {
        let (b, r) = sign_areas(&grid(
            1,
            &["feedback=\"focus_loss\""],
            Tier::Global,
            &a17,
            &b17,
        ));
        check(
            r > r_none,
            format!("Red cells {r_none} -> {r} (Blue {b_none} -> {b})"),
        )
    })
    .ok();
    rep.record("C6b", "effort gain evens the areas", None, || {
        let (b, r) = sign_areas(&grid(1, &["feedback=\"effort_gain\""], Tier::Global, &a17, &b17));
        let (before, after) = (b_none.abs_diff(r_none), b.abs_diff(r));
        check(
            after < before,
            format!("|Blue - Red| cells {before} -> {after} (Blue {b_none} -> {b}, Red {r_none} -> {r})"),
        )
    })
    .ok();

    rep.record("C7", "networked vs global sign agreement", None, || {
        let net = grid(1, &[], Tier::Networked, &a9, &b9);
        let agree = sign_agreement(&net, &global9);
        check(
            agree >= 0.85,
            format!("{:.2}% of 9x9 cells agree (need 85%)", 100.0 * agree),
        )
    })
    .ok();

    rep.record("C8", "manoeuvre conserves totals", None, || {
        let mut worst = 0.0f64;
        for id in [2, 3] {
            let net = build_usecase::<&str>(id, &[]).unwrap().networked().unwrap();
            let quiet = NetworkedScenario {
                kappa_br: 0.0,
                kappa_rb: 0.0,
                ..net
            };
            let run = run_networked(
                &quiet,
                1e3,
                &IntegratorSettings::for_span(1e3).with_samples(101),
            )
            .map_err(|e| e.to_string())?;
            let (b0, r0) = quiet.force_totals(&quiet.initial_state());
            for y in &run.trajectory.states {
                let (b, r) = quiet.force_totals(y);
                worst = worst.max((b - b0).abs() / b0).max((r - r0).abs() / r0);
            }
        }
        check(
            worst <= 1e-8,
            format!("max relative drift {worst:.2e} over [0, 1000] (use-cases 2 and 3)"),
        )
    })
    .ok();

    rep.record("C9", "fighting-fish neutrality and transposition", None, || {
        let scn = build_usecase::<&str>(2, &[]).unwrap();
        let net = scn.networked().unwrap();
        let settings = scn.integrator_settings(scn.t_final);
        let p = networked_outcome(&net, scn.t_final, &settings).map_err(|e| e.to_string())?;
        let pm = networked_outcome(&net.mirrored(), scn.t_final, &settings).map_err(|e| e.to_string())?;
        let tol = 1e-6 * 240.0;
        let g = grid(2, &[], Tier::Networked, "sigma_R:0:2:9", "sigma_B:0:2:9");
        let (mut asym, mut spread) = (0.0f64, 0.0f64);
        for i in 0..9 {
            for j in 0..9 {
                asym = asym.max((g.p_final(i, j) + g.p_final(j, i)).abs());
                spread = spread.max(g.p_final(i, j).abs());
            }
        }
        check(
            p.abs() < tol && pm.abs() < tol && asym < tol,
            format!("|p_final| {:.2e}, mirrored {:.2e}, max |p(i,j) + p(j,i)| {asym:.2e} with max |p| {spread:.1} on the grid (tol {tol:.1e})", p.abs(), pm.abs()),
        )
    })
    .ok();

    rep.record("C10", "adaptive Blue against stronger Red", None, || {
        let g = grid(3, &[], Tier::Networked, "kappa_BR:0:0.03:9", "sigma_B:0:0.5:9");
        let weak_wins = (0..9)
            .filter(|&i| g.axis1.value(i) < 0.01)
            .flat_map(|i| (0..9).map(move |j| (i, j)))
            .filter(|&(i, j)| g.p_final(i, j) > 0.0)
            .count();
        // A row where Blue wins at some coupling and loses at a larger one.
        let non_monotone = (0..9).filter(|&i| {
            (0..9).any(|j| g.p_final(i, j) > 0.0 && (j + 1..9).any(|k| g.p_final(i, k) < 0.0))
        });
        let rows: Vec<String> = non_monotone.map(|i| format!("{:.4}", g.axis1.value(i))).collect();
        check(
            weak_wins > 0 && !rows.is_empty(),
            format!("{weak_wins} Blue wins with kappa_BR < 0.01; non-monotone in sigma_B at kappa_BR = [{}]", rows.join(", ")),
        )
    })
    .ok();

    rep.record(
        "C11",
        "invariants on 100 random scenarios",
        Some(Duration::from_secs(300)),
        || {
            let mut failed = Vec::new();
            for seed in 0..100 {
                let scn = random_scenario(seed);
                match check_invariants(&scn, scn.t_final) {
                    Ok(r) if r.all_passed() => {}
                    Ok(r) => failed.extend(
                        r.failures()
                            .map(|c| format!("seed {seed} {} ({})", c.name, c.detail)),
                    ),
                    Err(e) => failed.push(format!("seed {seed}: {e}")),
                }
            }
            check(
                failed.is_empty(),
                if failed.is_empty() {
                    "all checks pass".into()
                } else {
                    failed.join("; ")
                },
            )
        },
    )
    .ok();

    if rep.unexpected.is_empty() {
        println!("acceptance: no unexpected failures");
    } else {
        println!(
            "acceptance: unexpected failures: {}",
            rep.unexpected.join(", ")
        );
        std::process::exit(1);
    }
}
