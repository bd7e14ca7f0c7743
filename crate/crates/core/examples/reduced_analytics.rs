//! Clustered reduction: lumped constants, closed-form phase gap, its fixed
//! point, and agreement of the reduced outcome with the full model.

use lanchester_c2::global::global_outcome;
use lanchester_c2::harness::build_usecase;
use lanchester_c2::reduced::{
    delta_analytic, delta_asymptotic, delta_dot_initial, reduced_constants, run_reduced,
};

fn main() {
    let scn = build_usecase(1, &["phi_BR=pi/4", "phi_RB=pi/6"]).unwrap();
    let g = scn.global().unwrap();
    let rc = reduced_constants(&g);
    println!(
        "C = {:.6}  S = {:.6}  K = {:.6}  w = {:.3}",
        rc.c,
        rc.s,
        rc.k,
        rc.w()
    );
    let fixed = delta_asymptotic(&rc).unwrap();
    println!(
        "Delta_inf = {fixed:.6}  Delta'(0) = {:.6}",
        delta_dot_initial(&rc)
    );
    for t in [0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0] {
        let d = delta_analytic(&rc, t, 0.0).unwrap();
        println!(
            "  t={t:5.1}  Delta={d:+.8}  distance to fixed point {:.2e}",
            (d - fixed).abs()
        );
    }

    let right = build_usecase(1, &["phi_BR=pi/2", "phi_RB=pi/2"]).unwrap();
    let rr = reduced_constants(&right.global().unwrap());
    println!(
        "\nright angles: S = {:.3}  K = {:.4e}  Delta'(0) = {:.4}",
        rr.s,
        rr.k,
        delta_dot_initial(&rr)
    );
    println!(
        "  K < 0: Delta circulates with period {:.1}",
        std::f64::consts::TAU / (-rr.k).sqrt()
    );

    let t_final = scn.t_final;
    let settings = scn.integrator_settings(t_final);
    let reduced = run_reduced(&g, t_final, &settings).unwrap();
    let full = global_outcome(&g, t_final, &settings).unwrap();
    println!(
        "\np_final: reduced {:.2}, full {:.2}",
        reduced.p_final, full
    );
}
