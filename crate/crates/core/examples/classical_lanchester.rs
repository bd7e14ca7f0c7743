//! Square-law baseline: numerical integration against the cosh/sinh closed
//! form, and drift of the conserved quantity.

use lanchester_c2::global::{classical_closed_form, run_classical, square_law_invariant};
use lanchester_c2::integrate::IntegratorSettings;

fn main() {
    let alphas = (0.005, 0.005);
    let p0 = (2100.0, 2000.0);
    let t_final = 320.0;
    let traj = run_classical(
        p0,
        alphas,
        t_final,
        &IntegratorSettings::for_span(t_final).with_samples(9),
    )
    .expect("classical run");
    let h0 = square_law_invariant(p0, alphas);
    println!(
        "{:>8} {:>12} {:>12} {:>12} {:>12}",
        "t", "p_B", "p_R", "rel err", "invariant"
    );
    for (t, y) in traj.times.iter().zip(&traj.states) {
        let (eb, er) = classical_closed_form(p0, alphas, *t);
        let err = ((y[0] - eb).abs() / eb.abs()).max((y[1] - er).abs() / er.abs());
        let h = square_law_invariant((y[0], y[1]), alphas);
        println!(
            "{t:8.1} {:12.4} {:12.4} {err:12.2e} {:12.6e}",
            y[0],
            y[1],
            (h - h0) / h0
        );
    }
    println!("steps: {:?}", traj.stats);
}
