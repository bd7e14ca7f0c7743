//! Tree against random network, homogeneous forces: the two reference
//! frustration settings and their organisational factors over time.
//!
//! `cargo run --release --example global_usecase1 [out.csv]` also writes the
//! (π/4, π/6) trajectory.

use lanchester_c2::global::{run_global, write_global_csv};
use lanchester_c2::harness::build_usecase;

fn main() {
    let out = std::env::args().nth(1);
    for (label, sets) in [
        ("(pi/4, pi/6)", ["phi_BR=pi/4", "phi_RB=pi/6"]),
        ("(pi/2, pi/2)", ["phi_BR=pi/2", "phi_RB=pi/2"]),
    ] {
        let scn = build_usecase(1, &sets).unwrap();
        let g = scn.global().unwrap();
        let run = run_global(
            &g,
            scn.t_final,
            &scn.integrator_settings(scn.t_final).with_samples(11),
        )
        .unwrap();
        println!("frustrations {label}: p_final = {:.2}", run.p_final);
        println!(
            "{:>8} {:>9} {:>9} {:>6} {:>6} {:>9} {:>9}",
            "t", "p_B", "p_R", "O_B", "O_R", "Omega_BR", "Omega_RB"
        );
        for (k, (t, ob)) in run
            .trajectory
            .times
            .iter()
            .zip(&run.observables)
            .enumerate()
        {
            println!(
                "{t:8.0} {:9.2} {:9.2} {:6.3} {:6.3} {:9.4} {:9.4}",
                run.p_b(k),
                run.p_r(k),
                ob.o_b,
                ob.o_r,
                ob.omega_br,
                ob.omega_rb
            );
        }
        if let (Some(path), "(pi/4, pi/6)") = (&out, label) {
            let full = run_global(&g, scn.t_final, &scn.integrator_settings(scn.t_final)).unwrap();
            write_global_csv(std::fs::File::create(path).unwrap(), &full).unwrap();
            println!("wrote {path}");
        }
        println!();
    }
}
