//! Fighting fish: reserves must be manoeuvred to the three engaged nodes.
//! Shows the node-level trajectory for an asymmetric coupling choice and
//! the neutrality of the mirrored case.

use lanchester_c2::harness::build_usecase;
use lanchester_c2::networked::{networked_outcome, run_networked};

fn main() {
    let scn = build_usecase(2, &["sigma_B=2.0", "sigma_R=0.5"]).unwrap();
    let net = scn.networked().unwrap();
    let run = run_networked(
        &net,
        scn.t_final,
        &scn.integrator_settings(scn.t_final).with_samples(6),
    )
    .unwrap();
    let n = net.n_nodes();
    for (t, y) in run.trajectory.times.iter().zip(&run.trajectory.states) {
        let (b, r) = net.force_totals(y);
        let engaged_b: f64 = y[n..n + 3].iter().sum();
        let engaged_r: f64 = y[n + 12..n + 15].iter().sum();
        println!(
            "t={t:6.0}  Blue {b:7.2} (front {engaged_b:6.2})  Red {r:7.2} (front {engaged_r:6.2})"
        );
    }
    println!(
        "sigma_B=2, sigma_R=0.5: p_final = {:.3}, {} nodes annihilated",
        run.p_final,
        run.trajectory.freeze_events.len()
    );

    let twin = build_usecase(2, &[] as &[&str]).unwrap();
    let p = networked_outcome(
        &twin.networked().unwrap(),
        twin.t_final,
        &twin.integrator_settings(twin.t_final),
    )
    .unwrap();
    println!("identical forces: p_final = {p:.3e}");
}
