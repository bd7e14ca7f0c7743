//! The integrator on its own: a population draining to zero is caught at
//! the threshold and frozen, while the rest of the state keeps evolving.

use lanchester_c2::integrate::{
    integrate_with_freeze, FreezeGroup, FreezeRules, IntegratorSettings,
};

fn main() {
    // y0 drains at a rate modulated by the clock y1, which never stops.
    let rules = {
        let mut r = FreezeRules::none();
        r.push(FreezeGroup {
            watch: 0,
            threshold: 1e-12,
            members: vec![0],
            snap_to: Some(0.0),
        });
        r
    };
    let settings = IntegratorSettings::for_span(5.0).with_samples(11);
    let traj = integrate_with_freeze(
        |_, y, dy| {
            dy[0] = -0.5 * (1.0 + y[1].cos()).max(0.1);
            dy[1] = 1.0;
        },
        &rules,
        &[1.0, 0.0],
        5.0,
        &settings,
    )
    .unwrap();
    for (t, y) in traj.times.iter().zip(&traj.states) {
        println!("t={t:4.1}  p={:+.3e}  clock={:.3}", y[0], y[1]);
    }
    for ev in &traj.freeze_events {
        println!("group {} froze at t={:.9}", ev.group, ev.t);
    }
    println!("{:?}, {:?}", traj.status, traj.stats);
}
