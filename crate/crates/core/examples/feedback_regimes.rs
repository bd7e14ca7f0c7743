//! Attrition feedback on the inter-network coupling: how the share of the
//! frustration square each force wins changes with the feedback mode.

use lanchester_c2::harness::{build_usecase, run_sweep, Axis, SweepSpec, Tier};

fn main() {
    let steps = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(9);
    let axis = |path: &str| Axis {
        path: path.into(),
        min: 0.0,
        max: std::f64::consts::PI,
        steps,
    };
    for mode in ["none", "focus_loss", "effort_gain"] {
        let scn = build_usecase(1, &[format!("feedback=\"{mode}\"")]).unwrap();
        let mut spec = SweepSpec::new(scn, Tier::Global, axis("phi_BR"), axis("phi_RB"));
        spec.workers = std::thread::available_parallelism().map_or(1, |n| n.get());
        let grid = run_sweep(&spec).unwrap();
        let (blue, red) = grid.win_fractions();
        let close = grid
            .cells
            .iter()
            .filter(|c| c.p_final.abs() < 210.0)
            .count() as f64
            / grid.cells.len() as f64;
        println!("{mode:<12} blue {blue:.3}  red {red:.3}  |p_final| < 10% of a force: {close:.3}");
    }
}
