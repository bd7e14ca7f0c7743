//! Outcome grid over the two frustrations, written as `grid.csv` plus a
//! matplotlib script. `cargo run --release --example frustration_sweep -- DIR [STEPS] [TIER]`.

use lanchester_c2::harness::{
    build_usecase, default_axes, emit_contour, run_sweep, SweepSpec, Tier,
};

fn main() {
    let mut args = std::env::args().skip(1);
    let dir = args.next().unwrap_or_else(|| "frustration_sweep".into());
    let steps: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(9);
    let tier: Tier = args
        .next()
        .map(|s| s.parse().unwrap())
        .unwrap_or(Tier::Global);
    let (mut a1, mut a2) = default_axes(1).unwrap();
    a1.steps = steps;
    a2.steps = steps;
    let mut spec = SweepSpec::new(build_usecase::<&str>(1, &[]).unwrap(), tier, a1, a2);
    spec.workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let grid = run_sweep(&spec).unwrap();
    emit_contour(&grid, &dir).unwrap();
    // Sign map, phi_RB increasing upwards.
    for j in (0..steps).rev() {
        let row: String = (0..steps)
            .map(|i| match grid.p_final(i, j) {
                p if p > 0.0 => 'B',
                p if p < 0.0 => 'R',
                p if p.is_nan() => '?',
                _ => '.',
            })
            .collect();
        println!("{row}");
    }
    println!("wrote {dir}/grid.csv and {dir}/plot_grid.py");
}
