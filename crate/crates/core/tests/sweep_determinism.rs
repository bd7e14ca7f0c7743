use lanchester_c2::harness::{build_usecase, run_sweep, Axis, SweepSpec, Tier};

fn grid_csv(tier: Tier, workers: usize) -> String {
    let scn = build_usecase(1, &["t_final=300"]).unwrap();
    let mut spec = SweepSpec::new(
        scn,
        tier,
        Axis::parse("phi_BR:0:pi:4").unwrap(),
        Axis::parse("phi_RB:0:pi:3").unwrap(),
    );
    spec.workers = workers;
    run_sweep(&spec).unwrap().to_csv()
}

#[test]
fn grid_is_independent_of_worker_count() {
    for tier in [Tier::Global, Tier::Reduced] {
        let serial = grid_csv(tier, 1);
        assert_eq!(serial, grid_csv(tier, 3), "{}", tier.name());
        assert_eq!(serial, grid_csv(tier, 1), "{}", tier.name());
    }
}

#[test]
fn rows_follow_axis1_outer() {
    let csv = grid_csv(Tier::Reduced, 2);
    let rows: Vec<(f64, f64)> = csv
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 12);
    assert_eq!(rows[0], (0.0, 0.0));
    assert_eq!(rows[2], (0.0, std::f64::consts::PI));
    assert_eq!(rows[3].1, 0.0);
    assert!(rows[3].0 > 0.0);
}
