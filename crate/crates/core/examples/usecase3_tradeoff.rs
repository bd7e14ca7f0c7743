//! Networked Blue against concentrated Red: Blue lethality against Blue
//! coupling. Too little coupling leaves reserves stranded; too much slows
//! the front line's decisions.

use lanchester_c2::harness::{build_usecase, run_sweep, Axis, SweepSpec, Tier};

fn main() {
    let steps = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let gamma = std::env::args().nth(2).unwrap_or_else(|| "1.0".into());
    let scn = build_usecase(3, &[format!("gamma_B={gamma}")]).unwrap();
    let kappa = Axis {
        path: "kappa_BR".into(),
        min: 0.0,
        max: 0.03,
        steps,
    };
    let sigma = Axis {
        path: "sigma_B".into(),
        min: 0.0,
        max: 0.5,
        steps,
    };
    let mut spec = SweepSpec::new(scn, Tier::Networked, kappa.clone(), sigma.clone());
    spec.workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let grid = run_sweep(&spec).unwrap();
    print!("{:>9}", "kappa_BR");
    for s in sigma.values() {
        print!("{s:>8.3}");
    }
    println!("   <- sigma_B");
    for (i, k) in kappa.values().iter().enumerate() {
        print!("{k:9.4}");
        for j in 0..steps {
            print!("{:8.0}", grid.p_final(i, j));
        }
        println!();
    }
}
