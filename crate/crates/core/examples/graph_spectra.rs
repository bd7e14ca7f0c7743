//! Force topologies and their Laplacian spectra: zero modes count
//! components, the Fiedler value measures how readily a network synchronises.

use lanchester_c2::graphs::{
    build_complete_kary_tree, build_edgeless, build_erdos_renyi, build_fighting_fish,
    build_random_geometric, laplacian_spectrum, write_edge_list, ForceGraph,
};

fn report(name: &str, g: &ForceGraph) {
    let spec = laplacian_spectrum(g).expect("spectrum");
    let degrees = g.degrees();
    let mean_degree = degrees.iter().sum::<usize>() as f64 / g.n() as f64;
    println!(
        "{name:<22} n={:<3} edges={:<4} mean deg={mean_degree:5.2} components={} fiedler={:.4} lambda_max={:.3}",
        g.n(),
        g.edge_count(),
        spec.zero_modes(1e-9),
        spec.fiedler_value().unwrap_or(0.0),
        spec.eigenvalues.last().copied().unwrap_or(0.0),
    );
}

fn main() {
    report(
        "4-ary tree, depth 2",
        &build_complete_kary_tree(4, 2).unwrap(),
    );
    report(
        "Erdos-Renyi(21, 0.4)",
        &build_erdos_renyi(21, 0.4, 7).unwrap(),
    );
    report("fighting fish", &build_fighting_fish());
    let (geo, _) = build_random_geometric(50, 4.0, 3).unwrap();
    report("random geometric(50)", &geo);
    report("5 isolated nodes", &build_edgeless(5));
    println!(
        "\nfighting fish edge list:\n{}",
        write_edge_list(&build_fighting_fish())
    );
}
