use super::{ForceGraph, GraphError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ER_MAX_ATTEMPTS: u32 = 100;
const MAX_TREE_NODES: usize = 1 << 24;

/// 0-based index of the hub in [`build_fighting_fish`] (node 7 in files).
pub const FIGHTING_FISH_HUB: usize = 6;

pub fn build_edgeless(n: usize) -> ForceGraph {
    ForceGraph::with_nodes(n)
}

pub fn build_path(n: usize) -> ForceGraph {
    ForceGraph::from_edges(n, (1..n).map(|j| (j - 1, j))).expect("valid path")
}

pub fn build_complete(n: usize) -> ForceGraph {
    ForceGraph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
        .expect("valid complete graph")
}

/// Complete `branching`-ary tree of the given depth in breadth-first order:
/// node 0 is the root and the children of node `i` are
/// `branching*i + 1 ..= branching*i + branching`, so leaves take the highest
/// indices.
pub fn build_complete_kary_tree(branching: usize, depth: usize) -> Result<ForceGraph, GraphError> {
    if branching == 0 || depth == 0 {
        return Err(GraphError::InvalidParameter(format!(
            "branching and depth must be >= 1, got {branching}, {depth}"
        )));
    }
    let overflow = || GraphError::SizeOverflow { branching, depth };
    // 1 + b + b^2 + ... + b^depth, capped well below what fits in memory.
    let mut n: usize = 1;
    let mut level: usize = 1;
    for _ in 0..depth {
        level = level.checked_mul(branching).ok_or_else(overflow)?;
        n = n.checked_add(level).ok_or_else(overflow)?;
        if n > MAX_TREE_NODES {
            return Err(overflow());
        }
    }
    let internal = n - level;
    ForceGraph::from_edges(
        n,
        (0..internal).flat_map(|i| (1..=branching).map(move |c| (i, branching * i + c))),
    )
}

/// G(n, p) conditioned on connectivity: draws with seeds `seed, seed+1, ...`
/// until a connected sample appears, giving up after 100 attempts.
pub fn build_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<ForceGraph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidParameter(format!(
            "edge probability {p} not in [0, 1]"
        )));
    }
    for attempt in 0..ER_MAX_ATTEMPTS {
        let g = erdos_renyi_sample(n, p, seed.wrapping_add(attempt as u64));
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(GraphError::Disconnected {
        n,
        p,
        attempts: ER_MAX_ATTEMPTS,
    })
}

/// One unconditioned G(n, p) draw.
pub(crate) fn erdos_renyi_sample(n: usize, p: f64, seed: u64) -> ForceGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = ForceGraph::with_nodes(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                g.add_edge(i, j).expect("in range");
            }
        }
    }
    g
}

/// Ring of ten nodes with two pendant reserve nodes hanging off the hub.
///
/// Nodes 1..=10 (files, 1-based) form the cycle, node 7 is the hub sitting
/// opposite the usual engagement nodes 1–3, and nodes 11 and 12 attach to
/// node 7 only. This is a reconstruction; load a file to use another layout.
pub fn build_fighting_fish() -> ForceGraph {
    let ring = (0..10).map(|i| (i, (i + 1) % 10));
    let pendants = [(FIGHTING_FISH_HUB, 10), (FIGHTING_FISH_HUB, 11)];
    ForceGraph::from_edges(12, ring.chain(pendants)).expect("valid fighting fish")
}

/// Connected random geometric graph in the unit square.
///
/// Places `n` uniform points, keeps the `round(n * mean_degree / 2)`
/// shortest pairs, then joins leftover components through their shortest
/// bridging pair. Nodes are renumbered by increasing x coordinate so the
/// lowest indices form the left-hand "front line". Returns the graph and the
/// renumbered coordinates.
pub fn build_random_geometric(
    n: usize,
    mean_degree: f64,
    seed: u64,
) -> Result<(ForceGraph, Vec<[f64; 2]>), GraphError> {
    if !(mean_degree >= 0.0 && mean_degree.is_finite()) {
        return Err(GraphError::InvalidParameter(format!(
            "mean degree {mean_degree}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<[f64; 2]> = (0..n).map(|_| [rng.random(), rng.random()]).collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));

    let dist2 = |a: &[f64; 2], b: &[f64; 2]| (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2);
    let mut pairs: Vec<(f64, usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| (dist2(&pts[i], &pts[j]), i, j))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));

    let target = ((n as f64 * mean_degree / 2.0).round() as usize).min(pairs.len());
    let mut g = ForceGraph::with_nodes(n);
    for &(_, i, j) in &pairs[..target] {
        g.add_edge(i, j)?;
    }
    loop {
        let comp = g.components();
        if comp.iter().all(|&c| c == 0) {
            break;
        }
        // Shortest pair leaving component 0 merges it with its nearest neighbour.
        let &(_, i, j) = pairs
            .iter()
            .find(|&&(_, i, j)| (comp[i] == 0) != (comp[j] == 0))
            .expect("some pair bridges components");
        g.add_edge(i, j)?;
    }
    Ok((g, pts))
}
