//! Intra-force and engagement networks.
//!
//! Indices are 0-based in the Rust API. Every text format, CSV column and log
//! line produced by this crate is 1-based.

mod engagement;
mod generators;
mod io;
mod spectrum;

pub use engagement::EngagementMap;
pub use generators::{
    build_complete, build_complete_kary_tree, build_edgeless, build_erdos_renyi,
    build_fighting_fish, build_path, build_random_geometric, FIGHTING_FISH_HUB,
};
pub use io::{load_engagement, load_graph, parse_edge_list, write_edge_list};
pub use spectrum::{laplacian_spectrum, LaplacianSpectrum};

use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: usize },
    #[error("node {node} out of range 1..={n}")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("node count overflows for branching {branching}, depth {depth}")]
    SizeOverflow { branching: usize, depth: usize },
    #[error("no connected graph after {attempts} attempts (n={n}, p={p})")]
    Disconnected { n: usize, p: f64, attempts: u32 },
    #[error("invalid graph parameter: {0}")]
    InvalidParameter(String),
    #[error("eigen-decomposition check failed: {0}")]
    Eigen(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Undirected, unweighted simple graph on nodes `0..n`.
///
/// Neighbour lists are kept sorted and duplicate-free, so the adjacency is
/// symmetric with zero diagonal by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForceGraph {
    adj: Vec<Vec<usize>>,
}

impl ForceGraph {
    pub fn with_nodes(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from 0-based edges; duplicates collapse, self-loops and
    /// out-of-range endpoints are rejected.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::with_nodes(n);
        for (i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    /// Adds an undirected edge; returns whether it was new.
    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<bool, GraphError> {
        let n = self.n();
        for node in [i, j] {
            if node >= n {
                return Err(GraphError::NodeOutOfRange { node: node + 1, n });
            }
        }
        if i == j {
            return Err(GraphError::SelfLoop {
                line: 0,
                node: i + 1,
            });
        }
        match self.adj[i].binary_search(&j) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[i].insert(pos, j);
                let pos = self.adj[j].binary_search(&i).unwrap_err();
                self.adj[j].insert(pos, i);
                Ok(true)
            }
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj
            .get(i)
            .is_some_and(|nb| nb.binary_search(&j).is_ok())
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, nb)| nb.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    /// Connected-component label per node, labels in order of first node.
    pub fn components(&self) -> Vec<usize> {
        let n = self.n();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &v in &self.adj[u] {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// True for the empty graph and single nodes.
    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut a = DMatrix::zeros(n, n);
        for (i, j) in self.edges() {
            a[(i, j)] = 1.0;
            a[(j, i)] = 1.0;
        }
        a
    }

    /// Combinatorial Laplacian `L = D - A`.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let mut l = -self.adjacency_matrix();
        for i in 0..self.n() {
            l[(i, i)] = self.degree(i) as f64;
        }
        l
    }

    /// Renumbers nodes: node `order[k]` of `self` becomes node `k`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.n(), "permutation length");
        let mut inverse = vec![0; order.len()];
        for (k, &old) in order.iter().enumerate() {
            inverse[old] = k;
        }
        let mut adj: Vec<Vec<usize>> = order
            .iter()
            .map(|&old| self.adj[old].iter().map(|&j| inverse[j]).collect())
            .collect();
        for nb in &mut adj {
            nb.sort_unstable();
        }
        Self { adj }
    }
}
