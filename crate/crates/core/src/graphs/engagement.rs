use super::GraphError;

/// Undirected engagement edges between Blue node `b` and Red node `r`.
///
/// The map is symmetric, so `d_T^{BR} = d_T^{RB}` is simply the pair count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngagementMap {
    n_blue: usize,
    n_red: usize,
    pairs: Vec<(usize, usize)>,
    blue_adj: Vec<Vec<usize>>,
    red_adj: Vec<Vec<usize>>,
}

impl EngagementMap {
    /// 0-based pairs; duplicates collapse, order of first appearance is kept.
    pub fn new(
        n_blue: usize,
        n_red: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut map = Self {
            n_blue,
            n_red,
            pairs: Vec::new(),
            blue_adj: vec![Vec::new(); n_blue],
            red_adj: vec![Vec::new(); n_red],
        };
        for (b, r) in pairs {
            if b >= n_blue {
                return Err(GraphError::NodeOutOfRange {
                    node: b + 1,
                    n: n_blue,
                });
            }
            if r >= n_red {
                return Err(GraphError::NodeOutOfRange {
                    node: r + 1,
                    n: n_red,
                });
            }
            if let Err(pos) = map.blue_adj[b].binary_search(&r) {
                map.blue_adj[b].insert(pos, r);
                let pos = map.red_adj[r].binary_search(&b).unwrap_err();
                map.red_adj[r].insert(pos, b);
                map.pairs.push((b, r));
            }
        }
        Ok(map)
    }

    /// Blue node `k` engages Red node `k` for every `k` in `nodes`.
    pub fn same_index(
        n_blue: usize,
        n_red: usize,
        nodes: impl IntoIterator<Item = usize>,
    ) -> Result<Self, GraphError> {
        Self::new(n_blue, n_red, nodes.into_iter().map(|k| (k, k)))
    }

    pub fn n_blue(&self) -> usize {
        self.n_blue
    }

    pub fn n_red(&self) -> usize {
        self.n_red
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Total number of engagement edges.
    pub fn d_total(&self) -> usize {
        self.pairs.len()
    }

    pub fn blue_targets(&self, b: usize) -> &[usize] {
        &self.blue_adj[b]
    }

    pub fn red_targets(&self, r: usize) -> &[usize] {
        &self.red_adj[r]
    }

    pub fn blue_degrees(&self) -> Vec<usize> {
        self.blue_adj.iter().map(Vec::len).collect()
    }

    pub fn red_degrees(&self) -> Vec<usize> {
        self.red_adj.iter().map(Vec::len).collect()
    }

    /// Same edges seen from the other side.
    pub fn swapped(&self) -> Self {
        Self {
            n_blue: self.n_red,
            n_red: self.n_blue,
            pairs: self.pairs.iter().map(|&(b, r)| (r, b)).collect(),
            blue_adj: self.red_adj.clone(),
            red_adj: self.blue_adj.clone(),
        }
    }
}
