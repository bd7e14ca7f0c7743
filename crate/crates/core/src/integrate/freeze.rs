/// A set of state components frozen together once a watched component
/// drops to its threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct FreezeGroup {
    /// Component whose value is tested against `threshold`.
    pub watch: usize,
    pub threshold: f64,
    /// Components whose derivatives are forced to zero once frozen. Usually
    /// includes `watch`.
    pub members: Vec<usize>,
    /// Value written into `watch` at the moment of freezing, if any.
    pub snap_to: Option<f64>,
}

/// Freeze predicate: group `g` freezes when `state[g.watch] <= g.threshold`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FreezeRules {
    pub groups: Vec<FreezeGroup>,
}

impl FreezeRules {
    pub fn none() -> Self {
        Self::default()
    }

    /// One group per index, each freezing only itself.
    pub fn per_component(indices: &[usize], threshold: f64, snap_to: Option<f64>) -> Self {
        Self {
            groups: indices
                .iter()
                .map(|&i| FreezeGroup {
                    watch: i,
                    threshold,
                    members: vec![i],
                    snap_to,
                })
                .collect(),
        }
    }

    pub fn push(&mut self, group: FreezeGroup) {
        self.groups.push(group);
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub(crate) fn check_indices(&self, len: usize) -> Result<(), super::IntegrateError> {
        for (g, group) in self.groups.iter().enumerate() {
            for &index in std::iter::once(&group.watch).chain(&group.members) {
                if index >= len {
                    return Err(super::IntegrateError::FreezeIndex {
                        group: g,
                        index,
                        len,
                    });
                }
            }
        }
        Ok(())
    }
}
