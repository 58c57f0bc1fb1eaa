use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard assignment of `N` nodes to at most `k` clusters. Clusters may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    assign: Vec<usize>,
    k: usize,
}

impl Partition {
    pub fn new(assign: Vec<usize>, k: usize) -> Result<Self> {
        if let Some(&bad) = assign.iter().find(|&&c| c >= k) {
            return Err(Error::InvalidParameter(format!("cluster id {bad} >= k = {k}")));
        }
        Ok(Self { assign, k })
    }

    /// Partition whose `k` is one past the largest label.
    pub fn from_labels(assign: Vec<usize>) -> Self {
        let k = assign.iter().max().map_or(0, |&m| m + 1);
        Self { assign, k }
    }

    pub fn assign(&self) -> &[usize] {
        &self.assign
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.assign.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assign.is_empty()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.assign {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn nonempty_count(&self) -> usize {
        self.cluster_sizes().iter().filter(|&&s| s > 0).count()
    }

    pub fn members(&self, cluster: usize) -> impl Iterator<Item = usize> + '_ {
        self.assign
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c == cluster)
            .map(|(i, _)| i)
    }

    /// Labels renumbered by order of first appearance, so that two partitions
    /// of the same node sets compare equal regardless of cluster ids.
    pub fn canonical(&self) -> Vec<usize> {
        let mut map = vec![usize::MAX; self.k];
        let mut next = 0;
        self.assign
            .iter()
            .map(|&c| {
                if map[c] == usize::MAX {
                    map[c] = next;
                    next += 1;
                }
                map[c]
            })
            .collect()
    }

    pub fn same_clusters(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}
