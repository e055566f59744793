// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Assignment of nodes `0..len` to dense cluster ids `0..cluster_count`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    assignment: Vec<usize>,
    cluster_count: usize,
}

impl Partition {
    /// Relabels arbitrary cluster labels densely, in order of first appearance.
    pub fn from_labels<T: Eq + std::hash::Hash>(labels: impl IntoIterator<Item = T>) -> Self {
        let mut ids: HashMap<T, usize> = HashMap::new();
        let assignment: Vec<usize> = labels
            .into_iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(l).or_insert(next)
            })
            .collect();
        Partition {
            cluster_count: ids.len(),
            assignment,
        }
    }

    /// Wraps an assignment that is already dense in `0..cluster_count`.
    pub(crate) fn from_dense(assignment: Vec<usize>, cluster_count: usize) -> Self {
        debug_assert!(assignment.iter().all(|&c| c < cluster_count));
        Partition {
            assignment,
            cluster_count,
        }
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            assignment: (0..n).collect(),
            cluster_count: n,
        }
    }

    pub fn single_cluster(n: usize) -> Self {
        Partition {
            assignment: vec![0; n],
            cluster_count: usize::from(n > 0),
        }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn cluster_count(&self) -> usize {
        self.cluster_count
    }

    pub fn cluster_of(&self, node: usize) -> usize {
        self.assignment[node]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.cluster_count];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }

    /// Members of each cluster, ascending.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cluster_count];
        for (node, &c) in self.assignment.iter().enumerate() {
            out[c].push(node);
        }
        out
    }

    /// Restriction to `nodes`, re-densified in the given order.
    pub fn restrict(&self, nodes: &[usize]) -> Partition {
        Partition::from_labels(nodes.iter().map(|&u| self.assignment[u]))
    }
}

/// Partition keyed by external identifiers, stored in identifier order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedPartition {
    names: Vec<String>,
    partition: Partition,
}

impl NamedPartition {
    /// Pairs `names[i]` with `clusters[i]`. Cluster ids are re-densified by
    /// first appearance in sorted identifier order.
    pub fn new(names: Vec<String>, clusters: Vec<usize>) -> Result<Self> {
        if names.len() != clusters.len() {
            return Err(Error::contract("names and cluster ids differ in length"));
        }
        let mut pairs: Vec<(String, usize)> = names.into_iter().zip(clusters).collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::contract(format!("node {:?} assigned twice", w[0].0)));
        }
        let partition = Partition::from_labels(pairs.iter().map(|p| p.1));
        Ok(NamedPartition {
            names: pairs.into_iter().map(|p| p.0).collect(),
            partition,
        })
    }

    pub fn from_partition(names: &[String], partition: &Partition) -> Result<Self> {
        Self::new(names.to_vec(), partition.assignment().to_vec())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn cluster_count(&self) -> usize {
        self.partition.cluster_count()
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.names
            .binary_search_by(|n| n.as_str().cmp(name))
            .ok()
            .map(|i| self.partition.cluster_of(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.names
            .iter()
            .zip(self.partition.assignment())
            .map(|(n, &c)| (n.as_str(), c))
    }
}
