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

//! Undirected weighted graphs used for relatedness networks.

use std::collections::HashMap;
use std::fmt::Debug;
use std::ops::Add;

use crate::error::{Error, Result};

/// Weight stored on an undirected edge. Coupling counts stay integral until
/// they are normalized.
pub trait EdgeWeight: Copy + PartialOrd + Debug + Add<Output = Self> {
    fn to_f64(self) -> f64;
    fn is_positive(self) -> bool;
}

impl EdgeWeight for u64 {
    fn to_f64(self) -> f64 {
        self as f64
    }
    fn is_positive(self) -> bool {
        self > 0
    }
}

impl EdgeWeight for f64 {
    fn to_f64(self) -> f64 {
        self
    }
    fn is_positive(self) -> bool {
        self > 0.0 && self.is_finite()
    }
}

/// Simple undirected graph with strictly positive weights and no self-loops.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph<W = f64> {
    labels: Vec<String>,
    // Sorted by neighbor index; each edge appears in both endpoint lists.
    adjacency: Vec<Vec<(usize, W)>>,
    edge_count: usize,
}

impl<W: EdgeWeight> WeightedGraph<W> {
    /// Builds a graph over `labels`. Repeated unordered pairs are summed.
    pub fn from_edges(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize, W)>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut adjacency: Vec<Vec<(usize, W)>> = vec![Vec::new(); n];
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::contract(format!("edge ({u}, {v}) out of range for {n} nodes")));
            }
            if u == v {
                return Err(Error::contract(format!("self-loop on node {u}")));
            }
            if !w.is_positive() {
                return Err(Error::contract(format!("non-positive weight {w:?} on ({u}, {v})")));
            }
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
        }
        let mut edge_count = 0;
        for list in adjacency.iter_mut() {
            list.sort_by_key(|&(v, _)| v);
            let mut merged: Vec<(usize, W)> = Vec::with_capacity(list.len());
            for &(v, w) in list.iter() {
                match merged.last_mut() {
                    Some((last, acc)) if *last == v => *acc = *acc + w,
                    _ => merged.push((v, w)),
                }
            }
            edge_count += merged.len();
            *list = merged;
        }
        Ok(WeightedGraph {
            labels,
            adjacency,
            edge_count: edge_count / 2,
        })
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, node: usize) -> &str {
        &self.labels[node]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn neighbors(&self, node: usize) -> &[(usize, W)] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<W> {
        let list = &self.adjacency[u];
        list.binary_search_by_key(&v, |&(x, _)| x).ok().map(|i| list[i].1)
    }

    /// Each undirected edge once as `(u, v, w)` with `u < v`, ordered by `(u, v)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, W)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .filter(move |&&(v, _)| v > u)
                .map(move |&(v, w)| (u, v, w))
        })
    }

    /// Sum of incident weights.
    pub fn strength(&self, node: usize) -> f64 {
        self.adjacency[node].iter().map(|&(_, w)| w.to_f64()).sum()
    }

    pub fn strengths(&self) -> Vec<f64> {
        (0..self.node_count()).map(|u| self.strength(u)).collect()
    }

    pub fn label_index(&self) -> HashMap<&str, usize> {
        self.labels.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect()
    }

    pub fn map_weights<V: EdgeWeight>(&self, mut f: impl FnMut(usize, usize, W) -> V) -> WeightedGraph<V> {
        let adjacency = self
            .adjacency
            .iter()
            .enumerate()
            .map(|(u, list)| list.iter().map(|&(v, w)| (v, f(u, v, w))).collect())
            .collect();
        WeightedGraph {
            labels: self.labels.clone(),
            adjacency,
            edge_count: self.edge_count,
        }
    }

    pub fn to_f64(&self) -> WeightedGraph<f64> {
        self.map_weights(|_, _, w| w.to_f64())
    }

    /// Induced subgraph on `keep`, which must be ascending and duplicate-free.
    pub fn induced(&self, keep: &[usize]) -> Self {
        debug_assert!(keep.windows(2).all(|p| p[0] < p[1]));
        let mut remap = vec![usize::MAX; self.node_count()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let mut edge_count = 0;
        let adjacency: Vec<Vec<(usize, W)>> = keep
            .iter()
            .map(|&old| {
                let list: Vec<(usize, W)> = self.adjacency[old]
                    .iter()
                    .filter(|&&(v, _)| remap[v] != usize::MAX)
                    .map(|&(v, w)| (remap[v], w))
                    .collect();
                edge_count += list.len();
                list
            })
            .collect();
        WeightedGraph {
            labels: keep.iter().map(|&u| self.labels[u].clone()).collect(),
            adjacency,
            edge_count: edge_count / 2,
        }
    }

    pub fn without_isolated(&self) -> Self {
        let keep: Vec<usize> = (0..self.node_count()).filter(|&u| self.degree(u) > 0).collect();
        if keep.len() == self.node_count() {
            return self.clone();
        }
        self.induced(&keep)
    }

    /// Connected components, each ascending, ordered by their smallest node.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut set = DisjointSet::new(self.node_count());
        for (u, v, _) in self.edges() {
            set.union(u, v);
        }
        set.groups()
    }

    /// Induced subgraph on the largest connected component. Ties go to the
    /// component holding the smallest node index.
    pub fn giant_component(&self) -> Self {
        match largest_component(self.components()) {
            Some(nodes) if nodes.len() == self.node_count() => self.clone(),
            Some(nodes) => self.induced(&nodes),
            None => self.clone(),
        }
    }
}

/// Largest group, earliest group on ties.
pub(crate) fn largest_component(groups: Vec<Vec<usize>>) -> Option<Vec<usize>> {
    let mut best: Option<Vec<usize>> = None;
    for group in groups {
        if best.as_ref().is_none_or(|b| group.len() > b.len()) {
            best = Some(group);
        }
    }
    best
}

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub(crate) struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    /// Groups with ascending members, ordered by smallest member.
    pub(crate) fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut slot = vec![usize::MAX; n];
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let root = self.find(x);
            if slot[root] == usize::MAX {
                slot[root] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[root]].push(x);
        }
        groups
    }
}
