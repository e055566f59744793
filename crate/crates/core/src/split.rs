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

//! Node-split transformation of a citation graph.
//!
//! Every paper with references gets a citing copy, every cited paper gets a
//! cited copy, and each citation `u → v` becomes the undirected edge
//! `(u:citing, v:cited)`. The result is bipartite by construction, so the
//! citing layer only sees other citing papers through shared references and
//! the cited layer only through shared citers.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::CitationGraph;
use crate::partition::{NamedPartition, Partition};
use crate::weighted::{largest_component, DisjointSet, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Layer {
    Citing,
    Cited,
}

impl Layer {
    pub fn suffix(self) -> &'static str {
        match self {
            Layer::Citing => ":o",
            Layer::Cited => ":i",
        }
    }
}

/// One copy of a source node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SplitNodeId {
    /// Index of the node in [`SplitGraph::origin_ids`].
    pub origin: usize,
    pub layer: Layer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum NormalizationMode {
    #[default]
    Raw,
    /// Divide by the strength of the citing endpoint.
    OutNorm,
    /// Divide by the strength of the cited endpoint.
    InNorm,
    /// Divide by the geometric mean of both endpoint strengths.
    BiNorm,
}

impl fmt::Display for NormalizationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormalizationMode::Raw => "raw",
            NormalizationMode::OutNorm => "out",
            NormalizationMode::InNorm => "in",
            NormalizationMode::BiNorm => "bi",
        })
    }
}

impl FromStr for NormalizationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "raw" => Ok(NormalizationMode::Raw),
            "out" | "outnorm" => Ok(NormalizationMode::OutNorm),
            "in" | "innorm" => Ok(NormalizationMode::InNorm),
            "bi" | "binorm" => Ok(NormalizationMode::BiNorm),
            _ => Err(Error::config(format!("unknown split normalization {s:?}"))),
        }
    }
}

/// Bipartite graph of citing and cited copies.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitGraph {
    origin_ids: Arc<[String]>,
    citing: Vec<usize>,
    cited: Vec<usize>,
    /// `(citing index, cited index, weight)`, sorted by the index pair.
    edges: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SplitStats {
    /// Citations read while building the split graph.
    pub edges_visited: usize,
}

/// Splits every node by role. See [`split_with_stats`].
pub fn split(g: &CitationGraph) -> SplitGraph {
    split_with_stats(g).0
}

/// Splits every node by role, reading each citation exactly once.
pub fn split_with_stats(g: &CitationGraph) -> (SplitGraph, SplitStats) {
    let n = g.node_count();
    let mut citing_index = vec![usize::MAX; n];
    let mut cited_index = vec![usize::MAX; n];
    let mut citing = Vec::new();
    let mut cited = Vec::new();
    for u in 0..n {
        if g.out_degree(u) > 0 {
            citing_index[u] = citing.len();
            citing.push(u);
        }
        if g.in_degree(u) > 0 {
            cited_index[u] = cited.len();
            cited.push(u);
        }
    }
    let mut stats = SplitStats::default();
    let mut edges = Vec::with_capacity(g.edge_count());
    for (u, v) in g.edges() {
        stats.edges_visited += 1;
        edges.push((citing_index[u], cited_index[v], 1.0));
    }
    let sg = SplitGraph {
        origin_ids: g.shared_ids(),
        citing,
        cited,
        edges,
    };
    (sg, stats)
}

impl SplitGraph {
    /// Assembles a split graph from its parts. `citing` and `cited` hold
    /// ascending origin indices; edges reference positions in those lists.
    pub fn from_parts(
        origin_ids: Vec<String>,
        citing: Vec<usize>,
        cited: Vec<usize>,
        mut edges: Vec<(usize, usize, f64)>,
    ) -> Result<Self> {
        let n = origin_ids.len();
        for layer in [&citing, &cited] {
            if !layer.windows(2).all(|w| w[0] < w[1]) || layer.last().is_some_and(|&x| x >= n) {
                return Err(Error::contract("layer origins must be ascending and in range"));
            }
        }
        edges.sort_by_key(|e| (e.0, e.1));
        if edges.windows(2).any(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::contract("duplicate split edge"));
        }
        let mut citing_deg = vec![0usize; citing.len()];
        let mut cited_deg = vec![0usize; cited.len()];
        for &(o, i, w) in &edges {
            if o >= citing.len() || i >= cited.len() {
                return Err(Error::contract("split edge endpoint out of range"));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::contract(format!("non-positive split weight {w}")));
            }
            citing_deg[o] += 1;
            cited_deg[i] += 1;
        }
        if citing_deg.iter().chain(&cited_deg).any(|&d| d == 0) {
            return Err(Error::contract("split graph has a dangling node"));
        }
        Ok(SplitGraph {
            origin_ids: origin_ids.into(),
            citing,
            cited,
            edges,
        })
    }

    pub fn origin_ids(&self) -> &[String] {
        &self.origin_ids
    }

    pub fn citing_count(&self) -> usize {
        self.citing.len()
    }

    pub fn cited_count(&self) -> usize {
        self.cited.len()
    }

    pub fn node_count(&self) -> usize {
        self.citing.len() + self.cited.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Origin indices of one layer, ascending.
    pub fn layer_origins(&self, layer: Layer) -> &[usize] {
        match layer {
            Layer::Citing => &self.citing,
            Layer::Cited => &self.cited,
        }
    }

    /// Node at `index` in the [`to_weighted`](Self::to_weighted) layout:
    /// citing copies first, then cited copies.
    pub fn node(&self, index: usize) -> SplitNodeId {
        if index < self.citing.len() {
            SplitNodeId {
                origin: self.citing[index],
                layer: Layer::Citing,
            }
        } else {
            SplitNodeId {
                origin: self.cited[index - self.citing.len()],
                layer: Layer::Cited,
            }
        }
    }

    pub fn label(&self, node: SplitNodeId) -> String {
        format!("{}{}", self.origin_ids[node.origin], node.layer.suffix())
    }

    pub fn citing_strengths(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.citing.len()];
        for &(o, _, w) in &self.edges {
            s[o] += w;
        }
        s
    }

    pub fn cited_strengths(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.cited.len()];
        for &(_, i, w) in &self.edges {
            s[i] += w;
        }
        s
    }

    /// Undirected view with citing copies at `0..citing_count()` followed by
    /// cited copies. Labels carry the `:o` / `:i` suffixes.
    pub fn to_weighted(&self) -> WeightedGraph<f64> {
        let labels = (0..self.node_count()).map(|i| self.label(self.node(i))).collect();
        let offset = self.citing.len();
        WeightedGraph::from_edges(labels, self.edges.iter().map(|&(o, i, w)| (o, offset + i, w)))
            .expect("split edges are valid")
    }

    /// Largest connected component, with ties going to the component that
    /// holds the smallest index of the weighted layout.
    pub fn giant_component(&self) -> SplitGraph {
        let offset = self.citing.len();
        let mut set = DisjointSet::new(self.node_count());
        for &(o, i, _) in &self.edges {
            set.union(o, offset + i);
        }
        let Some(keep) = largest_component(set.groups()) else {
            return self.clone();
        };
        if keep.len() == self.node_count() {
            return self.clone();
        }
        let mut citing_map = vec![usize::MAX; self.citing.len()];
        let mut cited_map = vec![usize::MAX; self.cited.len()];
        let (mut citing, mut cited) = (Vec::new(), Vec::new());
        for &x in &keep {
            if x < offset {
                citing_map[x] = citing.len();
                citing.push(self.citing[x]);
            } else {
                cited_map[x - offset] = cited.len();
                cited.push(self.cited[x - offset]);
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(o, _, _)| citing_map[o] != usize::MAX)
            .map(|&(o, i, w)| (citing_map[o], cited_map[i], w))
            .collect();
        SplitGraph {
            origin_ids: self.origin_ids.clone(),
            citing,
            cited,
            edges,
        }
    }
}

/// Reweights every edge according to `mode`.
pub fn normalize_split(sg: &SplitGraph, mode: NormalizationMode) -> SplitGraph {
    let out_s = sg.citing_strengths();
    let in_s = sg.cited_strengths();
    let edges = sg
        .edges
        .iter()
        .map(|&(o, i, w)| {
            let w = match mode {
                NormalizationMode::Raw => w,
                NormalizationMode::OutNorm => w / out_s[o],
                NormalizationMode::InNorm => w / in_s[i],
                NormalizationMode::BiNorm => w / (out_s[o] * in_s[i]).sqrt(),
            };
            (o, i, w)
        })
        .collect();
    SplitGraph {
        origin_ids: sg.origin_ids.clone(),
        citing: sg.citing.clone(),
        cited: sg.cited.clone(),
        edges,
    }
}

/// Restricts a partition of the split graph (in [`SplitGraph::to_weighted`]
/// layout) to one layer, keyed by the origin identifiers.
pub fn project_layer(p: &Partition, sg: &SplitGraph, layer: Layer) -> Result<NamedPartition> {
    if p.len() != sg.node_count() {
        return Err(Error::contract(format!(
            "partition covers {} nodes, split graph has {}",
            p.len(),
            sg.node_count()
        )));
    }
    let (range, origins) = match layer {
        Layer::Citing => (0..sg.citing.len(), &sg.citing),
        Layer::Cited => (sg.citing.len()..sg.node_count(), &sg.cited),
    };
    let names = origins.iter().map(|&o| sg.origin_ids[o].clone()).collect();
    let clusters = range.map(|x| p.cluster_of(x)).collect();
    NamedPartition::new(names, clusters)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> CitationGraph {
        CitationGraph::from_pairs([("A", "B"), ("C", "A"), ("C", "B")])
    }

    #[test]
    fn splits_toy_graph() {
        let (sg, stats) = split_with_stats(&toy());
        let ids = |layer| {
            sg.layer_origins(layer)
                .iter()
                .map(|&o| sg.origin_ids()[o].as_str())
                .collect::<Vec<_>>()
        };
        assert_eq!(ids(Layer::Citing), vec!["A", "C"]);
        assert_eq!(ids(Layer::Cited), vec!["A", "B"]);
        let labeled: Vec<(String, String)> = sg
            .edges()
            .iter()
            .map(|&(o, i, _)| (sg.label(sg.node(o)), sg.label(sg.node(sg.citing_count() + i))))
            .collect();
        assert_eq!(
            labeled,
            vec![
                ("A:o".into(), "B:i".into()),
                ("C:o".into(), "A:i".into()),
                ("C:o".into(), "B:i".into())
            ]
        );
        assert_eq!((sg.node_count(), sg.edge_count()), (4, 3));
        assert_eq!(stats.edges_visited, 3);
    }

    #[test]
    fn minimal_split() {
        let sg = split(&CitationGraph::from_pairs([("A", "B")]));
        assert_eq!(sg.to_weighted().labels(), &["A:o", "B:i"]);
        assert_eq!(sg.edge_count(), 1);
    }

    #[test]
    fn out_norm_on_four_references() {
        let g = CitationGraph::from_pairs([("A", "B"), ("A", "C"), ("A", "D"), ("A", "E")]);
        let n = normalize_split(&split(&g), NormalizationMode::OutNorm);
        assert!(n.edges().iter().all(|e| e.2 == 0.25));
    }

    #[test]
    fn single_edge_any_mode_is_one() {
        let sg = split(&CitationGraph::from_pairs([("A", "B")]));
        for mode in [
            NormalizationMode::Raw,
            NormalizationMode::OutNorm,
            NormalizationMode::InNorm,
            NormalizationMode::BiNorm,
        ] {
            assert_eq!(normalize_split(&sg, mode).edges()[0].2, 1.0);
        }
    }

    #[test]
    fn bi_norm_geometric_mean() {
        // Citing X has 4 references, cited Y has 9 citers; edge X -> Y.
        let mut pairs = vec![];
        for r in ["Y", "R1", "R2", "R3"] {
            pairs.push(("X".to_string(), r.to_string()));
        }
        for c in 1..=8 {
            pairs.push((format!("C{c}"), "Y".to_string()));
        }
        let g = CitationGraph::from_pairs(pairs);
        let sg = normalize_split(&split(&g), NormalizationMode::BiNorm);
        let x = sg.layer_origins(Layer::Citing).iter().position(|&o| g.id(o) == "X").unwrap();
        let y = sg.layer_origins(Layer::Cited).iter().position(|&o| g.id(o) == "Y").unwrap();
        let w = sg.edges().iter().find(|e| e.0 == x && e.1 == y).unwrap().2;
        assert!((w - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn in_norm_uses_cited_strength() {
        let g = CitationGraph::from_pairs([("A", "C"), ("B", "C"), ("A", "D")]);
        let sg = normalize_split(&split(&g), NormalizationMode::InNorm);
        let sums = sg.cited_strengths();
        assert!(sums.iter().all(|&s| (s - 1.0).abs() < 1e-12));
    }

    #[test]
    fn project_citing_layer() {
        let sg = split(&toy());
        // Layout: A:o, C:o, A:i, B:i
        let joint = Partition::from_labels([1, 1, 2, 2]);
        let citing = project_layer(&joint, &sg, Layer::Citing).unwrap();
        assert_eq!(citing.names(), &["A", "C"]);
        assert_eq!(citing.partition().assignment(), &[0, 0]);
        let cited = project_layer(&Partition::single_cluster(4), &sg, Layer::Cited).unwrap();
        assert_eq!(cited.cluster_count(), 1);
        assert!(project_layer(&Partition::single_cluster(3), &sg, Layer::Cited).is_err());
    }

    #[test]
    fn empty_layer_projects_to_empty_partition() {
        let sg = split(&CitationGraph::from_indexed(vec!["A".into()], []));
        let p = project_layer(&Partition::singletons(0), &sg, Layer::Cited).unwrap();
        assert!(p.is_empty());
    }

    #[test]
    fn bipartite_input_keeps_its_shape() {
        // Authors citing papers: authors never get cited copies.
        let g = CitationGraph::from_pairs([("au1", "p1"), ("au1", "p2"), ("au2", "p2")]);
        let sg = split(&g);
        assert_eq!(sg.citing_count(), 2);
        assert_eq!(sg.cited_count(), 2);
        assert_eq!(sg.node_count(), g.node_count());
    }

    #[test]
    fn split_gcc() {
        let g = CitationGraph::from_pairs([("A", "B"), ("C", "B"), ("D", "E")]);
        let gcc = split(&g).giant_component();
        assert_eq!(gcc.to_weighted().labels(), &["A:o", "C:o", "B:i"]);
        assert_eq!(gcc.edge_count(), 2);
    }

    #[test]
    fn from_parts_rejects_dangling() {
        let ids = vec!["A".to_string(), "B".to_string()];
        assert!(SplitGraph::from_parts(ids.clone(), vec![0], vec![1], vec![]).is_err());
        assert!(SplitGraph::from_parts(ids, vec![0], vec![1], vec![(0, 0, 1.0)]).is_ok());
    }
}
