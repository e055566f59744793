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

//! Synthetic citation graphs.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::CitationGraph;
use crate::metrics::LabelSet;

/// Planted-partition parameters: `groups` topical groups of `group_size`
/// papers each.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantedParams {
    pub groups: usize,
    pub group_size: usize,
    pub p_in: f64,
    pub p_out: f64,
}

impl Default for PlantedParams {
    fn default() -> Self {
        PlantedParams {
            groups: 4,
            group_size: 32,
            p_in: 0.3,
            p_out: 0.02,
        }
    }
}

impl PlantedParams {
    pub fn validate(&self) -> Result<()> {
        if self.groups == 0 || self.group_size == 0 {
            return Err(Error::config("groups and group size must be positive"));
        }
        for (name, p) in [("p_in", self.p_in), ("p_out", self.p_out)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::config(format!("{name} = {p} outside [0, 1]")));
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.groups * self.group_size
    }

    /// Expected number of citations and its binomial variance.
    pub fn edge_moments(&self) -> (f64, f64) {
        let s = self.group_size as f64;
        let k = self.groups as f64;
        let within = k * s * (s - 1.0) / 2.0;
        let n = k * s;
        let across = n * (n - 1.0) / 2.0 - within;
        let mean = within * self.p_in + across * self.p_out;
        let var = within * self.p_in * (1.0 - self.p_in) + across * self.p_out * (1.0 - self.p_out);
        (mean, var)
    }
}

/// A planted-partition sample with the ground-truth group of every node
/// (confidence 1).
#[derive(Debug, Clone)]
pub struct PlantedSample {
    /// Ascending; zero-padded so lexicographic order equals numeric order.
    pub node_ids: Vec<String>,
    /// `(citing, cited)` positions in `node_ids`.
    pub edges: Vec<(usize, usize)>,
    pub labels: LabelSet,
}

impl PlantedSample {
    pub fn graph(&self) -> CitationGraph {
        CitationGraph::from_indexed(self.node_ids.clone(), self.edges.iter().copied())
    }

    pub fn citations(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges
            .iter()
            .map(|&(a, b)| (self.node_ids[a].as_str(), self.node_ids[b].as_str()))
    }
}

fn node_id(i: usize, width: usize) -> String {
    format!("n{i:0width$}")
}

/// Draws every unordered pair independently (`p_in` inside a group, `p_out`
/// across) and orients each drawn pair uniformly at random.
pub fn planted_partition(params: &PlantedParams, seed: u64) -> Result<PlantedSample> {
    params.validate()?;
    let n = params.node_count();
    let width = (n.max(2) - 1).to_string().len();
    let gwidth = (params.groups.max(2) - 1).to_string().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let group = |i: usize| i / params.group_size;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let p = if group(i) == group(j) { params.p_in } else { params.p_out };
            if rng.random::<f64>() < p {
                let (a, b) = if rng.random::<bool>() { (i, j) } else { (j, i) };
                edges.push((a, b));
            }
        }
    }
    let node_ids: Vec<String> = (0..n).map(|i| node_id(i, width)).collect();
    let labels = LabelSet::new(
        node_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), format!("g{:0gwidth$}", group(i)), 1.0))
            .collect(),
    )?;
    Ok(PlantedSample {
        node_ids,
        edges,
        labels,
    })
}

/// Random citation DAG with exactly `citations` edges: paper `i` cites
/// `min(i, refs_per_paper)` distinct earlier papers chosen uniformly.
pub fn random_dag(citations: usize, refs_per_paper: usize, seed: u64) -> Result<CitationGraph> {
    if refs_per_paper == 0 {
        return Err(Error::config("refs_per_paper must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(citations);
    let mut paper = 0usize;
    while edges.len() < citations {
        paper += 1;
        let k = paper.min(refs_per_paper).min(citations - edges.len());
        for cited in sample(&mut rng, paper, k) {
            edges.push((paper, cited));
        }
    }
    let n = if citations == 0 { 0 } else { paper + 1 };
    let width = n.max(2).to_string().len();
    let ids = (0..n).map(|i| format!("p{i:0width$}")).collect();
    Ok(CitationGraph::from_indexed(ids, edges))
}
