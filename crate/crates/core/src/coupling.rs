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

//! Bibliographic coupling and co-citation networks.
//!
//! Orientation: `A[i][j] = 1` iff `i` cites `j`. Bibliographic coupling is then
//! the off-diagonal of `A·Aᵀ` (shared references) and co-citation the
//! off-diagonal of `Aᵀ·A` (shared citers). Both are computed by walking
//! length-two paths through a sparse accumulator, never as a dense product.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::CitationGraph;
use crate::weighted::{EdgeWeight, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Measure {
    /// Bibliographic coupling.
    Bc,
    /// Co-citation.
    Cc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingConfig {
    pub measure: Measure,
    pub top_m: usize,
    pub normalize: bool,
}

impl CouplingConfig {
    pub const DEFAULT_TOP_M: usize = 20;

    pub fn new(measure: Measure) -> Self {
        CouplingConfig {
            measure,
            top_m: Self::DEFAULT_TOP_M,
            normalize: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.top_m == 0 {
            return Err(Error::config("top_m must be at least 1"));
        }
        Ok(())
    }

    /// Raw coupling counts followed by Top-M filtering.
    pub fn build(&self, g: &CitationGraph) -> Result<WeightedGraph<u64>> {
        self.validate()?;
        let raw = match self.measure {
            Measure::Bc => bibliographic_coupling(g),
            Measure::Cc => co_citation(g),
        };
        top_m_filter(&raw, self.top_m)
    }
}

/// Edge `(i, j)` weighs the number of references `i` and `j` share.
pub fn bibliographic_coupling(g: &CitationGraph) -> WeightedGraph<u64> {
    count_shared(g, |u| g.out_neighbors(u), |c| g.in_neighbors(c))
}

/// Edge `(i, j)` weighs the number of papers citing both `i` and `j`.
pub fn co_citation(g: &CitationGraph) -> WeightedGraph<u64> {
    count_shared(g, |u| g.in_neighbors(u), |c| g.out_neighbors(c))
}

fn count_shared<'a>(
    g: &'a CitationGraph,
    first: impl Fn(usize) -> &'a [usize],
    back: impl Fn(usize) -> &'a [usize],
) -> WeightedGraph<u64> {
    let n = g.node_count();
    let mut counts = vec![0u64; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut edges: Vec<(usize, usize, u64)> = Vec::new();
    for i in 0..n {
        for &mid in first(i) {
            for &j in back(mid) {
                if j > i {
                    if counts[j] == 0 {
                        touched.push(j);
                    }
                    counts[j] += 1;
                }
            }
        }
        touched.sort_unstable();
        for &j in &touched {
            edges.push((i, j, counts[j]));
            counts[j] = 0;
        }
        touched.clear();
    }
    WeightedGraph::from_edges(g.ids().to_vec(), edges)
        .expect("coupling edges are positive and off-diagonal")
        .without_isolated()
}

/// Keeps an edge if it is among the `m` strongest edges of either endpoint.
/// Ranking is by weight descending, then partner index ascending. Nodes left
/// without edges are dropped.
pub fn top_m_filter<W: EdgeWeight>(wg: &WeightedGraph<W>, m: usize) -> Result<WeightedGraph<W>> {
    if m == 0 {
        return Err(Error::config("top_m must be at least 1"));
    }
    let mut kept: Vec<(usize, usize, W)> = Vec::new();
    for u in 0..wg.node_count() {
        kept.extend(strongest_edges(wg, u, m).into_iter().map(|(v, w)| (u.min(v), u.max(v), w)));
    }
    kept.sort_by_key(|e| (e.0, e.1));
    kept.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    Ok(WeightedGraph::from_edges(wg.labels().to_vec(), kept)?.without_isolated())
}

/// The `m` strongest edges of `node` as `(partner, weight)`, strongest first.
pub fn strongest_edges<W: EdgeWeight>(wg: &WeightedGraph<W>, node: usize, m: usize) -> Vec<(usize, W)> {
    let mut ranked = wg.neighbors(node).to_vec();
    ranked.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .expect("weights are comparable")
            .then(a.0.cmp(&b.0))
    });
    ranked.truncate(m);
    ranked
}

/// Per-endpoint shares `r_ij / Σ_k r_ik`, listed in each node's adjacency order.
pub fn relatedness_shares<W: EdgeWeight>(wg: &WeightedGraph<W>) -> Vec<Vec<(usize, f64)>> {
    (0..wg.node_count())
        .map(|u| {
            let s = wg.strength(u);
            wg.neighbors(u).iter().map(|&(v, w)| (v, w.to_f64() / s)).collect()
        })
        .collect()
}

/// Divides each relatedness by the total relatedness of its paper and stores
/// the mean of the two directed shares on the undirected edge.
pub fn normalize_relatedness<W: EdgeWeight>(wg: &WeightedGraph<W>) -> WeightedGraph<f64> {
    let strengths = wg.strengths();
    wg.map_weights(|u, v, w| {
        let w = w.to_f64();
        0.5 * (w / strengths[u] + w / strengths[v])
    })
}
