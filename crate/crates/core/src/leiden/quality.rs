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

//! Reichardt-Bornholdt Potts quality with the configuration null model.
//!
//! `Q = Σ_ij (A_ij − γ k_i k_j / 2m) δ(σ_i, σ_j)` over ordered pairs, with
//! `2m = Σ_i k_i` and the diagonal null-model terms included. Grouping by
//! cluster gives `Q = Σ_c (2 w_c − γ K_c² / 2m)`, where `w_c` is the weight
//! inside `c` and `K_c` its total strength.

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::weighted::WeightedGraph;

#[derive(Debug, Clone, PartialEq)]
pub struct QualityContext {
    pub gamma: f64,
    /// `2m`, the sum of all node strengths.
    pub total_weight: f64,
    pub node_strength: Vec<f64>,
}

impl QualityContext {
    pub fn new(g: &WeightedGraph<f64>, gamma: f64) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::config(format!("resolution must be non-negative, got {gamma}")));
        }
        let node_strength = g.strengths();
        let mut total = KahanSum::default();
        for &k in &node_strength {
            total.add(k);
        }
        Ok(QualityContext {
            gamma,
            total_weight: total.value(),
            node_strength,
        })
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Quality of `p` on `g`.
pub fn quality(g: &WeightedGraph<f64>, p: &Partition, ctx: &QualityContext) -> Result<f64> {
    if p.len() != g.node_count() {
        return Err(Error::contract(format!(
            "partition covers {} nodes, graph has {}",
            p.len(),
            g.node_count()
        )));
    }
    if ctx.node_strength.len() != g.node_count() {
        return Err(Error::contract("quality context was built for another graph"));
    }
    let clusters = p.cluster_count();
    let mut inside = vec![KahanSum::default(); clusters];
    let mut strength = vec![KahanSum::default(); clusters];
    for u in 0..g.node_count() {
        let c = p.cluster_of(u);
        strength[c].add(ctx.node_strength[u]);
        for &(v, w) in g.neighbors(u) {
            if p.cluster_of(v) == c {
                // Ordered pairs: each internal edge is seen from both ends.
                inside[c].add(w);
            }
        }
    }
    let mut q = KahanSum::default();
    for c in 0..clusters {
        q.add(inside[c].value());
        if ctx.total_weight > 0.0 {
            let k = strength[c].value();
            q.add(-ctx.gamma * k * k / ctx.total_weight);
        }
    }
    Ok(q.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("n{i}")).collect()
    }

    #[test]
    fn singleton_partition_is_diagonal_null_term() {
        let g = WeightedGraph::from_edges(labels(3), [(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
        let ctx = QualityContext::new(&g, 1.5).unwrap();
        let q = quality(&g, &Partition::singletons(3), &ctx).unwrap();
        let expected = -1.5 * (1.0 + 9.0 + 4.0) / 6.0;
        assert!((q - expected).abs() < 1e-12);
    }

    #[test]
    fn zero_gamma_all_in_one_counts_every_ordered_pair() {
        let g = WeightedGraph::from_edges(labels(3), [(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
        let ctx = QualityContext::new(&g, 0.0).unwrap();
        let q = quality(&g, &Partition::single_cluster(3), &ctx).unwrap();
        assert_eq!(q, 6.0);
    }

    #[test]
    fn missing_node_is_contract_error() {
        let g = WeightedGraph::from_edges(labels(3), [(0, 1, 1.0)]).unwrap();
        let ctx = QualityContext::new(&g, 1.0).unwrap();
        assert!(matches!(
            quality(&g, &Partition::singletons(2), &ctx),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let mut s = KahanSum::default();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-16);
        }
        assert_eq!(s.value(), 1.0 + 1e-15);
    }
}
