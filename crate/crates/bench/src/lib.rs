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

//! Shared inputs for the benchmarks.

use citesplit::synth::{planted_partition, random_dag, PlantedParams};
use citesplit::{CitationGraph, WeightedGraph};

/// Random citation DAG with ten references per paper.
pub fn citation_dag(citations: usize) -> CitationGraph {
    random_dag(citations, 10, 7).expect("valid generator parameters")
}

/// Symmetrized planted-partition graph with `groups` groups of 64 nodes.
pub fn planted_graph(groups: usize) -> WeightedGraph<f64> {
    let params = PlantedParams {
        groups,
        group_size: 64,
        p_in: 0.2,
        p_out: 0.01,
    };
    planted_partition(&params, 11)
        .expect("valid generator parameters")
        .graph()
        .to_undirected()
        .to_f64()
}
