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


mod common;

use citesplit::leiden::{best_single_move_gain, clusters_connected};
use citesplit::{cluster, quality, sweep, LeidenParams, Partition, QualityContext, WeightedGraph};
use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_weighted(seed: u64, n: usize, p: f64) -> WeightedGraph<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v, rng.random_range(0.05..4.0)));
            }
        }
    }
    WeightedGraph::from_edges((0..n).map(node_name).collect(), edges).unwrap()
}

fn q(g: &WeightedGraph<f64>, p: &Partition, gamma: f64) -> f64 {
    quality(g, p, &QualityContext::new(g, gamma).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn quality_matches_pairwise_sum(seed in any::<u64>(), n in 1usize..30, p in 0.0f64..0.5, k in 1usize..6, gamma in 0.0f64..3.0) {
        let g = random_weighted(seed, n, p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        let part = Partition::from_labels(labels.iter().copied());
        prop_assert!((q(&g, &part, gamma) - potts_quality(&g, &labels, gamma)).abs() <= 1e-10);
    }

    #[test]
    fn clustering_is_deterministic_and_locally_optimal(seed in any::<u64>(), n in 2usize..40, gamma in 0.2f64..2.5) {
        let g = random_weighted(seed, n, 0.2);
        let params = LeidenParams::with_seed(seed);
        let a = cluster(&g, gamma, &params).unwrap();
        let b = cluster(&g, gamma, &params).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.len(), n);
        prop_assert!(clusters_connected(&g, &a));
        prop_assert!(best_single_move_gain(&g, &a, gamma) <= 1e-8);
        prop_assert!(q(&g, &a, gamma) >= q(&g, &Partition::singletons(n), gamma) - 1e-9);
    }

    #[test]
    fn clustering_is_equivariant_under_node_order(seed in any::<u64>(), n in 2usize..30) {
        // Labels fix the canonical order, so listing nodes differently must not
        // change which labels end up together.
        let g = random_weighted(seed, n, 0.25);
        let mut order: Vec<usize> = (0..n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(!seed);
        rand::seq::SliceRandom::shuffle(&mut order[..], &mut rng);
        let mut position = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let labels = order.iter().map(|&old| node_name(old)).collect();
        let permuted = WeightedGraph::from_edges(labels, g.edges().map(|(u, v, w)| (position[u], position[v], w))).unwrap();
        let params = LeidenParams::with_seed(9);
        let a = cluster(&g, 1.0, &params).unwrap();
        let b = cluster(&permuted, 1.0, &params).unwrap();
        for u in 0..n {
            for v in 0..n {
                prop_assert_eq!(a.cluster_of(u) == a.cluster_of(v), b.cluster_of(position[u]) == b.cluster_of(position[v]));
            }
        }
    }
}

#[test]
fn set_partition_count_is_bell_number() {
    let bell = [1usize, 1, 2, 5, 15, 52, 203, 877, 4140];
    for (n, &b) in bell.iter().enumerate() {
        assert_eq!(set_partitions(n).len(), b);
    }
}

#[test]
fn two_cliques_reach_exhaustive_optimum() {
    for k in [3, 4] {
        let g = two_cliques(k);
        let (best_q, best) = exhaustive_best(&g, 1.0);
        let got = cluster(&g, 1.0, &LeidenParams::default()).unwrap();
        assert_eq!(got, Partition::from_labels(best));
        assert!((q(&g, &got, 1.0) - best_q).abs() < 1e-12);
    }
}

#[test]
fn near_optimal_on_small_connected_graphs() {
    let corpus = small_connected_corpus(&mut ChaCha8Rng::seed_from_u64(4), 40);
    for g in &corpus {
        let (best, _) = exhaustive_best(g, 1.0);
        let part = cluster(g, 1.0, &LeidenParams::default()).unwrap();
        let got = q(g, &part, 1.0);
        assert!(got >= 0.95 * best - 1e-12, "got {got}, optimum {best} on {:?}", g.edges().collect::<Vec<_>>());
    }
}

#[test]
fn resolution_extremes_on_two_cliques() {
    let g = two_cliques(4);
    let runs = sweep(&g, &[0.1, 5.0], &LeidenParams::default()).unwrap();
    assert_eq!(runs[0].1.cluster_count(), 1);
    assert!(runs[1].1.cluster_count() >= 2);
}
