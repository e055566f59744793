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

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::quality::KahanSum;
use super::LeidenParams;
use crate::partition::Partition;
use crate::weighted::{DisjointSet, WeightedGraph};

/// Temperature of the randomized merge choice during refinement.
const REFINE_THETA: f64 = 0.01;

/// Graph at one aggregation level. Self-loops are not stored; they do not
/// affect any move gain.
#[derive(Debug, Clone)]
struct Level {
    adjacency: Vec<Vec<(usize, f64)>>,
    strength: Vec<f64>,
}

impl Level {
    fn len(&self) -> usize {
        self.strength.len()
    }
}

struct Objective {
    gamma: f64,
    two_m: f64,
    epsilon: f64,
}

impl Objective {
    /// Half-Q gain of joining a cluster with total strength `cluster` for a
    /// node of strength `k` linked to it with weight `links`.
    fn gain(&self, links: f64, k: f64, cluster: f64) -> f64 {
        links - self.gamma * k * cluster / self.two_m
    }
}

pub(super) fn run(g: &WeightedGraph<f64>, gamma: f64, params: &LeidenParams) -> Partition {
    let n = g.node_count();
    // Work in identifier order so results do not depend on index order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| g.label(a).cmp(g.label(b)));
    let mut rank = vec![0; n];
    for (r, &u) in order.iter().enumerate() {
        rank[u] = r;
    }
    let base = Level {
        adjacency: order
            .iter()
            .map(|&u| {
                let mut list: Vec<(usize, f64)> = g.neighbors(u).iter().map(|&(v, w)| (rank[v], w)).collect();
                list.sort_by_key(|&(v, _)| v);
                list
            })
            .collect(),
        strength: order.iter().map(|&u| g.strength(u)).collect(),
    };
    let mut total = KahanSum::default();
    for &k in &base.strength {
        total.add(k);
    }
    let objective = Objective {
        gamma,
        two_m: total.value(),
        epsilon: params.quality_epsilon,
    };
    if objective.two_m == 0.0 {
        return Partition::singletons(n);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(params.seed) ^ label_hash(order.iter().map(|&u| g.label(u))));
    let mut best: Option<(f64, Vec<usize>)> = None;
    for start in 0..params.random_starts {
        // The first start moves greedily; later ones pick among improving
        // moves at random, which escapes optima every greedy order falls into.
        let mode = if start == 0 { MoveChoice::Best } else { MoveChoice::AnyImproving };
        let membership = optimize(&base, &objective, params, mode, &mut rng);
        let q = level_quality(&base, &membership, &objective);
        if best.as_ref().is_none_or(|(top, _)| q > top + params.quality_epsilon) {
            best = Some((q, membership));
        }
    }
    let (_, membership) = best.expect("at least one start");
    let count = membership.iter().max().map_or(0, |&c| c + 1);
    Partition::from_dense((0..n).map(|u| membership[rank[u]]).collect(), count)
}

/// Passes from singletons until the partition stops changing.
fn optimize(base: &Level, objective: &Objective, params: &LeidenParams, mode: MoveChoice, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = base.len();
    let mut membership: Vec<usize> = (0..n).collect();
    let mut current = level_quality(base, &membership, objective);
    for _ in 0..params.max_iterations {
        let next = leiden_pass(base, &membership, objective, mode, rng);
        let next = split_disconnected(base, &next);
        let q = level_quality(base, &next, objective);
        debug_assert!(
            q >= current - params.quality_epsilon * (n as f64 + 1.0),
            "quality decreased from {current} to {q}"
        );
        if next == membership {
            break;
        }
        membership = next;
        current = q;
    }
    membership
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// FNV-1a over the labels, NUL-separated.
fn label_hash<'a>(labels: impl Iterator<Item = &'a str>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for label in labels {
        for &b in label.as_bytes().iter().chain(std::iter::once(&0u8)) {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

/// Dense relabeling by first appearance.
fn densify(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = vec![usize::MAX; labels.iter().max().map_or(0, |&m| m + 1)];
    let mut next = 0;
    let dense = labels
        .iter()
        .map(|&l| {
            if map[l] == usize::MAX {
                map[l] = next;
                next += 1;
            }
            map[l]
        })
        .collect();
    (dense, next)
}

fn level_quality(level: &Level, comm: &[usize], obj: &Objective) -> f64 {
    let clusters = comm.iter().max().map_or(0, |&c| c + 1);
    let mut strength = vec![0.0; clusters];
    let mut q = KahanSum::default();
    for u in 0..level.len() {
        strength[comm[u]] += level.strength[u];
        for &(v, w) in &level.adjacency[u] {
            if comm[v] == comm[u] {
                q.add(w);
            }
        }
    }
    for k in strength {
        q.add(-obj.gamma * k * k / obj.two_m);
    }
    q.value()
}

fn leiden_pass(base: &Level, init: &[usize], obj: &Objective, mode: MoveChoice, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut level = base.clone();
    let mut comm = init.to_vec();
    // Base node -> node of the current level.
    let mut position: Vec<usize> = (0..base.len()).collect();
    loop {
        local_move(&level, &mut comm, obj, mode, rng);
        let (dense, count) = densify(&comm);
        if count == level.len() {
            comm = dense;
            break;
        }
        let (mut refined, mut refined_count) = refine(&level, &dense, count, obj, rng);
        if refined_count == level.len() {
            // No merge happened; aggregate on the communities themselves.
            refined = dense.clone();
            refined_count = count;
        }
        let coarse = aggregate(&level, &refined, refined_count);
        let mut coarse_comm = vec![0; refined_count];
        for (u, &r) in refined.iter().enumerate() {
            coarse_comm[r] = dense[u];
        }
        for p in position.iter_mut() {
            *p = refined[*p];
        }
        level = coarse;
        comm = coarse_comm;
    }
    let flat: Vec<usize> = position.iter().map(|&p| comm[p]).collect();
    densify(&flat).0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MoveChoice {
    /// Highest gain, lowest cluster id on ties.
    Best,
    /// Uniformly among clusters that beat staying.
    AnyImproving,
}

/// Queue-based local moving. `comm` values lie in `0..level.len()`.
fn local_move(level: &Level, comm: &mut [usize], obj: &Objective, mode: MoveChoice, rng: &mut ChaCha8Rng) -> bool {
    let n = level.len();
    let mut cluster_strength = vec![0.0; n];
    let mut size = vec![0usize; n];
    for v in 0..n {
        cluster_strength[comm[v]] += level.strength[v];
        size[comm[v]] += 1;
    }
    let mut empty: Vec<usize> = (0..n).rev().filter(|&c| size[c] == 0).collect();
    let mut visit: Vec<usize> = (0..n).collect();
    visit.shuffle(rng);
    let mut queue: VecDeque<usize> = visit.into();
    let mut queued = vec![true; n];
    let mut links = vec![0.0; n];
    let mut seen = vec![false; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut improving: Vec<(usize, f64)> = Vec::new();
    let mut moved = false;

    while let Some(v) = queue.pop_front() {
        queued[v] = false;
        let current = comm[v];
        let k = level.strength[v];
        for &(u, w) in &level.adjacency[v] {
            let c = comm[u];
            if !seen[c] {
                seen[c] = true;
                touched.push(c);
            }
            links[c] += w;
        }
        cluster_strength[current] -= k;
        size[current] -= 1;
        touched.sort_unstable();

        let stay = obj.gain(links[current], k, cluster_strength[current]);
        let mut best: Option<(usize, f64)> = None;
        improving.clear();
        for &c in &touched {
            if c == current {
                continue;
            }
            let gain = obj.gain(links[c], k, cluster_strength[c]);
            if best.is_none_or(|(_, b)| gain > b + obj.epsilon) {
                best = Some((c, gain));
            }
            if gain > stay + obj.epsilon {
                improving.push((c, gain));
            }
        }
        if mode == MoveChoice::AnyImproving && improving.len() > 1 {
            best = Some(improving[rng.random_range(0..improving.len())]);
        }
        let mut target = current;
        let mut target_gain = stay;
        if let Some((c, gain)) = best {
            // Near-ties between staying alone and joining favor the join.
            if gain > stay + obj.epsilon || (size[current] == 0 && gain >= stay - obj.epsilon) {
                target = c;
                target_gain = gain;
            }
        }
        if size[current] > 0 && 0.0 > target_gain + obj.epsilon {
            target = empty.pop().expect("an empty cluster exists while v shares one");
        }

        cluster_strength[target] += k;
        size[target] += 1;
        if target != current {
            if size[current] == 0 {
                empty.push(current);
            }
            comm[v] = target;
            moved = true;
            for &(u, _) in &level.adjacency[v] {
                if !queued[u] && comm[u] != target {
                    queued[u] = true;
                    queue.push_back(u);
                }
            }
        }
        for &c in &touched {
            links[c] = 0.0;
            seen[c] = false;
        }
        touched.clear();
    }
    moved
}

/// Splits each community into well-connected subcommunities by merging
/// singletons into subcommunities of the same community.
fn refine(level: &Level, comm: &[usize], count: usize, obj: &Objective, rng: &mut ChaCha8Rng) -> (Vec<usize>, usize) {
    let n = level.len();
    let mut community_strength = vec![0.0; count];
    for v in 0..n {
        community_strength[comm[v]] += level.strength[v];
    }
    // Weight from each node to the rest of its community.
    let internal: Vec<f64> = (0..n)
        .map(|v| {
            level.adjacency[v]
                .iter()
                .filter(|&&(u, _)| comm[u] == comm[v])
                .map(|&(_, w)| w)
                .sum()
        })
        .collect();

    let mut refined: Vec<usize> = (0..n).collect();
    let mut sub_strength = level.strength.clone();
    let mut sub_size = vec![1usize; n];
    // Weight from each subcommunity to the rest of its community.
    let mut sub_external = internal.clone();

    let mut visit: Vec<usize> = (0..n).collect();
    visit.shuffle(rng);
    let mut links = vec![0.0; n];
    let mut seen = vec![false; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut choices: Vec<(usize, f64)> = Vec::new();

    for v in visit {
        if sub_size[refined[v]] != 1 {
            continue;
        }
        let c = comm[v];
        let k = level.strength[v];
        let total = community_strength[c];
        if internal[v] + obj.epsilon < obj.gamma * k * (total - k) / obj.two_m {
            continue;
        }
        for &(u, w) in &level.adjacency[v] {
            if comm[u] != c {
                continue;
            }
            let r = refined[u];
            if !seen[r] {
                seen[r] = true;
                touched.push(r);
            }
            links[r] += w;
        }
        touched.sort_unstable();
        choices.clear();
        choices.push((refined[v], 0.0));
        for &r in &touched {
            let s = sub_strength[r];
            let well_connected = sub_external[r] + obj.epsilon >= obj.gamma * s * (total - s) / obj.two_m;
            let gain = obj.gain(links[r], k, s);
            if well_connected && gain >= 0.0 {
                choices.push((r, gain));
            }
        }
        let top = choices.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = choices.iter().map(|c| ((c.1 - top) / REFINE_THETA).exp()).collect();
        let mut pick = rng.random::<f64>() * weights.iter().sum::<f64>();
        let mut chosen = choices.len() - 1;
        for (i, w) in weights.iter().enumerate() {
            if pick < *w {
                chosen = i;
                break;
            }
            pick -= w;
        }
        let target = choices[chosen].0;
        if target != refined[v] {
            sub_external[target] += internal[v] - 2.0 * links[target];
            sub_strength[target] += k;
            sub_size[target] += 1;
            sub_size[refined[v]] = 0;
            refined[v] = target;
        }
        for &r in &touched {
            links[r] = 0.0;
            seen[r] = false;
        }
        touched.clear();
    }
    densify(&refined)
}

fn aggregate(level: &Level, groups: &[usize], count: usize) -> Level {
    let mut strength = vec![0.0; count];
    let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); count];
    for u in 0..level.len() {
        let a = groups[u];
        strength[a] += level.strength[u];
        for &(v, w) in &level.adjacency[u] {
            let b = groups[v];
            if a != b {
                adjacency[a].push((b, w));
            }
        }
    }
    for list in adjacency.iter_mut() {
        list.sort_by_key(|&(v, _)| v);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(list.len());
        for &(v, w) in list.iter() {
            match merged.last_mut() {
                Some((last, acc)) if *last == v => *acc += w,
                _ => merged.push((v, w)),
            }
        }
        *list = merged;
    }
    Level { adjacency, strength }
}

/// Replaces every cluster by its connected components. Never lowers quality.
fn split_disconnected(base: &Level, comm: &[usize]) -> Vec<usize> {
    let mut set = DisjointSet::new(base.len());
    for u in 0..base.len() {
        for &(v, _) in &base.adjacency[u] {
            if v > u && comm[u] == comm[v] {
                set.union(u, v);
            }
        }
    }
    let roots: Vec<usize> = (0..base.len()).map(|u| set.find(u)).collect();
    densify(&roots).0
}
