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


//! Independent reference implementations shared by the integration tests.
//! Everything here is written from the definitions, without calling into the
//! library's own algorithms.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use citesplit::{CitationGraph, WeightedGraph};
use rand::Rng;

pub fn node_name(i: usize) -> String {
    format!("v{i:03}")
}

/// Erdős–Rényi digraph without self-loops; every node is kept.
pub fn random_digraph<R: Rng>(rng: &mut R, n: usize, p: f64) -> CitationGraph {
    let ids = (0..n).map(node_name).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    CitationGraph::from_indexed(ids, edges)
}

pub fn out_set(g: &CitationGraph, u: usize) -> HashSet<usize> {
    g.edges().filter(|&(a, _)| a == u).map(|(_, b)| b).collect()
}

pub fn in_set(g: &CitationGraph, v: usize) -> HashSet<usize> {
    g.edges().filter(|&(_, b)| b == v).map(|(a, _)| a).collect()
}

/// Pairwise intersection sizes of reference (`citing = true`) or citer sets,
/// keyed by id pair with the smaller id first.
pub fn brute_coupling(g: &CitationGraph, references: bool) -> HashMap<(String, String), u64> {
    let n = g.node_count();
    let sets: Vec<HashSet<usize>> = (0..n)
        .map(|u| if references { out_set(g, u) } else { in_set(g, u) })
        .collect();
    let mut out = HashMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let shared = sets[i].intersection(&sets[j]).count() as u64;
            if shared > 0 {
                out.insert((g.id(i).to_owned(), g.id(j).to_owned()), shared);
            }
        }
    }
    out
}

/// Dense adjacency with `a[i][j] = 1` iff `i` cites `j`.
pub fn adjacency_matrix(g: &CitationGraph) -> Vec<Vec<u64>> {
    let n = g.node_count();
    let mut a = vec![vec![0u64; n]; n];
    for (u, v) in g.edges() {
        a[u][v] = 1;
    }
    a
}

pub fn transpose(a: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

pub fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut c = vec![vec![0u64; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] != 0 {
                for j in 0..n {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    c
}

/// Off-diagonal nonzero entries of a symmetric count matrix, keyed like
/// [`brute_coupling`].
pub fn offdiag_entries(g: &CitationGraph, m: &[Vec<u64>]) -> HashMap<(String, String), u64> {
    let mut out = HashMap::new();
    for (i, row) in m.iter().enumerate() {
        for (j, &c) in row.iter().enumerate().skip(i + 1) {
            if c > 0 {
                out.insert((g.id(i).to_owned(), g.id(j).to_owned()), c);
            }
        }
    }
    out
}

pub fn weighted_entries<W: citesplit::EdgeWeight>(wg: &WeightedGraph<W>) -> HashMap<(String, String), W> {
    wg.edges()
        .map(|(u, v, w)| {
            let (a, b) = (wg.label(u).to_owned(), wg.label(v).to_owned());
            if a < b { ((a, b), w) } else { ((b, a), w) }
        })
        .collect()
}

/// Dense symmetric weight matrix.
pub fn dense_weights(g: &WeightedGraph<f64>) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut a = vec![vec![0.0; n]; n];
    for (u, v, w) in g.edges() {
        a[u][v] = w;
        a[v][u] = w;
    }
    a
}

/// Potts quality summed term by term over all ordered node pairs,
/// `Σ_ij (A_ij − γ k_i k_j / 2m) δ(c_i, c_j)`.
pub fn potts_quality(g: &WeightedGraph<f64>, assignment: &[usize], gamma: f64) -> f64 {
    let a = dense_weights(g);
    let n = a.len();
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    if two_m == 0.0 {
        return 0.0;
    }
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if assignment[i] == assignment[j] {
                q += a[i][j] - gamma * k[i] * k[j] / two_m;
            }
        }
    }
    q
}

/// Every set partition of `n` items as a restricted growth string.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for c in 0..=max + 1 {
            prefix.push(c);
            rec(prefix, max.max(c), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
    } else {
        let mut prefix = vec![0];
        rec(&mut prefix, 0, n, &mut out);
    }
    out
}

/// Best quality over all partitions, with one maximizer.
pub fn exhaustive_best(g: &WeightedGraph<f64>, gamma: f64) -> (f64, Vec<usize>) {
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for p in set_partitions(g.node_count()) {
        let q = potts_quality(g, &p, gamma);
        if q > best.0 {
            best = (q, p);
        }
    }
    best
}

pub fn unweighted(n: usize, edges: &[(usize, usize)]) -> WeightedGraph<f64> {
    WeightedGraph::from_edges((0..n).map(node_name).collect(), edges.iter().map(|&(u, v)| (u, v, 1.0))).unwrap()
}

/// Two `k`-cliques joined by a single edge.
pub fn two_cliques(k: usize) -> WeightedGraph<f64> {
    let mut edges = Vec::new();
    for base in [0, k] {
        for i in 0..k {
            for j in i + 1..k {
                edges.push((base + i, base + j));
            }
        }
    }
    edges.push((k - 1, k));
    unweighted(2 * k, &edges)
}

pub fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == u && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Connected graphs on at most 8 nodes: every connected graph on up to 5
/// nodes, classic families on 6 to 8 nodes, and seeded random connected
/// graphs (some weighted) on 6 to 8 nodes.
pub fn small_connected_corpus<R: Rng>(rng: &mut R, random_count: usize) -> Vec<WeightedGraph<f64>> {
    let mut corpus = Vec::new();
    for n in 2..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<_> = pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e).collect();
            if is_connected(n, &edges) {
                corpus.push(unweighted(n, &edges));
            }
        }
    }
    for n in 6..=8usize {
        let path: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let mut cycle = path.clone();
        cycle.push((n - 1, 0));
        let star: Vec<_> = (1..n).map(|i| (0, i)).collect();
        let complete: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        for edges in [path, cycle, star, complete] {
            corpus.push(unweighted(n, &edges));
        }
    }
    corpus.push(two_cliques(3));
    corpus.push(two_cliques(4));
    let mut made = 0;
    while made < random_count {
        let n = rng.random_range(6..=8);
        let p = rng.random_range(0.25..0.6);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random::<f64>() < p {
                    edges.push((i, j));
                }
            }
        }
        if !is_connected(n, &edges) {
            continue;
        }
        let weighted = made % 2 == 1;
        let triples: Vec<_> = edges
            .iter()
            .map(|&(u, v)| (u, v, if weighted { rng.random_range(0.1..3.0) } else { 1.0 }))
            .collect();
        corpus.push(WeightedGraph::from_edges((0..n).map(node_name).collect(), triples).unwrap());
        made += 1;
    }
    corpus
}

/// NMI from an explicit contingency table: `2 I / (H_a + H_b)` with natural
/// logarithms; two single-cluster labelings score 1.
pub fn nmi_oracle(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len() as f64;
    let mut joint: HashMap<(usize, usize), f64> = HashMap::new();
    let mut ca: HashMap<usize, f64> = HashMap::new();
    let mut cb: HashMap<usize, f64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_default() += 1.0;
        *ca.entry(x).or_default() += 1.0;
        *cb.entry(y).or_default() += 1.0;
    }
    let entropy = |m: &HashMap<usize, f64>| -m.values().map(|&c| c / n * (c / n).ln()).sum::<f64>();
    let (ha, hb) = (entropy(&ca), entropy(&cb));
    if ha + hb == 0.0 {
        return 1.0;
    }
    let mut mi = 0.0;
    for (&(x, y), &c) in &joint {
        mi += c / n * (c * n / (ca[&x] * cb[&y])).ln();
    }
    (2.0 * mi / (ha + hb)).clamp(0.0, 1.0)
}

/// h-index by sorting descending and scanning for the last rank `r` with
/// `counts[r] ≥ r + 1`.
pub fn h_index_sorted_scan(counts: &[u64]) -> u64 {
    let mut sorted = counts.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut h = 0;
    for (rank, &c) in sorted.iter().enumerate() {
        if c > rank as u64 {
            h = rank as u64 + 1;
        } else {
            break;
        }
    }
    h
}

/// h-index straight from the definition.
pub fn h_index_definition(counts: &[u64]) -> u64 {
    (0..=counts.len() as u64)
        .rev()
        .find(|&h| counts.iter().filter(|&&c| c >= h).count() as u64 >= h)
        .unwrap_or(0)
}

/// Top-M retention from the definition: an edge survives when it ranks
/// among the `m` heaviest edges of either endpoint, ties broken toward the
/// smaller neighbor index.
pub fn top_m_oracle(g: &WeightedGraph<u64>, m: usize) -> HashSet<(usize, usize)> {
    let n = g.node_count();
    let mut keep = HashSet::new();
    for u in 0..n {
        let mut ranked: Vec<(usize, u64)> = (0..n).filter_map(|v| g.weight(u, v).map(|w| (v, w))).collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        for &(v, _) in ranked.iter().take(m) {
            keep.insert((u.min(v), u.max(v)));
        }
    }
    keep
}
