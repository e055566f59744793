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

//! Partition comparison and evaluation measures.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{NamedPartition, Partition};

/// Outcome of comparing two named partitions on their shared nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NmiReport {
    pub nmi: f64,
    pub shared: usize,
    /// Nodes present in only one of the two partitions.
    pub dropped: usize,
    /// Both partitions put every shared node in one cluster.
    pub degenerate: bool,
}

/// Normalized mutual information `2 I(P;Q) / (H(P) + H(Q))`, natural logs.
///
/// Two single-cluster partitions compare as identical (1.0). Summation order
/// does not depend on argument order or cluster labels, so the value is
/// exactly symmetric and relabeling-invariant.
pub fn nmi(p: &Partition, q: &Partition) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::contract(format!(
            "partitions cover {} and {} nodes",
            p.len(),
            q.len()
        )));
    }
    if p.is_empty() {
        return Err(Error::contract("cannot compare empty partitions"));
    }
    let n = p.len() as f64;
    let mut cells: HashMap<(usize, usize), usize> = HashMap::new();
    for (&a, &b) in p.assignment().iter().zip(q.assignment()) {
        *cells.entry((a, b)).or_insert(0) += 1;
    }
    let rows = p.cluster_sizes();
    let cols = q.cluster_sizes();
    let h_p = entropy(&rows, n);
    let h_q = entropy(&cols, n);
    let denom = h_p + h_q;
    if denom == 0.0 {
        return Ok(1.0);
    }
    let mut terms: Vec<f64> = cells
        .iter()
        .map(|(&(a, b), &count)| {
            let c = count as f64;
            let marginals = rows[a] as f64 * cols[b] as f64;
            c / n * (c * n / marginals).ln()
        })
        .collect();
    terms.sort_by(f64::total_cmp);
    let mutual = sum_sorted(&terms);
    Ok((2.0 * mutual / denom).clamp(0.0, 1.0))
}

fn entropy(sizes: &[usize], n: f64) -> f64 {
    let mut terms: Vec<f64> = sizes
        .iter()
        .filter(|&&s| s > 0)
        .map(|&s| {
            let p = s as f64 / n;
            -p * p.ln()
        })
        .collect();
    terms.sort_by(f64::total_cmp);
    sum_sorted(&terms)
}

fn sum_sorted(terms: &[f64]) -> f64 {
    let mut sum = crate::leiden::KahanSum::default();
    for &t in terms {
        sum.add(t);
    }
    sum.value()
}

/// NMI on the nodes both partitions share.
pub fn nmi_named(left: &NamedPartition, right: &NamedPartition) -> Result<NmiReport> {
    let (mut a, mut b) = (Vec::new(), Vec::new());
    let (mut i, mut j) = (0, 0);
    let (ln, rn) = (left.names(), right.names());
    while i < ln.len() && j < rn.len() {
        match ln[i].cmp(&rn[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                a.push(left.partition().cluster_of(i));
                b.push(right.partition().cluster_of(j));
                i += 1;
                j += 1;
            }
        }
    }
    let shared = a.len();
    if shared == 0 {
        return Err(Error::contract("partitions share no nodes"));
    }
    let p = Partition::from_labels(a);
    let q = Partition::from_labels(b);
    Ok(NmiReport {
        nmi: nmi(&p, &q)?,
        shared,
        dropped: ln.len() + rn.len() - 2 * shared,
        degenerate: p.cluster_count() == 1 && q.cluster_count() == 1,
    })
}

/// `N / Σ_α S_α²`. Ranges from `1/N` (one cluster) to 1 (all singletons).
pub fn granularity(p: &Partition) -> Result<f64> {
    if p.is_empty() {
        return Err(Error::contract("granularity of an empty partition"));
    }
    let squares: u128 = p.cluster_sizes().iter().map(|&s| (s as u128) * (s as u128)).sum();
    Ok(p.len() as f64 / squares as f64)
}

/// Largest `h` such that at least `h` counts are `>= h`.
pub fn h_index(citation_counts: &[u64]) -> u64 {
    let mut sorted = citation_counts.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
        .iter()
        .enumerate()
        .take_while(|&(i, &c)| c > i as u64)
        .count() as u64
}

/// External `(node, label, confidence)` annotations.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LabelSet {
    records: Vec<(String, String, f64)>,
}

impl LabelSet {
    pub fn new(records: Vec<(String, String, f64)>) -> Result<Self> {
        let mut seen: HashSet<(&str, &str)> = HashSet::new();
        for (node, label, confidence) in &records {
            if !(0.0..=1.0).contains(confidence) {
                return Err(Error::contract(format!(
                    "confidence {confidence} for {node:?} outside [0, 1]"
                )));
            }
            if !seen.insert((node, label)) {
                return Err(Error::contract(format!("label {label:?} repeated for {node:?}")));
            }
        }
        Ok(LabelSet { records })
    }

    pub fn records(&self) -> &[(String, String, f64)] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Most confident label per node. Equal confidences go to the
    /// lexicographically smallest label.
    pub fn best_labels(&self) -> HashMap<&str, &str> {
        let mut best: HashMap<&str, (&str, f64)> = HashMap::new();
        for (node, label, confidence) in &self.records {
            best.entry(node.as_str())
                .and_modify(|cur| {
                    if *confidence > cur.1 || (*confidence == cur.1 && label.as_str() < cur.0) {
                        *cur = (label.as_str(), *confidence);
                    }
                })
                .or_insert((label.as_str(), *confidence));
        }
        best.into_iter().map(|(n, (l, _))| (n, l)).collect()
    }
}

/// Partition of `nodes` by their most confident label, and the number of
/// nodes left out for lacking any label.
pub fn label_partition(labels: &LabelSet, nodes: &[String]) -> Result<(NamedPartition, usize)> {
    let best = labels.best_labels();
    let mut label_ids: HashMap<&str, usize> = HashMap::new();
    let mut names = Vec::new();
    let mut clusters = Vec::new();
    let mut excluded = 0;
    for node in nodes {
        match best.get(node.as_str()) {
            Some(label) => {
                let next = label_ids.len();
                clusters.push(*label_ids.entry(label).or_insert(next));
                names.push(node.clone());
            }
            None => excluded += 1,
        }
    }
    Ok((NamedPartition::new(names, clusters)?, excluded))
}

/// One point of a granularity sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GranularityPoint {
    pub method: String,
    pub gamma: f64,
    pub granularity: f64,
    pub cluster_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub granularity: f64,
    pub nmi: f64,
}

/// `(granularity(p), nmi(p, reference))` for every run, by granularity.
pub fn nmi_vs_granularity_curve(runs: &[(NamedPartition, NamedPartition)]) -> Result<Vec<CurvePoint>> {
    if runs.is_empty() {
        return Err(Error::contract("no runs to compare"));
    }
    let mut points = runs
        .iter()
        .map(|(p, reference)| {
            Ok(CurvePoint {
                granularity: granularity(p.partition())?,
                nmi: nmi_named(p, reference)?.nmi,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    points.sort_by(|a, b| a.granularity.total_cmp(&b.granularity));
    Ok(points)
}
