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

//! Directed citation graph with interned string identifiers.
//!
//! Node indices follow the lexicographic order of the external identifiers,
//! so the same set of citations always yields the same graph regardless of
//! the order in which lines were read.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::BufRead;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::weighted::WeightedGraph;

/// Suffixes reserved for the citing and cited copies of a split node.
pub const RESERVED_SUFFIXES: [&str; 2] = [":o", ":i"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CitationGraph {
    ids: Arc<[String]>,
    out_adjacency: Vec<Vec<usize>>,
    in_adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

#[derive(Debug, Clone, Default)]
pub struct IngestOptions {
    /// When set, only these identifiers become nodes and citations with an
    /// endpoint outside the set are dropped.
    pub allow_list: Option<HashSet<String>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub lines_read: usize,
    pub self_loops: usize,
    pub duplicates: usize,
    pub outside_allow_list: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct DegreeStats {
    pub nodes: usize,
    pub edges: usize,
    /// Nodes with out-degree > 0.
    pub citing: usize,
    /// Nodes with in-degree > 0.
    pub cited: usize,
    pub isolated: usize,
}

impl IngestOptions {
    /// Reads an allow-list file: one identifier per line, `#` comments and
    /// blank lines ignored.
    pub fn read_allow_list<R: BufRead>(reader: R) -> Result<HashSet<String>> {
        let mut ids = HashSet::new();
        for (lineno, line) in read_lines(reader) {
            let line = line?;
            if skip_line(&line) {
                continue;
            }
            check_id(&line, lineno)?;
            ids.insert(line);
        }
        Ok(ids)
    }
}

pub(crate) fn read_lines<R: BufRead>(reader: R) -> impl Iterator<Item = (usize, Result<String>)> {
    reader.split(b'\n').enumerate().map(|(i, bytes)| {
        let lineno = i + 1;
        let line = bytes.map_err(Error::from).and_then(|mut bytes| {
            if bytes.last() == Some(&b'\r') {
                bytes.pop();
            }
            String::from_utf8(bytes).map_err(|_| Error::parse(lineno, "invalid UTF-8"))
        });
        (lineno, line)
    })
}

pub(crate) fn skip_line(line: &str) -> bool {
    line.is_empty() || line.starts_with('#')
}

fn check_id(id: &str, lineno: usize) -> Result<()> {
    if id.is_empty() {
        return Err(Error::parse(lineno, "empty identifier"));
    }
    if RESERVED_SUFFIXES.iter().any(|s| id.ends_with(s)) {
        return Err(Error::parse(
            lineno,
            format!("identifier {id:?} ends with a reserved layer suffix"),
        ));
    }
    Ok(())
}

/// Parses a `citing<TAB>cited` edge list.
pub fn load_edge_list<R: BufRead>(
    source: R,
    options: &IngestOptions,
) -> Result<(CitationGraph, IngestReport)> {
    let mut report = IngestReport::default();
    let mut names: BTreeSet<String> = BTreeSet::new();
    let mut pairs: Vec<(String, String)> = Vec::new();

    if let Some(allow) = &options.allow_list {
        names.extend(allow.iter().cloned());
    }

    for (lineno, line) in read_lines(source) {
        let line = line?;
        if skip_line(&line) {
            continue;
        }
        report.lines_read += 1;
        let mut fields = line.split('\t');
        let (citing, cited) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::parse(
                    lineno,
                    format!("expected 2 tab-separated fields, found {}", line.split('\t').count()),
                ))
            }
        };
        check_id(citing, lineno)?;
        check_id(cited, lineno)?;
        if let Some(allow) = &options.allow_list {
            if !allow.contains(citing) || !allow.contains(cited) {
                report.outside_allow_list += 1;
                continue;
            }
        } else {
            if !names.contains(citing) {
                names.insert(citing.to_owned());
            }
            if !names.contains(cited) {
                names.insert(cited.to_owned());
            }
        }
        if citing == cited {
            report.self_loops += 1;
            continue;
        }
        pairs.push((citing.to_owned(), cited.to_owned()));
    }

    let ids: Vec<String> = names.into_iter().collect();
    let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let edges: Vec<(usize, usize)> = pairs
        .iter()
        .map(|(a, b)| (index[a.as_str()], index[b.as_str()]))
        .collect();
    let total = edges.len();
    let graph = CitationGraph::from_indexed(ids, edges);
    report.duplicates = total - graph.edge_count();
    Ok((graph, report))
}

impl CitationGraph {
    /// Builds a graph from string pairs. Self-citations and duplicates are
    /// dropped, node order is lexicographic.
    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let pairs: Vec<(String, String)> = pairs
            .into_iter()
            .map(|(a, b)| (a.as_ref().to_owned(), b.as_ref().to_owned()))
            .collect();
        let names: BTreeSet<&str> = pairs.iter().flat_map(|(a, b)| [a.as_str(), b.as_str()]).collect();
        let ids: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let edges = pairs
            .iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (index[a.as_str()], index[b.as_str()]));
        Self::from_indexed(ids, edges)
    }

    /// Builds a graph over `ids` (assumed unique) from index pairs.
    /// Self-loops and duplicate pairs are discarded.
    pub fn from_indexed(ids: Vec<String>, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let n = ids.len();
        let mut out_adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} nodes");
            if u != v {
                out_adjacency[u].push(v);
            }
        }
        let mut in_adjacency = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, targets) in out_adjacency.iter_mut().enumerate() {
            targets.sort_unstable();
            targets.dedup();
            edge_count += targets.len();
            for &v in targets.iter() {
                in_adjacency[v].push(u);
            }
        }
        CitationGraph {
            ids: ids.into(),
            out_adjacency,
            in_adjacency,
            edge_count,
        }
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn id(&self, node: usize) -> &str {
        &self.ids[node]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    /// The identifier table, shared rather than copied.
    pub(crate) fn shared_ids(&self) -> Arc<[String]> {
        Arc::clone(&self.ids)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.binary_search_by(|probe| probe.as_str().cmp(id)).ok()
    }

    /// Nodes cited by `node`, ascending.
    pub fn out_neighbors(&self, node: usize) -> &[usize] {
        &self.out_adjacency[node]
    }

    /// Nodes citing `node`, ascending.
    pub fn in_neighbors(&self, node: usize) -> &[usize] {
        &self.in_adjacency[node]
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.out_adjacency[node].len()
    }

    pub fn in_degree(&self, node: usize) -> usize {
        self.in_adjacency[node].len()
    }

    /// All citations `(citing, cited)` in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    /// The graph with every citation reversed.
    pub fn reversed(&self) -> Self {
        CitationGraph {
            ids: self.ids.clone(),
            out_adjacency: self.in_adjacency.clone(),
            in_adjacency: self.out_adjacency.clone(),
            edge_count: self.edge_count,
        }
    }

    /// Drops nodes with neither citations nor references.
    pub fn remove_isolated(&self) -> Self {
        let keep: Vec<usize> = (0..self.node_count())
            .filter(|&u| self.out_degree(u) + self.in_degree(u) > 0)
            .collect();
        let mut remap = vec![usize::MAX; self.node_count()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let ids = keep.iter().map(|&u| self.ids[u].clone()).collect();
        let edges: Vec<(usize, usize)> = self.edges().map(|(u, v)| (remap[u], remap[v])).collect();
        Self::from_indexed(ids, edges)
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let mut stats = DegreeStats {
            nodes: self.node_count(),
            edges: self.edge_count,
            ..Default::default()
        };
        for u in 0..self.node_count() {
            let (out, inc) = (self.out_degree(u), self.in_degree(u));
            stats.citing += usize::from(out > 0);
            stats.cited += usize::from(inc > 0);
            stats.isolated += usize::from(out + inc == 0);
        }
        stats
    }

    /// Symmetrized direct-citation network. Reciprocal citations add up to
    /// weight 2.
    pub fn to_undirected(&self) -> WeightedGraph<u64> {
        WeightedGraph::from_edges(self.ids.to_vec(), self.edges().map(|(u, v)| (u, v, 1u64)))
            .expect("citation graph has no self-loops")
    }
}
