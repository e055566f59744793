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

//! Tab-separated file formats.
//!
//! * weighted graph: `u<TAB>v<TAB>weight`, `u < v` lexicographically, lines sorted
//! * split graph: `origin:o<TAB>origin:i<TAB>weight`, lines sorted
//! * partition: `external_id<TAB>cluster_id` sorted by id, after a `#` header
//!   of `key=value` fields
//! * labels: `external_id<TAB>label<TAB>confidence`
//!
//! Lines starting with `#` are comments in every reader.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Display;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{read_lines, skip_line};
use crate::metrics::LabelSet;
use crate::partition::NamedPartition;
use crate::split::{Layer, SplitGraph};
use crate::weighted::{EdgeWeight, WeightedGraph};

/// Formats like C's `%.{digits}g`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".to_owned() } else { x.to_string() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn fields(line: &str, lineno: usize, expected: usize) -> Result<Vec<&str>> {
    let parts: Vec<&str> = line.split('\t').collect();
    if parts.len() != expected {
        return Err(Error::parse(
            lineno,
            format!("expected {expected} tab-separated fields, found {}", parts.len()),
        ));
    }
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::parse(lineno, "empty field"));
    }
    Ok(parts)
}

fn parse_f64(s: &str, lineno: usize) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::parse(lineno, format!("invalid number {s:?}")))
}

pub fn write_weighted_graph<W: EdgeWeight + Display, O: Write>(wg: &WeightedGraph<W>, out: &mut O) -> Result<()> {
    let mut lines: Vec<(&str, &str, W)> = wg
        .edges()
        .map(|(u, v, w)| {
            let (a, b) = (wg.label(u), wg.label(v));
            if a < b {
                (a, b, w)
            } else {
                (b, a, w)
            }
        })
        .collect();
    lines.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
    for (a, b, w) in lines {
        writeln!(out, "{a}\t{b}\t{w}")?;
    }
    Ok(())
}

pub fn read_weighted_graph<R: BufRead>(reader: R) -> Result<WeightedGraph<f64>> {
    let mut rows = Vec::new();
    for (lineno, line) in read_lines(reader) {
        let line = line?;
        if skip_line(&line) {
            continue;
        }
        let f = fields(&line, lineno, 3)?;
        if f[0] == f[1] {
            return Err(Error::parse(lineno, "self-loop"));
        }
        let w = parse_f64(f[2], lineno)?;
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::parse(lineno, format!("non-positive weight {w}")));
        }
        rows.push((f[0].to_owned(), f[1].to_owned(), w, lineno));
    }
    let labels: Vec<String> = rows
        .iter()
        .flat_map(|r| [r.0.clone(), r.1.clone()])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut seen = BTreeSet::new();
    let mut edges = Vec::with_capacity(rows.len());
    for (a, b, w, lineno) in &rows {
        let (u, v) = (index[a.as_str()], index[b.as_str()]);
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::parse(*lineno, "duplicate edge"));
        }
        edges.push((u, v, *w));
    }
    WeightedGraph::from_edges(labels, edges)
}

pub fn write_split_graph<O: Write>(sg: &SplitGraph, out: &mut O) -> Result<()> {
    let ids = sg.origin_ids();
    let citing = sg.layer_origins(Layer::Citing);
    let cited = sg.layer_origins(Layer::Cited);
    let mut lines: Vec<(&str, &str, f64)> = sg
        .edges()
        .iter()
        .map(|&(o, i, w)| (ids[citing[o]].as_str(), ids[cited[i]].as_str(), w))
        .collect();
    lines.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
    for (a, b, w) in lines {
        writeln!(out, "{a}{}\t{b}{}\t{w}", Layer::Citing.suffix(), Layer::Cited.suffix())?;
    }
    Ok(())
}

pub fn read_split_graph<R: BufRead>(reader: R) -> Result<SplitGraph> {
    let strip = |s: &str, layer: Layer, lineno: usize| -> Result<String> {
        s.strip_suffix(layer.suffix())
            .filter(|id| !id.is_empty())
            .map(str::to_owned)
            .ok_or_else(|| Error::parse(lineno, format!("expected {s:?} to end in {:?}", layer.suffix())))
    };
    let mut rows = Vec::new();
    for (lineno, line) in read_lines(reader) {
        let line = line?;
        if skip_line(&line) {
            continue;
        }
        let f = fields(&line, lineno, 3)?;
        let a = strip(f[0], Layer::Citing, lineno)?;
        let b = strip(f[1], Layer::Cited, lineno)?;
        let w = parse_f64(f[2], lineno)?;
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::parse(lineno, format!("non-positive weight {w}")));
        }
        rows.push((a, b, w));
    }
    let ids: Vec<String> = rows
        .iter()
        .flat_map(|r| [r.0.clone(), r.1.clone()])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let citing: Vec<usize> = rows.iter().map(|r| index[r.0.as_str()]).collect::<BTreeSet<_>>().into_iter().collect();
    let cited: Vec<usize> = rows.iter().map(|r| index[r.1.as_str()]).collect::<BTreeSet<_>>().into_iter().collect();
    let pos = |layer: &[usize], origin: usize| layer.binary_search(&origin).expect("origin in layer");
    let edges = rows
        .iter()
        .map(|(a, b, w)| (pos(&citing, index[a.as_str()]), pos(&cited, index[b.as_str()]), *w))
        .collect();
    SplitGraph::from_parts(ids, citing, cited, edges).map_err(|e| Error::parse(0, e.to_string()))
}

/// Metadata recorded in the comment header of a partition file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartitionHeader {
    pub method: Option<String>,
    pub gamma: Option<f64>,
    pub seed: Option<u64>,
    pub quality: Option<f64>,
    pub clusters: Option<usize>,
}

impl PartitionHeader {
    fn render(&self) -> String {
        let mut parts = Vec::new();
        if let Some(m) = &self.method {
            parts.push(format!("method={m}"));
        }
        if let Some(g) = self.gamma {
            parts.push(format!("gamma={g}"));
        }
        if let Some(s) = self.seed {
            parts.push(format!("seed={s}"));
        }
        if let Some(q) = self.quality {
            parts.push(format!("quality={q}"));
        }
        if let Some(c) = self.clusters {
            parts.push(format!("clusters={c}"));
        }
        parts.join(" ")
    }

    fn absorb(&mut self, comment: &str, lineno: usize) -> Result<()> {
        for token in comment.split_whitespace() {
            let Some((key, value)) = token.split_once('=') else {
                continue;
            };
            let bad = || Error::parse(lineno, format!("invalid header value {token:?}"));
            match key {
                "method" => self.method = Some(value.to_owned()),
                "gamma" => self.gamma = Some(value.parse().map_err(|_| bad())?),
                "seed" => self.seed = Some(value.parse().map_err(|_| bad())?),
                "quality" => self.quality = Some(value.parse().map_err(|_| bad())?),
                "clusters" => self.clusters = Some(value.parse().map_err(|_| bad())?),
                _ => {}
            }
        }
        Ok(())
    }
}

pub fn write_partition<O: Write>(p: &NamedPartition, header: &PartitionHeader, out: &mut O) -> Result<()> {
    writeln!(out, "# {}", header.render())?;
    for (name, cluster) in p.iter() {
        writeln!(out, "{name}\t{cluster}")?;
    }
    Ok(())
}

pub fn read_partition<R: BufRead>(reader: R) -> Result<(NamedPartition, PartitionHeader)> {
    let mut header = PartitionHeader::default();
    let mut names = Vec::new();
    let mut clusters = Vec::new();
    for (lineno, line) in read_lines(reader) {
        let line = line?;
        if let Some(comment) = line.strip_prefix('#') {
            header.absorb(comment, lineno)?;
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let f = fields(&line, lineno, 2)?;
        let cluster: usize = f[1]
            .parse()
            .map_err(|_| Error::parse(lineno, format!("invalid cluster id {:?}", f[1])))?;
        names.push(f[0].to_owned());
        clusters.push(cluster);
    }
    let p = NamedPartition::new(names, clusters).map_err(|e| Error::parse(0, e.to_string()))?;
    Ok((p, header))
}

pub fn read_labels<R: BufRead>(reader: R) -> Result<LabelSet> {
    let mut records = Vec::new();
    for (lineno, line) in read_lines(reader) {
        let line = line?;
        if skip_line(&line) {
            continue;
        }
        let f = fields(&line, lineno, 3)?;
        let confidence = parse_f64(f[2], lineno)?;
        if !(0.0..=1.0).contains(&confidence) {
            return Err(Error::parse(lineno, format!("confidence {confidence} outside [0, 1]")));
        }
        records.push((f[0].to_owned(), f[1].to_owned(), confidence));
    }
    LabelSet::new(records).map_err(|e| Error::parse(0, e.to_string()))
}

pub fn write_labels<O: Write>(labels: &LabelSet, out: &mut O) -> Result<()> {
    for (node, label, confidence) in labels.records() {
        writeln!(out, "{node}\t{label}\t{confidence}")?;
    }
    Ok(())
}
