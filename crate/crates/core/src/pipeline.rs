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

//! End-to-end runs: network construction, resolution sweeps, comparisons,
//! label evaluation, synthetic corpora and construction benchmarks.
//!
//! Every run writes into a single directory. Output files depend only on the
//! configuration and seed, so reruns produce identical bytes; wall-clock
//! timings are only recorded when asked for.

use std::fmt;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::coupling::{bibliographic_coupling, co_citation, normalize_relatedness, top_m_filter, CouplingConfig};
use crate::error::{Error, Result};
use crate::graph::{load_edge_list, CitationGraph, IngestOptions, IngestReport};
use crate::io::{self as files, format_sig, PartitionHeader};
use crate::leiden::{self, LeidenParams, QualityContext};
use crate::metrics::{granularity, label_partition, nmi_named};
use crate::partition::NamedPartition;
use crate::split::{normalize_split, project_layer, split, Layer, NormalizationMode, SplitGraph};
use crate::synth::{planted_partition, random_dag, PlantedParams};
use crate::weighted::WeightedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    /// Direct citation, symmetrized.
    Dc,
    /// Bibliographic coupling.
    Bc,
    /// Co-citation.
    Cc,
    /// Node-split bipartite network.
    Split,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Dc => "DC",
            Method::Bc => "BC",
            Method::Cc => "CC",
            Method::Split => "Split",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dc" => Ok(Method::Dc),
            "bc" => Ok(Method::Bc),
            "cc" => Ok(Method::Cc),
            "split" => Ok(Method::Split),
            _ => Err(Error::config(format!("unknown method {s:?}"))),
        }
    }
}

/// Edge-weight normalization applied after the giant component is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Normalization {
    /// Leave weights as built.
    Raw,
    /// Share of each paper's total relatedness, averaged over both ends.
    /// Relatedness networks only.
    Relatedness,
    /// Split networks only.
    Split(NormalizationMode),
}

impl Normalization {
    pub fn default_for(method: Method) -> Self {
        match method {
            Method::Split => Normalization::Split(NormalizationMode::OutNorm),
            _ => Normalization::Relatedness,
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Normalization::Raw | Normalization::Split(NormalizationMode::Raw) => f.write_str("raw"),
            Normalization::Relatedness => f.write_str("eq1"),
            Normalization::Split(mode) => write!(f, "{mode}"),
        }
    }
}

impl From<Normalization> for String {
    fn from(n: Normalization) -> String {
        n.to_string()
    }
}

impl TryFrom<String> for Normalization {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "raw" | "none" => Ok(Normalization::Raw),
            "eq1" | "relatedness" => Ok(Normalization::Relatedness),
            other => other.parse().map(Normalization::Split),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub allow_list: Option<PathBuf>,
    pub method: Method,
    pub normalization: Normalization,
    pub top_m: usize,
    pub gammas: Vec<f64>,
    pub seed: u64,
    /// Independent optimizer starts per resolution.
    pub random_starts: usize,
    pub gcc_only: bool,
    /// Not part of the snapshot so that runs in different directories match.
    #[serde(skip)]
    pub output_dir: PathBuf,
    /// Add wall-clock columns to the run report.
    pub timings: bool,
}

impl PipelineConfig {
    pub fn new(input: impl Into<PathBuf>, method: Method, output_dir: impl Into<PathBuf>) -> Self {
        PipelineConfig {
            input: input.into(),
            allow_list: None,
            method,
            normalization: Normalization::default_for(method),
            top_m: CouplingConfig::DEFAULT_TOP_M,
            gammas: leiden::default_gammas(),
            seed: 0,
            random_starts: LeidenParams::default().random_starts,
            gcc_only: true,
            output_dir: output_dir.into(),
            timings: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.method, self.normalization) {
            (Method::Split, Normalization::Relatedness) => {
                return Err(Error::config("relatedness normalization does not apply to split networks"))
            }
            (Method::Dc | Method::Bc | Method::Cc, Normalization::Split(mode)) if mode != NormalizationMode::Raw => {
                return Err(Error::config(format!(
                    "split normalization {mode} does not apply to {} networks",
                    self.method
                )))
            }
            _ => {}
        }
        if self.top_m == 0 {
            return Err(Error::config("top_m must be at least 1"));
        }
        if self.random_starts == 0 {
            return Err(Error::config("random_starts must be at least 1"));
        }
        if self.gammas.is_empty() {
            return Err(Error::config("resolution grid is empty"));
        }
        if self.gammas.iter().any(|g| !(*g > 0.0 && g.is_finite())) {
            return Err(Error::config("resolutions must be positive"));
        }
        if self.gammas.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::config("resolution grid must be ascending"));
        }
        Ok(())
    }

    /// Name of the clustered network, as it appears in reports.
    pub fn tag(&self) -> String {
        let mut tag = self.method.to_string();
        if matches!(self.method, Method::Bc | Method::Cc) {
            tag.push_str(&format!("-Top{}", self.top_m));
        }
        let default = Normalization::default_for(self.method);
        if self.method == Method::Split || self.normalization != default {
            tag.push_str(&format!("-{}", self.normalization));
        }
        tag
    }

    fn layer_tag(&self, layer: Layer) -> String {
        match (layer, self.normalization) {
            (Layer::Citing, Normalization::Split(NormalizationMode::OutNorm)) => "BBCC".to_owned(),
            (Layer::Cited, Normalization::Split(NormalizationMode::InNorm)) => "BFCC".to_owned(),
            (Layer::Citing, _) => format!("{}-citing", self.tag()),
            (Layer::Cited, _) => format!("{}-cited", self.tag()),
        }
    }
}

/// Node and edge counts around one pipeline stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stage {
    pub name: String,
    pub nodes_in: usize,
    pub nodes_out: usize,
    pub edges_in: usize,
    pub edges_out: usize,
}

/// Layer sizes of a split network, before and after the giant component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LayerCounts {
    pub citing: usize,
    pub cited: usize,
    pub citing_gcc: usize,
    pub cited_gcc: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BuildReport {
    pub ingest: IngestReport,
    pub stages: Vec<Stage>,
    pub layers: Option<LayerCounts>,
}

impl BuildReport {
    pub fn peak_edge_count(&self) -> usize {
        self.stages.iter().map(|s| s.edges_out).max().unwrap_or(0)
    }

    fn record(&mut self, name: &str, nodes: (usize, usize), edges: (usize, usize)) {
        self.stages.push(Stage {
            name: name.to_owned(),
            nodes_in: nodes.0,
            nodes_out: nodes.1,
            edges_in: edges.0,
            edges_out: edges.1,
        });
    }
}

#[derive(Debug, Clone)]
pub enum Network {
    Relatedness(WeightedGraph<f64>),
    Split(SplitGraph),
}

impl Network {
    pub fn node_count(&self) -> usize {
        match self {
            Network::Relatedness(g) => g.node_count(),
            Network::Split(s) => s.node_count(),
        }
    }

    pub fn edge_count(&self) -> usize {
        match self {
            Network::Relatedness(g) => g.edge_count(),
            Network::Split(s) => s.edge_count(),
        }
    }

    /// Graph handed to the clustering step.
    pub fn weighted(&self) -> WeightedGraph<f64> {
        match self {
            Network::Relatedness(g) => g.clone(),
            Network::Split(s) => s.to_weighted(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Built {
    pub network: Network,
    pub report: BuildReport,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

pub fn read_citations(config: &PipelineConfig) -> Result<(CitationGraph, IngestReport)> {
    let allow_list = match &config.allow_list {
        Some(path) => Some(IngestOptions::read_allow_list(open(path)?)?),
        None => None,
    };
    load_edge_list(open(&config.input)?, &IngestOptions { allow_list })
}

/// Runs construction on an already loaded citation graph.
pub fn build_network(g: &CitationGraph, ingest: IngestReport, config: &PipelineConfig) -> Result<Built> {
    config.validate()?;
    let mut report = BuildReport {
        ingest,
        stages: Vec::new(),
        layers: None,
    };
    let g0 = g;
    let g = g0.remove_isolated();
    report.record(
        "remove-isolated",
        (g0.node_count(), g.node_count()),
        (g0.edge_count(), g.edge_count()),
    );

    let network = match config.method {
        Method::Dc | Method::Bc | Method::Cc => {
            let raw: WeightedGraph<u64> = match config.method {
                Method::Dc => {
                    let dc = g.to_undirected();
                    report.record("undirected", (g.node_count(), dc.node_count()), (g.edge_count(), dc.edge_count()));
                    dc
                }
                _ => {
                    let (name, coupled) = if config.method == Method::Bc {
                        ("bibliographic-coupling", bibliographic_coupling(&g))
                    } else {
                        ("co-citation", co_citation(&g))
                    };
                    report.record(name, (g.node_count(), coupled.node_count()), (g.edge_count(), coupled.edge_count()));
                    let filtered = top_m_filter(&coupled, config.top_m)?;
                    report.record(
                        &format!("top-{}", config.top_m),
                        (coupled.node_count(), filtered.node_count()),
                        (coupled.edge_count(), filtered.edge_count()),
                    );
                    filtered
                }
            };
            let raw = if config.gcc_only {
                let gcc = raw.giant_component();
                report.record("gcc", (raw.node_count(), gcc.node_count()), (raw.edge_count(), gcc.edge_count()));
                gcc
            } else {
                raw
            };
            let weighted = match config.normalization {
                Normalization::Relatedness => normalize_relatedness(&raw),
                _ => raw.to_f64(),
            };
            report.record(
                &format!("normalize-{}", config.normalization),
                (raw.node_count(), weighted.node_count()),
                (raw.edge_count(), weighted.edge_count()),
            );
            Network::Relatedness(weighted)
        }
        Method::Split => {
            let sg = split(&g);
            check_layers(&sg)?;
            report.record("split", (g.node_count(), sg.node_count()), (g.edge_count(), sg.edge_count()));
            let (citing, cited) = (sg.citing_count(), sg.cited_count());
            let sg = if config.gcc_only {
                let gcc = sg.giant_component();
                check_layers(&gcc)?;
                report.record("gcc", (sg.node_count(), gcc.node_count()), (sg.edge_count(), gcc.edge_count()));
                gcc
            } else {
                sg
            };
            report.layers = Some(LayerCounts {
                citing,
                cited,
                citing_gcc: sg.citing_count(),
                cited_gcc: sg.cited_count(),
            });
            let mode = match config.normalization {
                Normalization::Split(mode) => mode,
                _ => NormalizationMode::Raw,
            };
            let normalized = normalize_split(&sg, mode);
            report.record(
                &format!("normalize-{mode}"),
                (sg.node_count(), normalized.node_count()),
                (sg.edge_count(), normalized.edge_count()),
            );
            Network::Split(normalized)
        }
    };
    Ok(Built { network, report })
}

fn check_layers(sg: &SplitGraph) -> Result<()> {
    if sg.citing_count() + sg.cited_count() != sg.node_count() {
        return Err(Error::contract("citing and cited layers do not add up to the split graph"));
    }
    Ok(())
}

fn write_build(built: &Built, config: &PipelineConfig) -> Result<()> {
    let dir = &config.output_dir;
    fs::create_dir_all(dir)?;
    let mut out = create(&dir.join("config.json"))?;
    serde_json::to_writer_pretty(&mut out, config).map_err(std::io::Error::from)?;
    writeln!(out)?;
    out.flush()?;

    let mut out = create(&dir.join("stages.tsv"))?;
    writeln!(out, "stage\tnodes_in\tnodes_out\tedges_in\tedges_out")?;
    for s in &built.report.stages {
        writeln!(out, "{}\t{}\t{}\t{}\t{}", s.name, s.nodes_in, s.nodes_out, s.edges_in, s.edges_out)?;
    }
    let i = &built.report.ingest;
    writeln!(out, "# lines_read={} self_loops={} duplicates={} outside_allow_list={}", i.lines_read, i.self_loops, i.duplicates, i.outside_allow_list)?;
    out.flush()?;

    if let Some(l) = built.report.layers {
        let mut out = create(&dir.join("layers.tsv"))?;
        writeln!(out, "layer\tnodes\tnodes_gcc")?;
        writeln!(out, "split\t{}\t{}", l.citing + l.cited, l.citing_gcc + l.cited_gcc)?;
        writeln!(out, "citing\t{}\t{}", l.citing, l.citing_gcc)?;
        writeln!(out, "cited\t{}\t{}", l.cited, l.cited_gcc)?;
        out.flush()?;
    }

    let mut out = create(&dir.join("network.tsv"))?;
    match &built.network {
        Network::Relatedness(g) => files::write_weighted_graph(g, &mut out)?,
        Network::Split(s) => files::write_split_graph(s, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

/// Builds the configured network and writes `config.json`, `stages.tsv`,
/// `network.tsv` (and `layers.tsv` for split networks) to the output directory.
pub fn cmd_build(config: &PipelineConfig) -> Result<Built> {
    config.validate()?;
    let (g, ingest) = read_citations(config)?;
    let built = build_network(&g, ingest, config)?;
    write_build(&built, config)?;
    Ok(built)
}

/// One clustering produced by a run.
#[derive(Debug, Clone)]
pub struct ClusteredPartition {
    pub tag: String,
    pub gamma: f64,
    pub partition: NamedPartition,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub method: String,
    pub gamma: f64,
    pub nodes: usize,
    pub cluster_count: usize,
    pub granularity: f64,
    /// Quality of the joint clustering the row derives from.
    pub quality: f64,
    pub peak_edge_count: usize,
    pub wall_time_ms: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ClusterRun {
    pub built: Built,
    pub partitions: Vec<ClusteredPartition>,
    pub rows: Vec<ReportRow>,
}

impl ClusterRun {
    /// Partitions with `tag`, in resolution order.
    pub fn by_tag(&self, tag: &str) -> Vec<&ClusteredPartition> {
        self.partitions.iter().filter(|p| p.tag == tag).collect()
    }
}

fn partition_file(dir: &Path, tag: &str, gamma: f64) -> PathBuf {
    dir.join("partitions").join(format!("{tag}_g{}.tsv", format_sig(gamma, 12)))
}

/// Builds the network, clusters it at every resolution and writes one
/// partition per resolution. Split networks also get their two layer
/// projections. A `report.csv` summarizes all partitions.
pub fn cmd_cluster(config: &PipelineConfig) -> Result<ClusterRun> {
    config.validate()?;
    let (g, ingest) = read_citations(config)?;
    let built = build_network(&g, ingest, config)?;
    write_build(&built, config)?;
    run_clustering(built, config)
}

fn run_clustering(built: Built, config: &PipelineConfig) -> Result<ClusterRun> {
    let graph = built.network.weighted();
    if graph.is_empty() {
        return Err(Error::contract("network is empty after construction"));
    }
    let params = LeidenParams {
        random_starts: config.random_starts,
        ..LeidenParams::with_seed(config.seed)
    };
    let tag = config.tag();
    let mut partitions = Vec::new();
    let mut rows = Vec::new();
    let peak = built.report.peak_edge_count();

    for &gamma in &config.gammas {
        let started = Instant::now();
        let joint = leiden::cluster(&graph, gamma, &params)?;
        let elapsed = started.elapsed().as_secs_f64() * 1e3;
        let q = leiden::quality(&graph, &joint, &QualityContext::new(&graph, gamma)?)?;

        let mut outputs = vec![(tag.clone(), NamedPartition::from_partition(graph.labels(), &joint)?)];
        if let Network::Split(sg) = &built.network {
            for layer in [Layer::Citing, Layer::Cited] {
                let projected = project_layer(&joint, sg, layer)?;
                if !projected.is_empty() {
                    outputs.push((config.layer_tag(layer), projected));
                }
            }
        }
        for (name, partition) in outputs {
            let path = partition_file(&config.output_dir, &name, gamma);
            let header = PartitionHeader {
                method: Some(name.clone()),
                gamma: Some(gamma),
                seed: Some(config.seed),
                quality: Some(q),
                clusters: Some(partition.cluster_count()),
            };
            let mut out = create(&path)?;
            files::write_partition(&partition, &header, &mut out)?;
            out.flush()?;
            rows.push(ReportRow {
                method: name.clone(),
                gamma,
                nodes: partition.len(),
                cluster_count: partition.cluster_count(),
                granularity: granularity(partition.partition())?,
                quality: q,
                peak_edge_count: peak,
                wall_time_ms: config.timings.then_some(elapsed),
            });
            partitions.push(ClusteredPartition {
                tag: name,
                gamma,
                partition,
                path,
            });
        }
    }

    rows.sort_by(|a, b| a.method.cmp(&b.method).then(a.gamma.total_cmp(&b.gamma)));
    let mut out = create(&config.output_dir.join("report.csv"))?;
    write!(out, "method,gamma,nodes,cluster_count,granularity,quality,peak_edge_count")?;
    writeln!(out, "{}", if config.timings { ",wall_time_ms" } else { "" })?;
    for r in &rows {
        write!(
            out,
            "{},{},{},{},{},{},{}",
            r.method,
            format_sig(r.gamma, 12),
            r.nodes,
            r.cluster_count,
            format_sig(r.granularity, 12),
            format_sig(r.quality, 12),
            r.peak_edge_count
        )?;
        match r.wall_time_ms {
            Some(ms) => writeln!(out, ",{}", format_sig(ms, 6))?,
            None => writeln!(out)?,
        }
    }
    out.flush()?;
    Ok(ClusterRun { built, partitions, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRecord {
    pub left: String,
    pub right: String,
    pub shared_nodes: usize,
    pub dropped_nodes: usize,
    pub nmi: f64,
}

impl CompareRecord {
    pub const HEADER: &'static str = "left,right,shared_nodes,dropped_nodes,nmi";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.left,
            self.right,
            self.shared_nodes,
            self.dropped_nodes,
            format_sig(self.nmi, 12)
        )
    }
}

/// NMI between two partition files. When `append_to` is given, the record
/// is appended to that CSV, writing the header if the file is new.
pub fn cmd_compare(left: &Path, right: &Path, append_to: Option<&Path>) -> Result<CompareRecord> {
    let (a, _) = files::read_partition(open(left)?)?;
    let (b, _) = files::read_partition(open(right)?)?;
    let report = nmi_named(&a, &b)?;
    let record = CompareRecord {
        left: left.display().to_string(),
        right: right.display().to_string(),
        shared_nodes: report.shared,
        dropped_nodes: report.dropped,
        nmi: report.nmi,
    };
    if let Some(path) = append_to {
        let fresh = !path.exists();
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let mut out = fs::OpenOptions::new().create(true).append(true).open(path)?;
        if fresh {
            writeln!(out, "{}", CompareRecord::HEADER)?;
        }
        writeln!(out, "{}", record.csv_row())?;
    }
    Ok(record)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalRow {
    pub method: String,
    pub gamma: f64,
    pub granularity: f64,
    pub cluster_count: usize,
    pub nmi_vs_labels: f64,
    pub labeled_nodes: usize,
}

/// Compares each partition with the most-confident-label partition of its
/// nodes. Rows are sorted by `(method, gamma)`.
pub fn evaluate_partitions(
    partitions: &[(String, f64, NamedPartition)],
    labels: &crate::metrics::LabelSet,
) -> Result<Vec<EvalRow>> {
    let mut rows = Vec::with_capacity(partitions.len());
    for (method, gamma, p) in partitions {
        let (reference, _) = label_partition(labels, p.names())?;
        if reference.is_empty() {
            return Err(Error::contract(format!("no labels cover the {method} partition at gamma {gamma}")));
        }
        let report = nmi_named(p, &reference)?;
        rows.push(EvalRow {
            method: method.clone(),
            gamma: *gamma,
            granularity: granularity(p.partition())?,
            cluster_count: p.cluster_count(),
            nmi_vs_labels: report.nmi,
            labeled_nodes: report.shared,
        });
    }
    rows.sort_by(|a, b| a.method.cmp(&b.method).then(a.gamma.total_cmp(&b.gamma)));
    Ok(rows)
}

/// Reads partition files (method and gamma come from their headers) and
/// writes `method,gamma,granularity,nmi_vs_labels`. With `curve`, also writes
/// `method,gamma,granularity,cluster_count,nmi` ordered by method and granularity.
pub fn cmd_evaluate(partitions: &[PathBuf], labels: &Path, out: &mut dyn Write, curve: Option<&Path>) -> Result<Vec<EvalRow>> {
    let labels = files::read_labels(open(labels)?)?;
    let mut loaded = Vec::with_capacity(partitions.len());
    for path in partitions {
        let (p, header) = files::read_partition(open(path)?)?;
        let method = header.method.unwrap_or_else(|| path.display().to_string());
        let gamma = header.gamma.unwrap_or(f64::NAN);
        loaded.push((method, gamma, p));
    }
    let rows = evaluate_partitions(&loaded, &labels)?;
    writeln!(out, "method,gamma,granularity,nmi_vs_labels")?;
    for r in &rows {
        writeln!(
            out,
            "{},{},{},{}",
            r.method,
            format_sig(r.gamma, 12),
            format_sig(r.granularity, 12),
            format_sig(r.nmi_vs_labels, 12)
        )?;
    }
    if let Some(path) = curve {
        let mut sorted: Vec<&EvalRow> = rows.iter().collect();
        sorted.sort_by(|a, b| a.method.cmp(&b.method).then(a.granularity.total_cmp(&b.granularity)));
        let mut w = create(path)?;
        writeln!(w, "method,gamma,granularity,cluster_count,nmi")?;
        for r in sorted {
            writeln!(
                w,
                "{},{},{},{},{}",
                r.method,
                format_sig(r.gamma, 12),
                format_sig(r.granularity, 12),
                r.cluster_count,
                format_sig(r.nmi_vs_labels, 12)
            )?;
        }
        w.flush()?;
    }
    Ok(rows)
}

/// Writes `edges.tsv` and `labels.tsv` for a planted-partition corpus.
pub fn cmd_synth(params: &PlantedParams, seed: u64, output_dir: &Path) -> Result<(PathBuf, PathBuf)> {
    let sample = planted_partition(params, seed)?;
    fs::create_dir_all(output_dir)?;
    let edges = output_dir.join("edges.tsv");
    let labels = output_dir.join("labels.tsv");
    let mut out = create(&edges)?;
    writeln!(
        out,
        "# planted partition groups={} group_size={} p_in={} p_out={} seed={seed}",
        params.groups, params.group_size, params.p_in, params.p_out
    )?;
    for (a, b) in sample.citations() {
        writeln!(out, "{a}\t{b}")?;
    }
    out.flush()?;
    let mut out = create(&labels)?;
    files::write_labels(&sample.labels, &mut out)?;
    out.flush()?;
    Ok((edges, labels))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    /// Citation counts of the generated graphs.
    pub scales: Vec<usize>,
    pub refs_per_paper: usize,
    pub seed: u64,
    pub warmup: usize,
    pub repetitions: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            scales: vec![100_000, 200_000, 400_000],
            refs_per_paper: 10,
            seed: 0,
            warmup: 3,
            repetitions: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub citations: usize,
    pub nodes: usize,
    pub split_ms: f64,
    pub coupling_ms: f64,
    pub split_edges: usize,
    pub bc_edges: usize,
    pub cc_edges: usize,
}

impl BenchRow {
    pub const HEADER: &'static str = "citations,nodes,split_ms,coupling_ms,split_edges,bc_edges,cc_edges,coupling_edges";

    pub fn coupling_edges(&self) -> usize {
        self.bc_edges + self.cc_edges
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.citations,
            self.nodes,
            format_sig(self.split_ms, 6),
            format_sig(self.coupling_ms, 6),
            self.split_edges,
            self.bc_edges,
            self.cc_edges,
            self.coupling_edges()
        )
    }
}

fn median_ms<T>(warmup: usize, reps: usize, mut f: impl FnMut() -> T) -> (f64, T) {
    for _ in 0..warmup {
        std::hint::black_box(f());
    }
    let mut times = Vec::with_capacity(reps.max(1));
    let mut last = None;
    for _ in 0..reps.max(1) {
        // Free the previous result first so runs do not compete for memory.
        drop(last.take());
        let started = Instant::now();
        let value = std::hint::black_box(f());
        times.push(started.elapsed().as_secs_f64() * 1e3);
        last = Some(value);
    }
    times.sort_by(f64::total_cmp);
    (times[times.len() / 2], last.expect("at least one repetition"))
}

/// Times the split transform against coupling construction (both measures)
/// on random citation DAGs of each scale.
pub fn cmd_bench(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    if config.scales.is_empty() {
        return Err(Error::config("no benchmark scales given"));
    }
    config
        .scales
        .iter()
        .map(|&citations| {
            let g = random_dag(citations, config.refs_per_paper, config.seed)?;
            let (split_ms, sg) = median_ms(config.warmup, config.repetitions, || split(&g));
            let (coupling_ms, (bc, cc)) = median_ms(config.warmup, config.repetitions, || {
                (bibliographic_coupling(&g), co_citation(&g))
            });
            Ok(BenchRow {
                citations,
                nodes: g.node_count(),
                split_ms,
                coupling_ms,
                split_edges: sg.edge_count(),
                bc_edges: bc.edge_count(),
                cc_edges: cc.edge_count(),
            })
        })
        .collect()
}
