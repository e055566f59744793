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

use std::fs;
use std::io::Cursor;
use std::path::Path;

use citesplit::graph::load_edge_list;
use citesplit::pipeline::{self, build_network, Method, Network, Normalization, PipelineConfig};
use citesplit::synth::{planted_partition, PlantedParams};
use citesplit::{CitationGraph, IngestOptions, IngestReport, NormalizationMode};
use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn edge_text(g: &CitationGraph) -> Vec<String> {
    g.edges().map(|(u, v)| format!("{}\t{}", g.id(u), g.id(v))).collect()
}

fn load(text: &str) -> CitationGraph {
    load_edge_list(Cursor::new(text), &IngestOptions::default()).unwrap().0
}

fn edge_ids(g: &CitationGraph) -> Vec<(String, String)> {
    g.edges().map(|(u, v)| (g.id(u).to_owned(), g.id(v).to_owned())).collect()
}

proptest! {
    #[test]
    fn loading_ignores_line_order_and_repeats(seed in any::<u64>(), n in 2usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_digraph(&mut rng, n, 0.2);
        let mut lines = edge_text(&g);
        let reference = load(&lines.join("\n"));
        let repeats: Vec<String> = lines.iter().step_by(3).cloned().collect();
        lines.extend(repeats);
        lines.push("# comment".into());
        lines.push(String::new());
        lines.shuffle(&mut rng);
        let shuffled = load(&lines.join("\r\n"));
        prop_assert_eq!(edge_ids(&shuffled), edge_ids(&reference));
        prop_assert_eq!(shuffled.ids(), reference.ids());
    }

    #[test]
    fn pipeline_never_grows_the_corpus(seed in any::<u64>(), n in 2usize..40, method in 0usize..4) {
        let g = random_digraph(&mut ChaCha8Rng::seed_from_u64(seed), n, 0.1);
        let method = [Method::Dc, Method::Bc, Method::Cc, Method::Split][method];
        let config = PipelineConfig::new("unused", method, "unused");
        let built = build_network(&g, IngestReport::default(), &config).unwrap();
        for stage in &built.report.stages {
            if stage.name != "split" {
                prop_assert!(stage.nodes_out <= stage.nodes_in, "{:?}", stage);
            }
        }
        match &built.network {
            Network::Split(sg) => prop_assert_eq!(sg.citing_count() + sg.cited_count(), sg.node_count()),
            Network::Relatedness(wg) => prop_assert!(wg.node_count() <= g.node_count()),
        }
    }
}

#[test]
fn planted_edge_count_is_within_three_sigma() {
    let params = PlantedParams::default();
    for seed in 0..20 {
        let sample = planted_partition(&params, seed).unwrap();
        // Moments from the ground-truth labels, pair by pair.
        let best = sample.labels.best_labels();
        let group: Vec<&str> = sample.node_ids.iter().map(|id| best[id.as_str()]).collect();
        let (mut mean, mut var) = (0.0, 0.0);
        for i in 0..group.len() {
            for j in i + 1..group.len() {
                let p = if group[i] == group[j] { params.p_in } else { params.p_out };
                mean += p;
                var += p * (1.0 - p);
            }
        }
        let e = sample.edges.len() as f64;
        assert!((e - mean).abs() <= 3.0 * var.sqrt(), "seed {seed}: {e} vs {mean} ± {}", 3.0 * var.sqrt());
    }
}

#[test]
fn disconnected_groups_without_cross_citations() {
    let params = PlantedParams { p_out: 0.0, ..PlantedParams::default() };
    let sample = planted_partition(&params, 5).unwrap();
    let dc = sample.graph().to_undirected();
    let best = sample.labels.best_labels();
    let components = dc.components();
    assert!(components.len() >= 4);
    for comp in components {
        let first = best[dc.label(comp[0])];
        assert!(comp.iter().all(|&u| best[dc.label(u)] == first));
    }
}

#[test]
fn synthetic_corpus_is_reproducible() {
    let params = PlantedParams::default();
    let dir = tempfile::tempdir().unwrap();
    let read = |sub: &str| {
        let out = dir.path().join(sub);
        pipeline::cmd_synth(&params, 42, &out).unwrap();
        (fs::read(out.join("edges.tsv")).unwrap(), fs::read(out.join("labels.tsv")).unwrap())
    };
    assert_eq!(read("a"), read("b"));
    assert!(matches!(
        pipeline::cmd_synth(&PlantedParams { p_in: 1.5, ..params }, 0, dir.path()),
        Err(citesplit::Error::Config(_))
    ));
}

fn write_edges(path: &Path, pairs: &[(&str, &str)]) {
    let text: String = pairs.iter().map(|(a, b)| format!("{a}\t{b}\n")).collect();
    fs::write(path, text).unwrap();
}

#[test]
fn split_run_writes_joint_and_layer_partitions() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("edges.tsv");
    let mut pairs = Vec::new();
    for (src, dst) in [("a", "b"), ("c", "d")] {
        for i in 1..=2 {
            for j in 1..=2 {
                pairs.push((format!("{src}{i}"), format!("{dst}{j}")));
            }
        }
    }
    let refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    write_edges(&input, &refs);
    let mut config = PipelineConfig::new(&input, Method::Split, dir.path().join("run"));
    config.gammas = vec![1.0];
    config.gcc_only = false;
    let run = pipeline::cmd_cluster(&config).unwrap();
    assert_eq!(run.partitions.len(), 3);
    let files = fs::read_dir(dir.path().join("run/partitions")).unwrap().count();
    assert_eq!(files, 3);
    let bbcc = &run.by_tag("BBCC")[0].partition;
    assert_eq!(bbcc.cluster_count(), 2);
    for row in &run.rows {
        assert!(Path::new(&run.partitions.iter().find(|p| p.tag == row.method).unwrap().path).exists());
    }
}

#[test]
fn top_m_is_identity_for_low_degree_coupling() {
    let g = CitationGraph::from_pairs([("a", "x"), ("b", "x"), ("b", "y"), ("c", "y"), ("c", "z"), ("d", "z")]);
    let mut config = PipelineConfig::new("unused", Method::Bc, "unused");
    config.normalization = Normalization::Raw;
    let built = build_network(&g, IngestReport::default(), &config).unwrap();
    let top = built.report.stages.iter().find(|s| s.name == "top-20").unwrap();
    assert_eq!((top.nodes_in, top.edges_in), (top.nodes_out, top.edges_out));
}

#[test]
fn invalid_pairing_fails_before_reading_input() {
    let mut config = PipelineConfig::new("/nonexistent/edges.tsv", Method::Dc, "/nonexistent/out");
    config.normalization = Normalization::Split(NormalizationMode::BiNorm);
    assert!(matches!(pipeline::cmd_build(&config), Err(citesplit::Error::Config(_))));
}

#[test]
fn evaluate_rows_are_sorted_and_require_coverage() {
    let dir = tempfile::tempdir().unwrap();
    pipeline::cmd_synth(&PlantedParams::default(), 3, dir.path()).unwrap();
    let mut config = PipelineConfig::new(dir.path().join("edges.tsv"), Method::Dc, dir.path().join("dc"));
    config.gammas = vec![0.5, 1.0, 2.0];
    let run = pipeline::cmd_cluster(&config).unwrap();
    let mut files: Vec<_> = run.partitions.iter().map(|p| p.path.clone()).collect();
    files.reverse();
    let mut out = Vec::new();
    let rows = pipeline::cmd_evaluate(&files, &dir.path().join("labels.tsv"), &mut out, None).unwrap();
    let gammas: Vec<f64> = rows.iter().map(|r| r.gamma).collect();
    assert_eq!(gammas, vec![0.5, 1.0, 2.0]);
    let text = String::from_utf8(out).unwrap();
    assert!(text.starts_with("method,gamma,granularity,nmi_vs_labels\nDC,0.5,"));

    let foreign = dir.path().join("foreign.tsv");
    fs::write(&foreign, "node\tlabel\t1.0\n").unwrap();
    let err = pipeline::cmd_evaluate(&files, &foreign, &mut Vec::new(), None).unwrap_err();
    assert!(matches!(err, citesplit::Error::Contract(_)));

    let record = pipeline::cmd_compare(&files[0], &files[0], None).unwrap();
    assert_eq!(record.nmi, 1.0);
}
