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

//! Clustering of citation networks through node splitting.
//!
//! A directed citation graph is turned into a bipartite graph by giving every
//! paper a citing copy and a cited copy. Clusters of the citing layer track
//! bibliographic-coupling clusters and clusters of the cited layer track
//! co-citation clusters, at the cost of a single pass over the citations.
//! The crate also builds the coupling baselines, clusters weighted graphs with
//! a Leiden optimizer for the Reichardt-Bornholdt Potts quality, and compares
//! partitions with NMI and granularity.

pub mod coupling;
pub mod error;
pub mod graph;
pub mod io;
pub mod leiden;
pub mod metrics;
pub mod partition;
pub mod pipeline;
pub mod split;
pub mod synth;
pub mod weighted;

pub use coupling::{bibliographic_coupling, co_citation, normalize_relatedness, top_m_filter};
pub use error::{Error, Result};
pub use graph::{CitationGraph, DegreeStats, IngestOptions, IngestReport};
pub use leiden::{cluster, quality, sweep, LeidenParams, QualityContext};
pub use metrics::{granularity, h_index, nmi, nmi_named, LabelSet, NmiReport};
pub use partition::{NamedPartition, Partition};
pub use split::{normalize_split, split, Layer, NormalizationMode, SplitGraph};
pub use weighted::{EdgeWeight, WeightedGraph};
