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


//! `citesplit` command-line entry point.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use citesplit::pipeline::{
    self, BenchConfig, BenchRow, CompareRecord, Method, Normalization, PipelineConfig,
};
use citesplit::synth::PlantedParams;
use citesplit::Error;

#[derive(Parser)]
#[command(name = "citesplit", version, about = "Build, cluster and compare citation networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a network and write it with per-stage statistics.
    Build(NetworkArgs),
    /// Construct a network and cluster it over a resolution sweep.
    Cluster {
        #[command(flatten)]
        network: NetworkArgs,
        /// Comma-separated ascending resolutions.
        #[arg(long, value_delimiter = ',')]
        gammas: Option<Vec<f64>>,
        /// Independent optimizer starts per resolution; the best is kept.
        #[arg(long)]
        random_starts: Option<usize>,
        /// Record wall-clock time per resolution in report.csv.
        #[arg(long)]
        timings: bool,
    },
    /// NMI between two partition files.
    Compare {
        left: PathBuf,
        right: PathBuf,
        /// Append the record to this CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score partitions against the most confident label of each node.
    Evaluate {
        #[arg(required = true)]
        partitions: Vec<PathBuf>,
        #[arg(long)]
        labels: PathBuf,
        /// Write the accuracy CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write an accuracy-versus-granularity CSV.
        #[arg(long)]
        curve: Option<PathBuf>,
    },
    /// Time split construction against coupling construction.
    Bench {
        /// Comma-separated citation counts.
        #[arg(long, value_delimiter = ',', default_value = "100000,200000,400000")]
        scales: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        refs_per_paper: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        warmup: usize,
        #[arg(long, default_value_t = 5)]
        repetitions: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a planted-partition citation corpus with ground-truth labels.
    Synth {
        #[arg(long, default_value_t = 4)]
        groups: usize,
        #[arg(long, default_value_t = 32)]
        group_size: usize,
        #[arg(long, default_value_t = 0.3)]
        p_in: f64,
        #[arg(long, default_value_t = 0.02)]
        p_out: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct NetworkArgs {
    /// Edge list, one `citing<TAB>cited` pair per line.
    input: PathBuf,
    #[arg(long, default_value = "split")]
    method: Method,
    /// raw, eq1, out, in or bi. Defaults to eq1, or out for split.
    #[arg(long)]
    norm: Option<Normalization>,
    #[arg(long, default_value_t = 20)]
    top_m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep only the giant connected component (default).
    #[arg(long, overrides_with = "no_gcc")]
    gcc: bool,
    #[arg(long, overrides_with = "gcc")]
    no_gcc: bool,
    /// Restrict the corpus to the ids listed in this file.
    #[arg(long)]
    allow_list: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

impl NetworkArgs {
    fn config(self) -> PipelineConfig {
        let mut config = PipelineConfig::new(self.input, self.method, self.out);
        if let Some(norm) = self.norm {
            config.normalization = norm;
        }
        config.top_m = self.top_m;
        config.seed = self.seed;
        config.gcc_only = !self.no_gcc;
        config.allow_list = self.allow_list;
        config
    }
}

fn writer(path: Option<&PathBuf>) -> citesplit::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> citesplit::Result<()> {
    match cli.command {
        Command::Build(args) => {
            let built = pipeline::cmd_build(&args.config())?;
            for s in &built.report.stages {
                eprintln!("{}: {} -> {} nodes, {} -> {} edges", s.name, s.nodes_in, s.nodes_out, s.edges_in, s.edges_out);
            }
        }
        Command::Cluster { network, gammas, random_starts, timings } => {
            let mut config = network.config();
            if let Some(g) = gammas {
                config.gammas = g;
            }
            if let Some(r) = random_starts {
                config.random_starts = r;
            }
            config.timings = timings;
            let run = pipeline::cmd_cluster(&config)?;
            eprintln!("wrote {} partitions to {}", run.partitions.len(), config.output_dir.display());
        }
        Command::Compare { left, right, out } => {
            let record = pipeline::cmd_compare(&left, &right, out.as_deref())?;
            println!("{}", CompareRecord::HEADER);
            println!("{}", record.csv_row());
        }
        Command::Evaluate { partitions, labels, out, curve } => {
            let mut w = writer(out.as_ref())?;
            pipeline::cmd_evaluate(&partitions, &labels, &mut w, curve.as_deref())?;
            w.flush()?;
        }
        Command::Bench { scales, refs_per_paper, seed, warmup, repetitions, out } => {
            let config = BenchConfig { scales, refs_per_paper, seed, warmup, repetitions };
            let rows = pipeline::cmd_bench(&config)?;
            let mut w = writer(out.as_ref())?;
            writeln!(w, "{}", BenchRow::HEADER)?;
            for r in &rows {
                writeln!(w, "{}", r.csv_row())?;
            }
            w.flush()?;
        }
        Command::Synth { groups, group_size, p_in, p_out, seed, out } => {
            let params = PlantedParams { groups, group_size, p_in, p_out };
            pipeline::cmd_synth(&params, seed, &out)?;
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => 2,
        Error::Parse { .. } => 3,
        Error::Contract(_) => 4,
        Error::Io(_) => 1,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("citesplit: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
