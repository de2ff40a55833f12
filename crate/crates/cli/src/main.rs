// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! `agentcd` command-line tool: detect, eval and bench.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use agentcd::bench::{run_bench, BenchError, BenchInput, BenchReport};
use agentcd::detect::DetectError;
use agentcd::io::{labels_to_partition, load_edge_list, load_gml, parse_label_file};
use agentcd::{detect, evaluate, DetectConfig, DetectionResult, Execution, Graph, Partition, PlantedPartition};
use clap::{Args, Parser, Subcommand, ValueEnum};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(name = "agentcd", version, about = "Community detection with walker agents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect communities in a graph.
    Detect(DetectArgs),
    /// Score a detection result against ground-truth labels.
    Eval(EvalArgs),
    /// Run detection over many seeds and report accuracy.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Edgelist,
    Gml,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Tsv,
}

#[derive(Args)]
struct Tuning {
    /// Agents per generation [default: max(4, 8 * nodes)]
    #[arg(long)]
    agents: Option<usize>,
    /// Nodes per agent memory [default: 5]
    #[arg(long)]
    memory: Option<usize>,
    /// Share of agents started on the most visited nodes [default: 0.75]
    #[arg(long)]
    hub_fraction: Option<f64>,
    /// Generation cap [default: 1000]
    #[arg(long)]
    max_generations: Option<usize>,
    /// Run everything on the calling thread.
    #[arg(long)]
    sequential: bool,
}

impl Tuning {
    fn config(&self, seed: u64) -> DetectConfig {
        DetectConfig {
            agents: self.agents,
            memory: self.memory,
            hub_fraction: self.hub_fraction,
            max_generations: self.max_generations,
            seed,
            execution: if self.sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            },
        }
    }
}

#[derive(Args)]
struct DetectArgs {
    #[arg(long)]
    input: PathBuf,
    /// Input format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[command(flatten)]
    tuning: Tuning,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    output: Output,
}

#[derive(Args)]
struct EvalArgs {
    /// Output of `detect`, JSON or two-column text.
    #[arg(long)]
    result: PathBuf,
    /// `name label` lines, or a GML file with node `value`s.
    #[arg(long)]
    truth: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, required_unless_present = "synthetic")]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Ground-truth labels; optional for GML input with node `value`s.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Planted-partition graphs instead of a file, e.g.
    /// `blocks=2,size=16,pin=0.5,pout=0.05`.
    #[arg(long, conflicts_with_all = ["input", "truth"])]
    synthetic: Option<String>,
    #[command(flatten)]
    tuning: Tuning,
}

/// Failure with its exit status: 1 for bad input, 2 for bad configuration.
enum Failure {
    Input(String),
    Config(String),
}

impl Failure {
    fn input(e: impl fmt::Display) -> Self {
        Failure::Input(e.to_string())
    }

    fn config(e: impl fmt::Display) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<DetectError> for Failure {
    fn from(e: DetectError) -> Self {
        match e {
            DetectError::Config(_) => Failure::config(e),
            DetectError::NoEdges => Failure::input(e),
        }
    }
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::NoTrials => Failure::config(e),
            BenchError::Detect(d) => d.into(),
            other => Failure::input(other),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn is_gml(path: &Path, format: Option<Format>) -> bool {
    match format {
        Some(Format::Gml) => true,
        Some(Format::Edgelist) => false,
        None => path.extension().is_some_and(|e| e.eq_ignore_ascii_case("gml")),
    }
}

/// The graph plus any ground truth carried by the file itself.
fn load_graph(path: &Path, format: Option<Format>) -> Result<(Graph, Option<Partition>), Failure> {
    let text = read(path)?;
    if is_gml(path, format) {
        let gml = load_gml(&text).map_err(Failure::input)?;
        if gml.duplicate_edges > 0 {
            eprintln!("note: collapsed {} duplicate edges", gml.duplicate_edges);
        }
        Ok((gml.graph, gml.truth))
    } else {
        Ok((load_edge_list(&text).map_err(Failure::input)?, None))
    }
}

fn load_truth_labels(path: &Path) -> Result<Vec<(String, String)>, Failure> {
    let text = read(path)?;
    if !is_gml(path, None) {
        return parse_label_file(&text).map_err(Failure::input);
    }
    let gml = load_gml(&text).map_err(Failure::input)?;
    let truth = gml
        .truth
        .ok_or_else(|| Failure::Input(format!("{}: nodes carry no value labels", path.display())))?;
    Ok(gml
        .graph
        .names()
        .iter()
        .enumerate()
        .map(|(v, name)| (name.clone(), truth.community_of(v).to_string()))
        .collect())
}

#[derive(Serialize, Deserialize)]
struct DetectJson {
    communities: IndexMap<String, usize>,
    q: f64,
    diagnostics: DiagnosticsJson,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    components: Vec<ComponentJson>,
}

#[derive(Serialize, Deserialize)]
struct DiagnosticsJson {
    generations_run: usize,
    total_hops: u64,
    removed_edges_at_best: usize,
    cap_hit: bool,
    seed: u64,
    agents: usize,
    memory: usize,
}

#[derive(Serialize, Deserialize)]
struct ComponentJson {
    nodes: Vec<String>,
    q: Option<f64>,
    generations: usize,
    total_hops: u64,
    removed_edges_at_best: usize,
    cap_hit: bool,
    agents: usize,
    memory: usize,
    seed: u64,
}

fn detect_json(graph: &Graph, result: &DetectionResult) -> DetectJson {
    let d = &result.diagnostics;
    let components = if result.components.len() > 1 {
        result
            .components
            .iter()
            .map(|c| ComponentJson {
                nodes: c.nodes.iter().map(|&v| graph.name(v).to_owned()).collect(),
                q: c.q,
                generations: c.generations,
                total_hops: c.total_moves,
                removed_edges_at_best: c.removed_edges_at_best,
                cap_hit: c.cap_hit,
                agents: c.agent_count,
                memory: c.memory_size,
                seed: c.seed,
            })
            .collect()
    } else {
        Vec::new()
    };
    DetectJson {
        communities: graph
            .names()
            .iter()
            .enumerate()
            .map(|(v, name)| (name.clone(), result.partition.community_of(v)))
            .collect(),
        q: result.q,
        diagnostics: DiagnosticsJson {
            generations_run: d.generations_run,
            total_hops: d.total_hops,
            removed_edges_at_best: d.removed_edges_at_best,
            cap_hit: d.cap_hit,
            seed: d.seed,
            agents: d.agent_count,
            memory: d.memory_size,
        },
        components,
    }
}

fn run_detect(args: DetectArgs) -> Result<(), Failure> {
    let (graph, _) = load_graph(&args.input, args.format)?;
    let result = detect(&graph, &args.tuning.config(args.seed))?;
    match args.output {
        Output::Json => {
            let json = serde_json::to_string_pretty(&detect_json(&graph, &result)).expect("plain data serializes");
            println!("{json}");
        }
        Output::Tsv => {
            for (v, name) in graph.names().iter().enumerate() {
                println!("{name}\t{}", result.partition.community_of(v));
            }
        }
    }
    Ok(())
}

/// Node names and community labels from a `detect` result file.
fn load_result(path: &Path) -> Result<(Vec<String>, Vec<String>), Failure> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        let parsed: DetectJson =
            serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        return Ok(parsed.communities.into_iter().map(|(n, c)| (n, c.to_string())).unzip());
    }
    let pairs = parse_label_file(&text).map_err(Failure::input)?;
    Ok(pairs.into_iter().unzip())
}

fn run_eval(args: EvalArgs) -> Result<(), Failure> {
    let (names, labels) = load_result(&args.result)?;
    let truth = load_truth_labels(&args.truth)?;
    let predicted = Partition::from_labels(labels);
    let report = evaluate(&names, &predicted, &truth)?;
    println!("accuracy {:.4}", report.accuracy);
    println!("predicted communities {}", report.predicted_communities);
    println!("true communities {}", report.true_communities);
    println!("confusion (rows predicted, columns true)");
    for row in &report.confusion {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        println!("{}", cells.join("\t"));
    }
    Ok(())
}

#[derive(Serialize)]
struct BenchJson<'a> {
    runs: usize,
    mean_accuracy: f64,
    min_accuracy: f64,
    community_histogram: &'a BTreeMap<usize, usize>,
    trials: Vec<TrialJson>,
}

#[derive(Serialize)]
struct TrialJson {
    seed: u64,
    accuracy: f64,
    communities: usize,
    true_communities: usize,
    q: f64,
    cap_hit: bool,
    generations: usize,
    wall_time_secs: f64,
}

fn bench_json(report: &BenchReport) -> BenchJson<'_> {
    BenchJson {
        runs: report.runs,
        mean_accuracy: report.mean_accuracy,
        min_accuracy: report.min_accuracy,
        community_histogram: &report.community_histogram,
        trials: report
            .trials
            .iter()
            .map(|t| TrialJson {
                seed: t.seed,
                accuracy: t.accuracy,
                communities: t.communities,
                true_communities: t.true_communities,
                q: t.q,
                cap_hit: t.cap_hit,
                generations: t.generations,
                wall_time_secs: t.wall_time_secs,
            })
            .collect(),
    }
}

fn bench_input(args: &BenchArgs) -> Result<BenchInput, Failure> {
    if let Some(text) = &args.synthetic {
        let planted: PlantedPartition = text.parse().map_err(Failure::config)?;
        return Ok(BenchInput::Synthetic(planted));
    }
    let path = args.input.as_deref().expect("clap requires input without synthetic");
    let (graph, embedded) = load_graph(path, args.format)?;
    let truth = match (&args.truth, embedded) {
        (Some(truth), _) => labels_to_partition(graph.names(), &load_truth_labels(truth)?).map_err(Failure::input)?,
        (None, Some(truth)) => truth,
        (None, None) => {
            return Err(Failure::Config(
                "--truth is required unless the GML input has node values".into(),
            ))
        }
    };
    Ok(BenchInput::Fixed { graph, truth })
}

fn run_bench_command(args: BenchArgs) -> Result<(), Failure> {
    let input = bench_input(&args)?;
    let report = run_bench(&input, args.trials, &args.tuning.config(args.seed))?;
    eprint!("{}", report.summary_table());
    let json = serde_json::to_string_pretty(&bench_json(&report)).expect("plain data serializes");
    println!("{json}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Detect(args) => run_detect(args),
        Command::Eval(args) => run_eval(args),
        Command::Bench(args) => run_bench_command(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(reason)) => {
            eprintln!("error: {reason}");
            ExitCode::from(1)
        }
        Err(Failure::Config(reason)) => {
            eprintln!("error: {reason}");
            ExitCode::from(2)
        }
    }
}
