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

//! Repeated seeded detection against a ground truth, and single-result
//! evaluation.

use std::collections::BTreeMap;
use std::time::Instant;

use thiserror::Error;

use crate::detect::{detect, DetectConfig, DetectError};
use crate::graph::{Graph, Partition};
use crate::io::{labels_to_partition, LoadError};
use crate::modularity::{confusion_matrix, matched_agreement, ModularityError};
use crate::planted::PlantedPartition;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BenchError {
    #[error("at least one trial is required")]
    NoTrials,
    #[error(transparent)]
    Detect(#[from] DetectError),
    #[error(transparent)]
    Modularity(#[from] ModularityError),
    #[error(transparent)]
    Load(#[from] LoadError),
}

/// Where each trial's graph comes from.
#[derive(Debug, Clone)]
pub enum BenchInput {
    /// One graph reused for every trial.
    Fixed { graph: Graph, truth: Partition },
    /// A fresh planted-partition graph per trial, sampled with the trial seed.
    Synthetic(PlantedPartition),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub seed: u64,
    pub accuracy: f64,
    pub communities: usize,
    pub true_communities: usize,
    pub q: f64,
    pub cap_hit: bool,
    pub generations: usize,
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub runs: usize,
    pub trials: Vec<TrialResult>,
    pub mean_accuracy: f64,
    pub min_accuracy: f64,
    /// Number of runs reporting each community count.
    pub community_histogram: BTreeMap<usize, usize>,
}

impl BenchReport {
    fn from_trials(trials: Vec<TrialResult>) -> Self {
        let runs = trials.len();
        let mean_accuracy = trials.iter().map(|t| t.accuracy).sum::<f64>() / runs as f64;
        let min_accuracy = trials.iter().map(|t| t.accuracy).fold(f64::INFINITY, f64::min);
        let mut community_histogram = BTreeMap::new();
        for t in &trials {
            *community_histogram.entry(t.communities).or_insert(0) += 1;
        }
        Self {
            runs,
            trials,
            mean_accuracy,
            min_accuracy,
            community_histogram,
        }
    }

    /// Share of runs with accuracy at least `threshold`.
    pub fn share_at_least(&self, threshold: f64) -> f64 {
        self.trials.iter().filter(|t| t.accuracy >= threshold).count() as f64 / self.runs as f64
    }

    /// Plain-text table, one row per trial plus a summary line.
    pub fn summary_table(&self) -> String {
        let mut out = String::from("trial  seed        accuracy  communities  q         gens  cap  secs\n");
        for (i, t) in self.trials.iter().enumerate() {
            out.push_str(&format!(
                "{:<6} {:<11} {:<9.4} {:<12} {:<9.4} {:<5} {:<4} {:.3}\n",
                i,
                t.seed,
                t.accuracy,
                t.communities,
                t.q,
                t.generations,
                if t.cap_hit { "yes" } else { "no" },
                t.wall_time_secs
            ));
        }
        out.push_str(&format!(
            "runs {}  mean accuracy {:.4}  min accuracy {:.4}  communities {:?}\n",
            self.runs, self.mean_accuracy, self.min_accuracy, self.community_histogram
        ));
        out
    }
}

fn run_trial(graph: &Graph, truth: &Partition, config: &DetectConfig) -> Result<TrialResult, BenchError> {
    let started = Instant::now();
    let result = detect(graph, config)?;
    let wall_time_secs = started.elapsed().as_secs_f64();
    let confusion = confusion_matrix(&result.partition, truth)?;
    Ok(TrialResult {
        seed: config.seed,
        accuracy: matched_agreement(&confusion) as f64 / graph.node_count() as f64,
        communities: result.partition.community_count(),
        true_communities: truth.community_count(),
        q: result.q,
        cap_hit: result.diagnostics.cap_hit,
        generations: result.diagnostics.generations_run,
        wall_time_secs,
    })
}

/// Runs `trials` detections with seeds `config.seed ..= config.seed + trials - 1`.
/// Trials run concurrently under [`crate::Execution::Parallel`].
pub fn run_bench(input: &BenchInput, trials: usize, config: &DetectConfig) -> Result<BenchReport, BenchError> {
    if trials == 0 {
        return Err(BenchError::NoTrials);
    }
    let results = config.execution.map_range(0..trials, |i| {
        let trial_config = DetectConfig {
            seed: config.seed.wrapping_add(i as u64),
            ..config.clone()
        };
        match input {
            BenchInput::Fixed { graph, truth } => run_trial(graph, truth, &trial_config),
            BenchInput::Synthetic(planted) => {
                let (graph, truth) = planted.generate(trial_config.seed);
                run_trial(&graph, &truth, &trial_config)
            }
        }
    });
    Ok(BenchReport::from_trials(results.into_iter().collect::<Result<_, _>>()?))
}

/// Accuracy of one detection against a labeled truth.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub accuracy: f64,
    pub predicted_communities: usize,
    pub true_communities: usize,
    /// Rows are predicted communities, columns true ones.
    pub confusion: Vec<Vec<usize>>,
}

/// Compares per-node predicted labels with `(name, label)` truth pairs
/// covering exactly the same names.
pub fn evaluate(
    names: &[String],
    predicted: &Partition,
    truth_labels: &[(String, String)],
) -> Result<EvalReport, BenchError> {
    let truth = labels_to_partition(names, truth_labels)?;
    let confusion = confusion_matrix(predicted, &truth)?;
    let agreement = matched_agreement(&confusion);
    Ok(EvalReport {
        accuracy: agreement as f64 / names.len().max(1) as f64,
        predicted_communities: predicted.community_count(),
        true_communities: truth.community_count(),
        confusion,
    })
}
