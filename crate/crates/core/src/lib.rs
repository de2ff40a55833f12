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

//! Community detection with walker agents.
//!
//! Generations of agents take short biased walks over an undirected graph and
//! report the nodes they visited to a coordinator, which counts how often
//! every pair of nodes shows up in the same walk. Edges are then removed from
//! the least to the most co-visited, and among the component splits this
//! produces, the partition of highest modularity is returned.
//!
//! ```
//! use agentcd::{datasets, detect, DetectConfig};
//!
//! let (graph, _truth) = datasets::karate_club();
//! let result = detect(&graph, &DetectConfig::with_seed(7)).unwrap();
//! assert!(result.q > 0.3);
//! ```

pub mod analysis;
pub mod bench;
pub mod datasets;
pub mod detect;
mod dsu;
pub mod exec;
pub mod exploration;
pub mod graph;
pub mod io;
pub mod modularity;
pub mod planted;

pub use analysis::{absorb_singletons, best_partition, edge_removal_order, sweep, CandidateRecord};
pub use bench::{evaluate, run_bench, BenchInput, BenchReport, EvalReport};
pub use detect::{detect, DetectConfig, DetectionResult, Diagnostics};
pub use exec::Execution;
pub use exploration::{explore, Exploration, ExplorationConfig, WeightMatrix};
pub use graph::{connected_components, EdgeMask, Graph, Partition};
pub use modularity::{brute_force_best_partition, modularity, partition_accuracy};
pub use planted::PlantedPartition;
