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

//! End-to-end detection: exploration, sweep and selection per connected
//! component, merged into one partition of the input graph.

use thiserror::Error;

use crate::analysis::{absorb_singletons, best_partition, sweep};
use crate::exec::Execution;
use crate::exploration::{explore, ExplorationConfig, ExplorationError};
use crate::graph::{connected_components, EdgeMask, Graph, NodeId, Partition};
use crate::modularity::modularity;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetectError {
    #[error(transparent)]
    Config(#[from] ExplorationError),
    #[error("graph has no edges")]
    NoEdges,
}

/// Overrides for the per-component defaults of [`ExplorationConfig::for_graph`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DetectConfig {
    pub agents: Option<usize>,
    pub memory: Option<usize>,
    pub hub_fraction: Option<f64>,
    pub max_generations: Option<usize>,
    pub seed: u64,
    pub execution: Execution,
}

impl DetectConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    /// Exploration settings for one component.
    pub fn exploration_for(&self, component: &Graph, seed: u64) -> ExplorationConfig {
        let defaults = ExplorationConfig::for_graph(component, seed);
        ExplorationConfig {
            agent_count: self.agents.unwrap_or(defaults.agent_count),
            memory_size: self.memory.unwrap_or(defaults.memory_size),
            hub_fraction: self.hub_fraction.unwrap_or(defaults.hub_fraction),
            max_generations: self.max_generations.unwrap_or(defaults.max_generations),
            seed,
            execution: self.execution,
        }
    }

    fn validate(&self) -> Result<(), ExplorationError> {
        // Unset sizes take the smallest valid values so only overrides are checked.
        ExplorationConfig {
            agent_count: self.agents.unwrap_or(2),
            memory_size: self.memory.unwrap_or(2),
            hub_fraction: self.hub_fraction.unwrap_or(ExplorationConfig::DEFAULT_HUB_FRACTION),
            max_generations: self.max_generations.unwrap_or(1),
            seed: self.seed,
            execution: self.execution,
        }
        .validate()
    }
}

/// Seed used for the `index`-th connected component. The first component
/// uses the run seed unchanged.
pub fn component_seed(seed: u64, index: usize) -> u64 {
    if index == 0 {
        return seed;
    }
    // splitmix64 finalizer
    let mut z = seed ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentResult {
    /// Node ids of the input graph, ascending.
    pub nodes: Vec<NodeId>,
    /// Local partition, indexed like `nodes`.
    pub partition: Partition,
    /// Modularity within the component; `None` for an isolated node.
    pub q: Option<f64>,
    pub generations: usize,
    pub total_moves: u64,
    pub removed_edges_at_best: usize,
    pub cap_hit: bool,
    pub agent_count: usize,
    pub memory_size: usize,
    pub seed: u64,
}

/// Run totals. `agent_count` and `memory_size` are those of the largest
/// component.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub generations_run: usize,
    pub total_hops: u64,
    pub removed_edges_at_best: usize,
    pub cap_hit: bool,
    pub seed: u64,
    pub agent_count: usize,
    pub memory_size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    pub partition: Partition,
    /// Modularity of `partition` on the whole input graph.
    pub q: f64,
    pub diagnostics: Diagnostics,
    pub components: Vec<ComponentResult>,
}

fn detect_component(
    graph: &Graph,
    nodes: Vec<NodeId>,
    index: usize,
    config: &DetectConfig,
) -> Result<ComponentResult, DetectError> {
    let sub = graph.induced_subgraph(&nodes);
    let seed = component_seed(config.seed, index);
    let exploration_config = config.exploration_for(&sub, seed);
    if sub.node_count() == 1 {
        return Ok(ComponentResult {
            nodes,
            partition: Partition::single(1),
            q: None,
            generations: 0,
            total_moves: 0,
            removed_edges_at_best: 0,
            cap_hit: false,
            agent_count: exploration_config.agent_count,
            memory_size: exploration_config.memory_size,
            seed,
        });
    }
    let run = explore(&sub, &exploration_config)?;
    let candidates = sweep(&sub, &run.weights, config.execution).expect("component is connected and has edges");
    let best = best_partition(&candidates);
    let partition = absorb_singletons(&sub, &best.partition);
    let q = modularity(&sub, &partition).expect("component has edges");
    Ok(ComponentResult {
        nodes,
        partition,
        q: Some(q),
        generations: run.generations,
        total_moves: run.total_moves,
        removed_edges_at_best: best.removed_edge_count,
        cap_hit: run.cap_hit,
        agent_count: exploration_config.agent_count,
        memory_size: exploration_config.memory_size,
        seed,
    })
}

/// Detects communities in `graph`.
///
/// Each connected component is explored and swept on its own. Singletons of
/// the best sweep candidate are absorbed into a neighbor community when that
/// strictly raises modularity, and component partitions are then merged with
/// disjoint labels.
pub fn detect(graph: &Graph, config: &DetectConfig) -> Result<DetectionResult, DetectError> {
    config.validate()?;
    if graph.edge_count() == 0 {
        return Err(DetectError::NoEdges);
    }
    let components = connected_components(graph, &EdgeMask::new(graph)).communities();
    let results = components
        .into_iter()
        .enumerate()
        .map(|(i, nodes)| detect_component(graph, nodes, i, config))
        .collect::<Result<Vec<_>, _>>()?;

    let mut labels = vec![0; graph.node_count()];
    let mut offset = 0;
    for c in &results {
        for (local, &node) in c.nodes.iter().enumerate() {
            labels[node] = offset + c.partition.community_of(local);
        }
        offset += c.partition.community_count();
    }
    let partition = Partition::from_labels(labels);
    let q = modularity(graph, &partition).expect("graph has edges");

    let largest = results
        .iter()
        .max_by_key(|c| (c.nodes.len(), std::cmp::Reverse(c.nodes[0])))
        .expect("graph has nodes");
    let diagnostics = Diagnostics {
        generations_run: results.iter().map(|c| c.generations).sum(),
        total_hops: results.iter().map(|c| c.total_moves).sum(),
        removed_edges_at_best: results.iter().map(|c| c.removed_edges_at_best).sum(),
        cap_hit: results.iter().any(|c| c.cap_hit),
        seed: config.seed,
        agent_count: largest.agent_count,
        memory_size: largest.memory_size,
    };
    Ok(DetectionResult {
        partition,
        q,
        diagnostics,
        components: results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::barbell;
    use crate::io::load_edge_list;

    #[test]
    fn single_edge_is_one_community() {
        let g = load_edge_list("a b\n").unwrap();
        let r = detect(&g, &DetectConfig::with_seed(3)).unwrap();
        assert_eq!(r.partition, Partition::single(2));
        assert_eq!(r.q, 0.0);
    }

    #[test]
    fn barbell_end_to_end() {
        // With M = 3 a walk from a triangle node can stay inside it.
        let cfg = DetectConfig {
            memory: Some(3),
            ..DetectConfig::with_seed(1)
        };
        let r = detect(&barbell(), &cfg).unwrap();
        assert_eq!(r.partition.community_count(), 2);
        assert_eq!(r.q, modularity(&barbell(), &r.partition).unwrap());
        assert!(!r.diagnostics.cap_hit);
    }

    #[test]
    fn disconnected_components_get_disjoint_labels() {
        let g = load_edge_list("a b\nb c\na c\nx y\ny z\nx z\n").unwrap();
        let r = detect(&g, &DetectConfig::with_seed(9)).unwrap();
        assert_eq!(r.components.len(), 2);
        assert_eq!(r.partition.labels(), &[0, 0, 0, 1, 1, 1]);
        assert!((r.q - 0.5).abs() < 1e-12);
        assert_eq!(r.components[0].seed, 9);
        assert_ne!(r.components[1].seed, 9);
    }

    #[test]
    fn isolated_nodes_stand_alone() {
        let g = Graph::from_index_edges(4, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let r = detect(&g, &DetectConfig::with_seed(0)).unwrap();
        assert_eq!(r.partition.labels(), &[0, 0, 0, 1]);
        assert_eq!(r.components[1].q, None);
    }

    #[test]
    fn invalid_overrides() {
        let g = barbell();
        let cfg = DetectConfig {
            agents: Some(1),
            ..DetectConfig::with_seed(0)
        };
        assert!(matches!(
            detect(&g, &cfg),
            Err(DetectError::Config(ExplorationError::ConfigInvalid(_)))
        ));
        let empty = Graph::from_index_edges(2, []).unwrap();
        assert_eq!(detect(&empty, &DetectConfig::default()), Err(DetectError::NoEdges));
    }
}
