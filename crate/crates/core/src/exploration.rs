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

//! The exploration phase.
//!
//! Each generation places `A` walker agents on the graph. Every agent takes a
//! biased, short-memory walk of `M` nodes against a frozen snapshot of the
//! weight matrix and reports its memory. The coordinator then adds one to the
//! weight of every pair of distinct nodes found in the same memory, and
//! records one hit per visited position. Generations repeat until every node
//! has been hit at least `(A - 1) * M` times or the generation cap is reached.
//!
//! Agent `k` of generation `t` draws from its own ChaCha stream keyed by
//! `(seed, t, k)`, and memories are applied in agent order, so a run is
//! reproducible whether the walks of a generation execute sequentially or in
//! parallel.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exec::Execution;
use crate::graph::{Graph, NodeId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExplorationError {
    #[error("node {0} has no neighbors")]
    IsolatedNode(NodeId),
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph needs at least two nodes")]
    TooSmall,
    #[error("invalid exploration config: {0}")]
    ConfigInvalid(String),
}

/// Symmetric pair counts, zero on creation. The diagonal is never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMatrix {
    n: usize,
    // Packed strict upper triangle, row-major.
    counts: Vec<u64>,
}

impl WeightMatrix {
    pub fn new(node_count: usize) -> Self {
        Self {
            n: node_count,
            counts: vec![0; node_count * node_count.saturating_sub(1) / 2],
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    fn slot(&self, u: NodeId, v: NodeId) -> usize {
        debug_assert!(u != v && u < self.n && v < self.n);
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        a * (2 * self.n - a - 1) / 2 + (b - a - 1)
    }

    /// `w(u, v)`; zero on the diagonal.
    pub fn get(&self, u: NodeId, v: NodeId) -> u64 {
        if u == v {
            0
        } else {
            self.counts[self.slot(u, v)]
        }
    }

    /// Adds `by` to `w(u, v)` and `w(v, u)`.
    pub fn increment(&mut self, u: NodeId, v: NodeId, by: u64) {
        assert_ne!(u, v, "the diagonal is never written");
        let slot = self.slot(u, v);
        self.counts[slot] += by;
    }

    /// Sum over unordered pairs.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Unordered pairs `(u, v, w)` with `u < v` and nonzero weight.
    pub fn nonzero(&self) -> impl Iterator<Item = (NodeId, NodeId, u64)> + '_ {
        (0..self.n).flat_map(move |u| {
            ((u + 1)..self.n).filter_map(move |v| {
                let w = self.get(u, v);
                (w > 0).then_some((u, v, w))
            })
        })
    }
}

/// Visit counts per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HitCounts(Vec<u64>);

impl HitCounts {
    pub fn new(node_count: usize) -> Self {
        Self(vec![0; node_count])
    }

    pub fn from_counts(counts: Vec<u64>) -> Self {
        Self(counts)
    }

    pub fn get(&self, node: NodeId) -> u64 {
        self.0[node]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn min(&self) -> u64 {
        self.0.iter().copied().min().unwrap_or(0)
    }

    /// One hit per position in the memory, revisits included.
    pub fn record(&mut self, memory: &AgentMemory) {
        for &n in memory.nodes() {
            self.0[n] += 1;
        }
    }
}

/// The nodes an agent visited, in order; the payload it reports to the
/// coordinator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentMemory(Vec<NodeId>);

impl AgentMemory {
    pub fn new(nodes: Vec<NodeId>) -> Self {
        Self(nodes)
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.0.contains(&node)
    }

    /// Distinct nodes, sorted.
    pub fn distinct(&self) -> Vec<NodeId> {
        let mut nodes = self.0.clone();
        nodes.sort_unstable();
        nodes.dedup();
        nodes
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExplorationConfig {
    /// Agents per generation (`A`).
    pub agent_count: usize,
    /// Nodes per agent memory (`M`).
    pub memory_size: usize,
    /// Share of agents started on the most-hit nodes after generation 0.
    pub hub_fraction: f64,
    pub max_generations: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl ExplorationConfig {
    pub const DEFAULT_HUB_FRACTION: f64 = 0.75;
    pub const DEFAULT_MAX_GENERATIONS: usize = 1000;

    pub const AGENTS_PER_NODE: usize = 8;
    pub const DEFAULT_MEMORY_SIZE: usize = 5;

    /// `A = max(4, 8n)` and `M = 5`.
    pub fn for_graph(graph: &Graph, seed: u64) -> Self {
        Self {
            agent_count: (Self::AGENTS_PER_NODE * graph.node_count()).max(4),
            memory_size: Self::DEFAULT_MEMORY_SIZE,
            hub_fraction: Self::DEFAULT_HUB_FRACTION,
            max_generations: Self::DEFAULT_MAX_GENERATIONS,
            seed,
            execution: Execution::default(),
        }
    }

    pub fn validate(&self) -> Result<(), ExplorationError> {
        let invalid = |msg: String| Err(ExplorationError::ConfigInvalid(msg));
        if self.agent_count < 2 {
            return invalid(format!("agent count must be at least 2, got {}", self.agent_count));
        }
        if self.memory_size < 2 {
            return invalid(format!("memory size must be at least 2, got {}", self.memory_size));
        }
        if !(0.0..=1.0).contains(&self.hub_fraction) {
            return invalid(format!("hub fraction must be in [0, 1], got {}", self.hub_fraction));
        }
        if self.max_generations == 0 {
            return invalid("max generations must be positive".into());
        }
        Ok(())
    }

    /// Hits every node needs before exploration stops: `(A - 1) * M`.
    pub fn hit_threshold(&self) -> u64 {
        (self.agent_count as u64 - 1) * self.memory_size as u64
    }

    fn hub_count(&self) -> usize {
        // The epsilon keeps products like 0.7 * 10 from rounding up to 8.
        let raw = (self.hub_fraction * self.agent_count as f64 - 1e-9).ceil();
        (raw.max(0.0) as usize).min(self.agent_count)
    }
}

/// Random stream for agent `agent` of generation `generation`.
pub fn agent_rng(seed: u64, generation: u64, agent: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&generation.to_le_bytes());
    key[16..24].copy_from_slice(&agent.to_le_bytes());
    key[24..].copy_from_slice(b"agentwlk");
    ChaCha8Rng::from_seed(key)
}

/// Random stream the coordinator uses to place agents.
pub fn placement_rng(seed: u64, generation: u64) -> ChaCha8Rng {
    agent_rng(seed, generation, u64::MAX)
}

fn candidate_weights(
    graph: &Graph,
    weights: &WeightMatrix,
    current: NodeId,
    tabu: &[NodeId],
) -> Result<Vec<u64>, ExplorationError> {
    let neighbors = graph.neighbors(current);
    if neighbors.is_empty() {
        return Err(ExplorationError::IsolatedNode(current));
    }
    let relax = neighbors.iter().all(|(nb, _)| tabu.contains(nb));
    Ok(neighbors
        .iter()
        .map(|&(nb, _)| {
            if relax || !tabu.contains(&nb) {
                1 + weights.get(current, nb)
            } else {
                0
            }
        })
        .collect())
}

/// Probability of stepping to each neighbor of `current`, in the order of
/// [`Graph::neighbors`].
///
/// Neighbors in `tabu` are excluded unless every neighbor is tabu, in which
/// case all of them are candidates. A candidate `j` gets mass proportional to
/// `1 + w(current, j)`.
pub fn move_probabilities(
    graph: &Graph,
    weights: &WeightMatrix,
    current: NodeId,
    tabu: &[NodeId],
) -> Result<Vec<f64>, ExplorationError> {
    let raw = candidate_weights(graph, weights, current, tabu)?;
    let total: u64 = raw.iter().sum();
    Ok(raw.into_iter().map(|w| w as f64 / total as f64).collect())
}

/// Walks from `start` until the memory holds `memory_size` nodes. Nodes
/// already in the memory are tabu.
pub fn run_walk<R: Rng + ?Sized>(
    graph: &Graph,
    weights: &WeightMatrix,
    start: NodeId,
    memory_size: usize,
    rng: &mut R,
) -> Result<AgentMemory, ExplorationError> {
    let mut visited = Vec::with_capacity(memory_size);
    visited.push(start);
    let mut current = start;
    while visited.len() < memory_size {
        let raw = candidate_weights(graph, weights, current, &visited)?;
        let total: u64 = raw.iter().sum();
        let mut pick = rng.gen_range(0..total);
        let idx = raw
            .iter()
            .position(|&w| {
                if pick < w {
                    true
                } else {
                    pick -= w;
                    false
                }
            })
            .expect("pick is below the total");
        current = graph.neighbors(current)[idx].0;
        visited.push(current);
    }
    Ok(AgentMemory(visited))
}

/// Adds one to `w(u, v)` for every unordered pair of distinct nodes in the
/// memory. Returns the number of pairs touched.
pub fn apply_memory_update(weights: &mut WeightMatrix, memory: &AgentMemory) -> u64 {
    let nodes = memory.distinct();
    for (i, &u) in nodes.iter().enumerate() {
        for &v in &nodes[i + 1..] {
            weights.increment(u, v, 1);
        }
    }
    let k = nodes.len() as u64;
    k * k.saturating_sub(1) / 2
}

/// Start nodes for one generation.
///
/// Generation 0 picks distinct nodes uniformly at random. Later generations
/// take `⌈hub_fraction · A⌉` nodes with the most hits and fill the rest with
/// the least-hit nodes not already chosen; ties go to the lower node id.
/// Nodes repeat only when `A` exceeds the node count.
pub fn select_start_nodes<R: Rng + ?Sized>(
    graph: &Graph,
    hits: &HitCounts,
    config: &ExplorationConfig,
    generation: usize,
    rng: &mut R,
) -> Vec<NodeId> {
    let n = graph.node_count();
    let a = config.agent_count;
    if n == 0 {
        return Vec::new();
    }
    if generation == 0 {
        let mut starts = sample(rng, n, a.min(n)).into_vec();
        let first_round = starts.clone();
        starts.extend(first_round.iter().copied().cycle().take(a.saturating_sub(n)));
        return starts;
    }

    let mut by_hits: Vec<NodeId> = (0..n).collect();
    by_hits.sort_by(|&x, &y| hits.get(y).cmp(&hits.get(x)).then(x.cmp(&y)));
    let mut by_fewest: Vec<NodeId> = (0..n).collect();
    by_fewest.sort_by(|&x, &y| hits.get(x).cmp(&hits.get(y)).then(x.cmp(&y)));

    let hubs = config.hub_count();
    let mut starts: Vec<NodeId> = by_hits.iter().copied().cycle().take(hubs).collect();
    if a <= n {
        let mut taken = vec![false; n];
        for &s in &starts {
            taken[s] = true;
        }
        starts.extend(by_fewest.into_iter().filter(|&s| !taken[s]).take(a - hubs));
    } else {
        starts.extend(by_fewest.into_iter().cycle().take(a - hubs));
    }
    starts
}

/// True once every node has at least `(A - 1) * M` hits.
pub fn exploration_done(hits: &HitCounts, config: &ExplorationConfig) -> bool {
    hits.min() >= config.hit_threshold()
}

/// State after the exploration phase.
#[derive(Debug, Clone, PartialEq)]
pub struct Exploration {
    pub weights: WeightMatrix,
    pub hits: HitCounts,
    pub generations: usize,
    /// Steps between adjacent nodes, `generations · A · (M - 1)`.
    pub total_moves: u64,
    /// Stopped by `max_generations` rather than the hit threshold.
    pub cap_hit: bool,
}

/// Coordinator for a single exploration run, advanced one generation at a
/// time.
#[derive(Debug)]
pub struct Explorer<'g> {
    graph: &'g Graph,
    config: ExplorationConfig,
    weights: WeightMatrix,
    hits: HitCounts,
    generation: usize,
    moves: u64,
}

impl<'g> Explorer<'g> {
    pub fn new(graph: &'g Graph, config: ExplorationConfig) -> Result<Self, ExplorationError> {
        config.validate()?;
        if graph.node_count() < 2 {
            return Err(ExplorationError::TooSmall);
        }
        if !graph.is_connected() {
            return Err(ExplorationError::NotConnected);
        }
        Ok(Self {
            graph,
            weights: WeightMatrix::new(graph.node_count()),
            hits: HitCounts::new(graph.node_count()),
            config,
            generation: 0,
            moves: 0,
        })
    }

    pub fn weights(&self) -> &WeightMatrix {
        &self.weights
    }

    pub fn hits(&self) -> &HitCounts {
        &self.hits
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn is_done(&self) -> bool {
        exploration_done(&self.hits, &self.config)
    }

    /// Runs one generation and applies its memories. Returns the memories in
    /// agent order.
    pub fn step(&mut self) -> Vec<AgentMemory> {
        let t = self.generation as u64;
        let seed = self.config.seed;
        let starts = select_start_nodes(
            self.graph,
            &self.hits,
            &self.config,
            self.generation,
            &mut placement_rng(seed, t),
        );
        let snapshot = &self.weights;
        let graph = self.graph;
        let memory_size = self.config.memory_size;
        let memories = self.config.execution.map_range(0..starts.len(), |k| {
            let mut rng = agent_rng(seed, t, k as u64);
            run_walk(graph, snapshot, starts[k], memory_size, &mut rng)
                .expect("connected graph with two or more nodes has no isolated node")
        });
        for memory in &memories {
            apply_memory_update(&mut self.weights, memory);
            self.hits.record(memory);
            self.moves += memory.len() as u64 - 1;
        }
        self.generation += 1;
        memories
    }

    /// Steps until the hit threshold or the generation cap.
    pub fn run(mut self) -> Exploration {
        while self.generation < self.config.max_generations {
            self.step();
            if self.is_done() {
                break;
            }
        }
        Exploration {
            cap_hit: !self.is_done(),
            weights: self.weights,
            hits: self.hits,
            generations: self.generation,
            total_moves: self.moves,
        }
    }
}

/// Runs the whole exploration phase on a connected graph.
pub fn explore(graph: &Graph, config: &ExplorationConfig) -> Result<Exploration, ExplorationError> {
    Ok(Explorer::new(graph, config.clone())?.run())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::barbell;
    use crate::io::load_edge_list;

    fn star3() -> Graph {
        Graph::from_index_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn uniform_under_zero_weights() {
        let g = star3();
        let p = move_probabilities(&g, &WeightMatrix::new(4), 0, &[]).unwrap();
        assert!(close(&p, &[1.0 / 3.0; 3]));
    }

    #[test]
    fn weighted_moves() {
        let g = star3();
        let mut w = WeightMatrix::new(4);
        w.increment(0, 2, 1);
        w.increment(3, 0, 3);
        let p = move_probabilities(&g, &w, 0, &[]).unwrap();
        // (1 + 0, 1 + 1, 1 + 3) over 7
        assert!(close(&p, &[1.0 / 7.0, 2.0 / 7.0, 4.0 / 7.0]));
    }

    #[test]
    fn tabu_excludes_and_relaxes() {
        let g = load_edge_list("a b\nb c\n").unwrap();
        let w = WeightMatrix::new(3);
        assert!(close(&move_probabilities(&g, &w, 1, &[0]).unwrap(), &[0.0, 1.0]));
        assert!(close(&move_probabilities(&g, &w, 1, &[0, 2]).unwrap(), &[0.5, 0.5]));
        let isolated = Graph::from_index_edges(2, []).unwrap();
        assert_eq!(
            move_probabilities(&isolated, &WeightMatrix::new(2), 0, &[]),
            Err(ExplorationError::IsolatedNode(0))
        );
    }

    #[test]
    fn walk_on_path_center() {
        let g = load_edge_list("a b\nb c\n").unwrap();
        let w = WeightMatrix::new(3);
        let mut ends = [0usize; 3];
        for s in 0..2000 {
            let mem = run_walk(&g, &w, 1, 2, &mut agent_rng(s, 0, 0)).unwrap();
            assert_eq!(mem.nodes()[0], 1);
            ends[mem.nodes()[1]] += 1;
        }
        assert_eq!(ends[1], 0);
        // Binomial(2000, 1/2): five standard deviations is about 112.
        assert!((ends[0] as i64 - 1000).abs() < 112, "{ends:?}");
    }

    #[test]
    fn walk_relaxes_tabu_on_dead_end() {
        let g = load_edge_list("a b\n").unwrap();
        let mem = run_walk(&g, &WeightMatrix::new(2), 0, 3, &mut agent_rng(1, 0, 0)).unwrap();
        assert_eq!(mem.nodes(), &[0, 1, 0]);
    }

    fn share_staying(start: NodeId) -> f64 {
        let g = barbell();
        let w = WeightMatrix::new(6);
        let stays = (0..10_000)
            .filter(|&s| {
                let mem = run_walk(&g, &w, start, 4, &mut agent_rng(s, 0, 0)).unwrap();
                mem.nodes().iter().all(|&v| v < 3)
            })
            .count();
        stays as f64 / 10_000.0
    }

    #[test]
    fn barbell_walks_from_the_bridge_stay_home() {
        // Stepping to 0 or 1 (2/3) keeps the walk inside the triangle.
        assert!((share_staying(2) - 2.0 / 3.0).abs() < 0.025);
    }

    #[test]
    fn barbell_walks_from_inner_nodes_are_pushed_across() {
        // Hard tabu leaves the bridge as the only way out once the triangle
        // has been seen, so 3 of 4 walks from node 0 cross.
        assert!((share_staying(0) - 0.25).abs() < 0.025);
    }

    #[test]
    fn pair_updates_use_node_set() {
        let mut w = WeightMatrix::new(4);
        assert_eq!(apply_memory_update(&mut w, &AgentMemory::new(vec![0, 1, 2])), 3);
        assert_eq!((w.get(0, 1), w.get(0, 2), w.get(1, 2)), (1, 1, 1));

        let mut w = WeightMatrix::new(2);
        assert_eq!(apply_memory_update(&mut w, &AgentMemory::new(vec![0, 1, 0])), 1);
        assert_eq!(w.get(0, 1), 1);

        let mut w = WeightMatrix::new(4);
        apply_memory_update(&mut w, &AgentMemory::new(vec![0, 1, 2]));
        apply_memory_update(&mut w, &AgentMemory::new(vec![1, 2, 3]));
        assert_eq!(w.get(1, 2), 2);
        assert_eq!(w.get(2, 1), 2);
        for (u, v) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            assert_eq!(w.get(u, v), 1);
        }
        assert_eq!(w.get(0, 3), 0);
    }

    #[test]
    fn first_generation_is_distinct() {
        let g = crate::datasets::karate_club().0;
        let cfg = ExplorationConfig {
            agent_count: 3,
            ..ExplorationConfig::for_graph(&g, 0)
        };
        for seed in 0..50 {
            let starts = select_start_nodes(&g, &HitCounts::new(34), &cfg, 0, &mut placement_rng(seed, 0));
            assert_eq!(starts.len(), 3);
            let mut d = starts.clone();
            d.sort_unstable();
            d.dedup();
            assert_eq!(d.len(), 3);
        }
    }

    #[test]
    fn hubs_then_least_visited() {
        let g = crate::datasets::karate_club().0;
        let mut counts = vec![0; 34];
        counts[..4].copy_from_slice(&[10, 8, 8, 1]);
        let cfg = ExplorationConfig {
            agent_count: 4,
            hub_fraction: 0.75,
            ..ExplorationConfig::for_graph(&g, 0)
        };
        let starts = select_start_nodes(&g, &HitCounts::from_counts(counts), &cfg, 1, &mut placement_rng(0, 1));
        assert_eq!(starts, vec![0, 1, 2, 4]);
    }

    #[test]
    fn every_node_starts_when_agents_match_nodes() {
        let g = barbell();
        let cfg = ExplorationConfig {
            agent_count: 6,
            hub_fraction: 1.0,
            ..ExplorationConfig::for_graph(&g, 0)
        };
        let hits = HitCounts::from_counts(vec![3, 1, 4, 1, 5, 9]);
        let mut starts = select_start_nodes(&g, &hits, &cfg, 2, &mut placement_rng(0, 2));
        starts.sort_unstable();
        assert_eq!(starts, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn more_agents_than_nodes_repeat() {
        let g = load_edge_list("a b\n").unwrap();
        let cfg = ExplorationConfig {
            agent_count: 5,
            ..ExplorationConfig::for_graph(&g, 0)
        };
        let starts = select_start_nodes(&g, &HitCounts::new(2), &cfg, 0, &mut placement_rng(3, 0));
        assert_eq!(starts.len(), 5);
        let later = select_start_nodes(
            &g,
            &HitCounts::from_counts(vec![4, 2]),
            &cfg,
            1,
            &mut placement_rng(3, 1),
        );
        assert_eq!(later.len(), 5);
    }

    #[test]
    fn threshold() {
        let g = barbell();
        let cfg = ExplorationConfig {
            agent_count: 2,
            memory_size: 5,
            ..ExplorationConfig::for_graph(&g, 0)
        };
        assert!(exploration_done(&HitCounts::from_counts(vec![5, 6, 9, 5, 5, 7]), &cfg));
        assert!(!exploration_done(&HitCounts::from_counts(vec![5, 6, 9, 4, 5, 7]), &cfg));
        let bad = ExplorationConfig {
            agent_count: 1,
            ..cfg.clone()
        };
        assert!(matches!(bad.validate(), Err(ExplorationError::ConfigInvalid(_))));
        let bad = ExplorationConfig {
            memory_size: 1,
            ..cfg.clone()
        };
        assert!(bad.validate().is_err());
        let bad = ExplorationConfig {
            hub_fraction: 1.5,
            ..cfg
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn single_edge_finishes_in_one_generation() {
        let g = load_edge_list("a b\n").unwrap();
        let cfg = ExplorationConfig {
            agent_count: 2,
            memory_size: 2,
            ..ExplorationConfig::for_graph(&g, 7)
        };
        let run = explore(&g, &cfg).unwrap();
        assert_eq!(run.generations, 1);
        assert!(!run.cap_hit);
        assert_eq!(run.hits.as_slice(), &[2, 2]);
    }

    #[test]
    fn hit_bookkeeping() {
        let g = barbell();
        let cfg = ExplorationConfig::for_graph(&g, 11);
        let run = explore(&g, &cfg).unwrap();
        let per_gen = (cfg.agent_count * cfg.memory_size) as u64;
        assert_eq!(run.hits.total(), run.generations as u64 * per_gen);
        assert_eq!(
            run.total_moves,
            run.generations as u64 * (cfg.agent_count * (cfg.memory_size - 1)) as u64
        );
    }

    #[test]
    fn rejects_disconnected_and_tiny() {
        let g = Graph::from_index_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            explore(&g, &ExplorationConfig::for_graph(&g, 0)).unwrap_err(),
            ExplorationError::NotConnected
        );
        let g = Graph::from_index_edges(1, []).unwrap();
        assert_eq!(
            explore(&g, &ExplorationConfig::for_graph(&g, 0)).unwrap_err(),
            ExplorationError::TooSmall
        );
    }

    #[test]
    fn generation_cap_is_flagged() {
        let g = barbell();
        let cfg = ExplorationConfig {
            max_generations: 1,
            ..ExplorationConfig::for_graph(&g, 0)
        };
        let run = explore(&g, &cfg).unwrap();
        assert_eq!(run.generations, 1);
        assert!(run.cap_hit);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let g = crate::datasets::karate_club().0;
        let base = ExplorationConfig::for_graph(&g, 42);
        let seq = explore(
            &g,
            &ExplorationConfig {
                execution: Execution::Sequential,
                ..base.clone()
            },
        )
        .unwrap();
        let par = explore(
            &g,
            &ExplorationConfig {
                execution: Execution::Parallel,
                ..base
            },
        )
        .unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn packed_indexing_covers_all_pairs() {
        let n = 7;
        let mut w = WeightMatrix::new(n);
        for u in 0..n {
            for v in (u + 1)..n {
                w.increment(v, u, (u * n + v) as u64);
            }
        }
        for u in 0..n {
            for v in (u + 1)..n {
                assert_eq!(w.get(u, v), (u * n + v) as u64);
            }
        }
    }
}
