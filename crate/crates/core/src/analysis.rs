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

//! The analysis phase: remove edges from lightest to heaviest, record every
//! partition produced when the graph splits, and keep the one with the best
//! modularity.

use std::cmp::Ordering;

use thiserror::Error;

use crate::dsu::DisjointSet;
use crate::exec::Execution;
use crate::exploration::WeightMatrix;
use crate::graph::{connected_components, EdgeId, EdgeMask, Graph, Partition};
use crate::modularity::modularity;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph has no edges")]
    NoEdges,
    #[error("weight matrix covers {weights} nodes but the graph has {graph}")]
    WeightMismatch { weights: usize, graph: usize },
}

/// One partition seen during the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateRecord {
    /// Edges removed when this partition appeared.
    pub removed_edge_count: usize,
    pub partition: Partition,
    /// Modularity against the full, unmasked graph.
    pub q: f64,
}

/// All edge ids ordered by ascending weight, ties by edge id.
pub fn edge_removal_order(graph: &Graph, weights: &WeightMatrix) -> Vec<EdgeId> {
    let mut order: Vec<EdgeId> = (0..graph.edge_count()).collect();
    order.sort_by_key(|&e| {
        let (u, v) = graph.edge(e);
        (weights.get(u, v), e)
    });
    order
}

/// Positions in `order` after which the component count goes up, i.e. the
/// number of removed edges at each split.
fn split_points(graph: &Graph, order: &[EdgeId]) -> Vec<usize> {
    // Re-adding edges from last removed to first: an edge that merges two
    // sets is exactly one whose removal splits a component.
    let mut sets = DisjointSet::new(graph.node_count());
    let mut splits = Vec::new();
    for (i, &e) in order.iter().enumerate().rev() {
        let (u, v) = graph.edge(e);
        if sets.union(u, v) {
            splits.push(i + 1);
        }
    }
    splits.reverse();
    splits
}

/// Removes edges in [`edge_removal_order`] and records a candidate whenever
/// the number of connected components grows.
///
/// The first record is the whole graph as one community and the last is the
/// all-singleton partition.
pub fn sweep(
    graph: &Graph,
    weights: &WeightMatrix,
    execution: Execution,
) -> Result<Vec<CandidateRecord>, AnalysisError> {
    if weights.node_count() != graph.node_count() {
        return Err(AnalysisError::WeightMismatch {
            weights: weights.node_count(),
            graph: graph.node_count(),
        });
    }
    if graph.edge_count() == 0 {
        return Err(AnalysisError::NoEdges);
    }
    if !graph.is_connected() {
        return Err(AnalysisError::NotConnected);
    }
    let order = edge_removal_order(graph, weights);
    Ok(sweep_order(graph, &order, execution))
}

/// Sweep over an explicit removal order of all edges of a connected graph.
pub fn sweep_order(graph: &Graph, order: &[EdgeId], execution: Execution) -> Vec<CandidateRecord> {
    let mut removals = vec![0];
    removals.extend(split_points(graph, order));

    execution.map(&removals, |&removed| {
        let mask = EdgeMask::with_removed(graph, order[..removed].iter().copied());
        let partition = connected_components(graph, &mask);
        let q = modularity(graph, &partition).expect("graph has edges and partition fits");
        CandidateRecord {
            removed_edge_count: removed,
            partition,
            q,
        }
    })
}

/// The record of highest modularity; ties go to fewer removed edges, then to
/// fewer communities.
///
/// # Panics
///
/// If `candidates` is empty.
pub fn best_partition(candidates: &[CandidateRecord]) -> &CandidateRecord {
    candidates
        .iter()
        .min_by(|a, b| {
            b.q.partial_cmp(&a.q)
                .unwrap_or(Ordering::Equal)
                .then(a.removed_edge_count.cmp(&b.removed_edge_count))
                .then(a.partition.community_count().cmp(&b.partition.community_count()))
        })
        .expect("sweep always yields the baseline candidate")
}

/// Moves single-node communities into neighboring communities of two or more
/// nodes when that strictly raises modularity, choosing the largest gain
/// (ties to the lower label). Passes over the nodes in id order repeat until
/// nothing moves, so a singleton whose neighbors were all singletons can join
/// once one of them has been absorbed.
pub fn absorb_singletons(graph: &Graph, partition: &Partition) -> Partition {
    let m2 = 2 * graph.edge_count() as i128;
    let mut labels = partition.labels().to_vec();
    let mut sizes = partition.sizes();
    let mut degree_sums = vec![0i128; partition.community_count()];
    for v in 0..graph.node_count() {
        degree_sums[labels[v]] += graph.degree(v) as i128;
    }
    let mut moved = true;
    while moved {
        moved = false;
        for v in 0..graph.node_count() {
            let own = labels[v];
            if sizes[own] != 1 {
                continue;
            }
            let mut links: Vec<(usize, i128)> = Vec::new();
            for &(u, _) in graph.neighbors(v) {
                let c = labels[u];
                if sizes[c] < 2 {
                    continue;
                }
                match links.iter_mut().find(|(l, _)| *l == c) {
                    Some((_, k)) => *k += 1,
                    None => links.push((c, 1)),
                }
            }
            // Gain of joining c, scaled by 2m^2: 2m * k_c - d_v * D_c.
            let d = graph.degree(v) as i128;
            let best = links
                .into_iter()
                .map(|(c, k)| (m2 * k - d * degree_sums[c], c))
                .filter(|&(gain, _)| gain > 0)
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
            if let Some((_, c)) = best {
                labels[v] = c;
                sizes[own] = 0;
                sizes[c] += 1;
                degree_sums[own] = 0;
                degree_sums[c] += d;
                moved = true;
            }
        }
    }
    Partition::from_labels(labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::barbell;

    fn record(q: f64, removed: usize, communities: usize) -> CandidateRecord {
        CandidateRecord {
            removed_edge_count: removed,
            partition: Partition::from_labels((0..6).map(|i| i % communities)),
            q,
        }
    }

    #[test]
    fn equal_weights_keep_edge_order() {
        let g = barbell();
        let order = edge_removal_order(&g, &WeightMatrix::new(6));
        assert_eq!(order, (0..g.edge_count()).collect::<Vec<_>>());
    }

    #[test]
    fn ascending_weights() {
        let g = Graph::from_index_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let mut w = WeightMatrix::new(4);
        w.increment(0, 1, 5);
        w.increment(2, 3, 2);
        assert_eq!(edge_removal_order(&g, &w), vec![1, 2, 0]);
    }

    fn bridge_lowest(g: &Graph) -> WeightMatrix {
        let mut w = WeightMatrix::new(6);
        for &(u, v) in g.edges() {
            if (u, v) != (2, 3) {
                w.increment(u, v, 3);
            }
        }
        w
    }

    #[test]
    fn barbell_sweep() {
        let g = barbell();
        let candidates = sweep(&g, &bridge_lowest(&g), Execution::Sequential).unwrap();
        assert_eq!(candidates[0].partition, Partition::single(6));
        assert_eq!(candidates[0].q, 0.0);
        assert_eq!(candidates[1].removed_edge_count, 1);
        assert_eq!(candidates[1].partition.labels(), &[0, 0, 0, 1, 1, 1]);
        assert!((candidates[1].q - 5.0 / 14.0).abs() < 1e-12);
        assert_eq!(candidates.last().unwrap().partition, Partition::singletons(6));
        assert_eq!(candidates.len(), 6);
        let best = best_partition(&candidates);
        assert_eq!(best.removed_edge_count, 1);
    }

    #[test]
    fn single_edge_sweep() {
        let g = Graph::from_index_edges(2, [(0, 1)]).unwrap();
        let candidates = sweep(&g, &WeightMatrix::new(2), Execution::Sequential).unwrap();
        assert_eq!(candidates.len(), 2);
        assert_eq!(candidates[0].q, 0.0);
        assert!((candidates[1].q + 0.5).abs() < 1e-12);
        assert_eq!(best_partition(&candidates).partition, Partition::single(2));
    }

    #[test]
    fn sweep_rejects_bad_input() {
        let g = Graph::from_index_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            sweep(&g, &WeightMatrix::new(4), Execution::Sequential),
            Err(AnalysisError::NotConnected)
        );
        assert!(matches!(
            sweep(&g, &WeightMatrix::new(3), Execution::Sequential),
            Err(AnalysisError::WeightMismatch { .. })
        ));
    }

    #[test]
    fn pendant_joins_its_neighbor() {
        // Triangle with a pendant node 3 hanging off node 2.
        let g = Graph::from_index_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let split = Partition::from_labels([0, 0, 0, 1]);
        let merged = absorb_singletons(&g, &split);
        assert_eq!(merged, Partition::single(4));
        assert!(modularity(&g, &merged).unwrap() > modularity(&g, &split).unwrap());
    }

    #[test]
    fn singletons_do_not_pair_up() {
        // Barbell with a tail 5-7-6. Node 6 only touches singleton 7 on the
        // first pass and joins after 7 has.
        let g = Graph::from_index_edges(
            8,
            [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5), (5, 7), (6, 7)],
        )
        .unwrap();
        let p = Partition::from_labels([0, 0, 0, 1, 1, 1, 2, 3]);
        let merged = absorb_singletons(&g, &p);
        assert_eq!(merged.labels(), &[0, 0, 0, 1, 1, 1, 1, 1]);
        assert!(modularity(&g, &merged).unwrap() > modularity(&g, &p).unwrap());
    }

    #[test]
    fn all_singletons_have_nowhere_to_go() {
        let g = barbell();
        assert_eq!(
            absorb_singletons(&g, &Partition::singletons(6)),
            Partition::singletons(6)
        );
    }

    #[test]
    fn isolated_node_stays() {
        let g = Graph::from_index_edges(3, [(0, 1)]).unwrap();
        let p = Partition::from_labels([0, 0, 1]);
        assert_eq!(absorb_singletons(&g, &p), p);
    }

    #[test]
    fn argmax() {
        let c = vec![
            record(0.0, 0, 1),
            record(0.357, 1, 2),
            record(0.1, 3, 3),
            record(-0.5, 7, 6),
        ];
        assert_eq!(best_partition(&c).q, 0.357);
    }

    #[test]
    fn baseline_wins_when_nothing_is_positive() {
        let c = vec![record(0.0, 0, 1), record(-0.1, 1, 2), record(-0.5, 7, 6)];
        assert_eq!(best_partition(&c).removed_edge_count, 0);
    }

    #[test]
    fn tie_prefers_fewer_communities() {
        let c = vec![record(0.0, 0, 1), record(0.2, 2, 4), record(0.2, 2, 2)];
        assert_eq!(best_partition(&c).partition.community_count(), 2);
        let c = vec![record(0.2, 3, 2), record(0.2, 2, 3)];
        assert_eq!(best_partition(&c).removed_edge_count, 2);
    }
}
