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

//! Network modularity, an exhaustive optimum for small graphs, and
//! best-matching partition accuracy.

use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;
use thiserror::Error;

use crate::graph::{Graph, Partition};

/// Largest graph [`brute_force_best_partition`] accepts.
pub const BRUTE_FORCE_MAX_NODES: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModularityError {
    #[error("partition covers {partition} nodes but the graph has {graph}")]
    PartitionMismatch { partition: usize, graph: usize },
    #[error("modularity is undefined on a graph without edges")]
    NoEdges,
    #[error("exhaustive search limited to {BRUTE_FORCE_MAX_NODES} nodes, graph has {0}")]
    TooLarge(usize),
    #[error("partitions cover {0} and {1} nodes")]
    SizeMismatch(usize, usize),
}

/// Per-community intra-edge counts and degree sums.
fn community_totals(graph: &Graph, partition: &Partition) -> (Vec<u64>, Vec<u64>) {
    let k = partition.community_count();
    let mut intra = vec![0u64; k];
    let mut degree = vec![0u64; k];
    for &(u, v) in graph.edges() {
        let cu = partition.community_of(u);
        if cu == partition.community_of(v) {
            intra[cu] += 1;
        }
        degree[cu] += 1;
        degree[partition.community_of(v)] += 1;
    }
    (intra, degree)
}

/// Newman–Girvan modularity `Q = Σ_c (e_cc − a_c²)`.
///
/// `e_cc` is the fraction of edges with both endpoints in community `c` and
/// `a_c` is the fraction of edge ends (degree sum over `2m`) attached to it.
pub fn modularity(graph: &Graph, partition: &Partition) -> Result<f64, ModularityError> {
    if partition.node_count() != graph.node_count() {
        return Err(ModularityError::PartitionMismatch {
            partition: partition.node_count(),
            graph: graph.node_count(),
        });
    }
    if graph.edge_count() == 0 {
        return Err(ModularityError::NoEdges);
    }
    let m = graph.edge_count() as f64;
    let (intra, degree) = community_totals(graph, partition);
    Ok(intra
        .iter()
        .zip(&degree)
        .map(|(&l, &d)| {
            let a = d as f64 / (2.0 * m);
            l as f64 / m - a * a
        })
        .sum())
}

/// Enumerates every set partition of the nodes and returns one of maximal
/// modularity. Ties go to fewer communities, then to the lexicographically
/// smallest label vector.
pub fn brute_force_best_partition(graph: &Graph) -> Result<(Partition, f64), ModularityError> {
    let n = graph.node_count();
    if n > BRUTE_FORCE_MAX_NODES {
        return Err(ModularityError::TooLarge(n));
    }
    if graph.edge_count() == 0 {
        return Err(ModularityError::NoEdges);
    }

    // Scores are 4m²·Q, kept in integers so ties compare exactly.
    struct Search<'a> {
        graph: &'a Graph,
        four_m: i64,
        labels: Vec<usize>,
        intra: Vec<i64>,
        degree: Vec<i64>,
        best: Option<(i64, usize, Vec<usize>)>,
    }

    impl Search<'_> {
        fn visit(&mut self, node: usize, used: usize) {
            if node == self.labels.len() {
                let score: i64 = (0..used)
                    .map(|c| self.four_m * self.intra[c] - self.degree[c] * self.degree[c])
                    .sum();
                let better = match &self.best {
                    None => true,
                    Some((s, k, _)) => score > *s || (score == *s && used < *k),
                };
                if better {
                    self.best = Some((score, used, self.labels.clone()));
                }
                return;
            }
            let deg = self.graph.degree(node) as i64;
            for c in 0..=used {
                let inner = self
                    .graph
                    .neighbors(node)
                    .iter()
                    .filter(|&&(nb, _)| nb < node && self.labels[nb] == c)
                    .count() as i64;
                self.labels[node] = c;
                self.intra[c] += inner;
                self.degree[c] += deg;
                self.visit(node + 1, used.max(c + 1));
                self.intra[c] -= inner;
                self.degree[c] -= deg;
            }
        }
    }

    let mut search = Search {
        graph,
        four_m: 4 * graph.edge_count() as i64,
        labels: vec![0; n],
        intra: vec![0; n],
        degree: vec![0; n],
        best: None,
    };
    search.visit(0, 0);
    let (_, _, labels) = search.best.expect("at least one partition exists");
    let partition = Partition::from_labels(labels);
    let q = modularity(graph, &partition)?;
    Ok((partition, q))
}

/// `counts[p][t]`: nodes in predicted community `p` and true community `t`.
pub fn confusion_matrix(predicted: &Partition, truth: &Partition) -> Result<Vec<Vec<usize>>, ModularityError> {
    if predicted.node_count() != truth.node_count() {
        return Err(ModularityError::SizeMismatch(
            predicted.node_count(),
            truth.node_count(),
        ));
    }
    let mut counts = vec![vec![0; truth.community_count()]; predicted.community_count()];
    for (&p, &t) in predicted.labels().iter().zip(truth.labels()) {
        counts[p][t] += 1;
    }
    Ok(counts)
}

/// Number of nodes that agree under the best one-to-one matching of
/// predicted to true communities.
pub fn matched_agreement(confusion: &[Vec<usize>]) -> usize {
    let rows = confusion.len();
    let cols = confusion.first().map_or(0, Vec::len);
    let k = rows.max(cols);
    if k == 0 {
        return 0;
    }
    let mut weights = Matrix::new(k, k, 0i64);
    for (r, row) in confusion.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            weights[(r, c)] = v as i64;
        }
    }
    let (total, _) = kuhn_munkres(&weights);
    total as usize
}

/// Fraction of nodes placed in the right community after optimally pairing
/// predicted and true labels. Surplus communities on either side match
/// nothing.
pub fn partition_accuracy(predicted: &Partition, truth: &Partition) -> Result<f64, ModularityError> {
    let confusion = confusion_matrix(predicted, truth)?;
    if predicted.node_count() == 0 {
        return Ok(1.0);
    }
    Ok(matched_agreement(&confusion) as f64 / predicted.node_count() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::barbell;

    #[test]
    fn single_community_is_zero() {
        let g = barbell();
        assert_eq!(modularity(&g, &Partition::single(6)).unwrap(), 0.0);
    }

    #[test]
    fn barbell_two_triangles() {
        let g = barbell();
        let p = Partition::from_labels([0, 0, 0, 1, 1, 1]);
        // 2 · (3/7 − (7/14)²)
        let q = modularity(&g, &p).unwrap();
        assert!((q - 5.0 / 14.0).abs() < 1e-12);
    }

    #[test]
    fn four_cycle_diagonals() {
        let g = Graph::from_index_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let p = Partition::from_labels([0, 1, 0, 1]);
        assert!((modularity(&g, &p).unwrap() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let g = barbell();
        assert_eq!(
            modularity(&g, &Partition::single(5)),
            Err(ModularityError::PartitionMismatch { partition: 5, graph: 6 })
        );
        let empty = Graph::from_index_edges(2, []).unwrap();
        assert_eq!(modularity(&empty, &Partition::single(2)), Err(ModularityError::NoEdges));
        let big = Graph::from_index_edges(13, (0..12).map(|i| (i, i + 1))).unwrap();
        assert_eq!(
            brute_force_best_partition(&big).unwrap_err(),
            ModularityError::TooLarge(13)
        );
    }

    #[test]
    fn oracle_triangle() {
        let g = Graph::from_index_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let (p, q) = brute_force_best_partition(&g).unwrap();
        assert_eq!(p, Partition::single(3));
        assert_eq!(q, 0.0);
    }

    #[test]
    fn oracle_barbell() {
        let (p, q) = brute_force_best_partition(&barbell()).unwrap();
        assert_eq!(p.labels(), &[0, 0, 0, 1, 1, 1]);
        assert!((q - 5.0 / 14.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_two_disjoint_edges() {
        let g = Graph::from_index_edges(4, [(0, 1), (2, 3)]).unwrap();
        let (p, q) = brute_force_best_partition(&g).unwrap();
        for labels in [[0, 0, 0, 0], [0, 0, 1, 1], [0, 1, 2, 3], [0, 1, 0, 1], [0, 0, 1, 2]] {
            let other = modularity(&g, &Partition::from_labels(labels)).unwrap();
            assert!(q >= other);
        }
        assert_eq!(p.labels(), &[0, 0, 1, 1]);
    }

    #[test]
    fn accuracy_relabeled_truth() {
        let truth = Partition::from_labels([0, 0, 1, 1, 2]);
        let predicted = Partition::from_labels([5, 5, 9, 9, 1]);
        assert_eq!(partition_accuracy(&predicted, &truth).unwrap(), 1.0);
    }

    #[test]
    fn accuracy_singletons_against_halves() {
        let truth = Partition::from_labels([0, 0, 0, 0, 0, 1, 1, 1, 1, 1]);
        let predicted = Partition::singletons(10);
        assert_eq!(partition_accuracy(&predicted, &truth).unwrap(), 0.2);
    }

    #[test]
    fn accuracy_one_misplaced_of_34() {
        let truth = Partition::from_labels((0..34).map(|i| i < 17));
        let predicted = Partition::from_labels((0..34).map(|i| i < 17 || i == 20));
        let acc = partition_accuracy(&predicted, &truth).unwrap();
        assert!((acc - 33.0 / 34.0).abs() < 1e-12);
    }

    #[test]
    fn accuracy_size_mismatch() {
        assert_eq!(
            partition_accuracy(&Partition::single(3), &Partition::single(4)),
            Err(ModularityError::SizeMismatch(3, 4))
        );
    }
}
