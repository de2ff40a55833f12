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

//! Undirected simple graphs, edge masks, partitions and connected components.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::dsu::DisjointSet;

/// Dense node index.
pub type NodeId = usize;
/// Dense edge index.
pub type EdgeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on node {0:?}")]
    SelfLoop(String),
    #[error("duplicate edge {0:?} -- {1:?}")]
    DuplicateEdge(String, String),
    #[error("duplicate node name {0:?}")]
    DuplicateNode(String),
    #[error("node index {0} out of range")]
    NodeOutOfRange(NodeId),
}

/// An immutable undirected simple graph.
///
/// Nodes carry unique external names; edges are stored once as `(u, v)` with
/// `u < v` and referenced from both endpoints' adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
    edges: Vec<(NodeId, NodeId)>,
    adjacency: Vec<Vec<(NodeId, EdgeId)>>,
}

impl Graph {
    /// Builds a graph from node names and index pairs. Edge ids follow the
    /// order of `edges`.
    pub fn from_edges<I>(names: Vec<String>, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut builder = GraphBuilder::with_names(names)?;
        for (u, v) in edges {
            builder.add_edge(u, v)?;
        }
        Ok(builder.build())
    }

    /// Nodes named `"0".."n-1"`.
    pub fn from_index_edges<I>(node_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::from_edges((0..node_count).map(|i| i.to_string()).collect(), edges)
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self, node: NodeId) -> &str {
        &self.names[node]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.index.get(name).copied()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn edge(&self, edge: EdgeId) -> (NodeId, NodeId) {
        self.edges[edge]
    }

    /// `(neighbor, edge id)` pairs incident to `node`.
    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, EdgeId)] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node].len()
    }

    pub fn find_edge(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a].iter().find(|&&(n, _)| n == b).map(|&(_, e)| e)
    }

    pub fn is_connected(&self) -> bool {
        connected_components(self, &EdgeMask::new(self)).community_count() <= 1
    }

    /// The subgraph induced by `nodes`, keeping names. Node `i` of the result
    /// is `nodes[i]` of `self`.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> Graph {
        let mut local = vec![usize::MAX; self.node_count()];
        for (i, &n) in nodes.iter().enumerate() {
            local[n] = i;
        }
        let names = nodes.iter().map(|&n| self.names[n].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| local[u] != usize::MAX && local[v] != usize::MAX)
            .map(|&(u, v)| (local[u], local[v]));
        Graph::from_edges(names, edges).expect("subgraph of a simple graph is simple")
    }
}

/// Incremental construction used by the file loaders.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
    edges: Vec<(NodeId, NodeId)>,
    seen: HashSet<(NodeId, NodeId)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_names(names: Vec<String>) -> Result<Self, GraphError> {
        let mut builder = Self::new();
        for name in names {
            builder.add_node(name)?;
        }
        Ok(builder)
    }

    pub fn add_node(&mut self, name: String) -> Result<NodeId, GraphError> {
        if self.index.contains_key(&name) {
            return Err(GraphError::DuplicateNode(name));
        }
        let id = self.names.len();
        self.index.insert(name.clone(), id);
        self.names.push(name);
        Ok(id)
    }

    /// Returns the id for `name`, creating the node on first sight.
    pub fn intern(&mut self, name: &str) -> NodeId {
        match self.index.get(name) {
            Some(&id) => id,
            None => self.add_node(name.to_owned()).expect("name is new"),
        }
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn contains_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.seen.contains(&(u.min(v), u.max(v)))
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> Result<EdgeId, GraphError> {
        let n = self.names.len();
        if u >= n {
            return Err(GraphError::NodeOutOfRange(u));
        }
        if v >= n {
            return Err(GraphError::NodeOutOfRange(v));
        }
        if u == v {
            return Err(GraphError::SelfLoop(self.names[u].clone()));
        }
        let key = (u.min(v), u.max(v));
        if !self.seen.insert(key) {
            return Err(GraphError::DuplicateEdge(
                self.names[key.0].clone(),
                self.names[key.1].clone(),
            ));
        }
        self.edges.push(key);
        Ok(self.edges.len() - 1)
    }

    pub fn build(self) -> Graph {
        let mut adjacency = vec![Vec::new(); self.names.len()];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            adjacency[u].push((v, e));
            adjacency[v].push((u, e));
        }
        Graph {
            names: self.names,
            index: self.index,
            edges: self.edges,
            adjacency,
        }
    }
}

/// Per-edge removal flags over a specific graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMask {
    removed: Vec<bool>,
}

impl EdgeMask {
    /// A mask with nothing removed.
    pub fn new(graph: &Graph) -> Self {
        Self {
            removed: vec![false; graph.edge_count()],
        }
    }

    /// A mask with the given edges removed.
    pub fn with_removed(graph: &Graph, removed: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut mask = Self::new(graph);
        for e in removed {
            mask.remove(e);
        }
        mask
    }

    pub fn len(&self) -> usize {
        self.removed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.removed.is_empty()
    }

    pub fn remove(&mut self, edge: EdgeId) {
        self.removed[edge] = true;
    }

    pub fn is_removed(&self, edge: EdgeId) -> bool {
        self.removed[edge]
    }

    pub fn removed_count(&self) -> usize {
        self.removed.iter().filter(|&&r| r).count()
    }
}

/// Assignment of every node to one community.
///
/// Labels are kept canonical: dense, and numbered in order of the lowest node
/// id carrying them. Two partitions describing the same grouping therefore
/// compare equal regardless of the labels they were built from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    community_of: Vec<usize>,
    community_count: usize,
}

impl Partition {
    /// Builds a partition from arbitrary per-node labels, relabeling them.
    pub fn from_labels<L: Eq + std::hash::Hash>(labels: impl IntoIterator<Item = L>) -> Self {
        let mut map = HashMap::new();
        let community_of: Vec<usize> = labels
            .into_iter()
            .map(|l| {
                let next = map.len();
                *map.entry(l).or_insert(next)
            })
            .collect();
        Self {
            community_count: map.len(),
            community_of,
        }
    }

    /// Every node in one community.
    pub fn single(node_count: usize) -> Self {
        Self::from_labels(std::iter::repeat_n(0usize, node_count))
    }

    /// Every node alone.
    pub fn singletons(node_count: usize) -> Self {
        Self::from_labels(0..node_count)
    }

    pub fn node_count(&self) -> usize {
        self.community_of.len()
    }

    pub fn community_count(&self) -> usize {
        self.community_count
    }

    pub fn community_of(&self, node: NodeId) -> usize {
        self.community_of[node]
    }

    pub fn labels(&self) -> &[usize] {
        &self.community_of
    }

    /// Community sizes indexed by label.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.community_count];
        for &c in &self.community_of {
            sizes[c] += 1;
        }
        sizes
    }

    /// Members of each community, in node order.
    pub fn communities(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.community_count];
        for (node, &c) in self.community_of.iter().enumerate() {
            out[c].push(node);
        }
        out
    }
}

/// Groups nodes joined by paths of edges not removed by `mask`.
pub fn connected_components(graph: &Graph, mask: &EdgeMask) -> Partition {
    assert_eq!(mask.len(), graph.edge_count(), "mask belongs to another graph");
    let mut sets = DisjointSet::new(graph.node_count());
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        if !mask.is_removed(e) {
            sets.union(u, v);
        }
    }
    Partition::from_labels((0..graph.node_count()).map(|n| sets.find(n)))
}
