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

//! Small bundled graphs with known community structure.

use crate::graph::{Graph, Partition};
use crate::io::{labels_to_partition, load_edge_list, parse_label_file};

/// Zachary's karate club friendship network, members numbered 1 to 34.
pub const KARATE_EDGE_LIST: &str = include_str!("../data/karate.edgelist");
/// Faction each member joined after the club split.
pub const KARATE_TRUTH: &str = include_str!("../data/karate.truth");

/// Zachary's karate club (34 nodes, 78 edges) and its two-faction split.
pub fn karate_club() -> (Graph, Partition) {
    let graph = load_edge_list(KARATE_EDGE_LIST).expect("bundled edge list parses");
    let labels = parse_label_file(KARATE_TRUTH).expect("bundled labels parse");
    let truth = labels_to_partition(graph.names(), &labels).expect("labels cover the graph");
    (graph, truth)
}

/// Two triangles `{0,1,2}` and `{3,4,5}` joined by the bridge `2 -- 3`.
pub fn barbell() -> Graph {
    Graph::from_index_edges(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]).expect("barbell is simple")
}
