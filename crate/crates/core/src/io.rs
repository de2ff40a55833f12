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

//! Readers and writers for edge lists, a GML subset, and community label files.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, GraphBuilder, GraphError, Partition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LoadError {
    #[error("line {line}: expected two node names, got {content:?}")]
    MalformedLine { line: usize, content: String },
    #[error("line {line}: self-loop on {name:?}")]
    SelfLoop { line: usize, name: String },
    #[error("line {line}: duplicate edge {u:?} -- {v:?}")]
    DuplicateEdge { line: usize, u: String, v: String },
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("GML parse error: {0}")]
    Parse(String),
    #[error("edge references unknown node id {0}")]
    DanglingEdge(i64),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
}

/// Reads whitespace-separated `name_u name_v` lines. `#` comments and blank
/// lines are skipped; nodes are numbered in order of first appearance.
pub fn load_edge_list(text: &str) -> Result<Graph, LoadError> {
    let mut builder = GraphBuilder::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let [a, b] = tokens[..] else {
            return Err(LoadError::MalformedLine {
                line,
                content: raw.to_owned(),
            });
        };
        if a == b {
            return Err(LoadError::SelfLoop {
                line,
                name: a.to_owned(),
            });
        }
        let (u, v) = (builder.intern(a), builder.intern(b));
        builder.add_edge(u, v).map_err(|e| match e {
            GraphError::DuplicateEdge(u, v) => LoadError::DuplicateEdge { line, u, v },
            other => unreachable!("unexpected graph error {other}"),
        })?;
    }
    let graph = builder.build();
    if graph.edge_count() == 0 {
        return Err(LoadError::EmptyGraph);
    }
    Ok(graph)
}

/// Writes one `name_u name_v` line per edge in edge-id order.
pub fn write_edge_list(graph: &Graph) -> String {
    let mut out = String::new();
    for &(u, v) in graph.edges() {
        let _ = writeln!(out, "{} {}", graph.name(u), graph.name(v));
    }
    out
}

/// Result of reading a GML file.
#[derive(Debug, Clone)]
pub struct GmlGraph {
    pub graph: Graph,
    /// Present when every node carries a `value`.
    pub truth: Option<Partition>,
    /// Repeated edges that were dropped.
    pub duplicate_edges: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum GmlValue {
    Scalar(String),
    List(Vec<(String, GmlValue)>),
}

impl GmlValue {
    fn as_scalar(&self) -> Option<&str> {
        match self {
            GmlValue::Scalar(s) => Some(s),
            GmlValue::List(_) => None,
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<String>, LoadError> {
    let mut tokens = Vec::new();
    for line in text.lines() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        let mut chars = line.chars().peekable();
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
            } else if c == '[' || c == ']' {
                tokens.push(c.to_string());
                chars.next();
            } else if c == '"' {
                chars.next();
                let mut s = String::from('"');
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(ch) => s.push(ch),
                        None => return Err(LoadError::Parse("unterminated string".into())),
                    }
                }
                tokens.push(s);
            } else {
                let mut s = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_whitespace() || ch == '[' || ch == ']' {
                        break;
                    }
                    s.push(ch);
                    chars.next();
                }
                tokens.push(s);
            }
        }
    }
    Ok(tokens)
}

fn parse_list(tokens: &[String], pos: &mut usize, nested: bool) -> Result<Vec<(String, GmlValue)>, LoadError> {
    let mut items = Vec::new();
    loop {
        let Some(key) = tokens.get(*pos) else {
            if nested {
                return Err(LoadError::Parse("unbalanced brackets: missing ']'".into()));
            }
            return Ok(items);
        };
        *pos += 1;
        match key.as_str() {
            "]" if nested => return Ok(items),
            "]" => return Err(LoadError::Parse("unbalanced brackets: stray ']'".into())),
            "[" => return Err(LoadError::Parse("'[' without a key".into())),
            _ => {}
        }
        let value = match tokens.get(*pos).map(String::as_str) {
            None => return Err(LoadError::Parse(format!("key {key:?} has no value"))),
            Some("[") => {
                *pos += 1;
                GmlValue::List(parse_list(tokens, pos, true)?)
            }
            Some("]") => return Err(LoadError::Parse(format!("key {key:?} has no value"))),
            Some(v) => {
                *pos += 1;
                GmlValue::Scalar(v.to_owned())
            }
        };
        items.push((key.clone(), value));
    }
}

fn scalar<'a>(items: &'a [(String, GmlValue)], key: &str) -> Option<&'a str> {
    items.iter().find(|(k, _)| k == key).and_then(|(_, v)| v.as_scalar())
}

fn parse_int(s: &str, what: &str) -> Result<i64, LoadError> {
    s.parse::<i64>()
        .or_else(|_| match s.parse::<f64>() {
            Ok(f) if f.fract() == 0.0 => Ok(f as i64),
            _ => Err(()),
        })
        .map_err(|_| LoadError::Parse(format!("{what} is not an integer: {s:?}")))
}

fn unquote(s: &str) -> &str {
    s.strip_prefix('"').unwrap_or(s)
}

/// Reads the `graph [ node [...] edge [...] ]` subset of GML.
///
/// Node names come from `label` when present, otherwise from `id`. Integer or
/// string `value` fields on every node become the ground-truth partition.
pub fn load_gml(text: &str) -> Result<GmlGraph, LoadError> {
    let tokens = tokenize(text)?;
    let mut pos = 0;
    let top = parse_list(&tokens, &mut pos, false)?;
    let graph_items = top
        .iter()
        .find_map(|(k, v)| match (k.as_str(), v) {
            ("graph", GmlValue::List(items)) => Some(items),
            _ => None,
        })
        .ok_or_else(|| LoadError::Parse("no graph [ ... ] block".into()))?;

    let mut builder = GraphBuilder::new();
    let mut ids: HashMap<i64, usize> = HashMap::new();
    let mut values: Vec<Option<String>> = Vec::new();
    for (key, value) in graph_items {
        if key != "node" {
            continue;
        }
        let GmlValue::List(fields) = value else {
            return Err(LoadError::Parse("node is not a list".into()));
        };
        let id_text = scalar(fields, "id").ok_or_else(|| LoadError::Parse("node without id".into()))?;
        let id = parse_int(id_text, "node id")?;
        let name = scalar(fields, "label").map_or_else(|| id.to_string(), |l| unquote(l).to_owned());
        let node = builder.add_node(name).map_err(|e| LoadError::Parse(e.to_string()))?;
        if ids.insert(id, node).is_some() {
            return Err(LoadError::Parse(format!("duplicate node id {id}")));
        }
        values.push(scalar(fields, "value").map(|v| unquote(v).to_owned()));
    }

    let mut duplicate_edges = 0;
    for (key, value) in graph_items {
        if key != "edge" {
            continue;
        }
        let GmlValue::List(fields) = value else {
            return Err(LoadError::Parse("edge is not a list".into()));
        };
        let endpoint = |k: &str| -> Result<usize, LoadError> {
            let raw = scalar(fields, k).ok_or_else(|| LoadError::Parse(format!("edge without {k}")))?;
            let id = parse_int(raw, k)?;
            ids.get(&id).copied().ok_or(LoadError::DanglingEdge(id))
        };
        let (u, v) = (endpoint("source")?, endpoint("target")?);
        if builder.contains_edge(u, v) {
            duplicate_edges += 1;
            continue;
        }
        builder.add_edge(u, v).map_err(|e| match e {
            GraphError::SelfLoop(name) => LoadError::SelfLoop { line: 0, name },
            other => LoadError::Parse(other.to_string()),
        })?;
    }

    let truth = if !values.is_empty() && values.iter().all(Option::is_some) {
        Some(Partition::from_labels(values.into_iter().flatten()))
    } else {
        None
    };
    Ok(GmlGraph {
        graph: builder.build(),
        truth,
        duplicate_edges,
    })
}

/// Reads `name label` lines (`#` comments, blank lines skipped).
pub fn parse_label_file(text: &str) -> Result<Vec<(String, String)>, LoadError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let [name, label] = tokens[..] else {
            return Err(LoadError::MalformedLine {
                line: i + 1,
                content: raw.to_owned(),
            });
        };
        out.push((name.to_owned(), label.to_owned()));
    }
    Ok(out)
}

/// Aligns `(name, label)` pairs with `names`. Every name must be labeled
/// exactly once and no foreign names may appear.
pub fn labels_to_partition(names: &[String], labels: &[(String, String)]) -> Result<Partition, LoadError> {
    let position: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut assigned: Vec<Option<&str>> = vec![None; names.len()];
    for (name, label) in labels {
        let &i = position
            .get(name.as_str())
            .ok_or_else(|| LoadError::UnknownNode(name.clone()))?;
        if assigned[i].replace(label).is_some() {
            return Err(LoadError::Parse(format!("node {name:?} labeled twice")));
        }
    }
    if let Some(missing) = assigned.iter().position(Option::is_none) {
        return Err(LoadError::UnknownNode(names[missing].clone()));
    }
    Ok(Partition::from_labels(assigned.into_iter().flatten()))
}
