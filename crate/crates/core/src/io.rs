//! Edge-list input, the JSON decomposition document and DOT export.
//!
//! Edge lists hold one `u v` pair per line; a line with a single label
//! declares a vertex that may be isolated, and lines starting with `#` are
//! comments. The document is written with sorted keys, vertices in level
//! order and edges sorted, so equal decompositions serialize to equal bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::factor::OperatorKind;
use crate::graph::{Graph, MultipartiteGraph};
use crate::oracle::characterising_sequence;
use crate::series::SeriesStatus;

pub const FORMAT_VERSION: u32 = 1;

fn tokens(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (line, fields) in tokens(text) {
        match fields.as_slice() {
            [v] => vertices.push(v.to_string()),
            [u, v] => {
                if u == v {
                    return Err(Error::Validation(format!("line {line}: self-loop on {u:?}")));
                }
                vertices.push(u.to_string());
                vertices.push(v.to_string());
                edges.push((u.to_string(), v.to_string()));
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected 1 or 2 labels, found {}", fields.len()),
                })
            }
        }
    }
    Graph::new(vertices, edges)
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    parse_edge_list(&fs::read_to_string(path)?)
}

/// Parses `upper bottom` lines into a bipartite graph. Each side is sorted
/// by label; the two sides may reuse labels.
pub fn parse_bipartite_edge_list(text: &str) -> Result<MultipartiteGraph> {
    let mut pairs = Vec::new();
    for (line, fields) in tokens(text) {
        match fields.as_slice() {
            [u, b] => pairs.push((u.to_string(), b.to_string())),
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected `upper bottom`, found {} labels", fields.len()),
                })
            }
        }
    }
    let mut upper: Vec<String> = pairs.iter().map(|(u, _)| u.clone()).collect();
    let mut bottom: Vec<String> = pairs.iter().map(|(_, b)| b.clone()).collect();
    for side in [&mut upper, &mut bottom] {
        side.sort();
        side.dedup();
    }
    let edges: Vec<(usize, usize)> = pairs
        .iter()
        .map(|(u, b)| (bottom.binary_search(b).unwrap(), upper.binary_search(u).unwrap()))
        .collect();
    MultipartiteGraph::bipartite(bottom, upper, edges)
}

/// Edge list text for `g`; isolated vertices get a line of their own.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for v in 0..g.vertex_count() {
        if g.neighbours(v).is_empty() {
            let _ = writeln!(out, "{}", g.label(v));
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{} {}", g.label(u), g.label(v));
    }
    out
}

/// Upper/bottom edge list for a bipartite graph.
pub fn write_bipartite_edge_list(h: &MultipartiteGraph) -> String {
    let mut out = String::new();
    for (b, y) in h.edges() {
        let _ = writeln!(out, "{} {}", h.label(y), h.label(b));
    }
    out
}

/// SHA-256 over a canonical rendering of `g`, independent of how the edge
/// list was formatted.
pub fn graph_hash(g: &Graph) -> String {
    let mut hasher = Sha256::new();
    for label in g.labels() {
        hasher.update(b"v ");
        hasher.update(label.as_bytes());
        hasher.update(b"\n");
    }
    for (u, v) in g.edges() {
        hasher.update(format!("e {} {}\n", g.label(u), g.label(v)).as_bytes());
    }
    hex::encode(hasher.finalize())
}

/// SHA-256 over the canonical upper/bottom edge list of a bipartite input.
pub fn bipartite_hash(h: &MultipartiteGraph) -> String {
    let mut hasher = Sha256::new();
    hasher.update(b"bipartite\n");
    hasher.update(write_bipartite_edge_list(h).as_bytes());
    hex::encode(hasher.finalize())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: usize,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub index: usize,
    pub vertices: Vec<VertexRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DocumentMeta {
    pub operator: OperatorKind,
    pub status: SeriesStatus,
    pub source_hash: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionDocument {
    pub edges: Vec<[usize; 2]>,
    pub format_version: u32,
    pub levels: Vec<LevelRecord>,
    pub operator: OperatorKind,
    pub source_hash: String,
    pub status: SeriesStatus,
}

impl DecompositionDocument {
    /// Vertex ids are the vertex indices of `m`; levels at 2 and above carry
    /// their characterising sequence as lists of level-0 labels.
    pub fn new(m: &MultipartiteGraph, meta: &DocumentMeta) -> Self {
        let levels = (0..m.level_count())
            .map(|i| LevelRecord {
                index: i,
                vertices: m
                    .level(i)
                    .map(|v| VertexRecord {
                        id: v,
                        label: m.label(v).to_owned(),
                        sequence: (i >= 2).then(|| {
                            characterising_sequence(m, v)
                                .expect("level >= 2")
                                .0
                                .iter()
                                .map(|o| o.iter().map(|w| m.label(w).to_owned()).collect())
                                .collect()
                        }),
                    })
                    .collect(),
            })
            .collect();
        Self {
            edges: m.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            format_version: FORMAT_VERSION,
            levels,
            operator: meta.operator,
            source_hash: meta.source_hash.clone(),
            status: meta.status,
        }
    }

    pub fn meta(&self) -> DocumentMeta {
        DocumentMeta {
            operator: self.operator,
            status: self.status,
            source_hash: self.source_hash.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        // going through Value sorts every object's keys
        let value = serde_json::to_value(self)?;
        let mut text = serde_json::to_string_pretty(&value)?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text)?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Document(msg));
        if self.format_version != FORMAT_VERSION {
            return bad(format!("unsupported format_version {}", self.format_version));
        }
        if self.levels.len() < 2 {
            return bad(format!("need at least 2 levels, found {}", self.levels.len()));
        }
        let mut next_id = 0;
        for (i, level) in self.levels.iter().enumerate() {
            if level.index != i {
                return bad(format!("level {i} is recorded with index {}", level.index));
            }
            for v in &level.vertices {
                if v.id != next_id {
                    return bad(format!(
                        "vertex {:?} has id {}, expected {next_id}",
                        v.label, v.id
                    ));
                }
                if (i >= 2) != v.sequence.is_some() {
                    return bad(format!(
                        "vertex {:?}: sequence must be present exactly from level 2",
                        v.label
                    ));
                }
                next_id += 1;
            }
        }
        if let Some(e) = self.edges.iter().find(|[u, v]| *u >= next_id || *v >= next_id) {
            return bad(format!("edge {e:?} references an undeclared id"));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.levels.iter().map(|l| l.vertices.len()).sum()
    }

    pub fn to_multipartite(&self) -> Result<MultipartiteGraph> {
        self.validate()?;
        let levels = self
            .levels
            .iter()
            .map(|l| l.vertices.iter().map(|v| v.label.clone()).collect())
            .collect();
        MultipartiteGraph::from_parts(levels, self.edges.iter().map(|&[u, v]| (u, v)))
            .map_err(|e| Error::Document(e.to_string()))
    }
}

/// Serializes `m` as a decomposition document.
pub fn write_decomposition(m: &MultipartiteGraph, meta: &DocumentMeta) -> Result<String> {
    DecompositionDocument::new(m, meta).to_json()
}

/// Recovers the input graph: level 0 gives the vertices and every level-1
/// vertex contributes all pairs of its level-0 neighbours as edges.
pub fn reconstruct_graph(doc: &DecompositionDocument) -> Result<Graph> {
    reconstruct_from_multipartite(&doc.to_multipartite()?)
}

pub fn reconstruct_from_multipartite(m: &MultipartiteGraph) -> Result<Graph> {
    let vertices: Vec<String> = m.level(0).map(|v| m.label(v).to_owned()).collect();
    let mut edges = Vec::new();
    for c in m.level(1) {
        let members: Vec<usize> = m.neighbours_at(c, 0).to_vec();
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                edges.push((m.label(u).to_owned(), m.label(v).to_owned()));
            }
        }
    }
    Graph::new(vertices, edges)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering with one rank per level, bottom level at the bottom.
pub fn to_dot(m: &MultipartiteGraph) -> String {
    let mut out = String::from("graph decomposition {\n  rankdir=BT;\n");
    for i in 0..m.level_count() {
        let _ = writeln!(out, "  subgraph level{i} {{\n    rank=same;");
        for v in m.level(i) {
            let _ = writeln!(out, "    n{v} [label=\"{}\"];", dot_escape(m.label(v)));
        }
        out.push_str("  }\n");
    }
    for (u, v) in m.edges() {
        let _ = writeln!(out, "  n{u} -- n{v};");
    }
    out.push_str("}\n");
    out
}
