//! Simple graphs and leveled multipartite graphs.
//!
//! Both types are immutable once built. Vertices are addressed by dense
//! indices; in a [`MultipartiteGraph`] every level occupies a contiguous
//! index range and levels are stored bottom-up, so level 0 always starts at
//! index 0.

use std::collections::{BTreeSet, HashMap};
use std::ops::Range;

use crate::bitset::VertexSet;
use crate::error::{invalid, Error, Result};

pub type VertexId = usize;

/// A finite simple undirected graph over string labels.
///
/// Vertices are kept in ascending label order, which fixes their indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    adjacency: Vec<VertexSet>,
}

impl Graph {
    /// Builds a graph from declared vertices and edges. Endpoints not in
    /// `vertices` are rejected, as are self-loops. Repeated edges collapse.
    pub fn new<V, E, S, T>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = S>,
        S: Into<String>,
        E: IntoIterator<Item = (T, T)>,
        T: AsRef<str>,
    {
        let labels: BTreeSet<String> = vertices.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(invalid("graph has no vertices"));
        }
        let labels: Vec<String> = labels.into_iter().collect();
        let index: HashMap<String, VertexId> =
            labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        let mut adjacency = vec![VertexSet::new(); labels.len()];
        for (u, v) in edges {
            let (u, v) = (u.as_ref(), v.as_ref());
            if u == v {
                return Err(Error::Validation(format!("self-loop on {u:?}")));
            }
            let iu = *index
                .get(u)
                .ok_or_else(|| invalid(format!("undeclared vertex {u:?}")))?;
            let iv = *index
                .get(v)
                .ok_or_else(|| invalid(format!("undeclared vertex {v:?}")))?;
            adjacency[iu].insert(iv);
            adjacency[iv].insert(iu);
        }
        Ok(Self {
            labels,
            index,
            adjacency,
        })
    }

    /// Builds a graph whose vertex set is exactly the edge endpoints.
    pub fn from_edges<E, T>(edges: E) -> Result<Self>
    where
        E: IntoIterator<Item = (T, T)>,
        T: AsRef<str>,
    {
        let edges: Vec<(String, String)> = edges
            .into_iter()
            .map(|(u, v)| (u.as_ref().to_owned(), v.as_ref().to_owned()))
            .collect();
        let vertices: Vec<String> = edges.iter().flat_map(|(u, v)| [u.clone(), v.clone()]).collect();
        Self::new(vertices, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    pub fn neighbours(&self, v: VertexId) -> &VertexSet {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency[u].contains(v)
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::range(0, self.vertex_count())
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&v| v > u).map(move |v| (u, v)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    pub fn is_clique(&self, set: &VertexSet) -> bool {
        set.iter()
            .all(|v| set.difference(&self.adjacency[v]).iter().all(|w| w == v))
    }

    /// Resolves labels to a vertex set.
    pub fn set_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<VertexSet> {
        labels
            .iter()
            .map(|l| {
                self.index_of(l.as_ref())
                    .ok_or_else(|| invalid(format!("unknown vertex {:?}", l.as_ref())))
            })
            .collect()
    }

    pub fn labels_of(&self, set: &VertexSet) -> Vec<String> {
        set.iter().map(|v| self.labels[v].clone()).collect()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = VertexSet::new();
        let mut stack = vec![0];
        seen.insert(0);
        while let Some(v) = stack.pop() {
            for w in &self.adjacency[v] {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == self.vertex_count()
    }
}

/// A k-partite graph (k >= 2) with ordered levels `V_0 .. V_{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultipartiteGraph {
    labels: Vec<String>,
    level_of: Vec<usize>,
    // level i spans starts[i]..starts[i + 1]
    starts: Vec<usize>,
    level_masks: Vec<VertexSet>,
    adjacency: Vec<VertexSet>,
}

impl MultipartiteGraph {
    /// Builds a graph from per-level label lists and edges over global
    /// indices (level 0 first, then level 1, ...).
    pub fn from_parts<E>(levels: Vec<Vec<String>>, edges: E) -> Result<Self>
    where
        E: IntoIterator<Item = (VertexId, VertexId)>,
    {
        if levels.len() < 2 {
            return Err(invalid(format!("need at least 2 levels, got {}", levels.len())));
        }
        if let Some(i) = levels.iter().position(Vec::is_empty) {
            return Err(invalid(format!("level {i} is empty")));
        }
        let mut starts = vec![0];
        let mut labels = Vec::new();
        let mut level_of = Vec::new();
        for (i, level) in levels.into_iter().enumerate() {
            level_of.extend(std::iter::repeat_n(i, level.len()));
            labels.extend(level);
            starts.push(labels.len());
        }
        let level_masks = starts.windows(2).map(|w| VertexSet::range(w[0], w[1])).collect();
        let mut adjacency = vec![VertexSet::new(); labels.len()];
        for (u, v) in edges {
            if u >= labels.len() || v >= labels.len() {
                return Err(invalid(format!("edge ({u}, {v}) references an unknown vertex")));
            }
            if level_of[u] == level_of[v] {
                return Err(invalid(format!(
                    "edge ({:?}, {:?}) lies within level {}",
                    labels[u], labels[v], level_of[u]
                )));
            }
            adjacency[u].insert(v);
            adjacency[v].insert(u);
        }
        Ok(Self {
            labels,
            level_of,
            starts,
            level_masks,
            adjacency,
        })
    }

    /// Two-level graph with `bottom` at level 0 and `upper` at level 1;
    /// edges are `(bottom index, upper index)` pairs local to each side.
    pub fn bipartite<E>(bottom: Vec<String>, upper: Vec<String>, edges: E) -> Result<Self>
    where
        E: IntoIterator<Item = (usize, usize)>,
    {
        let offset = bottom.len();
        let edges: Vec<_> = edges
            .into_iter()
            .map(|(b, u)| {
                if b >= offset || u >= upper.len() {
                    Err(invalid(format!("bipartite edge ({b}, {u}) out of range")))
                } else {
                    Ok((b, offset + u))
                }
            })
            .collect::<Result<_>>()?;
        Self::from_parts(vec![bottom, upper], edges)
    }

    pub fn level_count(&self) -> usize {
        self.starts.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn level(&self, i: usize) -> Range<VertexId> {
        self.starts[i]..self.starts[i + 1]
    }

    pub fn level_set(&self, i: usize) -> &VertexSet {
        &self.level_masks[i]
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.starts.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn top_level(&self) -> usize {
        self.level_count() - 1
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn labels_of(&self, set: &VertexSet) -> Vec<String> {
        set.iter().map(|v| self.labels[v].clone()).collect()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn level_of(&self, v: VertexId) -> usize {
        self.level_of[v]
    }

    /// Position of `v` inside its own level.
    pub fn rank(&self, v: VertexId) -> usize {
        v - self.starts[self.level_of[v]]
    }

    pub fn neighbours(&self, v: VertexId) -> &VertexSet {
        &self.adjacency[v]
    }

    /// `N_i(v)` without bounds checking beyond slice indexing.
    pub fn neighbours_at(&self, v: VertexId, i: usize) -> VertexSet {
        self.adjacency[v].intersection(&self.level_masks[i])
    }

    /// `N_i(x) = N(x) ∩ V_i`.
    pub fn neighbourhood_at_level(&self, x: VertexId, i: usize) -> Result<VertexSet> {
        if x >= self.vertex_count() {
            return Err(invalid(format!("unknown vertex {x}")));
        }
        if i >= self.level_count() {
            return Err(invalid(format!(
                "level {i} out of range for a {}-level graph",
                self.level_count()
            )));
        }
        Ok(self.neighbours_at(x, i))
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency[u].contains(v)
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&v| v > u).map(move |v| (u, v)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// Indices of the vertices of level `i` carrying `label`.
    pub fn find(&self, i: usize, label: &str) -> Option<VertexId> {
        self.level(i).find(|&v| self.labels[v] == label)
    }

    /// Returns a copy extended by one level. Each new vertex is adjacent to
    /// exactly the given neighbour set; existing adjacency is untouched.
    pub fn append_level(&self, new_vertices: Vec<(String, VertexSet)>) -> Result<Self> {
        if new_vertices.is_empty() {
            return Err(invalid("cannot append an empty level"));
        }
        let n = self.vertex_count();
        let mut out = self.clone();
        let level = self.level_count();
        for (offset, (label, ns)) in new_vertices.into_iter().enumerate() {
            if let Some(bad) = ns.iter().find(|&w| w >= n) {
                return Err(invalid(format!("neighbour {bad} of {label:?} is not a vertex")));
            }
            let v = n + offset;
            for w in &ns {
                out.adjacency[w].insert(v);
            }
            out.adjacency.push(ns);
            out.labels.push(label);
            out.level_of.push(level);
        }
        out.starts.push(out.labels.len());
        out.level_masks.push(VertexSet::range(n, out.labels.len()));
        Ok(out)
    }

    /// Drops the top level and every edge incident to it. `None` when only
    /// two levels remain.
    pub fn without_top_level(&self) -> Option<Self> {
        if self.level_count() <= 2 {
            return None;
        }
        let keep = self.starts[self.level_count() - 1];
        let mut out = self.clone();
        out.labels.truncate(keep);
        out.level_of.truncate(keep);
        out.starts.pop();
        out.level_masks.pop();
        out.adjacency.truncate(keep);
        let mask = VertexSet::range(0, keep);
        for ns in &mut out.adjacency {
            ns.intersect_with(&mask);
        }
        Some(out)
    }

    /// Copy without the edge `uv`; used to build negative controls.
    pub fn without_edge(&self, u: VertexId, v: VertexId) -> Self {
        let mut out = self.clone();
        out.adjacency[u].remove(v);
        out.adjacency[v].remove(u);
        out
    }
}
