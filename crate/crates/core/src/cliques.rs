//! Maximal cliques and the vertex-clique incidence graph.

use crate::bitset::VertexSet;
use crate::error::{invalid, Result};
use crate::graph::{Graph, MultipartiteGraph};

/// The maximal cliques of a graph, sorted lexicographically.
#[derive(Clone, Debug)]
pub struct CliqueFamily<'g> {
    graph: &'g Graph,
    cliques: Vec<VertexSet>,
}

impl<'g> CliqueFamily<'g> {
    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn cliques(&self) -> &[VertexSet] {
        &self.cliques
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    /// Cliques as sorted label lists.
    pub fn labelled(&self) -> Vec<Vec<String>> {
        self.cliques.iter().map(|c| self.graph.labels_of(c)).collect()
    }

    pub fn into_sets(self) -> Vec<VertexSet> {
        self.cliques
    }
}

/// Enumerates the inclusion-maximal cliques with pivoted Bron–Kerbosch.
/// Isolated vertices come out as singleton cliques.
pub fn maximal_cliques(g: &Graph) -> Result<CliqueFamily<'_>> {
    if g.vertex_count() == 0 {
        return Err(invalid("graph has no vertices"));
    }
    let mut cliques = Vec::new();
    expand(
        g,
        &mut VertexSet::new(),
        g.vertices(),
        VertexSet::new(),
        &mut cliques,
    );
    cliques.sort();
    Ok(CliqueFamily { graph: g, cliques })
}

fn expand(
    g: &Graph,
    current: &mut VertexSet,
    mut candidates: VertexSet,
    mut excluded: VertexSet,
    out: &mut Vec<VertexSet>,
) {
    if candidates.is_empty() {
        if excluded.is_empty() {
            out.push(current.clone());
        }
        return;
    }
    // pivot maximising |candidates ∩ N(u)|
    let pivot = candidates
        .iter()
        .chain(excluded.iter())
        .max_by_key(|&u| candidates.intersection(g.neighbours(u)).len())
        .expect("candidates is non-empty");
    for v in candidates.difference(g.neighbours(pivot)).iter() {
        let ns = g.neighbours(v);
        current.insert(v);
        expand(
            g,
            current,
            candidates.intersection(ns),
            excluded.intersection(ns),
            out,
        );
        current.remove(v);
        candidates.remove(v);
        excluded.insert(v);
    }
}

pub fn clique_label(g: &Graph, clique: &VertexSet) -> String {
    format!("K:{}", g.labels_of(clique).join(","))
}

/// `B(G)`: level 0 holds the vertices of `g`, level 1 its maximal cliques,
/// with an edge between a vertex and every clique containing it.
pub fn vertex_clique_incidence(g: &Graph) -> Result<MultipartiteGraph> {
    let family = maximal_cliques(g)?;
    let bottom = g.labels().to_vec();
    let upper = family.cliques().iter().map(|c| clique_label(g, c)).collect();
    let edges: Vec<_> = family
        .cliques()
        .iter()
        .enumerate()
        .flat_map(|(j, c)| c.iter().map(move |v| (v, j)))
        .collect();
    MultipartiteGraph::bipartite(bottom, upper, edges)
}

/// Bipartite complement of a perfect matching: upper `u1..un`, bottom
/// `b1..bn`, edge `u_i b_j` iff `i != j`.
pub fn anti_matching(n: usize) -> Result<MultipartiteGraph> {
    if n < 2 {
        return Err(invalid(format!("anti-matching needs n >= 2, got {n}")));
    }
    let bottom = (1..=n).map(|j| format!("b{j}")).collect();
    let upper = (1..=n).map(|i| format!("u{i}")).collect();
    let edges: Vec<_> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (j, i)))
        .collect();
    MultipartiteGraph::bipartite(bottom, upper, edges)
}
