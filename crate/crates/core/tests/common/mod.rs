//! Shared fixtures and brute-force oracles for the integration tests.
//!
//! The oracles here work on `BTreeSet`s straight from the definitions and do
//! not call into the library's enumeration code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use factor_series::{CandidateSet, Graph, MultipartiteGraph, OperatorKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Set = BTreeSet<usize>;

pub fn graph_from_cliques(cliques: &[&[&str]]) -> Graph {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for c in cliques {
        vertices.extend(c.iter().map(|v| v.to_string()));
        for (i, u) in c.iter().enumerate() {
            for v in &c[i + 1..] {
                edges.push((u.to_string(), v.to_string()));
            }
        }
    }
    Graph::new(vertices, edges).unwrap()
}

pub fn triangle() -> Graph {
    graph_from_cliques(&[&["a", "b", "c"]])
}

/// Two triangles sharing the edge `bc`.
pub fn g2() -> Graph {
    graph_from_cliques(&[&["a", "b", "c"], &["b", "c", "d"]])
}

/// Cliques {1,2,3,4}, {1,2,3,5}, {1,2,6}.
pub fn g3() -> Graph {
    graph_from_cliques(&[&["1", "2", "3", "4"], &["1", "2", "3", "5"], &["1", "2", "6"]])
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let labels: Vec<String> = (0..n).map(|i| format!("v{i:02}")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((labels[i].clone(), labels[j].clone()));
            }
        }
    }
    Graph::new(labels.clone(), edges).unwrap()
}

pub fn random_connected_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    loop {
        let g = random_graph(rng, n, p);
        if g.is_connected() {
            return g;
        }
    }
}

/// The fixed random corpus: connected graphs on 4..=12 vertices with edge
/// probability cycling through 0.3, 0.5 and 0.7.
pub fn corpus(count: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ps = [0.3, 0.5, 0.7];
    (0..count)
        .map(|i| {
            let n = rng.gen_range(4..=12);
            random_connected_graph(&mut rng, n, ps[i % 3])
        })
        .collect()
}

/// Random bipartite graph with 1..=max_bottom bottom and 1..=max_upper upper vertices.
pub fn random_bipartite(
    rng: &mut impl Rng,
    max_bottom: usize,
    max_upper: usize,
    p: f64,
) -> MultipartiteGraph {
    let nb = rng.gen_range(1..=max_bottom);
    let nu = rng.gen_range(1..=max_upper);
    let bottom = (0..nb).map(|i| format!("b{i}")).collect();
    let upper = (0..nu).map(|i| format!("u{i}")).collect();
    let mut edges = Vec::new();
    for b in 0..nb {
        for u in 0..nu {
            if rng.gen_bool(p) {
                edges.push((b, u));
            }
        }
    }
    MultipartiteGraph::bipartite(bottom, upper, edges).unwrap()
}

/// Maximal cliques by testing every vertex subset.
pub fn brute_force_cliques(g: &Graph) -> Vec<Set> {
    let n = g.vertex_count();
    assert!(n <= 20, "brute force is for small graphs");
    let is_clique = |mask: u32| {
        (0..n).all(|u| {
            mask & (1 << u) == 0 || (0..n).all(|v| v == u || mask & (1 << v) == 0 || g.has_edge(u, v))
        })
    };
    let cliques: Vec<u32> = (1u32..1 << n).filter(|&m| is_clique(m)).collect();
    let mut out: Vec<Set> = cliques
        .iter()
        .filter(|&&m| (0..n).all(|v| m & (1 << v) != 0 || !is_clique(m | (1 << v))))
        .map(|&m| (0..n).filter(|v| m & (1 << v) != 0).collect())
        .collect();
    out.sort();
    out
}

fn neighbours(m: &MultipartiteGraph, v: usize) -> Set {
    (0..m.vertex_count()).filter(|&w| m.has_edge(v, w)).collect()
}

fn at_level(m: &MultipartiteGraph, s: &Set, i: usize) -> Set {
    s.iter().copied().filter(|&v| m.level_of(v) == i).collect()
}

fn meet(sets: impl Iterator<Item = Set>) -> Set {
    sets.reduce(|a, b| a.intersection(&b).copied().collect())
        .unwrap_or_default()
}

/// Whether the seed `upper` is admitted by `op`, written out case by case.
pub fn admits(m: &MultipartiteGraph, op: OperatorKind, upper: &Set) -> bool {
    let k = m.level_count();
    if upper.len() < 2 {
        return false;
    }
    let lower = meet(upper.iter().map(|&y| neighbours(m, y)));
    let common_at = |i: usize| meet(upper.iter().map(|&y| at_level(m, &neighbours(m, y), i))).len();
    let all_equal_at = |i: usize| {
        let first = at_level(m, &neighbours(m, *upper.iter().next().unwrap()), i);
        upper.iter().all(|&y| at_level(m, &neighbours(m, y), i) == first)
    };
    if lower.len() < 2 {
        return false;
    }
    match op {
        OperatorKind::Weak => true,
        OperatorKind::Factor => common_at(k - 2) >= 2,
        OperatorKind::Clean => match k {
            2 => true,
            3 => common_at(1) >= 2 && common_at(0) >= 2,
            4 => common_at(2) >= 2 && common_at(1) >= 2 && all_equal_at(0),
            _ => common_at(k - 2) >= 2 && all_equal_at(k - 3) && common_at(1) >= 2,
        },
    }
}

/// Every member of the family as `(upper, lower)`, by enumerating all
/// subsets of the top level.
pub fn brute_force_family(m: &MultipartiteGraph, op: OperatorKind) -> Vec<(Set, Set)> {
    let top: Vec<usize> = m.level(m.top_level()).collect();
    assert!(top.len() <= 16, "brute force is for small top levels");
    let mut out: Vec<(Set, Set)> = (0u32..1 << top.len())
        .map(|mask| {
            top.iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &y)| y)
                .collect::<Set>()
        })
        .filter(|upper| admits(m, op, upper))
        .map(|upper| {
            let lower = meet(upper.iter().map(|&y| neighbours(m, y)));
            (upper, lower)
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn brute_force_maximal(family: &[(Set, Set)]) -> Vec<(Set, Set)> {
    let whole: Vec<Set> = family
        .iter()
        .map(|(u, l)| u.union(l).copied().collect())
        .collect();
    let mut out: Vec<(Set, Set)> = family
        .iter()
        .enumerate()
        .filter(|(i, _)| !whole.iter().any(|w| whole[*i].is_subset(w) && whole[*i] != *w))
        .map(|(_, x)| x.clone())
        .collect();
    out.sort();
    out
}

pub fn as_pairs(family: &[CandidateSet]) -> Vec<(Set, Set)> {
    let mut out: Vec<(Set, Set)> = family
        .iter()
        .map(|c| (c.upper().iter().collect(), c.lower().iter().collect()))
        .collect();
    out.sort();
    out
}

/// Every graph of the series of `op` from `start`, up to `max_levels` levels.
/// Iteration stops once the top level exceeds `max_top`, since the weak and
/// factor series can grow without bound.
pub fn series_graphs(
    start: MultipartiteGraph,
    op: OperatorKind,
    max_levels: usize,
    max_top: usize,
) -> Vec<MultipartiteGraph> {
    let mut out = vec![start];
    loop {
        let last = out.last().unwrap();
        if last.level_count() >= max_levels || last.level(last.top_level()).len() > max_top {
            break;
        }
        match factor_series::factorise(last, op).unwrap() {
            factor_series::StepResult::Effective { graph, .. } => out.push(graph),
            factor_series::StepResult::NotEffective => break,
        }
    }
    out
}

/// `O'` by closing the cliques and `V(G)` under pairwise intersection.
pub fn brute_force_intersections(g: &Graph) -> BTreeSet<Set> {
    let cliques = brute_force_cliques(g);
    let mut all: BTreeSet<Set> = cliques.iter().cloned().collect();
    all.insert((0..g.vertex_count()).collect());
    loop {
        let next: Vec<Set> = all
            .iter()
            .flat_map(|a| {
                cliques
                    .iter()
                    .map(move |c| a.intersection(c).copied().collect::<Set>())
            })
            .filter(|s| !all.contains(s))
            .collect();
        if next.is_empty() {
            return all;
        }
        all.extend(next);
    }
}

/// `O`: members of `O'` with at least two vertices that are the
/// intersection of at least two distinct maximal cliques.
pub fn brute_force_nonsimple(g: &Graph) -> Vec<Set> {
    let cliques = brute_force_cliques(g);
    brute_force_intersections(g)
        .into_iter()
        .filter(|o| {
            let containing: Vec<&Set> = cliques.iter().filter(|c| o.is_subset(c)).collect();
            o.len() >= 2 && containing.len() >= 2 && meet(containing.into_iter().cloned()) == *o
        })
        .collect()
}

/// `counts[m - 1]` is the number of strict-inclusion chains with `m` elements.
pub fn brute_force_chain_counts(elements: &[Set]) -> Vec<usize> {
    fn extend(elements: &[Set], last: usize, len: usize, counts: &mut Vec<usize>) {
        if counts.len() < len {
            counts.push(0);
        }
        counts[len - 1] += 1;
        for (j, e) in elements.iter().enumerate() {
            if elements[last].is_subset(e) && elements[last] != *e {
                extend(elements, j, len + 1, counts);
            }
        }
    }
    let mut counts = Vec::new();
    for i in 0..elements.len() {
        extend(elements, i, 1, &mut counts);
    }
    counts
}

/// Levels from 1 up, each vertex as its label and sorted neighbour labels,
/// dropping level-0 neighbours that are not in `bottom`.
pub fn upper_view(m: &MultipartiteGraph, bottom: &BTreeSet<String>) -> Vec<Vec<(String, Vec<String>)>> {
    (1..m.level_count())
        .map(|i| {
            m.level(i)
                .map(|v| {
                    let mut nbrs: Vec<String> = m
                        .neighbours(v)
                        .iter()
                        .filter(|&w| m.level_of(w) > 0 || bottom.contains(m.label(w)))
                        .map(|w| m.label(w).to_owned())
                        .collect();
                    nbrs.sort();
                    (m.label(v).to_owned(), nbrs)
                })
                .collect()
        })
        .collect()
}
