//! Candidate families and the one-step factorisation operator.
//!
//! For a k-level graph, every candidate is a set `X = S ∪ L` where the seed
//! `S` is a subset of the top level `V_{k-1}` with at least two members and
//! `L` is the common neighbourhood of `S`, which necessarily lies in levels
//! `0..=k-2`. The three operators differ only in which seeds they admit:
//!
//! * `Weak`: `|L| >= 2`.
//! * `Factor`: additionally `|L ∩ V_{k-2}| >= 2`.
//! * `Clean`: level-dependent rules; for `k = 4` all seeds must share the
//!   same `N_0`, for `k >= 5` the same `N_{k-3}`.
//!
//! Every admission rule on `L` is anti-monotone in the seed (a larger seed
//! has a smaller `L`) and the equal-neighbourhood rules are hereditary, so
//! a seed can always be closed inside its equivalence class without leaving
//! the family. That is what makes [`maximal_candidate_family`] cheap: the
//! maximal elements are exactly the class-closed seeds.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{invalid, Error, Result};
use crate::graph::{MultipartiteGraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Weak,
    Factor,
    Clean,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 3] = [OperatorKind::Weak, OperatorKind::Factor, OperatorKind::Clean];

    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::Weak => "weak",
            OperatorKind::Factor => "factor",
            OperatorKind::Clean => "clean",
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weak" => Ok(OperatorKind::Weak),
            "factor" => Ok(OperatorKind::Factor),
            "clean" => Ok(OperatorKind::Clean),
            other => Err(invalid(format!("unknown operator {other:?}"))),
        }
    }
}

/// One member `X = upper ∪ lower` of a candidate family.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidateSet {
    upper: VertexSet,
    lower: VertexSet,
}

impl CandidateSet {
    /// The candidate generated by `seed`, a subset of the top level.
    pub fn from_seed(m: &MultipartiteGraph, seed: &VertexSet) -> Result<Self> {
        let top = m.level_set(m.top_level());
        if seed.is_empty() || !seed.is_subset(top) {
            return Err(invalid("seed must be a non-empty subset of the top level"));
        }
        Ok(Self {
            upper: seed.clone(),
            lower: common_neighbourhood(m, seed),
        })
    }

    pub fn upper(&self) -> &VertexSet {
        &self.upper
    }

    pub fn lower(&self) -> &VertexSet {
        &self.lower
    }

    pub fn members(&self) -> VertexSet {
        self.upper.union(&self.lower)
    }

    pub fn lower_at(&self, m: &MultipartiteGraph, i: usize) -> VertexSet {
        self.lower.intersection(m.level_set(i))
    }

    /// At least two vertices on each side.
    pub fn is_non_simple(&self) -> bool {
        self.upper.has_at_least(2) && self.lower.has_at_least(2)
    }
}

fn common_neighbourhood(m: &MultipartiteGraph, seed: &VertexSet) -> VertexSet {
    let mut it = seed.iter();
    let mut acc = it.next().map(|y| m.neighbours(y).clone()).unwrap_or_default();
    for y in it {
        acc.intersect_with(m.neighbours(y));
    }
    acc
}

/// Outcome of a single factorisation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepResult {
    Effective {
        graph: MultipartiteGraph,
        level: Vec<CandidateSet>,
    },
    NotEffective,
}

impl StepResult {
    pub fn is_effective(&self) -> bool {
        matches!(self, StepResult::Effective { .. })
    }
}

/// Admission rules of one operator on a graph with `k` levels.
struct Rules<'a> {
    m: &'a MultipartiteGraph,
    op: OperatorKind,
    k: usize,
}

impl<'a> Rules<'a> {
    fn new(m: &'a MultipartiteGraph, op: OperatorKind) -> Result<Self> {
        let k = m.level_count();
        if k < 2 {
            return Err(invalid("factorisation needs at least 2 levels"));
        }
        Ok(Self { m, op, k })
    }

    fn at_least_two_at(&self, lower: &VertexSet, level: usize) -> bool {
        lower.intersection(self.m.level_set(level)).has_at_least(2)
    }

    /// Cardinality conditions on the common neighbourhood.
    fn admits_lower(&self, lower: &VertexSet) -> bool {
        if !lower.has_at_least(2) {
            return false;
        }
        let k = self.k;
        match (self.op, k) {
            (OperatorKind::Weak, _) => true,
            (OperatorKind::Factor, _) => self.at_least_two_at(lower, k - 2),
            (OperatorKind::Clean, 2) => true,
            (OperatorKind::Clean, 3) => self.at_least_two_at(lower, 1) && self.at_least_two_at(lower, 0),
            (OperatorKind::Clean, _) => self.at_least_two_at(lower, k - 2) && self.at_least_two_at(lower, 1),
        }
    }

    /// The level whose neighbourhoods must agree across a seed, if any.
    fn equal_level(&self) -> Option<usize> {
        match (self.op, self.k) {
            (OperatorKind::Clean, 4) => Some(0),
            (OperatorKind::Clean, k) if k >= 5 => Some(k - 3),
            _ => None,
        }
    }

    /// Top-level vertices grouped into classes whose members may share a seed.
    fn classes(&self) -> Vec<Vec<VertexId>> {
        let top = self.m.level(self.m.top_level());
        match self.equal_level() {
            None => vec![top.collect()],
            Some(level) => {
                let mut by_key: BTreeMap<VertexSet, Vec<VertexId>> = BTreeMap::new();
                for y in top {
                    by_key.entry(self.m.neighbours_at(y, level)).or_default().push(y);
                }
                by_key.into_values().filter(|c| c.len() >= 2).collect()
            }
        }
    }
}

/// Every member of the operator's candidate family, sorted.
///
/// This lists all admissible seeds, not only the closed ones, so its size
/// can be exponential in the top level. The search prunes on the
/// anti-monotone conditions, which keeps it output-sensitive.
pub fn candidate_family(m: &MultipartiteGraph, op: OperatorKind) -> Result<Vec<CandidateSet>> {
    let rules = Rules::new(m, op)?;
    let mut out = Vec::new();
    for class in rules.classes() {
        let mut seed = VertexSet::new();
        extend_seeds(&rules, &class, 0, &mut seed, None, &mut out);
    }
    out.sort();
    Ok(out)
}

fn extend_seeds(
    rules: &Rules<'_>,
    class: &[VertexId],
    from: usize,
    seed: &mut VertexSet,
    lower: Option<&VertexSet>,
    out: &mut Vec<CandidateSet>,
) {
    for (i, &y) in class.iter().enumerate().skip(from) {
        let next = match lower {
            Some(l) => l.intersection(rules.m.neighbours(y)),
            None => rules.m.neighbours(y).clone(),
        };
        if !rules.admits_lower(&next) {
            continue;
        }
        seed.insert(y);
        if seed.has_at_least(2) {
            out.push(CandidateSet {
                upper: seed.clone(),
                lower: next.clone(),
            });
        }
        extend_seeds(rules, class, i + 1, seed, Some(&next), out);
        seed.remove(y);
    }
}

/// The inclusion-maximal elements of `family`, comparing full sets `X`.
pub fn maximal_candidates(family: &[CandidateSet]) -> Vec<CandidateSet> {
    let members: Vec<VertexSet> = family.iter().map(CandidateSet::members).collect();
    let mut out: Vec<CandidateSet> = family
        .iter()
        .enumerate()
        .filter(|&(i, _)| {
            !members
                .iter()
                .enumerate()
                .any(|(j, other)| j != i && members[i].is_subset(other) && members[i] != *other)
        })
        .map(|(_, c)| c.clone())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// The maximal elements of the operator's candidate family, computed from
/// the class-closed seeds only.
pub fn maximal_candidate_family(m: &MultipartiteGraph, op: OperatorKind) -> Result<Vec<CandidateSet>> {
    let rules = Rules::new(m, op)?;
    let closed: Vec<CandidateSet> = rules
        .classes()
        .par_iter()
        .flat_map_iter(|class| closed_candidates(&rules, class))
        .collect();
    Ok(maximal_candidates(&closed))
}

/// Maximal bicliques between `class` and the lower levels that pass the
/// admission rules, found by closing neighbourhood intersections.
fn closed_candidates(rules: &Rules<'_>, class: &[VertexId]) -> Vec<CandidateSet> {
    let m = rules.m;
    let mut seen: HashSet<VertexSet> = HashSet::new();
    let mut queue: Vec<VertexSet> = Vec::new();
    for &y in class {
        let ns = m.neighbours(y);
        if rules.admits_lower(ns) && seen.insert(ns.clone()) {
            queue.push(ns.clone());
        }
    }
    while let Some(intent) = queue.pop() {
        for &y in class {
            let next = intent.intersection(m.neighbours(y));
            if next != intent && rules.admits_lower(&next) && seen.insert(next.clone()) {
                queue.push(next);
            }
        }
    }
    seen.into_iter()
        .filter_map(|lower| {
            let upper: VertexSet = class
                .iter()
                .copied()
                .filter(|&y| lower.is_subset(m.neighbours(y)))
                .collect();
            upper.has_at_least(2).then_some(CandidateSet { upper, lower })
        })
        .collect()
}

/// Label of the `rank`-th vertex created at `level`.
pub fn level_label(level: usize, rank: usize) -> String {
    format!("L{level}.{rank}")
}

/// Applies one factorisation step. New vertices are ordered by their seed
/// and labelled `L{k}.{rank}`.
pub fn factorise(m: &MultipartiteGraph, op: OperatorKind) -> Result<StepResult> {
    let level = maximal_candidate_family(m, op)?;
    if level.is_empty() {
        return Ok(StepResult::NotEffective);
    }
    let k = m.level_count();
    let new_vertices = level
        .iter()
        .enumerate()
        .map(|(rank, x)| (level_label(k, rank), x.members()))
        .collect();
    let graph = m.append_level(new_vertices)?;
    Ok(StepResult::Effective { graph, level })
}

/// Adds one pendant bottom vertex `p:<label>` below every upper vertex, so
/// that upper neighbourhoods become pairwise incomparable. Pendants are
/// appended after the original bottom vertices.
pub fn particularise(h: &MultipartiteGraph) -> Result<MultipartiteGraph> {
    if h.level_count() != 2 {
        return Err(invalid(format!(
            "expected a bipartite graph, got {} levels",
            h.level_count()
        )));
    }
    let bottom_len = h.level(0).len();
    let upper: Vec<String> = h.level(1).map(|y| h.label(y).to_owned()).collect();
    let mut bottom: Vec<String> = h.level(0).map(|v| h.label(v).to_owned()).collect();
    bottom.extend(upper.iter().map(|l| format!("p:{l}")));
    let mut edges: Vec<(usize, usize)> = h.edges().into_iter().map(|(b, y)| (b, y - bottom_len)).collect();
    edges.extend((0..upper.len()).map(|j| (bottom_len + j, j)));
    MultipartiteGraph::bipartite(bottom, upper, edges)
}
