//! Ground truth for clean-factor decompositions.
//!
//! Everything here is computed from the maximal cliques of the input graph
//! and never from the factorisation code path: the intersections of
//! maximal cliques (`O'`), the non-simple ones (`O`), the clique map
//! `K(A)`, the strict-inclusion order on `O` and its chains. The verifiers
//! then read a decomposition and compare it with those objects.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::cliques::maximal_cliques;
use crate::error::{invalid, Result};
use crate::factor::OperatorKind;
use crate::graph::{Graph, MultipartiteGraph, VertexId};
use crate::series::{default_max_levels, run_series};

/// `K(A)` over a fixed list of cliques, answered as clique-index sets.
#[derive(Clone, Debug)]
pub struct CliqueIndex {
    cliques: Vec<VertexSet>,
    universe: VertexSet,
}

impl CliqueIndex {
    pub fn new(cliques: Vec<VertexSet>, universe: VertexSet) -> Self {
        Self { cliques, universe }
    }

    pub fn cliques(&self) -> &[VertexSet] {
        &self.cliques
    }

    pub fn universe(&self) -> &VertexSet {
        &self.universe
    }

    /// Indices of the cliques containing `a`.
    pub fn containing(&self, a: &VertexSet) -> VertexSet {
        self.cliques
            .iter()
            .enumerate()
            .filter(|(_, c)| a.is_subset(c))
            .map(|(i, _)| i)
            .collect()
    }

    /// Intersection of the indexed cliques, the universe for an empty index set.
    pub fn meet(&self, indices: &VertexSet) -> VertexSet {
        let mut acc = self.universe.clone();
        for i in indices {
            acc.intersect_with(&self.cliques[i]);
        }
        acc
    }
}

/// `O'` (all intersections of maximal cliques, with the empty intersection
/// taken as `V(G)`) and its non-simple part `O`.
#[derive(Clone, Debug)]
pub struct IntersectionFamily {
    index: CliqueIndex,
    all: Vec<VertexSet>,
    nonsimple: Vec<VertexSet>,
}

impl IntersectionFamily {
    pub fn all_intersections(&self) -> &[VertexSet] {
        &self.all
    }

    pub fn nonsimple(&self) -> &[VertexSet] {
        &self.nonsimple
    }

    pub fn clique_index(&self) -> &CliqueIndex {
        &self.index
    }

    pub fn contains(&self, o: &VertexSet) -> bool {
        self.all.binary_search(o).is_ok()
    }

    pub fn is_nonsimple(&self, o: &VertexSet) -> bool {
        self.nonsimple.binary_search(o).is_ok()
    }

    /// `C = { K(O) | O in O' }`, as clique-index sets.
    pub fn clique_sets(&self) -> Vec<VertexSet> {
        let mut out: Vec<VertexSet> = self.all.iter().map(|o| self.index.containing(o)).collect();
        out.sort();
        out.dedup();
        out
    }
}

pub fn intersection_family(g: &Graph) -> Result<IntersectionFamily> {
    let cliques = maximal_cliques(g)?.into_sets();
    Ok(family_from_cliques(CliqueIndex::new(cliques, g.vertices())))
}

/// Builds `O'` and `O` for any list of cliques (or hyperedges) over `universe`.
pub fn family_from_cliques(index: CliqueIndex) -> IntersectionFamily {
    let mut seen: HashSet<VertexSet> = HashSet::new();
    let mut queue: Vec<VertexSet> = Vec::new();
    for o in std::iter::once(&index.universe).chain(&index.cliques) {
        if seen.insert(o.clone()) {
            queue.push(o.clone());
        }
    }
    while let Some(o) = queue.pop() {
        for c in &index.cliques {
            let next = o.intersection(c);
            if seen.insert(next.clone()) {
                queue.push(next);
            }
        }
    }
    let mut all: Vec<VertexSet> = seen.into_iter().collect();
    all.sort();
    let nonsimple = all
        .iter()
        .filter(|o| {
            let k = index.containing(o);
            o.has_at_least(2) && k.has_at_least(2) && index.meet(&k) == **o
        })
        .cloned()
        .collect();
    IntersectionFamily {
        index,
        all,
        nonsimple,
    }
}

/// `K(A)`: the maximal cliques of `g` containing `a`.
pub fn cliques_containing(g: &Graph, a: &VertexSet) -> Result<Vec<VertexSet>> {
    if !a.is_subset(&g.vertices()) {
        return Err(invalid("vertex set contains unknown vertices"));
    }
    Ok(maximal_cliques(g)?
        .into_sets()
        .into_iter()
        .filter(|c| a.is_subset(c))
        .collect())
}

/// A strictly increasing sequence of members of `O`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharacterisingSequence(pub Vec<VertexSet>);

impl CharacterisingSequence {
    pub fn sets(&self) -> &[VertexSet] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0].is_subset(&w[1]) && w[0] != w[1])
    }
}

/// The members of `O` ordered by strict inclusion.
#[derive(Clone, Debug)]
pub struct IntersectionPoset {
    elements: Vec<VertexSet>,
    // strict supersets of each element
    above: Vec<Vec<usize>>,
}

impl IntersectionPoset {
    pub fn new(elements: Vec<VertexSet>) -> Self {
        let above = elements
            .iter()
            .map(|a| {
                elements
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| a.is_subset(b) && a != *b)
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        Self { elements, above }
    }

    pub fn from_family(family: &IntersectionFamily) -> Self {
        Self::new(family.nonsimple.clone())
    }

    pub fn elements(&self) -> &[VertexSet] {
        &self.elements
    }

    pub fn less_than(&self, i: usize, j: usize) -> bool {
        self.above[i].contains(&j)
    }

    /// All chains with exactly `m` elements, listed bottom-up.
    pub fn chains_of_length(&self, m: usize) -> Vec<CharacterisingSequence> {
        let mut out = Vec::new();
        if m == 0 {
            return out;
        }
        let mut stack = Vec::with_capacity(m);
        for start in 0..self.elements.len() {
            stack.push(start);
            self.grow(&mut stack, m, &mut out);
            stack.pop();
        }
        out.sort();
        out
    }

    fn grow(&self, stack: &mut Vec<usize>, m: usize, out: &mut Vec<CharacterisingSequence>) {
        if stack.len() == m {
            out.push(CharacterisingSequence(
                stack.iter().map(|&i| self.elements[i].clone()).collect(),
            ));
            return;
        }
        let last = *stack.last().expect("stack is never empty here");
        for &next in &self.above[last] {
            stack.push(next);
            self.grow(stack, m, out);
            stack.pop();
        }
    }

    /// `counts[m - 1]` is the number of `m`-element chains, for every `m`
    /// up to the longest chain.
    pub fn chain_counts(&self) -> Vec<u128> {
        let n = self.elements.len();
        // starting[i]: chains of the current length whose least element is i
        let mut starting = vec![1u128; n];
        let mut counts = Vec::new();
        while starting.iter().any(|&c| c > 0) {
            counts.push(starting.iter().sum());
            starting = (0..n)
                .map(|i| self.above[i].iter().map(|&j| starting[j]).sum())
                .collect();
        }
        counts
    }

    /// Number of edges on a longest chain; `None` for an empty poset.
    pub fn height(&self) -> Option<usize> {
        self.chain_counts().len().checked_sub(1)
    }
}

/// The first point where a verification disagreed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub level: usize,
    pub vertex: Option<String>,
    pub check: String,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "level {}", self.level)?;
        if let Some(v) = &self.vertex {
            write!(f, ", vertex {v}")?;
        }
        write!(
            f,
            ": {} (expected {}, got {})",
            self.check, self.expected, self.actual
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelCount {
    pub level: usize,
    pub vertices: usize,
    pub chains: u128,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: usize,
    pub counterexample: Option<Counterexample>,
    pub level_counts: Vec<LevelCount>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    fn check(&mut self, ok: bool, fail: impl FnOnce() -> Counterexample) -> bool {
        self.checks += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(fail());
        }
        ok
    }
}

fn show(m: &MultipartiteGraph, set: &VertexSet) -> String {
    let labels: Vec<&str> = set.iter().map(|v| m.label(v)).collect();
    format!("{{{}}}", labels.join(","))
}

fn show_seq(m: &MultipartiteGraph, seq: &CharacterisingSequence) -> String {
    let parts: Vec<String> = seq.0.iter().map(|s| show(m, s)).collect();
    format!("({})", parts.join(" < "))
}

/// Level-1 neighbourhoods of `m` on level 0, read as the clique list.
fn level_one_index(m: &MultipartiteGraph) -> CliqueIndex {
    let cliques = m.level(1).map(|c| m.neighbours_at(c, 0)).collect();
    CliqueIndex::new(cliques, m.level_set(0).clone())
}

/// `S(x) = (O_1, .., O_{k-1})` for `x` at level `k >= 2`: `O_1 = N_0(x)` and
/// `O_j` is the intersection of the cliques adjacent to every member of
/// `N_j(x)`.
pub fn characterising_sequence(m: &MultipartiteGraph, x: VertexId) -> Result<CharacterisingSequence> {
    if x >= m.vertex_count() {
        return Err(invalid(format!("unknown vertex {x}")));
    }
    let k = m.level_of(x);
    if k < 2 {
        return Err(invalid(format!(
            "vertex {:?} is at level {k}, need >= 2",
            m.label(x)
        )));
    }
    Ok(sequence_of(m, x))
}

fn sequence_of(m: &MultipartiteGraph, x: VertexId) -> CharacterisingSequence {
    let k = m.level_of(x);
    let mut seq = vec![m.neighbours_at(x, 0)];
    for j in 2..k {
        let mut cliques = m.level_set(1).clone();
        for y in &m.neighbours_at(x, j) {
            cliques.intersect_with(&m.neighbours_at(y, 1));
        }
        let mut o = m.level_set(0).clone();
        for c in &cliques {
            o.intersect_with(&m.neighbours_at(c, 0));
        }
        seq.push(o);
    }
    CharacterisingSequence(seq)
}

fn all_sequences(m: &MultipartiteGraph) -> HashMap<VertexId, CharacterisingSequence> {
    (2..m.level_count())
        .flat_map(|k| m.level(k))
        .map(|x| (x, sequence_of(m, x)))
        .collect()
}

/// Checks that `S` maps every level `V_k`, `k >= 2`, of the clean-factor
/// decomposition `m` of `g` bijectively onto the `(k-1)`-element chains of
/// the intersection order. Errors when `m` is not built over `g`'s vertices.
pub fn verify_bijection(g: &Graph, m: &MultipartiteGraph) -> Result<Report> {
    let bottom: Vec<&str> = m.level(0).map(|v| m.label(v)).collect();
    if bottom != g.labels().iter().map(String::as_str).collect::<Vec<_>>() {
        return Err(invalid(
            "decomposition level 0 does not match the graph's vertices",
        ));
    }
    let mut report = Report::default();
    let family = intersection_family(g)?;
    let poset = IntersectionPoset::from_family(&family);
    let counts = poset.chain_counts();

    let mut level_one: Vec<VertexSet> = m.level(1).map(|c| m.neighbours_at(c, 0)).collect();
    level_one.sort();
    let ok = level_one == family.clique_index().cliques();
    report.check(ok, || Counterexample {
        level: 1,
        vertex: None,
        check: "level 1 lists the maximal cliques".into(),
        expected: format!("{} cliques", family.clique_index().cliques().len()),
        actual: format!("{} level-1 vertices", level_one.len()),
    });
    if !ok {
        return Ok(report);
    }

    let sequences = all_sequences(m);
    let last_level = m.level_count().max(counts.len() + 2);
    for k in 2..last_level {
        let chains = counts.get(k - 2).copied().unwrap_or(0);
        let present: Vec<VertexId> = if k < m.level_count() {
            m.level(k).collect()
        } else {
            Vec::new()
        };
        report.level_counts.push(LevelCount {
            level: k,
            vertices: present.len(),
            chains,
        });

        let mut by_sequence: HashMap<&CharacterisingSequence, VertexId> = HashMap::new();
        for &x in &present {
            let seq = &sequences[&x];
            report.check(
                seq.is_strictly_increasing() && seq.0.iter().all(|o| family.is_nonsimple(o)),
                || Counterexample {
                    level: k,
                    vertex: Some(m.label(x).to_owned()),
                    check: "sequence is a strict chain of non-simple intersections".into(),
                    expected: "strictly increasing members of O".into(),
                    actual: show_seq(m, seq),
                },
            );
            if let Some(&other) = by_sequence.get(seq) {
                report.check(false, || Counterexample {
                    level: k,
                    vertex: Some(m.label(x).to_owned()),
                    check: "sequences are injective".into(),
                    expected: "distinct sequence".into(),
                    actual: format!("{} shared with {}", show_seq(m, seq), m.label(other)),
                });
            }
            by_sequence.insert(seq, x);
        }
        for chain in poset.chains_of_length(k - 1) {
            let hit = by_sequence.contains_key(&chain);
            report.check(hit, || Counterexample {
                level: k,
                vertex: None,
                check: "every chain is attained".into(),
                expected: show_seq(m, &chain),
                actual: "no vertex".into(),
            });
        }
        report.check(present.len() as u128 == chains, || Counterexample {
            level: k,
            vertex: None,
            check: "level size equals chain count".into(),
            expected: chains.to_string(),
            actual: present.len().to_string(),
        });
    }
    Ok(report)
}

/// Checks the recursive neighbourhood description of a clean-factor
/// decomposition: `N_j(x) = W_j(x)` for `2 <= j < k`, `K(O_{k-1}(x)) =
/// N_1(x)`, and that equal `N_{k-2}` forces equal `N_p` for every
/// `p in 0..=k-2` other than 1 (levels `k >= 4`).
pub fn verify_neighbourhood_formula(m: &MultipartiteGraph) -> Report {
    let mut report = Report::default();
    let sequences = all_sequences(m);
    let index = level_one_index(m);
    let level_one_start = m.level(1).start;

    for k in 2..m.level_count() {
        for x in m.level(k) {
            let sx = &sequences[&x];
            let expected: VertexSet = index
                .containing(&sx.0[k - 2])
                .iter()
                .map(|i| level_one_start + i)
                .collect();
            let actual = m.neighbours_at(x, 1);
            report.check(expected == actual, || Counterexample {
                level: k,
                vertex: Some(m.label(x).to_owned()),
                check: "K(O_{k-1}(x)) = N_1(x)".into(),
                expected: show(m, &expected),
                actual: show(m, &actual),
            });

            for j in 2..k {
                let w: VertexSet = m
                    .level(j)
                    .filter(|y| {
                        let sy = &sequences[y];
                        sy.0[..j - 2] == sx.0[..j - 2]
                            && sx.0[j - 2].is_subset(&sy.0[j - 2])
                            && sy.0[j - 2].is_subset(&sx.0[j - 1])
                    })
                    .collect();
                let n = m.neighbours_at(x, j);
                report.check(w == n, || Counterexample {
                    level: k,
                    vertex: Some(m.label(x).to_owned()),
                    check: format!("N_{j}(x) = W_{j}(x)"),
                    expected: show(m, &w),
                    actual: show(m, &n),
                });
            }
        }

        if k >= 4 {
            let mut groups: BTreeMap<VertexSet, Vec<VertexId>> = BTreeMap::new();
            for y in m.level(k) {
                groups.entry(m.neighbours_at(y, k - 2)).or_default().push(y);
            }
            for group in groups.values() {
                let first = group[0];
                for &other in &group[1..] {
                    for p in (0..=k - 2).filter(|&p| p != 1) {
                        let (a, b) = (m.neighbours_at(first, p), m.neighbours_at(other, p));
                        report.check(a == b, || Counterexample {
                            level: k,
                            vertex: Some(m.label(other).to_owned()),
                            check: format!("equal N_{} implies equal N_{p}", k - 2),
                            expected: show(m, &a),
                            actual: show(m, &b),
                        });
                    }
                }
            }
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeBound {
    pub bound: u128,
    pub actual: usize,
    /// Largest number of maximal cliques through one vertex.
    pub k: usize,
    /// Largest maximal clique size.
    pub c: usize,
    pub n: usize,
}

impl SizeBound {
    pub fn holds(&self) -> bool {
        self.actual as u128 <= self.bound
    }
}

fn factorial(x: usize) -> u128 {
    (1..=x as u128).fold(1u128, |acc, i| acc.saturating_mul(i))
}

fn pow2(x: usize) -> u128 {
    if x >= 128 {
        u128::MAX
    } else {
        1u128 << x
    }
}

/// `min(k 2^c c!, 2^k k! + 1) * n`, saturating at `u128::MAX`.
pub fn size_bound_formula(k: usize, c: usize, n: usize) -> u128 {
    let first = (k as u128).saturating_mul(pow2(c)).saturating_mul(factorial(c));
    let second = pow2(k).saturating_mul(factorial(k)).saturating_add(1);
    first.min(second).saturating_mul(n as u128)
}

/// Compares the size of the clean-factor decomposition of `g` with the
/// bound derived from clique multiplicity and clique size.
pub fn size_bound(g: &Graph) -> Result<SizeBound> {
    let cliques = maximal_cliques(g)?.into_sets();
    let n = g.vertex_count();
    let k = (0..n)
        .map(|v| cliques.iter().filter(|c| c.contains(v)).count())
        .max()
        .unwrap_or(0);
    let c = cliques.iter().map(VertexSet::len).max().unwrap_or(0);
    let series = run_series(g, OperatorKind::Clean, default_max_levels(OperatorKind::Clean, n))?;
    Ok(SizeBound {
        bound: size_bound_formula(k, c, n),
        actual: series.graph.vertex_count(),
        k,
        c,
        n,
    })
}
