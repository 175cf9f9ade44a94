//! Iterating a factorisation operator until it stops being effective.

use serde::{Deserialize, Serialize};

use crate::cliques::vertex_clique_incidence;
use crate::error::{invalid, Result};
use crate::factor::{factorise, OperatorKind, StepResult};
use crate::graph::{Graph, MultipartiteGraph};

/// Level budget used for the weak and factor operators when none is given.
pub const DEFAULT_UNBOUNDED_MAX_LEVELS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesStatus {
    /// The last attempted factorisation was not effective.
    Terminated,
    /// The level budget ran out first.
    BudgetExceeded,
}

#[derive(Clone, Debug)]
pub struct SeriesResult {
    pub graph: MultipartiteGraph,
    pub status: SeriesStatus,
    pub steps: usize,
    pub level_sizes: Vec<usize>,
}

impl SeriesResult {
    pub fn terminated(&self) -> bool {
        self.status == SeriesStatus::Terminated
    }
}

/// Budget that is always enough for `op` on an `n`-vertex bottom level.
///
/// The clean-factor series over `n` bottom vertices has at most `n + 1`
/// levels, so `n + 2` leaves room for the final, non-effective attempt.
pub fn default_max_levels(op: OperatorKind, n: usize) -> usize {
    match op {
        OperatorKind::Clean => (n + 2).max(3),
        OperatorKind::Weak | OperatorKind::Factor => DEFAULT_UNBOUNDED_MAX_LEVELS,
    }
}

/// Runs the series of `op` starting from `B(g)`.
pub fn run_series(g: &Graph, op: OperatorKind, max_levels: usize) -> Result<SeriesResult> {
    let start = vertex_clique_incidence(g)?;
    iterate(start, op, max_levels)
}

/// Runs the series of `op` starting from an arbitrary bipartite graph.
pub fn run_series_from_bipartite(
    h: &MultipartiteGraph,
    op: OperatorKind,
    max_levels: usize,
) -> Result<SeriesResult> {
    if h.level_count() != 2 {
        return Err(invalid(format!(
            "expected a bipartite graph, got {} levels",
            h.level_count()
        )));
    }
    iterate(h.clone(), op, max_levels)
}

fn iterate(mut current: MultipartiteGraph, op: OperatorKind, max_levels: usize) -> Result<SeriesResult> {
    if max_levels < 2 {
        return Err(invalid(format!(
            "max_levels must be at least 2, got {max_levels}"
        )));
    }
    let mut steps = 0;
    let mut status = SeriesStatus::BudgetExceeded;
    while current.level_count() < max_levels {
        match factorise(&current, op)? {
            StepResult::Effective { graph, .. } => {
                current = graph;
                steps += 1;
            }
            StepResult::NotEffective => {
                status = SeriesStatus::Terminated;
                break;
            }
        }
    }
    let level_sizes = current.level_sizes();
    Ok(SeriesResult {
        graph: current,
        status,
        steps,
        level_sizes,
    })
}
