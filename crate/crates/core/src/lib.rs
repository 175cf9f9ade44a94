//! Biclique factorisation operators on multipartite graphs.
//!
//! Starting from the vertex-clique incidence graph `B(G)` of a graph, each
//! factorisation step adds a level whose vertices are the inclusion-maximal
//! non-simple bicliques between the current top level and everything below
//! it. Three operators are provided ([`OperatorKind`]): `weak`, `factor`
//! and `clean`. Only the clean-factor series is guaranteed to stop; its
//! final graph has one vertex per chain of the inclusion order on the
//! non-simple intersections of maximal cliques, which [`oracle`] checks
//! directly.
//!
//! ```
//! use factor_series::{run_series, Graph, OperatorKind};
//!
//! let g = Graph::from_edges([("a", "b"), ("a", "c"), ("b", "c"), ("b", "d"), ("c", "d")]).unwrap();
//! let series = run_series(&g, OperatorKind::Clean, 8).unwrap();
//! assert!(series.terminated());
//! assert_eq!(series.level_sizes, vec![4, 2, 1]);
//! ```

pub mod bitset;
pub mod cliques;
pub mod error;
pub mod factor;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod series;

pub use bitset::VertexSet;
pub use cliques::{anti_matching, maximal_cliques, vertex_clique_incidence, CliqueFamily};
pub use error::{Error, Result};
pub use factor::{
    candidate_family, factorise, maximal_candidate_family, maximal_candidates, particularise, CandidateSet,
    OperatorKind, StepResult,
};
pub use graph::{Graph, MultipartiteGraph, VertexId};
pub use series::{default_max_levels, run_series, run_series_from_bipartite, SeriesResult, SeriesStatus};
