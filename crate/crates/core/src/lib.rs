//! Tools for checking the bound on mutually touching congruent cylinders:
//! the feasible-coloring Ramsey search, matrix signature checks for the
//! non-realizable sign patterns, and equidistant line configurations.

pub mod canon;
pub mod catalog;
pub mod cli;
pub mod forbidden;
pub mod geometry;
pub mod graph;
pub mod graph6;
pub mod search;
pub mod signature;

pub use canon::{canonical_code, canonical_form, canonical_form_brute_force, is_isomorphic, CanonicalCode, CanonicalForm};
pub use forbidden::{contains_induced, ForbiddenFamily, Scope};
pub use geometry::{chirality_graph, check_realization, lower_bound_config, DirectedLine, LineConfig};
pub use graph::{Graph, GraphError};
pub use search::{run_search, SearchOptions, SearchReport, Verdict};
pub use signature::{signature_exact, signature_float, Signature, SymMatrix};
