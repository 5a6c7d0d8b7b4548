//! Zykov symmetrization, 𝔐(n), stripping of low-degree vertices and transversal sampling.

mod mfrak;
mod strip;
mod symmetrize;
mod transversal;

pub use mfrak::{blowup_edge_count, max_colorable_edges, semibipartite_max, MfrakValue};
pub use strip::{strip_and_color, StripReport};
pub use symmetrize::{
    collapse_map, find_missing_class_pair, run_symmetrization, symmetrization_step, symmetrize_class,
    symmetrize_vertex, SymmetrizationMode, SymmetrizationOutcome, SymmetrizationTrace, TraceStep,
};
pub use transversal::{sample_transversal, TransversalGates, TransversalReport};
