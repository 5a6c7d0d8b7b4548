//! Uniform hypergraphs and their combinatorial primitives.

mod hypergraph;
mod ops;
mod partition;
mod search;

pub use hypergraph::{for_each_subset, pair_index, Hypergraph};
pub use ops::{
    blow_up, codegree, degree, densities, equivalence_classes, induced_edge_count, is_two_covered, link,
    link_graph, min_max_codegree, psi, shadow, shadow_graph, z_eps,
};
pub use partition::VertexPartition;
pub use search::{check_semibipartition, edit_distance_d1, is_semibipartite, min_transversal, transversal_number};
