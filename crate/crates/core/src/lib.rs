//! Constructions and certificates for extremal triple systems built from block designs.
//!
//! The crate covers hypergraph primitives ([`hcore`]), Lagrangians ([`lagrange`]), block
//! designs and packings ([`designs`]), the parameter arithmetic and assembly of the
//! configurations G_i ([`forge`]), the forbidden family M_t ([`family`]), Zykov
//! symmetrization ([`symm`]), feasible-region sampling ([`region`]) and the batch pipeline
//! used by the command-line tool ([`pipeline`], [`verify`]).

pub mod config;
pub mod designs;
pub mod error;
pub mod family;
pub mod forge;
pub mod graph;
pub mod hcore;
pub mod hg3;
pub mod lagrange;
pub mod num;
pub mod pipeline;
pub mod region;
pub mod symm;
pub mod verify;

pub use error::{Budget, Error, Result};
pub use hcore::{Hypergraph, VertexPartition};
pub use num::Rational;
