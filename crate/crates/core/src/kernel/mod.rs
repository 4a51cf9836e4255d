//! Exact polyhedral primitives over the integers.

pub mod adjacency;
pub mod dilation;
pub mod facet;
pub mod hnf;
pub mod hull;
pub mod linalg;

pub use adjacency::{adjacent_vertices, EdgeCertificate};
pub use dilation::{block_points, compositions, BlockLayout};
pub use facet::{
    lattice_distance, touching_set, verify_facet, Facet, FacetCertificate, FacetRejection,
};
pub use hnf::{hnf_basis, HnfBasis, LatticeData};
pub use hull::{enumerate_facets, HullBounds};
pub use linalg::affine_dim;
