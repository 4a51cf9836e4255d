//! Polytopes of group-based models on trees.

pub mod action;
pub mod point;
pub mod polytope;
pub mod tree;

pub use action::{apply_all, undo_all, SymmetryAction};
pub use point::{labeling_point, project_nonidentity, GPresentation, LatticePoint};
pub use polytope::{claw_congruence, point_labeling, ModelPolytope, PolytopeRecord};
pub use tree::{GluedTree, Tree};
