//! Adaptive quadrilateral mesh: base mesh, quadtree forest, interfaces and
//! Z-curve ordering.

mod base;
mod forest;
pub mod geometry;
mod interfaces;
mod zorder;

pub use base::{BaseMesh, BoundaryTag, FaceLink, RectMesh, FACE_CORNERS};
pub use forest::{
    interpolate_corners, CellKey, FaceNeighbor, Leaf, LeafOrigin, QuadForest, RefineStats,
};
pub use interfaces::{leaf_interfaces, Interface, InterfaceKind, Side};
pub use zorder::{partition_weighted, zcurve_order};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("invalid base mesh: {0}")]
    Invalid(String),
    #[error("base mesh parse error: {0}")]
    Parse(String),
    #[error("forest is not 2:1 balanced near leaf {leaf} (face {face})")]
    Unbalanced { leaf: usize, face: u8 },
    #[error("marks length {got} does not match leaf count {expected}")]
    MarkLength { got: usize, expected: usize },
    #[error("point ({0}, {1}) is outside the mesh")]
    OutsideMesh(f64, f64),
}
