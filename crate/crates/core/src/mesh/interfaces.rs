//! Enumeration of leaf interfaces, including hanging half-edges.

use super::base::BoundaryTag;
use super::forest::{FaceNeighbor, QuadForest};
use super::geometry::{dot, norm, sub};
use super::MeshError;
use crate::Point;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Side {
    Cell(usize),
    Boundary(BoundaryTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterfaceKind {
    Conforming,
    /// Half of a coarse edge; `left` is the fine cell.
    Hanging,
}

#[derive(Debug, Clone)]
pub struct Interface {
    pub left: usize,
    pub right: Side,
    pub kind: InterfaceKind,
    /// Unit normal pointing from left to right.
    pub normal: Point,
    pub length: f64,
    /// Two-point Gauss–Legendre nodes on the edge, weight ½ each.
    pub gauss: [Point; 2],
    /// Translation from the right cell's frame into the left cell's frame
    /// (non-zero across periodic links): `x_left = x_right + shift`.
    pub shift: Point,
    pub left_face: u8,
    /// Face of the right cell (equal to `left_face` on boundaries).
    pub right_face: u8,
}

impl Interface {
    /// Gauss point `g` expressed in the right cell's frame.
    pub fn gauss_right(&self, g: usize) -> Point {
        sub(self.gauss[g], self.shift)
    }

    pub fn right_cell(&self) -> Option<usize> {
        match self.right {
            Side::Cell(c) => Some(c),
            Side::Boundary(_) => None,
        }
    }
}

const GAUSS: f64 = 0.288_675_134_594_812_9; // 1/(2√3)

fn make(
    forest: &QuadForest,
    left: usize,
    face: u8,
    right: Side,
    kind: InterfaceKind,
    shift: Point,
    right_face: u8,
) -> Interface {
    let leaf = forest.leaf(left);
    let (a, b) = leaf.face_points(face);
    let e = sub(b, a);
    let length = norm(e);
    let mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
    let mut normal = [e[1] / length, -e[0] / length];
    if dot(normal, sub(mid, leaf.centroid)) < 0.0 {
        normal = [-normal[0], -normal[1]];
    }
    let g0 = [mid[0] - GAUSS * e[0], mid[1] - GAUSS * e[1]];
    let g1 = [mid[0] + GAUSS * e[0], mid[1] + GAUSS * e[1]];
    Interface {
        left,
        right,
        kind,
        normal,
        length,
        gauss: [g0, g1],
        shift,
        left_face: face,
        right_face,
    }
}

/// Every leaf edge exactly once. Conforming interior edges are emitted by the
/// lower-indexed leaf; hanging half-edges by the fine leaf.
pub fn leaf_interfaces(forest: &QuadForest) -> Result<Vec<Interface>, MeshError> {
    let mut out = Vec::with_capacity(2 * forest.len() + 16);
    for k in 0..forest.len() {
        for f in 0..4u8 {
            match forest.face_neighbor(k, f)? {
                FaceNeighbor::Boundary(tag) => out.push(make(
                    forest,
                    k,
                    f,
                    Side::Boundary(tag),
                    InterfaceKind::Conforming,
                    [0.0, 0.0],
                    f,
                )),
                FaceNeighbor::Same { leaf, face, shift } => {
                    if k < leaf || (k == leaf && f % 2 == 1) {
                        out.push(make(
                            forest,
                            k,
                            f,
                            Side::Cell(leaf),
                            InterfaceKind::Conforming,
                            shift,
                            face,
                        ));
                    }
                }
                FaceNeighbor::Coarser { leaf, face, shift } => out.push(make(
                    forest,
                    k,
                    f,
                    Side::Cell(leaf),
                    InterfaceKind::Hanging,
                    shift,
                    face,
                )),
                FaceNeighbor::Finer { .. } => {}
            }
        }
    }
    Ok(out)
}
