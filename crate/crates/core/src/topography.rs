//! Piecewise-linear bottom: each quad is split along the diagonal c0–c3 into
//! `T1 = (c0, c2, c3)` and `T2 = (c0, c1, c3)` (tensor corner order), with a
//! linear fit of the nodal values on each triangle.

use thiserror::Error;

use crate::mesh::geometry::{cross, sub};
use crate::mesh::{interpolate_corners, Leaf, QuadForest};
use crate::Point;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopographyError {
    #[error("degenerate subcell triangle (area {0:e})")]
    Degenerate(f64),
    #[error("point ({0}, {1}) lies outside the cell")]
    Outside(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubcellGeometry {
    /// Area fraction of T1.
    pub alpha: f64,
    /// Average bottom on T1 and T2.
    pub avg: [f64; 2],
    /// Constant bottom gradient on T1 and T2.
    pub grad: [Point; 2],
    /// Bottom value at corner c0 (shared vertex of both triangles).
    pub b0: f64,
    pub c0: Point,
}

impl SubcellGeometry {
    /// Quad-average bottom.
    pub fn mean(&self) -> f64 {
        self.alpha * self.avg[0] + (1.0 - self.alpha) * self.avg[1]
    }

    /// Triangle (0 for T1, 1 for T2) holding the point.
    pub fn triangle_of(&self, c3: Point, x: Point) -> usize {
        if cross(sub(c3, self.c0), sub(x, self.c0)) >= 0.0 {
            0
        } else {
            1
        }
    }

    /// Bottom and gradient on triangle `t` at `x` (no containment check).
    pub fn eval(&self, t: usize, x: Point) -> (f64, Point) {
        let g = self.grad[t];
        let d = sub(x, self.c0);
        (self.b0 + g[0] * d[0] + g[1] * d[1], g)
    }
}

fn plane(p: [Point; 3], b: [f64; 3]) -> Result<(f64, Point), TopographyError> {
    let e1 = sub(p[1], p[0]);
    let e2 = sub(p[2], p[0]);
    let det = cross(e1, e2);
    let scale = (e1[0].abs() + e1[1].abs()) * (e2[0].abs() + e2[1].abs());
    if !(det.abs() > 1e-14 * scale) {
        return Err(TopographyError::Degenerate(0.5 * det.abs()));
    }
    let (d1, d2) = (b[1] - b[0], b[2] - b[0]);
    let gx = (d1 * e2[1] - d2 * e1[1]) / det;
    let gy = (e1[0] * d2 - e2[0] * d1) / det;
    Ok((0.5 * det.abs(), [gx, gy]))
}

/// Subcell split and linear fits from the quad corners and nodal bottom, both
/// in tensor order.
pub fn build_subcells(
    corners: [Point; 4],
    b: [f64; 4],
) -> Result<SubcellGeometry, TopographyError> {
    let (a1, g1) = plane([corners[0], corners[2], corners[3]], [b[0], b[2], b[3]])?;
    let (a2, g2) = plane([corners[0], corners[1], corners[3]], [b[0], b[1], b[3]])?;
    Ok(SubcellGeometry {
        alpha: a1 / (a1 + a2),
        avg: [(b[0] + b[2] + b[3]) / 3.0, (b[0] + b[1] + b[3]) / 3.0],
        grad: [g1, g2],
        b0: b[0],
        c0: corners[0],
    })
}

/// Splits a quad-average depth between the two subcells so that the mass is
/// partitioned exactly and a flat free surface stays flat. A subcell that
/// would go negative is emptied and the other takes all the water.
pub fn allocate_subcell_heights(h: f64, geo: &SubcellGeometry) -> (f64, f64) {
    let a = geo.alpha;
    let d = geo.avg[1] - geo.avg[0];
    let h1 = h + (1.0 - a) * d;
    let h2 = h - a * d;
    if h1 < 0.0 {
        (0.0, h / (1.0 - a))
    } else if h2 < 0.0 {
        (h / a, 0.0)
    } else {
        (h1, h2)
    }
}

/// Bottom at the five nodes created by one subdivision, from the parent's
/// corner values (tensor order): midpoints of the edges c0c2, c1c3, c0c1,
/// c2c3 and the centre.
pub fn interpolate_refined_nodes(parent: [f64; 4]) -> [f64; 5] {
    interpolate_corners(parent)
}

/// Bottom and its gradient at a point inside the leaf.
pub fn point_bottom(leaf: &Leaf, x: Point) -> Result<(f64, Point), TopographyError> {
    if !leaf.contains(x) {
        return Err(TopographyError::Outside(x[0], x[1]));
    }
    let geo = build_subcells(leaf.corners, leaf.bottom)?;
    Ok(geo.eval(geo.triangle_of(leaf.corners[3], x), x))
}

/// Subcell geometry of every leaf.
#[derive(Debug, Clone)]
pub struct BottomField {
    pub cells: Vec<SubcellGeometry>,
}

impl BottomField {
    pub fn build(forest: &QuadForest) -> Result<Self, TopographyError> {
        let cells = forest
            .leaves()
            .iter()
            .map(|l| build_subcells(l.corners, l.bottom))
            .collect::<Result<_, _>>()?;
        Ok(BottomField { cells })
    }

    /// Bottom and gradient at `x` in leaf `k` of `forest`.
    pub fn at(&self, forest: &QuadForest, k: usize, x: Point) -> (f64, Point) {
        let g = &self.cells[k];
        g.eval(g.triangle_of(forest.leaf(k).corners[3], x), x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQ: [Point; 4] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]];

    #[test]
    fn flat_and_constant() {
        let g = build_subcells(SQ, [0.0; 4]).unwrap();
        assert_eq!(g.alpha, 0.5);
        assert_eq!(g.avg, [0.0, 0.0]);
        assert_eq!(g.grad, [[0.0, 0.0]; 2]);
        let g = build_subcells(SQ, [1.0; 4]).unwrap();
        assert_eq!(g.avg, [1.0, 1.0]);
        assert_eq!(g.grad, [[0.0, 0.0]; 2]);
    }

    #[test]
    fn plane_b_equals_x() {
        let g = build_subcells(SQ, [0.0, 1.0, 0.0, 1.0]).unwrap();
        assert_eq!(g.grad, [[1.0, 0.0]; 2]);
        // T1 centroid x = 1/3, T2 centroid x = 2/3
        assert!((g.avg[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((g.avg[1] - 2.0 / 3.0).abs() < 1e-15);
        assert!((g.mean() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn allocation_examples() {
        let mut g = build_subcells(SQ, [0.0; 4]).unwrap();
        assert_eq!(allocate_subcell_heights(3.0, &g), (3.0, 3.0));
        g.avg = [0.0, 2.0];
        assert_eq!(allocate_subcell_heights(5.0, &g), (6.0, 4.0));
        // nearly dry: second subcell would be negative
        let (h1, h2) = allocate_subcell_heights(0.5, &g);
        assert_eq!(h2, 0.0);
        assert!((0.5 * h1 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn refined_nodes_paper_values() {
        assert_eq!(
            interpolate_refined_nodes([0.0, 2.0, 4.0, 6.0]),
            [2.0, 4.0, 1.0, 5.0, 3.0]
        );
        assert_eq!(interpolate_refined_nodes([1.0; 4]), [1.0; 5]);
    }

    #[test]
    fn evaluation_on_plane_and_diagonal() {
        let g = build_subcells(SQ, [0.0, 1.0, 0.0, 1.0]).unwrap();
        let (b, grad) = g.eval(g.triangle_of(SQ[3], [0.3, 0.8]), [0.3, 0.8]);
        assert!((b - 0.3).abs() < 1e-15);
        assert_eq!(grad, [1.0, 0.0]);
        let g = build_subcells(SQ, [0.3, -1.0, 2.0, 0.7]).unwrap();
        for t in [0.1, 0.37, 0.9] {
            let x = [t, t];
            assert!((g.eval(0, x).0 - g.eval(1, x).0).abs() < 1e-14);
        }
    }
}
