//! Small planar geometry helpers.

use crate::Point;

/// Signed area of a polygon given in order (positive when counter-clockwise).
pub fn polygon_area(p: &[Point]) -> f64 {
    let n = p.len();
    let mut a = 0.0;
    for k in 0..n {
        let (x0, y0) = (p[k][0], p[k][1]);
        let (x1, y1) = (p[(k + 1) % n][0], p[(k + 1) % n][1]);
        a += x0 * y1 - x1 * y0;
    }
    0.5 * a
}

/// Area centroid of a simple polygon.
pub fn polygon_centroid(p: &[Point]) -> Point {
    let n = p.len();
    let (mut cx, mut cy, mut a) = (0.0, 0.0, 0.0);
    for k in 0..n {
        let (x0, y0) = (p[k][0], p[k][1]);
        let (x1, y1) = (p[(k + 1) % n][0], p[(k + 1) % n][1]);
        let c = x0 * y1 - x1 * y0;
        a += c;
        cx += (x0 + x1) * c;
        cy += (y0 + y1) * c;
    }
    [cx / (3.0 * a), cy / (3.0 * a)]
}

pub fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

/// Proper crossing of segments (a0,a1) and (b0,b1); touching endpoints do not count.
pub fn segments_cross(a0: Point, a1: Point, b0: Point, b1: Point) -> bool {
    let d1 = cross(sub(a1, a0), sub(b0, a0));
    let d2 = cross(sub(a1, a0), sub(b1, a0));
    let d3 = cross(sub(b1, b0), sub(a0, b0));
    let d4 = cross(sub(b1, b0), sub(a1, b0));
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Point-in-polygon test for a CCW polygon with a small tolerance on the edges.
pub fn point_in_ccw_polygon(p: &[Point], x: Point, tol: f64) -> bool {
    let n = p.len();
    (0..n).all(|k| {
        let a = p[k];
        let b = p[(k + 1) % n];
        let e = sub(b, a);
        cross(e, sub(x, a)) >= -tol * norm(e)
    })
}
