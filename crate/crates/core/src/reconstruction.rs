//! Limited linear reconstruction with the surface-gradient method.
//!
//! Per cell the reconstructed variables are the free surface η = h + B̄, the
//! momenta hU, hV and the scalar concentration Z = hZ/h. Gradients come from
//! an unweighted least-squares fit over face neighbours (mirrored ghosts at
//! boundaries) and are limited with the Venkatakrishnan function.

use crate::kinetic::SideState;
use crate::mesh::geometry::{dot, sub};
use crate::mesh::{BoundaryTag, FaceNeighbor, MeshError, QuadForest};
use crate::topography::BottomField;
use crate::Point;

pub const NQ: usize = 4;

/// Time-dependent depth and inflow speed imposed at inlet boundaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InletProfile {
    /// Solitary wave `H = h0 + A sech²(C₁(t − T)/C₂)`.
    Solitary {
        h0: f64,
        amp: f64,
        t_peak: f64,
        g: f64,
    },
    /// Constant surface level and inflow speed.
    Fixed { eta: f64, speed: f64 },
}

impl InletProfile {
    /// Surface level and inflow speed (positive into the domain) at time `t`.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        match *self {
            InletProfile::Solitary { h0, amp, t_peak, g } => {
                let c0 = (g * h0).sqrt();
                let c1 = c0 * (1.0 + amp / (2.0 * h0));
                let c2 = h0 * (4.0 * h0 * c1 / (3.0 * amp * c0)).sqrt();
                let s = 1.0 / (c1 * (t - t_peak) / c2).cosh();
                let eta = h0 + amp * s * s;
                (eta, c0 * (eta - h0) / eta)
            }
            InletProfile::Fixed { eta, speed } => (eta, speed),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundaryConditions {
    pub inlet: Option<InletProfile>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconParams {
    pub g: f64,
    pub k_venkat: f64,
    pub h_dry: f64,
    /// Disable limiting (used to check linear exactness).
    pub limit: bool,
}

impl Default for ReconParams {
    fn default() -> Self {
        ReconParams {
            g: 9.812,
            k_venkat: 0.3,
            h_dry: 1e-6,
            limit: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StencilEntry {
    Cell {
        leaf: usize,
        shift: Point,
    },
    Ghost {
        tag: BoundaryTag,
        normal: Point,
        center: Point,
    },
}

#[derive(Debug, Clone)]
pub struct CellStencil {
    pub entries: Vec<StencilEntry>,
    /// Gauss points of the cell's own four edges.
    pub points: [Point; 8],
    /// Length scale used in the limiter.
    pub diameter: f64,
}

const GAUSS: f64 = 0.288_675_134_594_812_9;

fn mirror(c: Point, a: Point, n: Point) -> Point {
    let d = dot(sub(a, c), n);
    [c[0] + 2.0 * d * n[0], c[1] + 2.0 * d * n[1]]
}

pub fn build_stencils(forest: &QuadForest) -> Result<Vec<CellStencil>, MeshError> {
    (0..forest.len())
        .map(|k| {
            let leaf = forest.leaf(k);
            let mut entries = Vec::with_capacity(6);
            let mut points = [[0.0; 2]; 8];
            for f in 0..4u8 {
                let (a, b) = leaf.face_points(f);
                let e = sub(b, a);
                let mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
                points[2 * f as usize] = [mid[0] - GAUSS * e[0], mid[1] - GAUSS * e[1]];
                points[2 * f as usize + 1] = [mid[0] + GAUSS * e[0], mid[1] + GAUSS * e[1]];
                match forest.face_neighbor(k, f)? {
                    FaceNeighbor::Boundary(tag) => {
                        let len = e[0].hypot(e[1]);
                        let mut n = [e[1] / len, -e[0] / len];
                        if dot(n, sub(mid, leaf.centroid)) < 0.0 {
                            n = [-n[0], -n[1]];
                        }
                        entries.push(StencilEntry::Ghost {
                            tag,
                            normal: n,
                            center: mirror(leaf.centroid, a, n),
                        });
                    }
                    FaceNeighbor::Same { leaf: n, shift, .. }
                    | FaceNeighbor::Coarser { leaf: n, shift, .. } => {
                        entries.push(StencilEntry::Cell { leaf: n, shift })
                    }
                    FaceNeighbor::Finer { leaves, shift, .. } => {
                        for n in leaves {
                            entries.push(StencilEntry::Cell { leaf: n, shift });
                        }
                    }
                }
            }
            Ok(CellStencil {
                entries,
                points,
                diameter: leaf.area.sqrt(),
            })
        })
        .collect()
}

/// Unweighted least-squares gradients of several variables from neighbour
/// offsets and differences. `None` when the normal equations are singular.
pub fn least_squares_gradient<const N: usize>(
    center: Point,
    q: [f64; N],
    nbrs: &[(Point, [f64; N])],
) -> Option<[Point; N]> {
    let (mut axx, mut axy, mut ayy) = (0.0, 0.0, 0.0);
    let mut bx = [0.0; N];
    let mut by = [0.0; N];
    for (x, v) in nbrs {
        let d = sub(*x, center);
        axx += d[0] * d[0];
        axy += d[0] * d[1];
        ayy += d[1] * d[1];
        for k in 0..N {
            let dq = v[k] - q[k];
            bx[k] += d[0] * dq;
            by[k] += d[1] * dq;
        }
    }
    let det = axx * ayy - axy * axy;
    if !(det > 1e-12 * (axx + ayy) * (axx + ayy)) {
        return None;
    }
    Some(std::array::from_fn(|k| {
        [
            (ayy * bx[k] - axy * by[k]) / det,
            (axx * by[k] - axy * bx[k]) / det,
        ]
    }))
}

/// Venkatakrishnan factor for one variable: `q` cell value, `grad` its
/// gradient, `(qmin, qmax)` stencil extrema, evaluated at `points`.
pub fn venkat_limit(
    q: f64,
    grad: Point,
    center: Point,
    qmin: f64,
    qmax: f64,
    points: &[Point],
    k: f64,
    diameter: f64,
) -> f64 {
    let eps2 = (k * diameter).powi(3);
    let mut phi: f64 = 1.0;
    for x in points {
        let d2 = dot(grad, sub(*x, center));
        if d2 == 0.0 {
            continue;
        }
        let d1 = if d2 > 0.0 { qmax - q } else { qmin - q };
        let num = (d1 * d1 + eps2) + 2.0 * d1 * d2;
        let den = d1 * d1 + 2.0 * d2 * d2 + d1 * d2 + eps2;
        phi = phi.min(num / den);
    }
    phi.clamp(0.0, 1.0)
}

/// Limited linear reconstruction of one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellRecon {
    pub center: Point,
    /// Cell values of (η, hU, hV, Z).
    pub q: [f64; NQ],
    pub grad: [Point; NQ],
    /// Cell or a neighbour is dry, or the surface drops below half the mean
    /// depth inside the cell: gradients are zero and momentum at a point is
    /// depth times the cell velocity.
    pub wet_dry: bool,
    pub velocity: Point,
    /// Cell-mean depth.
    pub depth: f64,
}

impl CellRecon {
    pub fn at(&self, v: usize, x: Point) -> f64 {
        self.q[v] + dot(self.grad[v], sub(x, self.center))
    }
}

/// Reconstructed values of (η, hU, hV, Z) for cell data (h, hU, hV, hZ).
pub fn primitive(w: &[f64; 4], bmean: f64, h_dry: f64) -> [f64; NQ] {
    let z = if w[0] > h_dry { w[3] / w[0] } else { 0.0 };
    [w[0] + bmean, w[1], w[2], z]
}

/// Ghost values of (η, hU, hV, Z) across a boundary face.
pub fn ghost_values(
    q: [f64; NQ],
    bmean: f64,
    tag: BoundaryTag,
    n: Point,
    bc: &BoundaryConditions,
    t: f64,
) -> [f64; NQ] {
    match tag {
        BoundaryTag::Wall => {
            let mn = q[1] * n[0] + q[2] * n[1];
            [q[0], q[1] - 2.0 * mn * n[0], q[2] - 2.0 * mn * n[1], q[3]]
        }
        BoundaryTag::Outflow => q,
        BoundaryTag::Inlet => match bc.inlet {
            Some(p) => {
                let (eta, speed) = p.eval(t);
                let h = (eta - bmean).max(0.0);
                [eta, -h * speed * n[0], -h * speed * n[1], 0.0]
            }
            None => q,
        },
    }
}

/// Reconstructs every cell for which `active` is true (all when `None`).
#[allow(clippy::too_many_arguments)]
pub fn reconstruct(
    forest: &QuadForest,
    bottom: &BottomField,
    stencils: &[CellStencil],
    w: &[[f64; 4]],
    bc: &BoundaryConditions,
    t: f64,
    p: &ReconParams,
    active: Option<&[bool]>,
) -> Vec<CellRecon> {
    let n = forest.len();
    let prim: Vec<[f64; NQ]> = (0..n)
        .map(|k| primitive(&w[k], bottom.cells[k].mean(), p.h_dry))
        .collect();
    (0..n)
        .map(|k| {
            if active.is_some_and(|a| !a[k]) {
                return CellRecon {
                    center: forest.leaf(k).centroid,
                    q: prim[k],
                    grad: [[0.0; 2]; NQ],
                    wet_dry: false,
                    velocity: [0.0; 2],
                    depth: w[k][0],
                };
            }
            reconstruct_cell(forest, bottom, stencils, w, &prim, bc, t, p, k)
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn reconstruct_cell(
    forest: &QuadForest,
    bottom: &BottomField,
    stencils: &[CellStencil],
    w: &[[f64; 4]],
    prim: &[[f64; NQ]],
    bc: &BoundaryConditions,
    t: f64,
    p: &ReconParams,
    k: usize,
) -> CellRecon {
    let leaf = forest.leaf(k);
    let c = leaf.centroid;
    let q = prim[k];
    let st = &stencils[k];
    let h = w[k][0];
    let velocity = if h > p.h_dry {
        [w[k][1] / h, w[k][2] / h]
    } else {
        [0.0; 2]
    };
    let mut wet_dry = h <= p.h_dry;
    let mut nb: Vec<(Point, [f64; NQ])> = Vec::with_capacity(st.entries.len());
    for e in &st.entries {
        match *e {
            StencilEntry::Cell { leaf: m, shift } => {
                if w[m][0] <= p.h_dry {
                    wet_dry = true;
                }
                let x = forest.leaf(m).centroid;
                nb.push(([x[0] + shift[0], x[1] + shift[1]], prim[m]));
            }
            StencilEntry::Ghost {
                tag,
                normal,
                center,
            } => {
                nb.push((
                    center,
                    ghost_values(q, bottom.cells[k].mean(), tag, normal, bc, t),
                ));
            }
        }
    }
    let mut grad = [[0.0; 2]; NQ];
    if !wet_dry {
        if let Some(g) = least_squares_gradient(c, q, &nb) {
            grad = g;
            if p.limit {
                for v in 0..NQ {
                    let (mut lo, mut hi) = (q[v], q[v]);
                    for (_, x) in &nb {
                        lo = lo.min(x[v]);
                        hi = hi.max(x[v]);
                    }
                    let phi = venkat_limit(
                        q[v],
                        grad[v],
                        c,
                        lo,
                        hi,
                        &st.points,
                        p.k_venkat,
                        st.diameter,
                    );
                    grad[v] = [phi * grad[v][0], phi * grad[v][1]];
                }
            }
        }
    }
    if !wet_dry {
        // shoreline inside the cell: the surface would run below half the
        // mean depth somewhere
        let low = (0..4)
            .map(|i| q[0] + dot(grad[0], sub(leaf.corners[i], c)) - leaf.bottom[i])
            .fold(f64::INFINITY, f64::min);
        if low < 0.5 * h {
            wet_dry = true;
            grad = [[0.0; 2]; NQ];
        }
    }
    CellRecon {
        center: c,
        q,
        grad,
        wet_dry,
        velocity,
        depth: h,
    }
}

/// Reconstructed point state including the scalar concentration.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PointState {
    pub side: SideState,
    pub z: f64,
    /// Free surface at the point (before clipping).
    pub eta: f64,
}

/// State of cell `k` at point `x` (in the cell's own frame): h = η̃ − B(x),
/// ∇h = ∇η̃ − ∇B, momenta reconstructed directly. Cells touching dry ground
/// carry no slopes.
pub fn point_state(
    forest: &QuadForest,
    bottom: &BottomField,
    rec: &CellRecon,
    k: usize,
    x: Point,
    p: &ReconParams,
) -> PointState {
    let (b, gb) = bottom.at(forest, k, x);
    let eta = rec.at(0, x);
    let h = eta - b;
    let force = [-p.g * gb[0], -p.g * gb[1]];
    if !(h > p.h_dry && rec.depth > p.h_dry) {
        return PointState {
            side: SideState {
                force,
                ..Default::default()
            },
            z: rec.q[3],
            eta,
        };
    }
    if rec.wet_dry {
        // first order next to dry ground, and never more momentum at the
        // face than in the cell
        let d = h.min(rec.depth);
        return PointState {
            side: SideState {
                h,
                hu: [d * rec.velocity[0], d * rec.velocity[1]],
                ..Default::default()
            },
            z: rec.q[3],
            eta,
        };
    }
    let g = &rec.grad;
    let hu = [rec.at(1, x), rec.at(2, x)];
    PointState {
        side: SideState {
            h,
            hu,
            grad_h: [g[0][0] - gb[0], g[0][1] - gb[1]],
            grad_hu: g[1],
            grad_hv: g[2],
            force,
        },
        z: rec.at(3, x),
        eta,
    }
}

fn reflect(v: Point, n: Point) -> Point {
    let d = dot(v, n);
    [v[0] - 2.0 * d * n[0], v[1] - 2.0 * d * n[1]]
}

/// Ghost state at a boundary Gauss point, synthesised from the inner state.
pub fn boundary_state(
    inner: &PointState,
    tag: BoundaryTag,
    n: Point,
    bottom_at_x: f64,
    bc: &BoundaryConditions,
    t: f64,
) -> PointState {
    let s = &inner.side;
    match tag {
        BoundaryTag::Wall => {
            // mirror image: scalars reflect their gradient, the momentum
            // field reflects as a vector in both value and derivative
            let hu = reflect(s.hu, n);
            let ghu = [
                reflect([s.grad_hu[0], s.grad_hv[0]], n),
                reflect([s.grad_hu[1], s.grad_hv[1]], n),
            ];
            let ghu = [
                reflect([ghu[0][0], ghu[1][0]], n),
                reflect([ghu[0][1], ghu[1][1]], n),
            ];
            PointState {
                side: SideState {
                    h: s.h,
                    hu,
                    grad_h: reflect(s.grad_h, n),
                    grad_hu: ghu[0],
                    grad_hv: ghu[1],
                    force: reflect(s.force, n),
                },
                z: inner.z,
                eta: inner.eta,
            }
        }
        BoundaryTag::Outflow => *inner,
        BoundaryTag::Inlet => match bc.inlet {
            Some(p) => {
                let (eta, speed) = p.eval(t);
                let h = (eta - bottom_at_x).max(0.0);
                PointState {
                    side: SideState {
                        h,
                        hu: [-h * speed * n[0], -h * speed * n[1]],
                        force: s.force,
                        ..Default::default()
                    },
                    z: 0.0,
                    eta,
                }
            }
            None => *inner,
        },
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::mesh::{BaseMesh, RectMesh};

    fn square_forest(n: usize, refine_first: bool) -> QuadForest {
        let base = BaseMesh::rectangle(&RectMesh {
            x0: 0.0,
            x1: 1.0,
            y0: 0.0,
            y1: 1.0,
            nx: n,
            ny: n,
            left: BoundaryTag::Wall,
            right: BoundaryTag::Wall,
            bottom: BoundaryTag::Wall,
            top: BoundaryTag::Wall,
            periodic_x: false,
        })
        .unwrap();
        let mut f = QuadForest::new(Arc::new(base), 2).unwrap();
        if refine_first {
            let mut m = vec![false; f.len()];
            m[(n / 2) * n + n / 2] = true;
            f.refine(&m).unwrap();
        }
        f
    }

    #[test]
    fn linear_exact_interior() {
        let f = square_forest(5, true);
        let st = build_stencils(&f).unwrap();
        for k in 0..f.len() {
            let c = f.leaf(k).centroid;
            if st[k]
                .entries
                .iter()
                .any(|e| matches!(e, StencilEntry::Ghost { .. }))
            {
                continue;
            }
            let nb: Vec<_> = st[k]
                .entries
                .iter()
                .map(|e| match e {
                    StencilEntry::Cell { leaf, .. } => {
                        let x = f.leaf(*leaf).centroid;
                        (x, [2.0 * x[0] + 3.0 * x[1]])
                    }
                    _ => unreachable!(),
                })
                .collect();
            let g = least_squares_gradient(c, [2.0 * c[0] + 3.0 * c[1]], &nb).unwrap();
            assert!((g[0][0] - 2.0).abs() < 1e-12 && (g[0][1] - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hanging_stencil_has_both_fine_cells() {
        let f = square_forest(3, true);
        let st = build_stencils(&f).unwrap();
        // the coarse cell left of the refined centre cell
        let k = f.locate([0.5 / 3.0, 1.5 / 3.0]).unwrap();
        let cells = st[k]
            .entries
            .iter()
            .filter(|e| matches!(e, StencilEntry::Cell { .. }))
            .count();
        assert_eq!(cells, 4);
    }

    #[test]
    fn constant_field_zero_gradient() {
        let g = least_squares_gradient(
            [0.0, 0.0],
            [1.0],
            &[([1.0, 0.0], [1.0]), ([0.0, 1.0], [1.0])],
        );
        assert_eq!(g.unwrap()[0], [0.0, 0.0]);
        assert!(least_squares_gradient([0.0, 0.0], [1.0], &[([1.0, 0.0], [2.0])]).is_none());
    }

    #[test]
    fn venkat_examples() {
        let pts = [[0.5, 0.0], [-0.5, 0.0]];
        // linear q = x on a 1-D row: no limiting
        let phi = venkat_limit(0.0, [1.0, 0.0], [0.0, 0.0], -1.0, 1.0, &pts, 0.3, 1e-3);
        assert!(phi >= 1.0 - 1e-6);
        // neighbour of a spike: values (1, 0, 0), LS slope −1/2
        let phi = venkat_limit(0.0, [-0.5, 0.0], [0.0, 0.0], 0.0, 1.0, &pts, 0.3, 1e-3);
        assert!(phi < 1e-6);
        let phi = venkat_limit(0.0, [-0.5, 0.0], [0.0, 0.0], 0.0, 1.0, &pts, 1e6, 1.0);
        assert!(phi > 1.0 - 1e-9);
    }

    #[test]
    fn solitary_inlet_peak() {
        let p = InletProfile::Solitary {
            h0: 0.32,
            amp: 0.032,
            t_peak: 2.84,
            g: 9.812,
        };
        let (eta, u) = p.eval(2.84);
        assert!((eta - 0.352).abs() < 1e-15);
        assert!(u > 0.0);
        assert!((p.eval(-50.0).0 - 0.32).abs() < 1e-12);
    }
}
