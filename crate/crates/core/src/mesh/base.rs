//! Base quadrilateral mesh: the roots of the quadtree forest.
//!
//! Quads are given with their nodes in counter-clockwise order. Internally every
//! quad is addressed through reference coordinates (ξ, η) ∈ [0,1]² with corners
//! in tensor order `c0=(0,0) c1=(1,0) c2=(0,1) c3=(1,1)`, so the CCW nodes
//! `n0 n1 n2 n3` map to `c0=n0 c1=n1 c2=n3 c3=n2`.
//!
//! Tree faces are numbered `0: ξ=0`, `1: ξ=1`, `2: η=0`, `3: η=1`; each face is
//! parameterised by the other reference coordinate.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::MeshError;
use crate::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryTag {
    Wall,
    Outflow,
    Inlet,
}

impl BoundaryTag {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryTag::Wall => "wall",
            BoundaryTag::Outflow => "outflow",
            BoundaryTag::Inlet => "inlet",
        }
    }

    pub fn parse(s: &str) -> Option<Option<BoundaryTag>> {
        match s {
            "-" | "interior" => Some(None),
            "w" | "wall" => Some(Some(BoundaryTag::Wall)),
            "o" | "outflow" => Some(Some(BoundaryTag::Outflow)),
            "i" | "inlet" => Some(Some(BoundaryTag::Inlet)),
            _ => None,
        }
    }
}

/// Connection of one tree face to its surroundings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FaceLink {
    Boundary(BoundaryTag),
    Tree {
        tree: usize,
        face: u8,
        /// The face parameter runs in the opposite direction on the neighbour.
        flip: bool,
        /// Translation that maps neighbour coordinates into this tree's frame
        /// (non-zero only for periodic links).
        shift: Point,
    },
}

/// Corner pair (s=0, s=1) of each tree face, in tensor corner numbering.
pub const FACE_CORNERS: [[usize; 2]; 4] = [[0, 2], [1, 3], [0, 1], [2, 3]];
/// CCW edge index (edge k joins node k and k+1) of each tree face.
const FACE_TO_EDGE: [usize; 4] = [3, 1, 0, 2];

#[derive(Debug, Clone)]
pub struct BaseMesh {
    nodes: Vec<Point>,
    quads: Vec<[usize; 4]>,
    edge_tags: Vec<[Option<BoundaryTag>; 4]>,
    node_bottom: Option<Vec<f64>>,
    links: Vec<[FaceLink; 4]>,
}

/// Structured rectangular base mesh description.
#[derive(Debug, Clone, PartialEq)]
pub struct RectMesh {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
    pub left: BoundaryTag,
    pub right: BoundaryTag,
    pub bottom: BoundaryTag,
    pub top: BoundaryTag,
    pub periodic_x: bool,
}

impl BaseMesh {
    pub fn new(
        nodes: Vec<Point>,
        quads: Vec<[usize; 4]>,
        edge_tags: Vec<[Option<BoundaryTag>; 4]>,
        node_bottom: Option<Vec<f64>>,
    ) -> Result<Self, MeshError> {
        let mut mesh = BaseMesh {
            nodes,
            quads,
            edge_tags,
            node_bottom,
            links: Vec::new(),
        };
        mesh.validate()?;
        mesh.links = mesh.build_links(&[])?;
        Ok(mesh)
    }

    /// Uniform rectangle split into `nx × ny` quads; cells for which `keep`
    /// returns false are removed and the exposed edges become walls.
    pub fn rectangle_with_holes(
        spec: &RectMesh,
        keep: impl Fn(usize, usize) -> bool,
    ) -> Result<Self, MeshError> {
        let (nx, ny) = (spec.nx, spec.ny);
        if nx == 0 || ny == 0 {
            return Err(MeshError::Invalid("empty rectangle".into()));
        }
        let dx = (spec.x1 - spec.x0) / nx as f64;
        let dy = (spec.y1 - spec.y0) / ny as f64;
        let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            for i in 0..=nx {
                let x = if i == nx {
                    spec.x1
                } else {
                    spec.x0 + i as f64 * dx
                };
                let y = if j == ny {
                    spec.y1
                } else {
                    spec.y0 + j as f64 * dy
                };
                nodes.push([x, y]);
            }
        }
        let nid = |i: usize, j: usize| j * (nx + 1) + i;
        let mut quads = Vec::new();
        let mut tags = Vec::new();
        let mut index = vec![usize::MAX; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                if !keep(i, j) {
                    continue;
                }
                index[j * nx + i] = quads.len();
                quads.push([nid(i, j), nid(i + 1, j), nid(i + 1, j + 1), nid(i, j + 1)]);
                let side = |inside: bool, at_edge: bool, tag: BoundaryTag| {
                    if at_edge {
                        Some(tag)
                    } else if inside {
                        None
                    } else {
                        Some(BoundaryTag::Wall)
                    }
                };
                let xper = spec.periodic_x;
                tags.push([
                    side(j > 0 && keep(i, j - 1), j == 0, spec.bottom),
                    if i + 1 == nx && xper {
                        None
                    } else {
                        side(i + 1 < nx && keep(i + 1, j), i + 1 == nx, spec.right)
                    },
                    side(j + 1 < ny && keep(i, j + 1), j + 1 == ny, spec.top),
                    if i == 0 && xper {
                        None
                    } else {
                        side(i > 0 && keep(i - 1, j), i == 0, spec.left)
                    },
                ]);
            }
        }
        let mut mesh = BaseMesh {
            nodes,
            quads,
            edge_tags: tags,
            node_bottom: None,
            links: Vec::new(),
        };
        mesh.validate_geometry()?;
        let mut periodic = Vec::new();
        if spec.periodic_x {
            let lx = spec.x1 - spec.x0;
            for j in 0..ny {
                let (a, b) = (index[j * nx], index[j * nx + nx - 1]);
                if a != usize::MAX && b != usize::MAX {
                    periodic.push((b, 1u8, a, 0u8, [lx, 0.0]));
                }
            }
        }
        mesh.links = mesh.build_links(&periodic)?;
        Ok(mesh)
    }

    pub fn rectangle(spec: &RectMesh) -> Result<Self, MeshError> {
        Self::rectangle_with_holes(spec, |_, _| true)
    }

    fn validate_geometry(&self) -> Result<(), MeshError> {
        for (q, quad) in self.quads.iter().enumerate() {
            for &n in quad {
                if n >= self.nodes.len() {
                    return Err(MeshError::Invalid(format!("quad {q} references node {n}")));
                }
            }
            let p = quad.map(|n| self.nodes[n]);
            let area = super::geometry::polygon_area(&p);
            if !(area > 0.0) {
                return Err(MeshError::Invalid(format!(
                    "quad {q} has non-positive signed area {area}"
                )));
            }
            // opposite edges must not cross
            for (a, b) in [(0usize, 2usize), (1, 3)] {
                if super::geometry::segments_cross(p[a], p[(a + 1) % 4], p[b], p[(b + 1) % 4]) {
                    return Err(MeshError::Invalid(format!("quad {q} is self-intersecting")));
                }
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), MeshError> {
        if self.edge_tags.len() != self.quads.len() {
            return Err(MeshError::Invalid("one tag set per quad required".into()));
        }
        if let Some(b) = &self.node_bottom {
            if b.len() != self.nodes.len() {
                return Err(MeshError::Invalid(
                    "one bottom value per node required".into(),
                ));
            }
        }
        self.validate_geometry()
    }

    /// Builds face links from shared node pairs, plus explicit periodic pairs
    /// `(tree_a, face_a, tree_b, face_b, shift_of_b_seen_from_a)`.
    fn build_links(
        &self,
        periodic: &[(usize, u8, usize, u8, Point)],
    ) -> Result<Vec<[FaceLink; 4]>, MeshError> {
        let mut by_edge: HashMap<(usize, usize), Vec<(usize, u8)>> = HashMap::new();
        for q in 0..self.quads.len() {
            for f in 0..4u8 {
                let (a, b) = self.face_nodes(q, f);
                by_edge
                    .entry((a.min(b), a.max(b)))
                    .or_default()
                    .push((q, f));
            }
        }
        let mut links = vec![[FaceLink::Boundary(BoundaryTag::Wall); 4]; self.quads.len()];
        let mut set = vec![[false; 4]; self.quads.len()];
        for users in by_edge.values() {
            match users.as_slice() {
                [(q, f)] => {
                    let tag = self.edge_tags[*q][FACE_TO_EDGE[*f as usize]];
                    match tag {
                        Some(tag) => {
                            links[*q][*f as usize] = FaceLink::Boundary(tag);
                            set[*q][*f as usize] = true;
                        }
                        None => {
                            // may be a periodic face, resolved below
                        }
                    }
                }
                [(qa, fa), (qb, fb)] => {
                    let (a0, _) = self.face_nodes(*qa, *fa);
                    let (b0, _) = self.face_nodes(*qb, *fb);
                    let flip = a0 != b0;
                    links[*qa][*fa as usize] = FaceLink::Tree {
                        tree: *qb,
                        face: *fb,
                        flip,
                        shift: [0.0, 0.0],
                    };
                    links[*qb][*fb as usize] = FaceLink::Tree {
                        tree: *qa,
                        face: *fa,
                        flip,
                        shift: [0.0, 0.0],
                    };
                    set[*qa][*fa as usize] = true;
                    set[*qb][*fb as usize] = true;
                }
                _ => {
                    return Err(MeshError::Invalid(format!(
                        "edge shared by {} quads",
                        users.len()
                    )))
                }
            }
        }
        for &(qa, fa, qb, fb, shift) in periodic {
            links[qa][fa as usize] = FaceLink::Tree {
                tree: qb,
                face: fb,
                flip: false,
                shift,
            };
            links[qb][fb as usize] = FaceLink::Tree {
                tree: qa,
                face: fa,
                flip: false,
                shift: [-shift[0], -shift[1]],
            };
            set[qa][fa as usize] = true;
            set[qb][fb as usize] = true;
        }
        for (q, s) in set.iter().enumerate() {
            if let Some(f) = s.iter().position(|x| !x) {
                return Err(MeshError::Invalid(format!(
                    "unshared edge of quad {q} (face {f}) has no boundary tag"
                )));
            }
        }
        Ok(links)
    }

    /// Node indices of a tree face at parameter s=0 and s=1.
    fn face_nodes(&self, q: usize, f: u8) -> (usize, usize) {
        let t = self.tensor_nodes(q);
        let [a, b] = FACE_CORNERS[f as usize];
        (t[a], t[b])
    }

    /// Node indices of a quad in tensor corner order.
    pub fn tensor_nodes(&self, q: usize) -> [usize; 4] {
        let n = self.quads[q];
        [n[0], n[1], n[3], n[2]]
    }

    pub fn tensor_corners(&self, q: usize) -> [Point; 4] {
        self.tensor_nodes(q).map(|n| self.nodes[n])
    }

    pub fn num_trees(&self) -> usize {
        self.quads.len()
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn quads(&self) -> &[[usize; 4]] {
        &self.quads
    }

    pub fn link(&self, tree: usize, face: u8) -> FaceLink {
        self.links[tree][face as usize]
    }

    pub fn node_bottom(&self) -> Option<&[f64]> {
        self.node_bottom.as_deref()
    }

    pub fn set_node_bottom(&mut self, values: Vec<f64>) -> Result<(), MeshError> {
        if values.len() != self.nodes.len() {
            return Err(MeshError::Invalid(
                "one bottom value per node required".into(),
            ));
        }
        self.node_bottom = Some(values);
        Ok(())
    }

    /// Sum of base quad areas.
    pub fn total_area(&self) -> f64 {
        (0..self.quads.len())
            .map(|q| super::geometry::polygon_area(&self.quads[q].map(|n| self.nodes[n])))
            .sum()
    }

    /// Bounding box `[xmin, ymin, xmax, ymax]`.
    pub fn bounds(&self) -> [f64; 4] {
        let mut b = [
            f64::INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::NEG_INFINITY,
        ];
        for p in &self.nodes {
            b[0] = b[0].min(p[0]);
            b[1] = b[1].min(p[1]);
            b[2] = b[2].max(p[0]);
            b[3] = b[3].max(p[1]);
        }
        b
    }

    /// Parses the plain-text base mesh format:
    ///
    /// ```text
    /// <node count>
    /// x y [B]          (one line per node)
    /// <quad count>
    /// n0 n1 n2 n3 t0 t1 t2 t3   (CCW nodes, tags of edges n0n1 n1n2 n2n3 n3n0)
    /// ```
    ///
    /// Tags are `wall`, `outflow`, `inlet` (or `w`, `o`, `i`) and `-` for interior
    /// edges. Lines starting with `#` are ignored.
    pub fn from_text(text: &str) -> Result<Self, MeshError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let bad = |msg: &str| MeshError::Parse(msg.to_string());
        let count = |l: Option<&str>| -> Result<usize, MeshError> {
            l.ok_or_else(|| bad("unexpected end of file"))?
                .parse()
                .map_err(|_| bad("expected a count"))
        };
        let nn = count(lines.next())?;
        let mut nodes = Vec::with_capacity(nn);
        let mut bottom = Vec::with_capacity(nn);
        for k in 0..nn {
            let l = lines.next().ok_or_else(|| bad("missing node line"))?;
            let v: Vec<f64> = l
                .split_whitespace()
                .map(|s| s.parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| MeshError::Parse(format!("node {k}: bad number")))?;
            match v.as_slice() {
                [x, y] => nodes.push([*x, *y]),
                [x, y, b] => {
                    nodes.push([*x, *y]);
                    bottom.push(*b);
                }
                _ => {
                    return Err(MeshError::Parse(format!(
                        "node {k}: expected 2 or 3 values"
                    )))
                }
            }
        }
        if !bottom.is_empty() && bottom.len() != nn {
            return Err(bad("bottom column must be given for all nodes or none"));
        }
        let nq = count(lines.next())?;
        let mut quads = Vec::with_capacity(nq);
        let mut tags = Vec::with_capacity(nq);
        for k in 0..nq {
            let l = lines.next().ok_or_else(|| bad("missing quad line"))?;
            let tok: Vec<&str> = l.split_whitespace().collect();
            if tok.len() != 8 {
                return Err(MeshError::Parse(format!("quad {k}: expected 8 fields")));
            }
            let mut q = [0usize; 4];
            for i in 0..4 {
                q[i] = tok[i]
                    .parse()
                    .map_err(|_| MeshError::Parse(format!("quad {k}: bad node index")))?;
            }
            let mut t = [None; 4];
            for i in 0..4 {
                t[i] = BoundaryTag::parse(tok[4 + i])
                    .ok_or_else(|| MeshError::Parse(format!("quad {k}: bad tag {}", tok[4 + i])))?;
            }
            quads.push(q);
            tags.push(t);
        }
        BaseMesh::new(nodes, quads, tags, (!bottom.is_empty()).then_some(bottom))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.nodes.len());
        for (k, p) in self.nodes.iter().enumerate() {
            match &self.node_bottom {
                Some(b) => {
                    let _ = writeln!(s, "{:?} {:?} {:?}", p[0], p[1], b[k]);
                }
                None => {
                    let _ = writeln!(s, "{:?} {:?}", p[0], p[1]);
                }
            }
        }
        let _ = writeln!(s, "{}", self.quads.len());
        for (q, t) in self.quads.iter().zip(&self.edge_tags) {
            let tag = |t: Option<BoundaryTag>| t.map_or("-", BoundaryTag::as_str);
            let _ = writeln!(
                s,
                "{} {} {} {} {} {} {} {}",
                q[0],
                q[1],
                q[2],
                q[3],
                tag(t[0]),
                tag(t[1]),
                tag(t[2]),
                tag(t[3])
            );
        }
        s
    }
}
