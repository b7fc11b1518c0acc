//! Linear forest of quadtrees over a [`BaseMesh`].
//!
//! Leaves are kept in Z-curve order (tree, then depth-first Morton key). Each
//! leaf stores its four corners and nodal bottom values in tensor order; both
//! are produced by recursive bilinear-midpoint subdivision from the base quad,
//! so nodes shared by neighbouring leaves are bit-identical.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use foldhash::fast::FixedState;

use super::base::{BaseMesh, BoundaryTag, FaceLink};
use super::geometry::{point_in_ccw_polygon, polygon_area, polygon_centroid};
use super::MeshError;
use crate::Point;

/// Deepest level representable by the Morton key.
pub const MAX_LEVEL: u8 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellKey {
    pub tree: u32,
    pub level: u8,
    /// Interleaved bits: `i` on even positions, `j` on odd positions.
    pub morton: u64,
}

fn spread(mut x: u64) -> u64 {
    x &= 0xffff_ffff;
    x = (x | (x << 16)) & 0x0000_ffff_0000_ffff;
    x = (x | (x << 8)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x << 4)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    (x | (x << 1)) & 0x5555_5555_5555_5555
}

fn compact(mut x: u64) -> u64 {
    x &= 0x5555_5555_5555_5555;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x >> 4)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x >> 8)) & 0x0000_ffff_0000_ffff;
    (x | (x >> 16)) & 0xffff_ffff
}

impl CellKey {
    pub fn root(tree: usize) -> Self {
        CellKey {
            tree: tree as u32,
            level: 0,
            morton: 0,
        }
    }

    pub fn from_ij(tree: usize, level: u8, i: u64, j: u64) -> Self {
        CellKey {
            tree: tree as u32,
            level,
            morton: spread(i) | (spread(j) << 1),
        }
    }

    pub fn ij(&self) -> (u64, u64) {
        (compact(self.morton), compact(self.morton >> 1))
    }

    pub fn parent(&self) -> Option<CellKey> {
        (self.level > 0).then(|| CellKey {
            tree: self.tree,
            level: self.level - 1,
            morton: self.morton >> 2,
        })
    }

    /// Child `c` in tensor order (bit 0: i, bit 1: j).
    pub fn child(&self, c: u8) -> CellKey {
        CellKey {
            tree: self.tree,
            level: self.level + 1,
            morton: (self.morton << 2) | c as u64,
        }
    }

    /// Position among its siblings.
    pub fn child_index(&self) -> u8 {
        (self.morton & 3) as u8
    }

    fn depth_first(&self) -> u64 {
        self.morton << (2 * (MAX_LEVEL - self.level) as u32)
    }
}

impl Ord for CellKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.tree
            .cmp(&other.tree)
            .then(self.depth_first().cmp(&other.depth_first()))
            .then(self.level.cmp(&other.level))
    }
}

impl PartialOrd for CellKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Values at the five nodes introduced by one subdivision, from the four
/// parent corner values in tensor order: midpoints of faces 0..3, then the
/// centre (mean of the four).
pub fn interpolate_corners(v: [f64; 4]) -> [f64; 5] {
    [
        0.5 * (v[0] + v[2]),
        0.5 * (v[1] + v[3]),
        0.5 * (v[0] + v[1]),
        0.5 * (v[2] + v[3]),
        0.25 * (v[0] + v[1] + v[2] + v[3]),
    ]
}

fn child_values<T: Copy>(v: [T; 4], n: [T; 5], c: u8) -> [T; 4] {
    let [m0, m1, m2, m3, ctr] = n;
    match c {
        0 => [v[0], m2, m0, ctr],
        1 => [m2, v[1], ctr, m1],
        2 => [m0, ctr, v[2], m3],
        _ => [ctr, m1, m3, v[3]],
    }
}

fn subdivide_points(p: [Point; 4]) -> [Point; 5] {
    let x = interpolate_corners(p.map(|q| q[0]));
    let y = interpolate_corners(p.map(|q| q[1]));
    std::array::from_fn(|k| [x[k], y[k]])
}

#[derive(Debug, Clone)]
pub struct Leaf {
    pub key: CellKey,
    /// Corners in tensor order.
    pub corners: [Point; 4],
    /// Nodal bottom elevation at the corners, tensor order.
    pub bottom: [f64; 4],
    pub area: f64,
    pub centroid: Point,
}

impl Leaf {
    fn new(key: CellKey, corners: [Point; 4], bottom: [f64; 4]) -> Self {
        let ccw = Self::ccw_of(&corners);
        Leaf {
            key,
            corners,
            bottom,
            area: polygon_area(&ccw),
            centroid: polygon_centroid(&ccw),
        }
    }

    fn ccw_of(c: &[Point; 4]) -> [Point; 4] {
        [c[0], c[1], c[3], c[2]]
    }

    /// Corners in counter-clockwise order.
    pub fn ccw_corners(&self) -> [Point; 4] {
        Self::ccw_of(&self.corners)
    }

    pub fn level(&self) -> u8 {
        self.key.level
    }

    pub fn tree(&self) -> usize {
        self.key.tree as usize
    }

    /// End points of face `f` at parameter s=0 and s=1.
    pub fn face_points(&self, f: u8) -> (Point, Point) {
        let [a, b] = super::base::FACE_CORNERS[f as usize];
        (self.corners[a], self.corners[b])
    }

    pub fn face_length(&self, f: u8) -> f64 {
        let (a, b) = self.face_points(f);
        super::geometry::norm(super::geometry::sub(b, a))
    }

    pub fn contains(&self, x: Point) -> bool {
        point_in_ccw_polygon(&self.ccw_corners(), x, 1e-9 * self.area.sqrt())
    }

    fn children(&self) -> [Leaf; 4] {
        let pn = subdivide_points(self.corners);
        let bn = interpolate_corners(self.bottom);
        std::array::from_fn(|c| {
            let c = c as u8;
            Leaf::new(
                self.key.child(c),
                child_values(self.corners, pn, c),
                child_values(self.bottom, bn, c),
            )
        })
    }

    fn merge(family: [&Leaf; 4]) -> Leaf {
        Leaf::new(
            family[0].key.parent().expect("family has a parent"),
            [
                family[0].corners[0],
                family[1].corners[1],
                family[2].corners[2],
                family[3].corners[3],
            ],
            [
                family[0].bottom[0],
                family[1].bottom[1],
                family[2].bottom[2],
                family[3].bottom[3],
            ],
        )
    }
}

/// Where a leaf of the new forest came from, relative to the leaf indices of
/// the forest before the change.
#[derive(Debug, Clone, PartialEq)]
pub enum LeafOrigin {
    Same(usize),
    /// Descendant (at any depth) of the old leaf.
    Refined(usize),
    /// Parent of the listed old leaves (a complete family).
    Coarsened([usize; 4]),
}

#[derive(Debug, Clone, Default)]
pub struct RefineStats {
    pub refined: usize,
    pub coarsened: usize,
    /// Refinement marks dropped because the leaf was already at `l_max`.
    pub dropped: usize,
    /// Balance constraints that could not be met within `l_max`.
    pub violations: usize,
    pub origins: Vec<LeafOrigin>,
}

/// Neighbour across a leaf face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FaceNeighbor {
    Boundary(BoundaryTag),
    Same {
        leaf: usize,
        face: u8,
        shift: Point,
    },
    Coarser {
        leaf: usize,
        face: u8,
        shift: Point,
    },
    /// Two finer leaves ordered along this leaf's face parameter.
    Finer {
        leaves: [usize; 2],
        face: u8,
        shift: Point,
    },
}

#[derive(Debug, Clone)]
pub struct QuadForest {
    base: Arc<BaseMesh>,
    l_max: u8,
    leaves: Vec<Leaf>,
    index: HashMap<CellKey, usize, FixedState>,
    tree_start: Vec<usize>,
}

struct FacePos {
    tree: usize,
    i: u64,
    j: u64,
    face: u8,
    flip: bool,
    shift: Point,
}

impl QuadForest {
    /// One level-0 leaf per base quad.
    pub fn new(base: Arc<BaseMesh>, l_max: u8) -> Result<Self, MeshError> {
        if l_max > MAX_LEVEL {
            return Err(MeshError::Invalid(format!(
                "l_max {l_max} exceeds {MAX_LEVEL}"
            )));
        }
        let zero = vec![0.0; base.nodes().len()];
        let nb = base.node_bottom().unwrap_or(&zero);
        let leaves = (0..base.num_trees())
            .map(|t| {
                let tn = base.tensor_nodes(t);
                Leaf::new(CellKey::root(t), base.tensor_corners(t), tn.map(|n| nb[n]))
            })
            .collect();
        let mut f = QuadForest {
            base,
            l_max,
            leaves,
            index: HashMap::default(),
            tree_start: Vec::new(),
        };
        f.reindex();
        Ok(f)
    }

    /// Forest refined uniformly to `level`.
    pub fn uniform(base: Arc<BaseMesh>, l_max: u8, level: u8) -> Result<Self, MeshError> {
        let mut f = Self::new(base, l_max.max(level))?;
        for _ in 0..level {
            let marks = vec![true; f.len()];
            f.refine(&marks)?;
        }
        f.l_max = l_max;
        Ok(f)
    }

    fn reindex(&mut self) {
        self.index.clear();
        self.index.reserve(self.leaves.len());
        let mut starts = vec![usize::MAX; self.base.num_trees() + 1];
        for (k, l) in self.leaves.iter().enumerate() {
            self.index.insert(l.key, k);
            let t = l.tree();
            if starts[t] == usize::MAX {
                starts[t] = k;
            }
        }
        starts[self.base.num_trees()] = self.leaves.len();
        for t in (0..self.base.num_trees()).rev() {
            if starts[t] == usize::MAX {
                starts[t] = starts[t + 1];
            }
        }
        self.tree_start = starts;
    }

    pub fn base(&self) -> &Arc<BaseMesh> {
        &self.base
    }

    pub fn l_max(&self) -> u8 {
        self.l_max
    }

    pub fn set_l_max(&mut self, l_max: u8) {
        self.l_max = l_max.min(MAX_LEVEL);
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    pub fn leaf(&self, k: usize) -> &Leaf {
        &self.leaves[k]
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn find(&self, key: &CellKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Levels present in the forest, ascending.
    pub fn levels(&self) -> Vec<u8> {
        let mut present = [false; MAX_LEVEL as usize + 1];
        for l in &self.leaves {
            present[l.level() as usize] = true;
        }
        (0..=MAX_LEVEL).filter(|&l| present[l as usize]).collect()
    }

    pub fn total_area(&self) -> f64 {
        self.leaves.iter().map(|l| l.area).sum()
    }

    /// Leaf containing the point, if any.
    pub fn locate(&self, x: Point) -> Option<usize> {
        let t = (0..self.base.num_trees()).find(|&t| {
            let c = self.base.tensor_corners(t);
            point_in_ccw_polygon(&[c[0], c[1], c[3], c[2]], x, 1e-9)
        })?;
        self.locate_in_tree(t, x)
    }

    pub fn locate_in_tree(&self, tree: usize, x: Point) -> Option<usize> {
        (self.tree_start[tree]..self.tree_start[tree + 1]).find(|&k| self.leaves[k].contains(x))
    }

    /// Base tree containing the point.
    pub fn tree_of_point(&self, x: Point) -> Option<usize> {
        (0..self.base.num_trees()).find(|&t| {
            let c = self.base.tensor_corners(t);
            point_in_ccw_polygon(&[c[0], c[1], c[3], c[2]], x, 1e-9)
        })
    }

    fn face_pos(&self, key: &CellKey, face: u8) -> Result<FacePos, BoundaryTag> {
        let (i, j) = key.ij();
        let n = 1u64 << key.level;
        let tree = key.tree as usize;
        let inside = |i: u64, j: u64| FacePos {
            tree,
            i,
            j,
            face: face ^ 1,
            flip: false,
            shift: [0.0, 0.0],
        };
        match face {
            0 if i > 0 => return Ok(inside(i - 1, j)),
            1 if i + 1 < n => return Ok(inside(i + 1, j)),
            2 if j > 0 => return Ok(inside(i, j - 1)),
            3 if j + 1 < n => return Ok(inside(i, j + 1)),
            _ => {}
        }
        match self.base.link(tree, face) {
            FaceLink::Boundary(tag) => Err(tag),
            FaceLink::Tree {
                tree: t2,
                face: f2,
                flip,
                shift,
            } => {
                let s = if face < 2 { j } else { i };
                let s = if flip { n - 1 - s } else { s };
                let (i2, j2) = match f2 {
                    0 => (0, s),
                    1 => (n - 1, s),
                    2 => (s, 0),
                    _ => (s, n - 1),
                };
                Ok(FacePos {
                    tree: t2,
                    i: i2,
                    j: j2,
                    face: f2,
                    flip,
                    shift,
                })
            }
        }
    }

    /// Leaf equal to or containing the cell (tree, level, i, j).
    fn leaf_covering(&self, tree: usize, level: u8, i: u64, j: u64) -> Option<usize> {
        (0..=level).rev().find_map(|l| {
            let d = level - l;
            self.find(&CellKey::from_ij(tree, l, i >> d, j >> d))
        })
    }

    /// Neighbour across face `face` of leaf `k`. Fails if the forest is not
    /// 2:1 balanced there.
    pub fn face_neighbor(&self, k: usize, face: u8) -> Result<FaceNeighbor, MeshError> {
        let key = self.leaves[k].key;
        let pos = match self.face_pos(&key, face) {
            Err(tag) => return Ok(FaceNeighbor::Boundary(tag)),
            Ok(p) => p,
        };
        let unbalanced = MeshError::Unbalanced { leaf: k, face };
        if let Some(n) = self.leaf_covering(pos.tree, key.level, pos.i, pos.j) {
            let nl = self.leaves[n].level();
            return if nl == key.level {
                Ok(FaceNeighbor::Same {
                    leaf: n,
                    face: pos.face,
                    shift: pos.shift,
                })
            } else if nl + 1 == key.level {
                Ok(FaceNeighbor::Coarser {
                    leaf: n,
                    face: pos.face,
                    shift: pos.shift,
                })
            } else {
                Err(unbalanced)
            };
        }
        let (i, j) = (2 * pos.i, 2 * pos.j);
        let kids = match pos.face {
            0 => [(i, j), (i, j + 1)],
            1 => [(i + 1, j), (i + 1, j + 1)],
            2 => [(i, j), (i + 1, j)],
            _ => [(i, j + 1), (i + 1, j + 1)],
        };
        let mut leaves = [0usize; 2];
        for (slot, (ci, cj)) in kids.into_iter().enumerate() {
            leaves[slot] = self
                .find(&CellKey::from_ij(pos.tree, key.level + 1, ci, cj))
                .ok_or(unbalanced.clone())?;
        }
        if pos.flip {
            leaves.swap(0, 1);
        }
        Ok(FaceNeighbor::Finer {
            leaves,
            face: pos.face,
            shift: pos.shift,
        })
    }

    /// All face-adjacent leaves (2 per face on finer sides).
    pub fn neighbors(&self, k: usize) -> Result<Vec<usize>, MeshError> {
        let mut out = Vec::with_capacity(6);
        for f in 0..4 {
            match self.face_neighbor(k, f)? {
                FaceNeighbor::Boundary(_) => {}
                FaceNeighbor::Same { leaf, .. } | FaceNeighbor::Coarser { leaf, .. } => {
                    out.push(leaf)
                }
                FaceNeighbor::Finer { leaves, .. } => out.extend(leaves),
            }
        }
        Ok(out)
    }

    fn check_marks(&self, marks: &[bool]) -> Result<(), MeshError> {
        if marks.len() != self.leaves.len() {
            return Err(MeshError::MarkLength {
                got: marks.len(),
                expected: self.leaves.len(),
            });
        }
        Ok(())
    }

    /// Replaces every marked leaf below `l_max` by its four children.
    pub fn refine(&mut self, marks: &[bool]) -> Result<RefineStats, MeshError> {
        self.check_marks(marks)?;
        let mut stats = RefineStats::default();
        let mut leaves = Vec::with_capacity(self.leaves.len() + 3 * marks.len());
        for (k, leaf) in self.leaves.iter().enumerate() {
            if marks[k] && leaf.level() >= self.l_max {
                stats.dropped += 1;
            }
            if marks[k] && leaf.level() < self.l_max {
                stats.refined += 1;
                for c in leaf.children() {
                    leaves.push(c);
                    stats.origins.push(LeafOrigin::Refined(k));
                }
            } else {
                leaves.push(leaf.clone());
                stats.origins.push(LeafOrigin::Same(k));
            }
        }
        self.leaves = leaves;
        self.reindex();
        Ok(stats)
    }

    /// Replaces complete, fully marked families of leaves by their parent.
    /// Partially marked families are left unchanged.
    pub fn coarsen(&mut self, marks: &[bool]) -> Result<RefineStats, MeshError> {
        self.coarsen_impl(marks, false)
    }

    /// Like [`coarsen`](Self::coarsen), but also skips families with an
    /// external neighbour finer than the children, so a balanced forest stays
    /// balanced.
    pub fn coarsen_balanced(&mut self, marks: &[bool]) -> Result<RefineStats, MeshError> {
        self.coarsen_impl(marks, true)
    }

    fn coarsen_impl(
        &mut self,
        marks: &[bool],
        keep_balance: bool,
    ) -> Result<RefineStats, MeshError> {
        self.check_marks(marks)?;
        let mut stats = RefineStats::default();
        let mut leaves = Vec::with_capacity(self.leaves.len());
        let mut k = 0;
        while k < self.leaves.len() {
            let leaf = &self.leaves[k];
            if leaf.key.level > 0 && leaf.key.child_index() == 0 && k + 3 < self.leaves.len() {
                let parent = leaf.key.parent();
                let family = [k, k + 1, k + 2, k + 3];
                let complete = family.iter().enumerate().all(|(c, &m)| {
                    let key = self.leaves[m].key;
                    key.parent() == parent && key.child_index() == c as u8 && marks[m]
                });
                if complete && (!keep_balance || self.family_keeps_balance(family)?) {
                    leaves.push(Leaf::merge(family.map(|m| &self.leaves[m])));
                    stats.origins.push(LeafOrigin::Coarsened(family));
                    stats.coarsened += 1;
                    k += 4;
                    continue;
                }
            }
            leaves.push(leaf.clone());
            stats.origins.push(LeafOrigin::Same(k));
            k += 1;
        }
        self.leaves = leaves;
        self.reindex();
        Ok(stats)
    }

    fn family_keeps_balance(&self, family: [usize; 4]) -> Result<bool, MeshError> {
        for (c, &m) in family.iter().enumerate() {
            let external = [
                if c & 1 == 0 { 0 } else { 1 },
                if c & 2 == 0 { 2 } else { 3 },
            ];
            for f in external {
                if let FaceNeighbor::Finer { .. } = self.face_neighbor(m, f)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Leaves that must be refined so that no face neighbour is two or more
    /// levels finer.
    fn balance_marks(&self) -> Vec<bool> {
        let mut marks = vec![false; self.leaves.len()];
        for leaf in &self.leaves {
            if leaf.key.level < 2 {
                continue;
            }
            for f in 0..4 {
                if let Ok(pos) = self.face_pos(&leaf.key, f) {
                    if let Some(n) = self.leaf_covering(pos.tree, leaf.key.level, pos.i, pos.j) {
                        if self.leaves[n].level() + 1 < leaf.key.level {
                            marks[n] = true;
                        }
                    }
                }
            }
        }
        marks
    }

    /// Refines until every pair of face-adjacent leaves differs by at most
    /// one level. Never coarsens; a balanced forest is left unchanged.
    pub fn enforce_balance(&mut self) -> Result<RefineStats, MeshError> {
        let mut total = RefineStats {
            origins: (0..self.leaves.len()).map(LeafOrigin::Same).collect(),
            ..Default::default()
        };
        loop {
            let marks = self.balance_marks();
            if !marks.iter().any(|&m| m) {
                break;
            }
            let step = self.refine(&marks)?;
            total.refined += step.refined;
            if step.refined == 0 {
                total.violations += step.dropped;
                break;
            }
            total.origins = step
                .origins
                .iter()
                .map(|o| match o {
                    LeafOrigin::Same(k) => total.origins[*k].clone(),
                    LeafOrigin::Refined(k) => match total.origins[*k] {
                        LeafOrigin::Same(o) | LeafOrigin::Refined(o) => LeafOrigin::Refined(o),
                        LeafOrigin::Coarsened(_) => unreachable!("balance never coarsens"),
                    },
                    LeafOrigin::Coarsened(_) => unreachable!("balance never coarsens"),
                })
                .collect();
        }
        Ok(total)
    }

    pub fn is_balanced(&self) -> bool {
        !self.balance_marks().iter().any(|&m| m)
    }

    /// CSV snapshot with one row per leaf.
    pub fn snapshot_csv(&self) -> String {
        let mut s = String::from("tree_id,level,morton,x_centroid,y_centroid,area\n");
        for l in &self.leaves {
            let _ = writeln!(
                s,
                "{},{},{},{:?},{:?},{:?}",
                l.key.tree, l.key.level, l.key.morton, l.centroid[0], l.centroid[1], l.area
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::super::base::RectMesh;
    use super::*;

    pub(crate) fn strip(nx: usize, l_max: u8) -> QuadForest {
        let base = BaseMesh::rectangle(&RectMesh {
            x0: 0.0,
            x1: nx as f64,
            y0: 0.0,
            y1: 1.0,
            nx,
            ny: 1,
            left: BoundaryTag::Wall,
            right: BoundaryTag::Wall,
            bottom: BoundaryTag::Wall,
            top: BoundaryTag::Wall,
            periodic_x: false,
        })
        .unwrap();
        QuadForest::new(Arc::new(base), l_max).unwrap()
    }

    #[test]
    fn morton_round_trip() {
        for (i, j) in [(0, 0), (1, 0), (0, 1), (5, 3), (1023, 77)] {
            let k = CellKey::from_ij(0, 10, i, j);
            assert_eq!(k.ij(), (i, j));
        }
        assert_eq!(CellKey::from_ij(0, 1, 1, 1).morton, 3);
    }

    #[test]
    fn refine_single_cell() {
        let mut f = strip(1, 2);
        f.refine(&[true]).unwrap();
        assert_eq!(f.len(), 4);
        for (k, l) in f.leaves().iter().enumerate() {
            assert_eq!(l.key.level, 1);
            assert_eq!(l.key.morton, k as u64);
        }
        assert!((f.total_area() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn refine_at_lmax_dropped() {
        let mut f = strip(1, 0);
        let s = f.refine(&[true]).unwrap();
        assert_eq!(s.dropped, 1);
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn hanging_neighbors() {
        let mut f = strip(2, 2);
        f.refine(&[true, false]).unwrap();
        assert_eq!(f.len(), 5);
        let coarse = f.find(&CellKey::root(1)).unwrap();
        match f.face_neighbor(coarse, 0).unwrap() {
            FaceNeighbor::Finer { leaves, face, .. } => {
                assert_eq!(face, 1);
                assert_eq!(f.leaf(leaves[0]).key, CellKey::from_ij(0, 1, 1, 0));
                assert_eq!(f.leaf(leaves[1]).key, CellKey::from_ij(0, 1, 1, 1));
            }
            other => panic!("unexpected {other:?}"),
        }
        let fine = f.find(&CellKey::from_ij(0, 1, 1, 1)).unwrap();
        assert!(matches!(
            f.face_neighbor(fine, 1).unwrap(),
            FaceNeighbor::Coarser { face: 0, .. }
        ));
    }

    #[test]
    fn balance_three_cell_strip() {
        let mut f = strip(3, 3);
        f.refine(&[true, false, false]).unwrap();
        // refine the level-1 cell touching tree 1 once more
        let k = f.find(&CellKey::from_ij(0, 1, 1, 0)).unwrap();
        let mut marks = vec![false; f.len()];
        marks[k] = true;
        f.refine(&marks).unwrap();
        assert!(!f.is_balanced());
        let s = f.enforce_balance().unwrap();
        assert!(f.is_balanced());
        assert_eq!(s.refined, 1);
        assert!(f.find(&CellKey::root(1)).is_none());
        assert!(f.find(&CellKey::root(2)).is_some());
        let before = f.len();
        let again = f.enforce_balance().unwrap();
        assert_eq!(again.refined, 0);
        assert_eq!(f.len(), before);
    }

    #[test]
    fn coarsen_requires_full_family() {
        let mut f = strip(1, 2);
        f.refine(&[true]).unwrap();
        f.coarsen(&[true, true, true, false]).unwrap();
        assert_eq!(f.len(), 4);
        f.coarsen(&[true; 4]).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.leaf(0).key, CellKey::root(0));
        assert_eq!(f.leaf(0).corners, strip(1, 2).leaf(0).corners);
    }

    #[test]
    fn flipped_tree_neighbor_order() {
        let text = "6\n0 0\n1 0\n1 1\n0 1\n2 0\n2 1\n2\n0 1 2 3 w - w w\n2 1 4 5 - w w w\n";
        let base = Arc::new(BaseMesh::from_text(text).unwrap());
        let mut f = QuadForest::new(base, 2).unwrap();
        f.refine(&[false, true]).unwrap();
        let coarse = f.find(&CellKey::root(0)).unwrap();
        match f.face_neighbor(coarse, 1).unwrap() {
            FaceNeighbor::Finer { leaves, .. } => {
                // ordered by increasing y along the coarse cell's face
                assert!(f.leaf(leaves[0]).centroid[1] < f.leaf(leaves[1]).centroid[1]);
                for l in leaves {
                    assert!((f.leaf(l).centroid[0] - 1.25).abs() < 1e-12);
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
