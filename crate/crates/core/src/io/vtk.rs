//! Legacy VTK (ASCII unstructured grid) output of the leaf cells.

use std::fmt::Write as _;
use std::path::Path;

use crate::solver::Discretization;
use crate::{Error, Result};

/// Quad corners in counter-clockwise order, as indices into `Leaf::corners`.
const CCW: [usize; 4] = [0, 1, 3, 2];
const VTK_QUAD: u8 = 9;

/// Cell fields in file order.
pub const CELL_FIELDS: [&str; 6] = ["h", "hU", "hV", "Z", "B", "level"];

/// Renders the leaves with cell data h, hU, hV, Z (concentration), B (cell
/// mean), level and point data B. Each cell gets its own four points.
pub fn vtk_string(disc: &Discretization, w: &[[f64; 4]], t: f64) -> String {
    let leaves = disc.forest.leaves();
    let n = leaves.len();
    let mut s = String::with_capacity(200 * n + 256);
    s.push_str("# vtk DataFile Version 3.0\n");
    let _ = writeln!(s, "shallow water t={t}");
    s.push_str("ASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {} double", 4 * n);
    for l in leaves {
        for c in CCW {
            let p = l.corners[c];
            let _ = writeln!(s, "{} {} 0", p[0], p[1]);
        }
    }
    let _ = writeln!(s, "CELLS {} {}", n, 5 * n);
    for k in 0..n {
        let b = 4 * k;
        let _ = writeln!(s, "4 {} {} {} {}", b, b + 1, b + 2, b + 3);
    }
    let _ = writeln!(s, "CELL_TYPES {n}");
    for _ in 0..n {
        let _ = writeln!(s, "{VTK_QUAD}");
    }
    let _ = writeln!(s, "CELL_DATA {n}");
    let scalar = |s: &mut String, name: &str, vals: &mut dyn Iterator<Item = String>| {
        let _ = writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default");
        for v in vals {
            s.push_str(&v);
            s.push('\n');
        }
    };
    for v in 0..3 {
        scalar(
            &mut s,
            CELL_FIELDS[v],
            &mut w.iter().map(|x| x[v].to_string()),
        );
    }
    scalar(
        &mut s,
        "Z",
        &mut w
            .iter()
            .map(|x| if x[0] > 0.0 { x[3] / x[0] } else { 0.0 }.to_string()),
    );
    scalar(&mut s, "B", &mut (0..n).map(|k| disc.bmean(k).to_string()));
    scalar(
        &mut s,
        "level",
        &mut leaves.iter().map(|l| l.level().to_string()),
    );
    let _ = writeln!(s, "POINT_DATA {}", 4 * n);
    scalar(
        &mut s,
        "B",
        &mut leaves
            .iter()
            .flat_map(|l| CCW.map(|c| l.bottom[c]))
            .map(|b| b.to_string()),
    );
    s
}

pub fn write_vtk(path: &Path, disc: &Discretization, w: &[[f64; 4]], t: f64) -> Result<()> {
    std::fs::write(path, vtk_string(disc, w, t)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::mesh::{BaseMesh, BoundaryTag, QuadForest, RectMesh};

    fn disc(nx: usize, level: u8) -> Discretization {
        let w = BoundaryTag::Wall;
        let r = RectMesh {
            x0: 0.0,
            x1: 1.0,
            y0: 0.0,
            y1: 1.0,
            nx,
            ny: 1,
            left: w,
            right: w,
            bottom: w,
            top: w,
            periodic_x: false,
        };
        let base = BaseMesh::rectangle(&r).unwrap();
        Discretization::new(QuadForest::uniform(Arc::new(base), level, level).unwrap()).unwrap()
    }

    #[test]
    fn single_cell_layout() {
        let d = disc(1, 0);
        let s = vtk_string(&d, &[[1.0, 0.5, 0.0, 0.2]], 0.0);
        assert!(s.contains("POINTS 4 double\n"));
        assert!(s.contains("CELLS 1 5\n4 0 1 2 3\n"));
        assert_eq!(s.matches("SCALARS").count(), 7);
        assert!(s.contains("SCALARS Z double 1\nLOOKUP_TABLE default\n0.2\n"));
    }

    #[test]
    fn refined_cell_count() {
        let d = disc(2, 2);
        let w = vec![[1.0, 0.0, 0.0, 0.0]; d.len()];
        let s = vtk_string(&d, &w, 0.5);
        assert!(s.contains(&format!("CELL_TYPES {}\n", d.len())));
        assert_eq!(d.len(), 32);
    }
}
