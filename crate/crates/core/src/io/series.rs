//! CSV writers: gauge traces and centerline profiles.

use std::fmt::Write as _;
use std::path::Path;

use crate::solver::Discretization;
use crate::{Error, Point, Result};

/// Free-surface time series at fixed points. The value is η = h + B̄ of the
/// leaf containing the point.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GaugeTraces {
    pub points: Vec<Point>,
    pub rows: Vec<(f64, Vec<f64>)>,
}

impl GaugeTraces {
    pub fn new(points: Vec<Point>) -> Self {
        GaugeTraces {
            points,
            rows: Vec::new(),
        }
    }

    pub fn record(&mut self, disc: &Discretization, w: &[[f64; 4]], t: f64) {
        let eta = self
            .points
            .iter()
            .map(|&x| match disc.forest.locate(x) {
                Some(k) => w[k][0] + disc.bmean(k),
                None => f64::NAN,
            })
            .collect();
        self.rows.push((t, eta));
    }

    /// Largest recorded value per gauge.
    pub fn peaks(&self) -> Vec<f64> {
        (0..self.points.len())
            .map(|g| {
                self.rows
                    .iter()
                    .map(|r| r.1[g])
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("t");
        for g in 1..=self.points.len() {
            let _ = write!(s, ",eta_gauge{g}");
        }
        s.push('\n');
        for (t, v) in &self.rows {
            let _ = write!(s, "{t}");
            for x in v {
                let _ = write!(s, ",{x}");
            }
            s.push('\n');
        }
        s
    }
}

pub fn write_gauges(path: &Path, traces: &GaugeTraces) -> Result<()> {
    std::fs::write(path, traces.to_csv()).map_err(|e| Error::io(path, e))
}

/// Rows (x, h, hU, Z) of the leaves crossed by the horizontal line `y`,
/// ordered by centroid x.
pub fn centerline(disc: &Discretization, w: &[[f64; 4]], y: f64) -> Vec<[f64; 4]> {
    let mut rows: Vec<[f64; 4]> = disc
        .forest
        .leaves()
        .iter()
        .enumerate()
        .filter(|(_, l)| {
            let lo = l.corners.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
            let hi = l
                .corners
                .iter()
                .map(|p| p[1])
                .fold(f64::NEG_INFINITY, f64::max);
            lo <= y && y < hi
        })
        .map(|(k, l)| {
            let z = if w[k][0] > 0.0 {
                w[k][3] / w[k][0]
            } else {
                0.0
            };
            [l.centroid[0], w[k][0], w[k][1], z]
        })
        .collect();
    rows.sort_by(|a, b| a[0].total_cmp(&b[0]));
    rows
}

pub fn centerline_csv(rows: &[[f64; 4]]) -> String {
    let mut s = String::from("x,h,hU,Z\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{}", r[0], r[1], r[2], r[3]);
    }
    s
}

pub fn write_centerline(path: &Path, disc: &Discretization, w: &[[f64; 4]], y: f64) -> Result<()> {
    std::fs::write(path, centerline_csv(&centerline(disc, w, y))).map_err(|e| Error::io(path, e))
}
