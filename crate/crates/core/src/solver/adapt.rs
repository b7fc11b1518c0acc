//! Solution-adaptive refinement and coarsening with solution transfer.

use super::{Discretization, SolverParams};
use crate::mesh::{LeafOrigin, QuadForest};
use crate::reconstruction::{least_squares_gradient, StencilEntry};
use crate::topography::BottomField;
use crate::Result;

/// Quantity whose normalised gradient drives refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Criterion {
    /// |∇h|
    Depth,
    /// |∇(h + B)|
    Surface,
    /// |∇(hZ)|
    Scalar,
    /// Band `|x + y − s(t)| < width` with `s` moving from `from` to `to`
    /// once per `period` (indicator 1 inside, 0 outside).
    Sweep {
        from: f64,
        to: f64,
        period: f64,
        width: f64,
    },
}

impl Criterion {
    pub fn name(&self) -> &'static str {
        match self {
            Criterion::Depth => "depth",
            Criterion::Surface => "surface",
            Criterion::Scalar => "scalar",
            Criterion::Sweep { .. } => "sweep",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptConfig {
    pub criterion: Criterion,
    /// Refine where β > threshold, coarsen complete families where β ≤ threshold.
    pub threshold: f64,
    /// Layers of neighbours added around refined cells.
    pub buffer: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AdaptReport {
    pub refined: usize,
    pub balance_refined: usize,
    pub coarsened: usize,
    pub dropped: usize,
    pub violations: usize,
    /// Water volume created (+) or removed (−) by the transfer.
    pub mass_defect: f64,
    pub leaves: usize,
}

/// Normalised refinement indicator β ∈ [0, 1] per leaf.
pub fn indicator(disc: &Discretization, w: &[[f64; 4]], c: &Criterion, t: f64) -> Vec<f64> {
    let f = &disc.forest;
    if let Criterion::Sweep {
        from,
        to,
        period,
        width,
    } = *c
    {
        let phase = (t / period).fract();
        let s = from + (to - from) * phase;
        return f
            .leaves()
            .iter()
            .map(|l| {
                let d = l.centroid[0] + l.centroid[1] - s;
                if d.abs() < width {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
    }
    let q: Vec<f64> = (0..f.len())
        .map(|k| match c {
            Criterion::Depth => w[k][0],
            Criterion::Surface => w[k][0] + disc.bmean(k),
            _ => w[k][3],
        })
        .collect();
    let grads: Vec<f64> = (0..f.len())
        .map(|k| {
            let ctr = f.leaf(k).centroid;
            let nb: Vec<_> = disc.stencils[k]
                .entries
                .iter()
                .map(|e| match *e {
                    StencilEntry::Cell { leaf, shift } => {
                        let x = f.leaf(leaf).centroid;
                        ([x[0] + shift[0], x[1] + shift[1]], [q[leaf]])
                    }
                    StencilEntry::Ghost { center, .. } => (center, [q[k]]),
                })
                .collect();
            least_squares_gradient(ctr, [q[k]], &nb)
                .map(|g| g[0][0].hypot(g[0][1]))
                .unwrap_or(0.0)
        })
        .collect();
    let max = grads.iter().copied().fold(0.0, f64::max);
    if max < 1e-8 {
        return vec![0.0; f.len()];
    }
    grads.into_iter().map(|g| g / max).collect()
}

/// Moves cell data onto a changed forest. Refined cells inherit the parent
/// free surface (η − B̄ per child); coarsened families average the free
/// surface by area. Momentum and scalar mass are redistributed
/// conservatively. Where the free-surface rule would produce negative depth
/// (wet-dry regions) depth is transferred conservatively instead.
fn transfer(
    old: &QuadForest,
    old_b: &BottomField,
    w: &[[f64; 4]],
    new: &QuadForest,
    new_b: &BottomField,
    origins: &[LeafOrigin],
    h_dry: f64,
) -> (Vec<[f64; 4]>, f64) {
    let mut out = vec![[0.0; 4]; new.len()];
    let mut defect = 0.0;
    let mut k = 0;
    while k < origins.len() {
        match origins[k] {
            LeafOrigin::Same(o) => {
                out[k] = w[o];
                k += 1;
            }
            LeafOrigin::Refined(o) => {
                let mut end = k;
                while end < origins.len() && origins[end] == LeafOrigin::Refined(o) {
                    end += 1;
                }
                let ao = old.leaf(o).area;
                let wo = w[o];
                let eta = wo[0] + old_b.cells[o].mean();
                let mut h: Vec<f64> = (k..end).map(|c| eta - new_b.cells[c].mean()).collect();
                if wo[0] <= h_dry {
                    h.iter_mut().for_each(|x| *x = wo[0]);
                } else if h.iter().any(|&x| x < 0.0) {
                    h.iter_mut().for_each(|x| *x = x.max(0.0));
                    let s: f64 = (k..end).zip(&h).map(|(c, x)| new.leaf(c).area * x).sum();
                    if s > 0.0 {
                        let f = ao * wo[0] / s;
                        h.iter_mut().for_each(|x| *x *= f);
                    } else {
                        h.iter_mut().for_each(|x| *x = wo[0]);
                    }
                }
                let s: f64 = (k..end).zip(&h).map(|(c, x)| new.leaf(c).area * x).sum();
                for (c, hc) in (k..end).zip(&h) {
                    let share = if s > 0.0 { ao * hc / s } else { 0.0 };
                    out[c] = [*hc, wo[1] * share, wo[2] * share, wo[3] * share];
                }
                defect += s - ao * wo[0];
                k = end;
            }
            LeafOrigin::Coarsened(fam) => {
                let ap = new.leaf(k).area;
                let all_wet = fam.iter().all(|&c| w[c][0] > h_dry);
                let mut sum = [0.0; 4];
                let mut eta = 0.0;
                for &c in &fam {
                    let a = old.leaf(c).area;
                    for v in 0..4 {
                        sum[v] += a * w[c][v];
                    }
                    eta += a * (w[c][0] + old_b.cells[c].mean());
                }
                let mut h = eta / ap - new_b.cells[k].mean();
                if !all_wet || h < 0.0 {
                    h = sum[0] / ap;
                }
                out[k] = [h, sum[1] / ap, sum[2] / ap, sum[3] / ap];
                defect += ap * h - sum[0];
                k += 1;
            }
        }
    }
    (out, defect)
}

fn compose_ok(ok: &[bool], origins: &[LeafOrigin]) -> Vec<bool> {
    origins
        .iter()
        .map(|o| match o {
            LeafOrigin::Same(k) => ok[*k],
            _ => false,
        })
        .collect()
}

/// One adaptation cycle at a global-step boundary: mark, refine, restore
/// 2:1 balance, coarsen, transfer. Returns `None` for the discretisation when
/// the forest did not change.
pub fn adapt_cycle(
    disc: &Discretization,
    w: &[[f64; 4]],
    cfg: &AdaptConfig,
    t: f64,
    p: &SolverParams,
) -> Result<(Option<Discretization>, Vec<[f64; 4]>, AdaptReport)> {
    let f = &disc.forest;
    let beta = indicator(disc, w, &cfg.criterion, t);
    let n = f.len();
    let mut hot: Vec<bool> = beta.iter().map(|&b| b > cfg.threshold).collect();
    for _ in 0..cfg.buffer {
        let prev = hot.clone();
        for k in 0..n {
            if prev[k] {
                for e in &disc.stencils[k].entries {
                    if let StencilEntry::Cell { leaf, .. } = e {
                        hot[*leaf] = true;
                    }
                }
            }
        }
    }
    let l_max = f.l_max();
    let marks: Vec<bool> = (0..n)
        .map(|k| hot[k] && f.leaf(k).level() < l_max)
        .collect();
    let coarsen_ok: Vec<bool> = hot.iter().map(|h| !h).collect();

    let mut report = AdaptReport::default();
    let mut forest = f.clone();
    let mut bottom = disc.bottom.clone();
    let mut data = w.to_vec();

    let apply = |forest: &mut QuadForest,
                 bottom: &mut BottomField,
                 data: &mut Vec<[f64; 4]>,
                 old: &QuadForest,
                 origins: &[LeafOrigin]|
     -> Result<f64> {
        let nb = BottomField::build(forest)?;
        let (nw, d) = transfer(old, bottom, data, forest, &nb, origins, p.h_dry);
        *bottom = nb;
        *data = nw;
        Ok(d)
    };

    let before = forest.clone();
    let st = forest.refine(&marks)?;
    report.refined = st.refined;
    report.dropped = st.dropped;
    let mut ok = coarsen_ok;
    if st.refined > 0 {
        report.mass_defect += apply(&mut forest, &mut bottom, &mut data, &before, &st.origins)?;
        ok = compose_ok(&ok, &st.origins);
    }

    let before = forest.clone();
    let st = forest.enforce_balance()?;
    report.balance_refined = st.refined;
    report.violations = st.violations;
    if st.refined > 0 {
        report.mass_defect += apply(&mut forest, &mut bottom, &mut data, &before, &st.origins)?;
        ok = compose_ok(&ok, &st.origins);
    }

    let before = forest.clone();
    let st = forest.coarsen_balanced(&ok)?;
    report.coarsened = st.coarsened;
    if st.coarsened > 0 {
        report.mass_defect += apply(&mut forest, &mut bottom, &mut data, &before, &st.origins)?;
    }
    report.leaves = forest.len();

    if report.refined + report.balance_refined + report.coarsened == 0 {
        return Ok((None, data, report));
    }
    Ok((Some(Discretization::new(forest)?), data, report))
}
