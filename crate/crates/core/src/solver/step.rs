use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::schedule::LtsSchedule;
use super::wetdry::{wet_dry_fixup, WetDryLedger};
use super::{Discretization, SolverParams, SolverState};
use crate::kinetic::{collision_time, time_integrated_flux, FluxParams};
use crate::mesh::{BoundaryTag, Interface, Side};
use crate::reconstruction::{boundary_state, point_state, reconstruct, CellRecon, PointState};
use crate::topography::allocate_subcell_heights;
use crate::transport::scalar_flux;
use crate::{Error, Point, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepReport {
    pub dt: f64,
    pub reconstruction: Duration,
    pub flux: Duration,
    pub update: Duration,
    pub cell_updates: u64,
    /// (h, hU, hV, hZ) carried out through domain boundaries.
    pub boundary_outflow: [f64; 4],
}

/// `CFL · d / (|U| + √(G h))`; dry cells impose no limit.
pub fn local_dt(w: &[f64; 4], d: f64, p: &SolverParams) -> f64 {
    let h = w[0];
    if h <= p.h_dry {
        return f64::INFINITY;
    }
    let speed = (w[1] * w[1] + w[2] * w[2]).sqrt() / h + (p.g * h).sqrt();
    p.cfl * d / speed
}

/// Smallest admissible step. With `lts`, each cell's limit is divided by
/// `2^(finest − level)`, giving the finest-level sub-step.
pub fn global_dt_min(disc: &Discretization, w: &[[f64; 4]], p: &SolverParams, lts: bool) -> f64 {
    let finest = disc
        .forest
        .leaves()
        .iter()
        .map(|l| l.level())
        .max()
        .unwrap_or(0);
    (0..disc.len())
        .map(|k| {
            let dt = local_dt(&w[k], disc.length[k], p);
            if lts {
                dt / (1u64 << (finest - disc.forest.leaf(k).level())) as f64
            } else {
                dt
            }
        })
        .fold(f64::INFINITY, f64::min)
}

fn mirror_of(wet: &PointState, n: [f64; 2]) -> PointState {
    boundary_state(wet, BoundaryTag::Wall, n, 0.0, &Default::default(), 0.0)
}

/// Result of [`interface_transport`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Transport {
    /// (h, hU, hV, hZ) moved from left to right.
    pub w: [f64; 4],
    /// Time-integrated hydrostatic thrust `½G h² n` of each side's own
    /// state on the face, outward from that side.
    pub thrust: [Point; 2],
}

/// Time-integrated transport of (h, hU, hV, hZ) across a whole interface
/// (left to right) over `dt`, starting at time `t`.
pub fn interface_transport(
    disc: &Discretization,
    recon: &[CellRecon],
    iface: &Interface,
    dt: f64,
    t: f64,
    p: &SolverParams,
) -> Transport {
    let rp = p.recon();
    let fp = FluxParams {
        g: p.g,
        alpha: p.alpha,
        h_dry: p.h_dry,
    };
    let n = iface.normal;
    let mut out = Transport::default();
    for g in 0..2 {
        let x = iface.gauss[g];
        let mut l = point_state(
            &disc.forest,
            &disc.bottom,
            &recon[iface.left],
            iface.left,
            x,
            &rp,
        );
        let (mut r, mut wall) = match iface.right {
            Side::Cell(k) => (
                point_state(
                    &disc.forest,
                    &disc.bottom,
                    &recon[k],
                    k,
                    iface.gauss_right(g),
                    &rp,
                ),
                false,
            ),
            Side::Boundary(tag) => {
                let (b, _) = disc.bottom.at(&disc.forest, iface.left, x);
                (
                    boundary_state(&l, tag, n, b, &p.bc, t),
                    tag == BoundaryTag::Wall,
                )
            }
        };
        let w = 0.5 * iface.length;
        let pl = 0.5 * p.g * l.side.h * l.side.h * w * dt;
        out.thrust[0][0] += pl * n[0];
        out.thrust[0][1] += pl * n[1];
        if !matches!(iface.right, Side::Boundary(_)) {
            let pr = 0.5 * p.g * r.side.h * r.side.h * w * dt;
            out.thrust[1][0] -= pr * n[0];
            out.thrust[1][1] -= pr * n[1];
        }
        let dry_l = l.side.h <= p.h_dry;
        let dry_r = r.side.h <= p.h_dry;
        if dry_l && dry_r {
            continue;
        }
        // a dry side standing above the wet surface acts as a wall
        if dry_l && l.eta >= r.eta {
            l = mirror_of(&r, n);
            wall = true;
        } else if dry_r && r.eta >= l.eta {
            r = mirror_of(&l, n);
            wall = true;
        }
        let tau = collision_time(l.side.h, r.side.h, dt);
        let mut f = time_integrated_flux(&l.side, &r.side, n, dt, tau, &fp);
        if wall {
            f[0] = 0.0;
        } else if (l.side.h <= p.h_dry && f[0] > 0.0) || (r.side.h <= p.h_dry && f[0] < 0.0) {
            // nothing can leave a dry side
            f = [0.0; 3];
        }
        let s = scalar_flux(f[0], l.z, r.z);
        out.w[0] += w * f[0];
        out.w[1] += w * f[1];
        out.w[2] += w * f[2];
        out.w[3] += w * s;
    }
    out
}

/// Per-cell accumulator: transport and face thrust.
#[derive(Debug, Clone, Copy, Default)]
struct Acc {
    w: [f64; 4],
    thrust: Point,
}

/// Scales transports so that no cell exports more water in this pass than
/// it holds (state plus what it has accumulated so far). Each interface
/// takes the factor of its upwind side, so the scaling is conservative.
fn limit_outflow(
    disc: &Discretization,
    w: &[[f64; 4]],
    acc: &[Acc],
    faces: &[usize],
    fluxes: &mut [Transport],
) {
    let mut out = vec![0.0f64; w.len()];
    for (&i, f) in faces.iter().zip(fluxes.iter()) {
        let iface = &disc.interfaces[i];
        if f.w[0] > 0.0 {
            out[iface.left] += f.w[0];
        } else if let Some(r) = iface.right_cell() {
            out[r] -= f.w[0];
        }
    }
    let theta = |k: usize| {
        let avail = w[k][0] * disc.forest.leaf(k).area + acc[k].w[0];
        if out[k] > avail {
            avail.max(0.0) / out[k]
        } else {
            1.0
        }
    };
    for (&i, f) in faces.iter().zip(fluxes.iter_mut()) {
        let iface = &disc.interfaces[i];
        let th = if f.w[0] > 0.0 {
            theta(iface.left)
        } else {
            iface.right_cell().map_or(1.0, theta)
        };
        if th < 1.0 {
            f.w = f.w.map(|x| x * th);
        }
    }
}

fn accumulate(acc: &mut [Acc], iface: &Interface, f: &Transport, out: &mut [f64; 4]) {
    let a = &mut acc[iface.left];
    for v in 0..4 {
        a.w[v] -= f.w[v];
    }
    a.thrust[0] += f.thrust[0][0];
    a.thrust[1] += f.thrust[0][1];
    if let Some(r) = iface.right_cell() {
        let a = &mut acc[r];
        for v in 0..4 {
            a.w[v] += f.w[v];
        }
        a.thrust[0] += f.thrust[1][0];
        a.thrust[1] += f.thrust[1][1];
    } else {
        for v in 0..4 {
            out[v] += f.w[v];
        }
    }
}

/// Applies the accumulated transport and the well-balanced bottom source
/// to one cell: continuity first, then momentum with the subcell-averaged
/// source using (hⁿ + hⁿ⁺¹)/2. Cells next to dry ground (flat surface
/// reconstruction) take the source as the face thrust of their own state,
/// which stays balanced when the shoreline cuts through the cell.
#[allow(clippy::too_many_arguments)]
fn update_cell(
    disc: &Discretization,
    k: usize,
    w: &mut [f64; 4],
    acc: &Acc,
    shore: bool,
    dt: f64,
    p: &SolverParams,
    ledger: &mut WetDryLedger,
) {
    let area = disc.forest.leaf(k).area;
    let h = w[0] + acc.w[0] / area;
    let (sx, sy) = if shore {
        (acc.thrust[0] / area, acc.thrust[1] / area)
    } else {
        let geo = &disc.bottom.cells[k];
        let (h1o, h2o) = allocate_subcell_heights(w[0].max(0.0), geo);
        let (h1n, h2n) = allocate_subcell_heights(h.max(0.0), geo);
        let a = geo.alpha;
        let m1 = a * 0.5 * (h1o + h1n);
        let m2 = (1.0 - a) * 0.5 * (h2o + h2n);
        (
            -dt * p.g * (m1 * geo.grad[0][0] + m2 * geo.grad[1][0]),
            -dt * p.g * (m1 * geo.grad[0][1] + m2 * geo.grad[1][1]),
        )
    };
    *w = [
        h,
        w[1] + acc.w[1] / area + sx,
        w[2] + acc.w[2] / area + sy,
        w[3] + acc.w[3] / area,
    ];
    wet_dry_fixup(w, area, p.h_dry, ledger);
}

fn check_finite(w: &[f64; 4], k: usize, t: f64) -> Result<()> {
    if w.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { cell: k, time: t })
    }
}

/// One global step of level-synchronised local time stepping.
///
/// Every interface is evaluated whenever its finer side advances, with that
/// side's sub-step; both neighbours accumulate the same transport and a cell
/// consumes its accumulator when it advances.
pub fn advance_global_step(
    disc: &Discretization,
    state: &mut SolverState,
    sched: &LtsSchedule,
    p: &SolverParams,
    ledger: &mut WetDryLedger,
) -> Result<StepReport> {
    let n = disc.len();
    let mut report = StepReport {
        dt: sched.dt(),
        ..Default::default()
    };
    let mut acc = vec![Acc::default(); n];
    let levels: Vec<u8> = disc.forest.leaves().iter().map(|l| l.level()).collect();
    let mut needed = vec![false; n];
    for (s, stage) in sched.stages.iter().enumerate() {
        let mut adv = [false; 64];
        for &l in &stage.levels {
            adv[l as usize] = true;
        }
        let active: Vec<usize> = (0..disc.interfaces.len())
            .filter(|&i| adv[disc.iface_level[i] as usize])
            .collect();
        needed.iter_mut().for_each(|x| *x = false);
        for &i in &active {
            let f = &disc.interfaces[i];
            needed[f.left] = true;
            if let Some(r) = f.right_cell() {
                needed[r] = true;
            }
        }
        let t_stage = state.t + s as f64 * sched.dt_min;
        let start = Instant::now();
        let recon = reconstruct(
            &disc.forest,
            &disc.bottom,
            &disc.stencils,
            &state.w,
            &p.bc,
            t_stage,
            &p.recon(),
            Some(&needed),
        );
        report.reconstruction += start.elapsed();

        let start = Instant::now();
        let mut fluxes: Vec<Transport> = active
            .par_iter()
            .map(|&i| {
                let l = disc.iface_level[i];
                let t0 = state.t + sched.substep_start(s, l);
                interface_transport(disc, &recon, &disc.interfaces[i], sched.substep(l), t0, p)
            })
            .collect();
        limit_outflow(disc, &state.w, &acc, &active, &mut fluxes);
        for (&i, f) in active.iter().zip(&fluxes) {
            accumulate(
                &mut acc,
                &disc.interfaces[i],
                f,
                &mut report.boundary_outflow,
            );
        }
        report.flux += start.elapsed();

        let start = Instant::now();
        for k in 0..n {
            if adv[levels[k] as usize] {
                let dt = sched.substep(levels[k]);
                let shore = recon[k].wet_dry;
                update_cell(disc, k, &mut state.w[k], &acc[k], shore, dt, p, ledger);
                check_finite(&state.w[k], k, state.t)?;
                acc[k] = Acc::default();
                report.cell_updates += 1;
            }
        }
        report.update += start.elapsed();
    }
    state.t += sched.dt();
    Ok(report)
}

/// Plain forward step of all cells with one step length.
pub fn advance_single_rate(
    disc: &Discretization,
    state: &mut SolverState,
    dt: f64,
    p: &SolverParams,
    ledger: &mut WetDryLedger,
) -> Result<StepReport> {
    let n = disc.len();
    let mut report = StepReport {
        dt,
        ..Default::default()
    };
    let start = Instant::now();
    let recon = reconstruct(
        &disc.forest,
        &disc.bottom,
        &disc.stencils,
        &state.w,
        &p.bc,
        state.t,
        &p.recon(),
        None,
    );
    report.reconstruction += start.elapsed();

    let start = Instant::now();
    let mut fluxes: Vec<Transport> = disc
        .interfaces
        .par_iter()
        .map(|iface| interface_transport(disc, &recon, iface, dt, state.t, p))
        .collect();
    let mut acc = vec![Acc::default(); n];
    let all: Vec<usize> = (0..disc.interfaces.len()).collect();
    limit_outflow(disc, &state.w, &acc, &all, &mut fluxes);
    for (iface, f) in disc.interfaces.iter().zip(&fluxes) {
        accumulate(&mut acc, iface, f, &mut report.boundary_outflow);
    }
    report.flux += start.elapsed();

    let start = Instant::now();
    for k in 0..n {
        let shore = recon[k].wet_dry;
        update_cell(disc, k, &mut state.w[k], &acc[k], shore, dt, p, ledger);
        check_finite(&state.w[k], k, state.t)?;
    }
    report.cell_updates = n as u64;
    report.update += start.elapsed();
    state.t += dt;
    Ok(report)
}
