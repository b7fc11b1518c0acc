//! Time integration: CFL step, LTS schedule, flux assembly with well-balanced
//! source terms, wet-dry safeguards and solution-adaptive refinement.

mod adapt;
mod schedule;
mod step;
mod wetdry;

use std::time::Duration;

pub use adapt::{adapt_cycle, indicator, AdaptConfig, AdaptReport, Criterion};
pub use schedule::{build_schedule, LtsSchedule, Stage};
pub use step::{
    advance_global_step, advance_single_rate, global_dt_min, interface_transport, local_dt,
    StepReport, Transport,
};
pub use wetdry::{wet_dry_fixup, WetDryLedger};

use crate::mesh::{leaf_interfaces, Interface, MeshError, QuadForest, Side};
use crate::reconstruction::{build_stencils, BoundaryConditions, CellStencil, ReconParams};
use crate::topography::BottomField;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverParams {
    pub g: f64,
    pub cfl: f64,
    pub h_dry: f64,
    pub k_venkat: f64,
    /// Well-balance correction parameter of the kinetic force terms.
    pub alpha: f64,
    pub bc: BoundaryConditions,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            g: 9.812,
            cfl: 0.4,
            h_dry: 1e-6,
            k_venkat: 0.3,
            alpha: 1.0,
            bc: BoundaryConditions::default(),
        }
    }
}

impl SolverParams {
    pub fn recon(&self) -> ReconParams {
        ReconParams {
            g: self.g,
            k_venkat: self.k_venkat,
            h_dry: self.h_dry,
            limit: true,
        }
    }
}

/// Per-leaf cell averages (h, hU, hV, hZ) and the simulation time.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub w: Vec<[f64; 4]>,
    pub t: f64,
}

/// Forest plus everything derived from its topology.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub forest: QuadForest,
    pub bottom: BottomField,
    pub interfaces: Vec<Interface>,
    pub stencils: Vec<CellStencil>,
    /// Cell length scale for the time step: inradius 2·area/perimeter.
    pub length: Vec<f64>,
    /// Level of the finer side of each interface.
    pub iface_level: Vec<u8>,
}

impl Discretization {
    pub fn new(forest: QuadForest) -> Result<Self> {
        let bottom = BottomField::build(&forest)?;
        let interfaces = leaf_interfaces(&forest)?;
        let stencils = build_stencils(&forest)?;
        let length = forest
            .leaves()
            .iter()
            .map(|l| {
                let perimeter: f64 = (0..4).map(|f| l.face_length(f)).sum();
                2.0 * l.area / perimeter
            })
            .collect();
        let iface_level = interfaces
            .iter()
            .map(|i| {
                let l = forest.leaf(i.left).level();
                match i.right {
                    Side::Cell(r) => l.max(forest.leaf(r).level()),
                    Side::Boundary(_) => l,
                }
            })
            .collect();
        Ok(Discretization {
            forest,
            bottom,
            interfaces,
            stencils,
            length,
            iface_level,
        })
    }

    pub fn len(&self) -> usize {
        self.forest.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forest.is_empty()
    }

    pub fn bmean(&self, k: usize) -> f64 {
        self.bottom.cells[k].mean()
    }

    /// Total of `w[var] · area`.
    pub fn total(&self, w: &[[f64; 4]], var: usize) -> f64 {
        self.forest
            .leaves()
            .iter()
            .zip(w)
            .map(|(l, x)| l.area * x[var])
            .sum()
    }

    pub fn check_balanced(&self) -> std::result::Result<(), MeshError> {
        if self.forest.is_balanced() {
            Ok(())
        } else {
            Err(MeshError::Unbalanced { leaf: 0, face: 0 })
        }
    }
}

/// Time integration mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Fixed mesh, one time step for all cells.
    Uniform,
    /// Adaptive mesh, one time step for all cells.
    Amr,
    /// Adaptive mesh with level-synchronised local time stepping.
    Stamr,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Uniform => "uniform",
            Mode::Amr => "amr",
            Mode::Stamr => "stamr",
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        match s {
            "uniform" => Some(Mode::Uniform),
            "amr" => Some(Mode::Amr),
            "stamr" => Some(Mode::Stamr),
            _ => None,
        }
    }
}

/// Wall-clock time spent per phase.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseTimes {
    pub reconstruction: Duration,
    pub flux: Duration,
    pub update: Duration,
    pub adaptation: Duration,
}

/// A running simulation.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub disc: Discretization,
    pub state: SolverState,
    pub params: SolverParams,
    pub mode: Mode,
    pub adapt: Option<AdaptConfig>,
    pub ledger: WetDryLedger,
    pub times: PhaseTimes,
    pub steps: usize,
    /// Cell updates performed (sum over stages of advancing cells).
    pub cell_updates: u64,
    /// Accumulated mass change from solution transfer under adaptation.
    pub transfer_defect: f64,
    /// (h, hU, hV, hZ) that left through domain boundaries.
    pub boundary_outflow: [f64; 4],
}

impl Simulation {
    pub fn new(
        forest: QuadForest,
        w: Vec<[f64; 4]>,
        params: SolverParams,
        mode: Mode,
        adapt: Option<AdaptConfig>,
    ) -> Result<Self> {
        let disc = Discretization::new(forest)?;
        Ok(Self::from_discretization(disc, w, params, mode, adapt))
    }

    pub fn from_discretization(
        disc: Discretization,
        w: Vec<[f64; 4]>,
        params: SolverParams,
        mode: Mode,
        adapt: Option<AdaptConfig>,
    ) -> Self {
        Simulation {
            disc,
            state: SolverState { w, t: 0.0 },
            params,
            mode,
            adapt: if mode == Mode::Uniform { None } else { adapt },
            ledger: WetDryLedger::default(),
            times: PhaseTimes::default(),
            steps: 0,
            cell_updates: 0,
            transfer_defect: 0.0,
            boundary_outflow: [0.0; 4],
        }
    }

    /// Runs one adaptation cycle (no-op in uniform mode).
    pub fn adapt_now(&mut self) -> Result<Option<AdaptReport>> {
        let Some(cfg) = self.adapt.clone() else {
            return Ok(None);
        };
        let start = std::time::Instant::now();
        let (disc, w, report) =
            adapt_cycle(&self.disc, &self.state.w, &cfg, self.state.t, &self.params)?;
        if let Some(d) = disc {
            self.disc = d;
        }
        self.state.w = w;
        self.transfer_defect += report.mass_defect;
        self.times.adaptation += start.elapsed();
        Ok(Some(report))
    }

    /// Advances one global step without passing `t_stop`; adapts afterwards.
    pub fn step(&mut self, t_stop: f64) -> Result<f64> {
        let remaining = t_stop - self.state.t;
        if remaining <= 0.0 {
            return Ok(0.0);
        }
        let report = match self.mode {
            Mode::Stamr => {
                let levels = self.disc.forest.levels();
                let mut dt_min = global_dt_min(&self.disc, &self.state.w, &self.params, true);
                let span = (1u64 << (levels[levels.len() - 1] - levels[0])) as f64;
                if dt_min * span > remaining {
                    dt_min = remaining / span;
                }
                let sched = build_schedule(&levels, dt_min);
                advance_global_step(
                    &self.disc,
                    &mut self.state,
                    &sched,
                    &self.params,
                    &mut self.ledger,
                )?
            }
            Mode::Amr | Mode::Uniform => {
                let dt =
                    global_dt_min(&self.disc, &self.state.w, &self.params, false).min(remaining);
                advance_single_rate(
                    &self.disc,
                    &mut self.state,
                    dt,
                    &self.params,
                    &mut self.ledger,
                )?
            }
        };
        self.times.reconstruction += report.reconstruction;
        self.times.flux += report.flux;
        self.times.update += report.update;
        self.cell_updates += report.cell_updates;
        for v in 0..4 {
            self.boundary_outflow[v] += report.boundary_outflow[v];
        }
        self.steps += 1;
        if (t_stop - self.state.t).abs() <= 1e-12 * t_stop.abs().max(1.0) {
            self.state.t = t_stop;
        }
        self.adapt_now()?;
        Ok(report.dt)
    }

    /// Steps until `t_stop`, calling `each` after every global step.
    pub fn run_until(&mut self, t_stop: f64, mut each: impl FnMut(&Simulation)) -> Result<()> {
        while self.state.t < t_stop {
            self.step(t_stop)?;
            each(self);
        }
        Ok(())
    }
}
