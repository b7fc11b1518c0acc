//! Run driver: builds a case, advances it through its output times and
//! writes fields, traces and a JSON summary into a run directory.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use super::config::Config;
use super::series::{write_centerline, write_gauges, GaugeTraces};
use super::vtk::write_vtk;
use crate::cases::{case_by_name, CaseSpec, InitialFn};
use crate::solver::{Mode, Simulation};
use crate::{Error, Result};

/// Environment variable naming the default output root.
pub const OUT_ROOT_ENV: &str = "STAMR_OUT_ROOT";

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Parent of the run directory; `$STAMR_OUT_ROOT` or `runs` when unset.
    pub out_root: Option<PathBuf>,
    /// Write a centerline CSV at every output time.
    pub centerline: bool,
    /// Worker threads (rayon default when unset).
    pub workers: Option<usize>,
    /// Skip VTK output.
    pub no_fields: bool,
}

impl RunOptions {
    pub fn root(&self) -> PathBuf {
        self.out_root
            .clone()
            .or_else(|| std::env::var_os(OUT_ROOT_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("runs"))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PhaseSeconds {
    pub reconstruction: f64,
    pub flux: f64,
    pub update: f64,
    pub adaptation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub t: f64,
    pub steps: usize,
    pub leaves: usize,
    /// Leaf count per level.
    pub levels: Vec<usize>,
    pub mass: f64,
    pub scalar_mass: f64,
    /// L1 errors of (h, hU, hV) against the initial lake at rest.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steady_l1: Option<[f64; 3]>,
}

/// Water volume bookkeeping: `final = initial − outflow + wet_dry_added +
/// transfer_defect + residual`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Conservation {
    pub mass_initial: f64,
    pub mass_final: f64,
    pub boundary_outflow: f64,
    pub wet_dry_added: f64,
    pub transfer_defect: f64,
    pub residual: f64,
    pub relative_residual: f64,
    pub scalar_initial: f64,
    pub scalar_final: f64,
    pub scalar_outflow: f64,
    pub scalar_removed: f64,
    pub wet_dry_events: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub case: String,
    pub mode: String,
    pub l_max: u8,
    pub end_time: f64,
    pub steps: usize,
    pub cell_updates: u64,
    pub wall_seconds: f64,
    pub phases: PhaseSeconds,
    pub snapshots: Vec<Snapshot>,
    pub conservation: Conservation,
    /// Largest steady-state L1 error over all snapshots.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_steady_l1: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub gauge_peaks: Vec<f64>,
    /// Wall time of the uniform run of the same case divided by this one,
    /// when that run exists under the same root.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub speedup_vs_uniform: Option<f64>,
}

impl RunSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serialises")
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub summary: RunSummary,
    pub gauges: GaugeTraces,
    pub sim: Simulation,
}

/// Runs the registered case `name` with `overrides` applied.
pub fn run(name: &str, overrides: &Config, opts: &RunOptions) -> Result<RunOutcome> {
    let mut spec = case_by_name(name)?;
    spec.apply(overrides)?;
    run_spec(&spec, opts)
}

pub fn run_spec(spec: &CaseSpec, opts: &RunOptions) -> Result<RunOutcome> {
    match opts.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::io("thread pool", std::io::Error::other(e)))?
            .install(|| execute(spec, opts)),
        None => execute(spec, opts),
    }
}

fn run_dir(spec: &CaseSpec, opts: &RunOptions) -> PathBuf {
    opts.root()
        .join(format!("{}-{}", spec.name, spec.mode.as_str()))
}

fn steady(spec: &CaseSpec) -> bool {
    matches!(spec.initial, InitialFn::Still { .. }) && spec.inlet.is_none()
}

fn steady_l1(spec: &CaseSpec, sim: &Simulation) -> [f64; 3] {
    let exact = spec.initial_state(&sim.disc);
    let mut e = [0.0; 3];
    let mut area = 0.0;
    for (k, l) in sim.disc.forest.leaves().iter().enumerate() {
        for v in 0..3 {
            e[v] += l.area * (sim.state.w[k][v] - exact[k][v]).abs();
        }
        area += l.area;
    }
    e.map(|x| x / area)
}

fn snapshot(spec: &CaseSpec, sim: &Simulation) -> Snapshot {
    let lv = sim.disc.forest.levels();
    let mut levels = vec![0; lv.iter().copied().max().unwrap_or(0) as usize + 1];
    for l in lv {
        levels[l as usize] += 1;
    }
    Snapshot {
        t: sim.state.t,
        steps: sim.steps,
        leaves: sim.disc.len(),
        levels,
        mass: sim.disc.total(&sim.state.w, 0),
        scalar_mass: sim.disc.total(&sim.state.w, 3),
        steady_l1: steady(spec).then(|| steady_l1(spec, sim)),
    }
}

fn uniform_wall_time(dir: &Path, spec: &CaseSpec) -> Option<f64> {
    let path = dir
        .parent()?
        .join(format!("{}-uniform", spec.name))
        .join("summary.json");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).ok()?).ok()?;
    v.get("wall_seconds")?.as_f64()
}

fn write(path: PathBuf, text: &str) -> Result<()> {
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))
}

fn execute(spec: &CaseSpec, opts: &RunOptions) -> Result<RunOutcome> {
    let dir = run_dir(spec, opts);
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    write(dir.join("config.txt"), &spec.to_config().to_string())?;

    let start = Instant::now();
    let mut sim = spec.build()?;
    let mass0 = sim.disc.total(&sim.state.w, 0);
    let scalar0 = sim.disc.total(&sim.state.w, 3);
    let line_y = opts.centerline.then(|| {
        spec.centerline_y.unwrap_or_else(|| {
            let b = sim.disc.forest.base().bounds();
            0.5 * (b[1] + b[3])
        })
    });
    let mut gauges = GaugeTraces::new(spec.gauges.clone());
    if !spec.gauges.is_empty() {
        gauges.record(&sim.disc, &sim.state.w, 0.0);
    }
    if !opts.no_fields {
        write_vtk(&dir.join("initial.vtk"), &sim.disc, &sim.state.w, 0.0)?;
    }

    let mut targets: Vec<f64> = spec
        .output_times
        .iter()
        .copied()
        .filter(|&t| t > 0.0 && t < spec.end_time)
        .collect();
    targets.push(spec.end_time);
    targets.sort_by(f64::total_cmp);
    targets.dedup();

    let mut snapshots = Vec::new();
    let mut io_error = None;
    for (i, &target) in targets.iter().enumerate() {
        sim.run_until(target, |s| {
            if !spec.gauges.is_empty() {
                gauges.record(&s.disc, &s.state.w, s.state.t);
            }
            if spec.out_every > 0 && s.steps % spec.out_every == 0 && !opts.no_fields {
                let p = dir.join(format!("step_{:06}.vtk", s.steps));
                if let Err(e) = write_vtk(&p, &s.disc, &s.state.w, s.state.t) {
                    io_error.get_or_insert(e);
                }
            }
        })?;
        if let Some(e) = io_error.take() {
            return Err(e);
        }
        snapshots.push(snapshot(spec, &sim));
        if !opts.no_fields {
            write_vtk(
                &dir.join(format!("field_{:03}.vtk", i + 1)),
                &sim.disc,
                &sim.state.w,
                sim.state.t,
            )?;
        }
        if let Some(y) = line_y {
            write_centerline(
                &dir.join(format!("centerline_{:03}.csv", i + 1)),
                &sim.disc,
                &sim.state.w,
                y,
            )?;
        }
    }
    let wall = start.elapsed().as_secs_f64();
    if !spec.gauges.is_empty() {
        write_gauges(&dir.join("gauges.csv"), &gauges)?;
    }

    let mass1 = sim.disc.total(&sim.state.w, 0);
    let residual =
        mass1 - (mass0 - sim.boundary_outflow[0] + sim.ledger.mass_added + sim.transfer_defect);
    let conservation = Conservation {
        mass_initial: mass0,
        mass_final: mass1,
        boundary_outflow: sim.boundary_outflow[0],
        wet_dry_added: sim.ledger.mass_added,
        transfer_defect: sim.transfer_defect,
        residual,
        relative_residual: residual / mass0.abs().max(f64::MIN_POSITIVE),
        scalar_initial: scalar0,
        scalar_final: sim.disc.total(&sim.state.w, 3),
        scalar_outflow: sim.boundary_outflow[3],
        scalar_removed: sim.ledger.scalar_removed,
        wet_dry_events: sim.ledger.events,
    };
    let t = &sim.times;
    let summary = RunSummary {
        case: spec.name.clone(),
        mode: spec.mode.as_str().into(),
        l_max: spec.l_max,
        end_time: spec.end_time,
        steps: sim.steps,
        cell_updates: sim.cell_updates,
        wall_seconds: wall,
        phases: PhaseSeconds {
            reconstruction: t.reconstruction.as_secs_f64(),
            flux: t.flux.as_secs_f64(),
            update: t.update.as_secs_f64(),
            adaptation: t.adaptation.as_secs_f64(),
        },
        max_steady_l1: steady(spec).then(|| {
            snapshots
                .iter()
                .filter_map(|s| s.steady_l1)
                .flatten()
                .fold(0.0, f64::max)
        }),
        snapshots,
        conservation,
        gauge_peaks: if spec.gauges.is_empty() {
            Vec::new()
        } else {
            gauges.peaks()
        },
        speedup_vs_uniform: if spec.mode == Mode::Uniform {
            None
        } else {
            uniform_wall_time(&dir, spec).map(|u| u / wall)
        },
    };
    write(dir.join("summary.json"), &summary.to_json())?;
    Ok(RunOutcome {
        dir,
        summary,
        gauges,
        sim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(dir: &Path) -> RunOptions {
        RunOptions {
            out_root: Some(dir.to_path_buf()),
            centerline: true,
            ..Default::default()
        }
    }

    #[test]
    fn short_dam_break_run() {
        let tmp = tempfile::tempdir().unwrap();
        let mut o = Config::new();
        o.set("end_time", 0.02);
        o.set("output_times", "0.01");
        let out = run("dambreak_1d", &o, &opts(tmp.path())).unwrap();
        let dir = &out.dir;
        for f in [
            "config.txt",
            "summary.json",
            "initial.vtk",
            "field_001.vtk",
            "field_002.vtk",
            "centerline_002.csv",
        ] {
            assert!(dir.join(f).is_file(), "{f}");
        }
        assert_eq!(out.summary.snapshots.len(), 2);
        assert_eq!(out.summary.snapshots[1].t, 0.02);
        assert!(out.summary.conservation.relative_residual.abs() < 1e-13);
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap())
                .unwrap();
        assert_eq!(v["case"], "dambreak_1d");
        assert!(v["phases"]["flux"].as_f64().unwrap() >= 0.0);
    }

    #[test]
    fn unknown_case_and_bad_override() {
        let tmp = tempfile::tempdir().unwrap();
        assert!(matches!(
            run("nope", &Config::new(), &opts(tmp.path())),
            Err(Error::UnknownCase(_))
        ));
        let mut o = Config::new();
        o.set("cfl", "fast");
        assert!(run("dambreak_1d", &o, &opts(tmp.path())).is_err());
    }
}
