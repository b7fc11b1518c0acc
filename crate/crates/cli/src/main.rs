use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use stamr_swe::cases::CASE_NAMES;
use stamr_swe::io::{run, Config, RunOptions, OUT_ROOT_ENV};

/// Runs a shallow water benchmark case and writes its outputs.
#[derive(Debug, Parser)]
#[command(name = "stamr", version)]
struct Args {
    /// Case name (see --list).
    #[arg(long, required_unless_present = "list")]
    case: Option<String>,
    /// Time integration mode: uniform, amr or stamr.
    #[arg(long)]
    mode: Option<String>,
    /// Maximum refinement level.
    #[arg(long)]
    lmax: Option<u8>,
    /// Refinement threshold on the normalised indicator.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    end_time: Option<f64>,
    /// Write a field file every N global steps (0: output times only).
    #[arg(long)]
    out_every: Option<usize>,
    /// Output root; the run directory is <root>/<case>-<mode>.
    #[arg(long, env = OUT_ROOT_ENV)]
    out_dir: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    workers: Option<usize>,
    /// Write (x, h, hU, Z) along the case centerline at every output time.
    #[arg(long)]
    out_centerline: bool,
    /// Skip VTK field files.
    #[arg(long)]
    no_fields: bool,
    /// Configuration file with `key = value` lines, applied before flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra `key=value` overrides, applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Print the registered cases and exit.
    #[arg(long)]
    list: bool,
}

fn overrides(a: &Args) -> Result<Config> {
    let mut c = match &a.config {
        Some(p) => {
            let text =
                std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Config::parse(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => Config::new(),
    };
    if let Some(v) = &a.mode {
        c.set("mode", v);
    }
    if let Some(v) = a.lmax {
        c.set("l_max", v);
    }
    if let Some(v) = a.threshold {
        c.set("threshold", v);
    }
    if let Some(v) = a.cfl {
        c.set("cfl", v);
    }
    if let Some(v) = a.end_time {
        c.set("end_time", v);
    }
    if let Some(v) = a.out_every {
        c.set("out_every", v);
    }
    for kv in &a.set {
        let (k, v) = kv
            .split_once('=')
            .with_context(|| format!("expected KEY=VALUE, got `{kv}`"))?;
        c.set(k.trim(), v.trim());
    }
    Ok(c)
}

fn main_inner(a: Args) -> Result<()> {
    if a.list {
        for n in CASE_NAMES {
            println!("{n}");
        }
        return Ok(());
    }
    let case = a.case.clone().unwrap_or_default();
    let opts = RunOptions {
        out_root: a.out_dir.clone(),
        centerline: a.out_centerline,
        workers: a.workers,
        no_fields: a.no_fields,
    };
    let out = run(&case, &overrides(&a)?, &opts)?;
    let s = &out.summary;
    println!("run directory: {}", out.dir.display());
    println!(
        "{} {}: t = {}, {} steps, {} leaves, {:.2} s",
        s.case,
        s.mode,
        s.end_time,
        s.steps,
        s.snapshots.last().map_or(0, |x| x.leaves),
        s.wall_seconds
    );
    if let Some(e) = s.max_steady_l1 {
        println!("max steady L1 error: {e:e}");
    }
    if let Some(r) = s.speedup_vs_uniform {
        println!("speedup vs uniform: {r:.2}");
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
