//! Benchmark case definitions and the registry used by the command line.

use std::path::PathBuf;
use std::sync::Arc;

use crate::io::config::{join_floats, parse_floats, Config, ConfigError};
use crate::mesh::{BaseMesh, BoundaryTag, QuadForest, RectMesh};
use crate::reconstruction::{BoundaryConditions, InletProfile};
use crate::solver::{
    adapt_cycle, AdaptConfig, Criterion, Discretization, Mode, Simulation, SolverParams,
};
use crate::{Error, Point, Result};

/// Registered case names.
pub const CASE_NAMES: [&str; 7] = [
    "well_balanced",
    "dambreak_1d",
    "dambreak_1d_bump",
    "dambreak_2d",
    "conical_island",
    "periodic_wave",
    "custom",
];

/// Where the base mesh comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum MeshSource {
    Rect {
        rect: RectMesh,
        holes: Holes,
    },
    /// Base mesh text file (see [`BaseMesh::from_text`]).
    File(PathBuf),
}

/// Cells removed from a rectangular base mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Holes {
    None,
    /// Wall strip `x0 < x < x1` with an opening `y0 < y < y1`.
    Dam {
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
    },
}

/// Analytic bottom, sampled at base mesh nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BottomFn {
    Flat,
    /// `amp · exp(−k |x − c|²)`
    Gaussian {
        amp: f64,
        k: f64,
        center: Point,
    },
    /// `height` where `|x − xc| ≤ half`, zero elsewhere.
    Step {
        height: f64,
        xc: f64,
        half: f64,
    },
    /// Truncated cone: `clamp(slope · (r_base − r), 0, height)`.
    Frustum {
        center: Point,
        r_base: f64,
        slope: f64,
        height: f64,
    },
    /// Node values supplied with the base mesh file.
    Nodal,
}

impl BottomFn {
    pub fn eval(&self, x: Point) -> f64 {
        match *self {
            BottomFn::Flat | BottomFn::Nodal => 0.0,
            BottomFn::Gaussian { amp, k, center } => {
                let (dx, dy) = (x[0] - center[0], x[1] - center[1]);
                amp * (-k * (dx * dx + dy * dy)).exp()
            }
            BottomFn::Step { height, xc, half } => {
                if (x[0] - xc).abs() <= half {
                    height
                } else {
                    0.0
                }
            }
            BottomFn::Frustum {
                center,
                r_base,
                slope,
                height,
            } => {
                let r = (x[0] - center[0]).hypot(x[1] - center[1]);
                (slope * (r_base - r)).clamp(0.0, height)
            }
        }
    }
}

/// Initial data, always at rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialFn {
    /// Flat surface `eta` (dry where the bottom is higher).
    Still { eta: f64 },
    /// Surface `eta_l | eta_r` split at `x`, scalar `z_l | z_r` split at `zx`.
    Split {
        x: f64,
        eta_l: f64,
        eta_r: f64,
        zx: f64,
        z_l: f64,
        z_r: f64,
    },
    /// `eta0 + amp · sin(2π x / wavelength)`, exact cell averages on
    /// axis-aligned cells.
    Wave {
        eta0: f64,
        amp: f64,
        wavelength: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseSpec {
    pub name: String,
    pub mesh: MeshSource,
    pub mode: Mode,
    pub g: f64,
    pub cfl: f64,
    pub h_dry: f64,
    pub k_venkat: f64,
    pub end_time: f64,
    pub l_max: u8,
    pub bottom: BottomFn,
    pub initial: InitialFn,
    pub criterion: Criterion,
    pub threshold: f64,
    pub buffer: usize,
    pub inlet: Option<InletProfile>,
    pub gauges: Vec<Point>,
    /// Times at which fields are written and cell counts recorded.
    pub output_times: Vec<f64>,
    /// Also write fields every this many global steps (0: never).
    pub out_every: usize,
    /// y coordinate of the centerline extraction, if any.
    pub centerline_y: Option<f64>,
}

fn rect(x: [f64; 2], y: [f64; 2], n: [usize; 2], tags: [BoundaryTag; 4]) -> RectMesh {
    RectMesh {
        x0: x[0],
        x1: x[1],
        y0: y[0],
        y1: y[1],
        nx: n[0],
        ny: n[1],
        left: tags[0],
        right: tags[1],
        bottom: tags[2],
        top: tags[3],
        periodic_x: false,
    }
}

const W: BoundaryTag = BoundaryTag::Wall;
const O: BoundaryTag = BoundaryTag::Outflow;

impl CaseSpec {
    fn base(name: &str, mesh: RectMesh) -> Self {
        CaseSpec {
            name: name.into(),
            mesh: MeshSource::Rect {
                rect: mesh,
                holes: Holes::None,
            },
            mode: Mode::Stamr,
            g: 9.812,
            cfl: 0.4,
            h_dry: 1e-6,
            k_venkat: 0.3,
            end_time: 1.0,
            l_max: 0,
            bottom: BottomFn::Flat,
            initial: InitialFn::Still { eta: 1.0 },
            criterion: Criterion::Depth,
            threshold: 0.03,
            buffer: 1,
            inlet: None,
            gauges: Vec::new(),
            output_times: Vec::new(),
            out_every: 0,
            centerline_y: None,
        }
    }

    /// Sets the cell counts of a rectangular base mesh.
    pub fn set_resolution(&mut self, nx: usize, ny: usize) {
        if let MeshSource::Rect { rect, .. } = &mut self.mesh {
            rect.nx = nx;
            rect.ny = ny;
        }
    }

    pub fn solver_params(&self) -> SolverParams {
        SolverParams {
            g: self.g,
            cfl: self.cfl,
            h_dry: self.h_dry,
            k_venkat: self.k_venkat,
            alpha: 1.0,
            bc: BoundaryConditions { inlet: self.inlet },
        }
    }

    pub fn adapt_config(&self) -> Option<AdaptConfig> {
        (self.mode != Mode::Uniform).then_some(AdaptConfig {
            criterion: self.criterion,
            threshold: self.threshold,
            buffer: self.buffer,
        })
    }

    /// Base mesh with the bottom sampled at its nodes.
    pub fn base_mesh(&self) -> Result<BaseMesh> {
        let mut mesh = match &self.mesh {
            MeshSource::Rect { rect, holes } => {
                let dx = (rect.x1 - rect.x0) / rect.nx as f64;
                let dy = (rect.y1 - rect.y0) / rect.ny as f64;
                match *holes {
                    Holes::None => BaseMesh::rectangle(rect)?,
                    Holes::Dam { x0, x1, y0, y1 } => {
                        BaseMesh::rectangle_with_holes(rect, |i, j| {
                            let cx = rect.x0 + (i as f64 + 0.5) * dx;
                            let cy = rect.y0 + (j as f64 + 0.5) * dy;
                            !(cx > x0 && cx < x1 && !(cy > y0 && cy < y1))
                        })?
                    }
                }
            }
            MeshSource::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                BaseMesh::from_text(&text)?
            }
        };
        if self.bottom == BottomFn::Nodal {
            if mesh.node_bottom().is_none() {
                return Err(ConfigError::Invalid {
                    key: "bottom".into(),
                    value: "nodal".into(),
                    reason: "mesh has no bottom column".into(),
                }
                .into());
            }
        } else {
            let b = mesh.nodes().iter().map(|&x| self.bottom.eval(x)).collect();
            mesh.set_node_bottom(b)?;
        }
        Ok(mesh)
    }

    /// Cell averages of the initial data on `disc`.
    pub fn initial_state(&self, disc: &Discretization) -> Vec<[f64; 4]> {
        disc.forest
            .leaves()
            .iter()
            .enumerate()
            .map(|(k, leaf)| {
                let b = disc.bmean(k);
                let c = leaf.centroid;
                let (eta, z) = match self.initial {
                    InitialFn::Still { eta } => (eta, 0.0),
                    InitialFn::Split {
                        x,
                        eta_l,
                        eta_r,
                        zx,
                        z_l,
                        z_r,
                    } => (
                        if c[0] < x { eta_l } else { eta_r },
                        if c[0] <= zx { z_l } else { z_r },
                    ),
                    InitialFn::Wave {
                        eta0,
                        amp,
                        wavelength,
                    } => {
                        let xs = leaf.corners.map(|p| p[0]);
                        let a = xs.iter().copied().fold(f64::INFINITY, f64::min);
                        let bx = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                        let kw = 2.0 * std::f64::consts::PI / wavelength;
                        let avg = ((kw * a).cos() - (kw * bx).cos()) / (kw * (bx - a));
                        (eta0 + amp * avg, 0.0)
                    }
                };
                let h = (eta - b).max(0.0);
                [h, 0.0, 0.0, h * z]
            })
            .collect()
    }

    /// Builds the starting forest and data. Uniform mode refines the base
    /// mesh everywhere to `l_max`; adaptive modes refine the initial data
    /// `l_max` times with the case criterion.
    pub fn build(&self) -> Result<Simulation> {
        let base = Arc::new(self.base_mesh()?);
        let params = self.solver_params();
        let level = if self.mode == Mode::Uniform {
            self.l_max
        } else {
            0
        };
        let forest = QuadForest::uniform(base, self.l_max, level)?;
        let mut disc = Discretization::new(forest)?;
        let mut w = self.initial_state(&disc);
        if let Some(cfg) = self.adapt_config() {
            for _ in 0..self.l_max {
                let (d, _, _) = adapt_cycle(&disc, &w, &cfg, 0.0, &params)?;
                match d {
                    Some(d) => disc = d,
                    None => break,
                }
                w = self.initial_state(&disc);
            }
        }
        for (i, &g) in self.gauges.iter().enumerate() {
            if disc.forest.locate(g).is_none() {
                return Err(ConfigError::Invalid {
                    key: "gauges".into(),
                    value: format!("{} {}", g[0], g[1]),
                    reason: format!("gauge {} outside the domain", i + 1),
                }
                .into());
            }
        }
        Ok(Simulation::from_discretization(
            disc,
            w,
            params,
            self.mode,
            self.adapt_config(),
        ))
    }

    /// Serializes every field to the run-configuration format.
    pub fn to_config(&self) -> Config {
        let mut c = Config::new();
        c.set("case", &self.name);
        c.set("mode", self.mode.as_str());
        c.set("g", self.g);
        c.set("cfl", self.cfl);
        c.set("h_dry", self.h_dry);
        c.set("k_venkat", self.k_venkat);
        c.set("end_time", self.end_time);
        c.set("l_max", self.l_max);
        match &self.mesh {
            MeshSource::Rect { rect, holes } => {
                c.set("mesh", "rect");
                c.set("x0", rect.x0);
                c.set("x1", rect.x1);
                c.set("y0", rect.y0);
                c.set("y1", rect.y1);
                c.set("nx", rect.nx);
                c.set("ny", rect.ny);
                c.set("bc_left", rect.left.as_str());
                c.set("bc_right", rect.right.as_str());
                c.set("bc_bottom", rect.bottom.as_str());
                c.set("bc_top", rect.top.as_str());
                c.set("periodic_x", rect.periodic_x);
                c.set(
                    "holes",
                    match *holes {
                        Holes::None => "none".to_string(),
                        Holes::Dam { x0, x1, y0, y1 } => {
                            format!("dam:{}", join_floats(&[x0, x1, y0, y1]))
                        }
                    },
                );
            }
            MeshSource::File(p) => c.set("mesh", format!("file:{}", p.display())),
        }
        c.set(
            "bottom",
            match self.bottom {
                BottomFn::Flat => "flat".to_string(),
                BottomFn::Nodal => "nodal".to_string(),
                BottomFn::Gaussian { amp, k, center } => {
                    format!("gaussian:{}", join_floats(&[amp, k, center[0], center[1]]))
                }
                BottomFn::Step { height, xc, half } => {
                    format!("step:{}", join_floats(&[height, xc, half]))
                }
                BottomFn::Frustum {
                    center,
                    r_base,
                    slope,
                    height,
                } => format!(
                    "frustum:{}",
                    join_floats(&[center[0], center[1], r_base, slope, height])
                ),
            },
        );
        c.set(
            "initial",
            match self.initial {
                InitialFn::Still { eta } => format!("still:{eta}"),
                InitialFn::Split {
                    x,
                    eta_l,
                    eta_r,
                    zx,
                    z_l,
                    z_r,
                } => format!("split:{}", join_floats(&[x, eta_l, eta_r, zx, z_l, z_r])),
                InitialFn::Wave {
                    eta0,
                    amp,
                    wavelength,
                } => format!("wave:{}", join_floats(&[eta0, amp, wavelength])),
            },
        );
        c.set(
            "criterion",
            match self.criterion {
                Criterion::Sweep {
                    from,
                    to,
                    period,
                    width,
                } => format!("sweep:{}", join_floats(&[from, to, period, width])),
                other => other.name().to_string(),
            },
        );
        c.set("threshold", self.threshold);
        c.set("buffer", self.buffer);
        c.set(
            "inlet",
            match self.inlet {
                None => "none".to_string(),
                Some(InletProfile::Solitary { h0, amp, t_peak, g }) => {
                    format!("solitary:{}", join_floats(&[h0, amp, t_peak, g]))
                }
                Some(InletProfile::Fixed { eta, speed }) => {
                    format!("fixed:{}", join_floats(&[eta, speed]))
                }
            },
        );
        c.set(
            "gauges",
            self.gauges
                .iter()
                .map(|p| format!("{} {}", p[0], p[1]))
                .collect::<Vec<_>>()
                .join(";"),
        );
        c.set("output_times", join_floats(&self.output_times));
        c.set("out_every", self.out_every);
        c.set(
            "centerline_y",
            self.centerline_y
                .map_or("none".to_string(), |y| y.to_string()),
        );
        c
    }

    /// Case named by `case` (default `custom`) with every other key applied.
    pub fn from_config(c: &Config) -> Result<Self> {
        let mut spec = case_by_name(c.get("case").unwrap_or("custom"))?;
        spec.apply(c)?;
        Ok(spec)
    }

    /// Overrides fields from the keys present in `c`.
    pub fn apply(&mut self, c: &Config) -> Result<()> {
        for key in c.keys() {
            let v = c.get(key).unwrap_or_default();
            self.apply_one(key, v)?;
        }
        Ok(())
    }

    fn apply_one(&mut self, key: &str, v: &str) -> std::result::Result<(), ConfigError> {
        let bad = |reason: &str| ConfigError::Invalid {
            key: key.into(),
            value: v.into(),
            reason: reason.into(),
        };
        let num = |v: &str| v.trim().parse::<f64>().map_err(|e| bad(&e.to_string()));
        let int = |v: &str| v.trim().parse::<usize>().map_err(|e| bad(&e.to_string()));
        let tag = |v: &str| match BoundaryTag::parse(v.trim()) {
            Some(Some(t)) => Ok(t),
            _ => Err(bad("expected wall, outflow or inlet")),
        };
        let params = |v: &str, n: usize| -> std::result::Result<Vec<f64>, ConfigError> {
            let p = parse_floats(key, v)?;
            if p.len() == n {
                Ok(p)
            } else {
                Err(bad(&format!("expected {n} parameters")))
            }
        };
        let (kind, args) = v.split_once(':').unwrap_or((v, ""));
        fn rect_field(spec: &mut CaseSpec) -> std::result::Result<&mut RectMesh, &'static str> {
            match &mut spec.mesh {
                MeshSource::Rect { rect, .. } => Ok(rect),
                MeshSource::File(_) => Err("only for rectangular meshes"),
            }
        }
        match key {
            "case" => self.name = v.into(),
            "mode" => {
                self.mode = Mode::parse(v).ok_or_else(|| bad("expected uniform, amr or stamr"))?
            }
            "g" => self.g = num(v)?,
            "cfl" => self.cfl = num(v)?,
            "h_dry" => self.h_dry = num(v)?,
            "k_venkat" => self.k_venkat = num(v)?,
            "end_time" => self.end_time = num(v)?,
            "l_max" => self.l_max = u8::try_from(int(v)?).map_err(|_| bad("too large"))?,
            "mesh" => match kind {
                "rect" => {
                    if let MeshSource::File(_) = self.mesh {
                        self.mesh = MeshSource::Rect {
                            rect: rect([0.0, 1.0], [0.0, 1.0], [1, 1], [W; 4]),
                            holes: Holes::None,
                        };
                    }
                }
                "file" => self.mesh = MeshSource::File(args.into()),
                _ => return Err(bad("expected rect or file:<path>")),
            },
            "x0" => rect_field(self).map_err(bad)?.x0 = num(v)?,
            "x1" => rect_field(self).map_err(bad)?.x1 = num(v)?,
            "y0" => rect_field(self).map_err(bad)?.y0 = num(v)?,
            "y1" => rect_field(self).map_err(bad)?.y1 = num(v)?,
            "nx" => rect_field(self).map_err(bad)?.nx = int(v)?,
            "ny" => rect_field(self).map_err(bad)?.ny = int(v)?,
            "bc_left" => rect_field(self).map_err(bad)?.left = tag(v)?,
            "bc_right" => rect_field(self).map_err(bad)?.right = tag(v)?,
            "bc_bottom" => rect_field(self).map_err(bad)?.bottom = tag(v)?,
            "bc_top" => rect_field(self).map_err(bad)?.top = tag(v)?,
            "periodic_x" => {
                rect_field(self).map_err(bad)?.periodic_x =
                    v.parse().map_err(|_| bad("expected true or false"))?
            }
            "holes" => {
                let h = match kind {
                    "none" => Holes::None,
                    "dam" => {
                        let p = params(args, 4)?;
                        Holes::Dam {
                            x0: p[0],
                            x1: p[1],
                            y0: p[2],
                            y1: p[3],
                        }
                    }
                    _ => return Err(bad("expected none or dam:x0,x1,y0,y1")),
                };
                match &mut self.mesh {
                    MeshSource::Rect { holes, .. } => *holes = h,
                    MeshSource::File(_) => return Err(bad("only for rectangular meshes")),
                }
            }
            "bottom" => {
                self.bottom = match kind {
                    "flat" => BottomFn::Flat,
                    "nodal" => BottomFn::Nodal,
                    "gaussian" => {
                        let p = params(args, 4)?;
                        BottomFn::Gaussian {
                            amp: p[0],
                            k: p[1],
                            center: [p[2], p[3]],
                        }
                    }
                    "step" => {
                        let p = params(args, 3)?;
                        BottomFn::Step {
                            height: p[0],
                            xc: p[1],
                            half: p[2],
                        }
                    }
                    "frustum" => {
                        let p = params(args, 5)?;
                        BottomFn::Frustum {
                            center: [p[0], p[1]],
                            r_base: p[2],
                            slope: p[3],
                            height: p[4],
                        }
                    }
                    _ => return Err(bad("unknown bottom")),
                }
            }
            "initial" => {
                self.initial = match kind {
                    "still" => InitialFn::Still { eta: num(args)? },
                    "split" => {
                        let p = params(args, 6)?;
                        InitialFn::Split {
                            x: p[0],
                            eta_l: p[1],
                            eta_r: p[2],
                            zx: p[3],
                            z_l: p[4],
                            z_r: p[5],
                        }
                    }
                    "wave" => {
                        let p = params(args, 3)?;
                        InitialFn::Wave {
                            eta0: p[0],
                            amp: p[1],
                            wavelength: p[2],
                        }
                    }
                    _ => return Err(bad("unknown initial condition")),
                }
            }
            "criterion" => {
                self.criterion = match kind {
                    "depth" => Criterion::Depth,
                    "surface" => Criterion::Surface,
                    "scalar" => Criterion::Scalar,
                    "sweep" => {
                        let p = params(args, 4)?;
                        Criterion::Sweep {
                            from: p[0],
                            to: p[1],
                            period: p[2],
                            width: p[3],
                        }
                    }
                    _ => return Err(bad("expected depth, surface, scalar or sweep:...")),
                }
            }
            "threshold" => self.threshold = num(v)?,
            "buffer" => self.buffer = int(v)?,
            "inlet" => {
                self.inlet = match kind {
                    "none" => None,
                    "solitary" => {
                        let p = params(args, 4)?;
                        Some(InletProfile::Solitary {
                            h0: p[0],
                            amp: p[1],
                            t_peak: p[2],
                            g: p[3],
                        })
                    }
                    "fixed" => {
                        let p = params(args, 2)?;
                        Some(InletProfile::Fixed {
                            eta: p[0],
                            speed: p[1],
                        })
                    }
                    _ => return Err(bad("expected none, solitary:... or fixed:...")),
                }
            }
            "gauges" => {
                self.gauges = v
                    .split(';')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| {
                        let p: Vec<f64> = s
                            .split_whitespace()
                            .map(num)
                            .collect::<std::result::Result<_, _>>()?;
                        match p[..] {
                            [x, y] => Ok([x, y]),
                            _ => Err(bad("gauges are `x y` pairs separated by `;`")),
                        }
                    })
                    .collect::<std::result::Result<_, _>>()?
            }
            "output_times" => self.output_times = parse_floats(key, v)?,
            "out_every" => self.out_every = int(v)?,
            "centerline_y" => self.centerline_y = if v == "none" { None } else { Some(num(v)?) },
            _ => return Err(ConfigError::Unknown(key.into())),
        }
        Ok(())
    }
}

/// Lake at rest over a Gaussian bump with a band of refinement sweeping
/// diagonally across the domain.
pub fn case_well_balanced() -> CaseSpec {
    let mut c = CaseSpec::base(
        "well_balanced",
        rect([0.0, 2.0], [0.0, 2.0], [40, 40], [W; 4]),
    );
    c.bottom = BottomFn::Gaussian {
        amp: 0.5,
        k: 50.0,
        center: [1.0, 1.0],
    };
    c.initial = InitialFn::Still { eta: 1.0 };
    c.l_max = 2;
    c.end_time = 10.0;
    c.criterion = Criterion::Sweep {
        from: 0.0,
        to: 4.0,
        period: 10.0,
        width: 0.1,
    };
    c.threshold = 0.5;
    c.buffer = 0;
    c.output_times = vec![0.1, 1.0, 10.0];
    c
}

/// 1-D dam break in a narrow channel; `flat` selects the unit-gravity case,
/// otherwise the 1500 m channel with a rectangular bump.
pub fn case_dambreak_1d(flat: bool) -> CaseSpec {
    if flat {
        let mut c = CaseSpec::base(
            "dambreak_1d",
            rect([0.0, 1.0], [0.0, 0.04], [50, 2], [O, O, W, W]),
        );
        c.mode = Mode::Amr;
        c.g = 1.0;
        c.l_max = 1;
        c.end_time = 0.2;
        c.initial = InitialFn::Split {
            x: 0.5,
            eta_l: 1.0,
            eta_r: 0.1,
            zx: 0.5,
            z_l: 1e-5,
            z_r: 0.0,
        };
        c.criterion = Criterion::Depth;
        c.threshold = 0.03;
        c.output_times = vec![0.2];
        c.centerline_y = Some(0.02);
        c
    } else {
        let mut c = CaseSpec::base(
            "dambreak_1d_bump",
            rect([0.0, 1500.0], [0.0, 7.5], [400, 2], [O, O, W, W]),
        );
        c.mode = Mode::Amr;
        c.l_max = 2;
        c.end_time = 60.0;
        c.bottom = BottomFn::Step {
            height: 8.0,
            xc: 750.0,
            half: 1500.0 / 8.0,
        };
        c.initial = InitialFn::Split {
            x: 750.0,
            eta_l: 20.0,
            eta_r: 15.0,
            zx: 750.0,
            z_l: 0.0,
            z_r: 0.0,
        };
        c.criterion = Criterion::Depth;
        c.threshold = 0.03;
        c.output_times = vec![15.0, 60.0];
        c.centerline_y = Some(3.75);
        c
    }
}

/// Partial breach of a dam across a square basin.
pub fn case_dambreak_2d() -> CaseSpec {
    let mut c = CaseSpec::base(
        "dambreak_2d",
        rect([0.0, 200.0], [0.0, 200.0], [80, 80], [W, O, W, W]),
    );
    if let MeshSource::Rect { holes, .. } = &mut c.mesh {
        *holes = Holes::Dam {
            x0: 95.0,
            x1: 105.0,
            y0: 95.0,
            y1: 170.0,
        };
    }
    c.l_max = 2;
    c.end_time = 7.2;
    c.initial = InitialFn::Split {
        x: 100.0,
        eta_l: 10.0,
        eta_r: 5.0,
        zx: 95.0,
        z_l: 1.0,
        z_r: 0.0,
    };
    c.criterion = Criterion::Depth;
    c.threshold = 0.0175;
    c.output_times = vec![7.2];
    c.centerline_y = Some(132.5);
    c
}

/// Solitary wave entering a basin with a truncated conical island.
pub fn case_conical_island() -> CaseSpec {
    let mut c = CaseSpec::base(
        "conical_island",
        rect(
            [0.0, 26.0],
            [0.0, 27.6],
            [100, 100],
            [BoundaryTag::Inlet, W, W, W],
        ),
    );
    let center = [12.96, 13.8];
    c.l_max = 2;
    c.end_time = 20.0;
    c.bottom = BottomFn::Frustum {
        center,
        r_base: 3.6,
        slope: 0.25,
        height: 0.625,
    };
    c.initial = InitialFn::Still { eta: 0.32 };
    c.inlet = Some(InletProfile::Solitary {
        h0: 0.32,
        amp: 0.032,
        t_peak: 2.84,
        g: c.g,
    });
    c.criterion = Criterion::Surface;
    c.threshold = 0.01;
    // front toe, front shoreline, back shoreline (slightly offshore)
    c.gauges = vec![
        [center[0] - 3.6, center[1]],
        [center[0] - 2.5, center[1]],
        [center[0] + 2.5, center[1]],
    ];
    c.output_times = vec![5.0, 10.0, 15.0, 20.0];
    c.centerline_y = Some(center[1]);
    c
}

/// Small-amplitude standing wave in a periodic channel.
pub fn case_periodic_wave() -> CaseSpec {
    let mut r = rect([0.0, 1.0], [0.0, 0.08], [25, 2], [W; 4]);
    r.periodic_x = true;
    let mut c = CaseSpec::base("periodic_wave", r);
    c.mode = Mode::Uniform;
    c.end_time = 0.1;
    c.initial = InitialFn::Wave {
        eta0: 1.0,
        amp: 0.05,
        wavelength: 1.0,
    };
    c.output_times = vec![0.1];
    c.centerline_y = Some(0.04);
    c
}

/// User-supplied base mesh with nodal bottom; `mesh = file:<path>` must be set.
pub fn case_custom() -> CaseSpec {
    let mut c = CaseSpec::base("custom", rect([0.0, 1.0], [0.0, 1.0], [1, 1], [W; 4]));
    c.mesh = MeshSource::File(PathBuf::new());
    c.bottom = BottomFn::Nodal;
    c.criterion = Criterion::Surface;
    c
}

pub fn case_by_name(name: &str) -> Result<CaseSpec> {
    Ok(match name {
        "well_balanced" => case_well_balanced(),
        "dambreak_1d" => case_dambreak_1d(true),
        "dambreak_1d_bump" => case_dambreak_1d(false),
        "dambreak_2d" => case_dambreak_2d(),
        "conical_island" => case_conical_island(),
        "periodic_wave" => case_periodic_wave(),
        "custom" => case_custom(),
        _ => return Err(Error::UnknownCase(name.into())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_case_round_trips() {
        for name in CASE_NAMES {
            let c = case_by_name(name).unwrap();
            let text = c.to_config().to_string();
            let back = CaseSpec::from_config(&Config::parse(&text).unwrap()).unwrap();
            assert_eq!(back, c, "{name}");
        }
    }

    #[test]
    fn unknown_inputs_are_rejected() {
        assert!(matches!(case_by_name("nope"), Err(Error::UnknownCase(_))));
        let mut c = case_well_balanced();
        let bad = Config::parse("mode = fast").unwrap();
        assert!(c.apply(&bad).is_err());
        let bad = Config::parse("colour = red").unwrap();
        assert!(matches!(
            c.apply(&bad),
            Err(Error::Config(ConfigError::Unknown(_)))
        ));
    }

    #[test]
    fn frustum_profile() {
        let c = case_conical_island();
        let b = |r: f64| c.bottom.eval([12.96 + r, 13.8]);
        assert!((b(0.0) - 0.625).abs() < 1e-15);
        assert!((b(1.1) - 0.625).abs() < 1e-12);
        assert!((b(2.0) - 0.4).abs() < 1e-12);
        assert_eq!(b(3.6), 0.0);
        assert_eq!(b(5.0), 0.0);
    }

    #[test]
    fn dam_holes_and_initial_split() {
        let c = case_dambreak_2d();
        let mesh = c.base_mesh().unwrap();
        // 4 columns of the dam minus the 30-cell breach
        assert_eq!(mesh.num_trees(), 80 * 80 - 4 * (80 - 30));
        let sim = c.build().unwrap();
        let f = &sim.disc.forest;
        let k = f.locate([50.0, 50.0]).unwrap();
        assert_eq!(sim.state.w[k], [10.0, 0.0, 0.0, 10.0]);
        let k = f.locate([150.0, 150.0]).unwrap();
        assert_eq!(sim.state.w[k], [5.0, 0.0, 0.0, 0.0]);
        assert!(f.locate([100.0, 50.0]).is_none());
        assert!(f.locate([100.0, 130.0]).is_some());
    }

    #[test]
    fn gauge_outside_is_rejected() {
        let mut c = case_conical_island();
        c.l_max = 0;
        c.gauges.push([30.0, 1.0]);
        assert!(c.build().is_err());
    }

    #[test]
    fn wave_cell_averages_are_exact() {
        let mut c = case_periodic_wave();
        c.set_resolution(4, 2);
        let sim = c.build().unwrap();
        let total = sim.disc.total(&sim.state.w, 0);
        assert!((total - 0.08).abs() < 1e-15);
    }
}
