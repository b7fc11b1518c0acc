//! Well-balanced gas-kinetic finite-volume solver for the 2-D shallow water
//! equations on an adaptive forest of quadtrees, with level-synchronized
//! local time stepping.
//!
//! The crate is organised bottom-up:
//!
//! - [`mesh`]: base quadrilateral mesh, quadtree forest, 2:1 balance,
//!   interface enumeration and Z-curve partitioning.
//! - [`topography`]: piecewise-linear bottom on two triangles per cell.
//! - [`reconstruction`]: least-squares gradients, Venkatakrishnan limiting and
//!   surface-gradient interface states.
//! - [`kinetic`]: Maxwellian moments and the time-integrated BGK interface flux.
//! - [`transport`]: passive scalar coupled to the mass flux.
//! - [`solver`]: time stepping, LTS schedule, wet-dry handling and adaptation.
//! - [`cases`]: benchmark configurations and the exact dam-break solution.
//! - [`io`]: run configuration, VTK/CSV writers and the run driver.

pub mod cases;
pub mod exact;
pub mod io;
pub mod kinetic;
pub mod mesh;
pub mod reconstruction;
pub mod solver;
pub mod topography;
pub mod transport;

mod error;

pub use error::{Error, Result};

/// A point or vector in the plane.
pub type Point = [f64; 2];

/// Variables carried per cell: depth, two momenta, scalar mass.
pub const NVARS: usize = 4;
