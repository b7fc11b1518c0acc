//! Gas-kinetic (BGK) interface flux for the shallow water equations.

mod flux;
mod moments;

pub use flux::{
    collision_time, time_integrated_flux, time_weights, well_balance_correction, FluxParams,
    SideState,
};
pub use moments::{
    maxwellian_moments, solve_expansion, solve_moment_system, MaxwellianState, Moments,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KineticError {
    #[error("Maxwellian requires λ > 0 (got {0})")]
    NonPositiveLambda(f64),
    #[error("moment order {0} exceeds the supported maximum")]
    OrderTooHigh(usize),
}
