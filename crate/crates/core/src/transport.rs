//! Passive scalar carried by the mass flux.

/// Scalar transport for a time-integrated mass transport, upwinded by its
/// sign: `Z_upwind · mass`.
pub fn scalar_flux(mass: f64, z_left: f64, z_right: f64) -> f64 {
    if mass > 0.0 {
        z_left * mass
    } else if mass < 0.0 {
        z_right * mass
    } else {
        0.0
    }
}
