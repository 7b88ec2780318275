//! Interphase forces on granules and the reverse force transfer to the grid.

mod capillary;
mod exchange;
mod fluid_forces;
mod snapshot;

pub use capillary::{
    concentration_gradient_force, liquid_bridge_force, moisture_saturation, rupture_distance, MoistureCurve,
};
pub use exchange::{apply_exchange_force, granule_face_velocity, scatter_exchange_force, ExchangeReport};
pub use fluid_forces::{added_mass, drag_force, pressure_gradient_force, virtual_mass_integration};
pub use snapshot::{FluidSample, FluidSnapshot};

/// Below this interpolated fluid fraction a granule is treated as dry and gets no fluid forces.
pub const FLUID_GATE: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingParams {
    /// Dimensionless drag coefficient.
    pub mu_drag: f64,
    /// Surface tension (N/m).
    pub sigma: f64,
    /// Contact angle (rad).
    pub theta: f64,
    /// Liquid bridge volume as a fraction of granule volume.
    pub vstar_ratio: f64,
    pub curve: MoistureCurve,
}

impl Default for CouplingParams {
    fn default() -> Self {
        Self { mu_drag: 0.44, sigma: 0.07, theta: 0.0, vstar_ratio: 1e-4, curve: MoistureCurve::new(0.0) }
    }
}

impl CouplingParams {
    pub fn r_max(&self) -> f64 {
        self.curve.r_max
    }

    /// Bridge volume for a granule of radius `r`.
    pub fn bridge_volume(&self, r: f64) -> f64 {
        self.vstar_ratio * crate::math::sphere_volume(r)
    }
}
