//! The time integrator: one fluid step with its granule substeps, timestep
//! control and the frame-driven run loop.

mod events;
mod step;

pub use events::{BodyForce, ForceEvent};
pub use step::{advect_fluid, compute_fluid_dt, run, step, step_with_dt, DtInfo, RunObserver, RunSummary, StepReport};

use thiserror::Error;

use crate::coupling::CouplingParams;
use crate::dem::{ContactParams, Granule};
use crate::grid::{FluidParticle, MacGrid};
use crate::math::{unit_axis, Vector};
use crate::projection::{ProjectionLimits, SolverParams};
use crate::solid::SolidSet;

/// Every tunable of the integrator.
#[derive(Clone, Debug, PartialEq)]
pub struct SimParams<const D: usize> {
    pub contact: ContactParams,
    pub coupling: CouplingParams,
    pub limits: ProjectionLimits,
    pub solver: SolverParams,
    /// Water density (kg/m³).
    pub rho_f: f64,
    pub gravity: Vector<D>,
    /// FLIP share of the particle velocity update.
    pub flip_blend: f64,
    /// Fluid particles per full cell.
    pub particles_per_cell: f64,
    pub seed: u64,
    /// Smallest face fluid fraction used when turning exchange forces into velocity.
    pub exchange_alpha_floor: f64,
    /// Rings of air faces filled by velocity extrapolation after the projection.
    pub extrapolation_layers: usize,
    /// Optional hard cap on the fluid step (s).
    pub max_dt: Option<f64>,
    pub events: Vec<ForceEvent<D>>,
}

impl<const D: usize> Default for SimParams<D> {
    fn default() -> Self {
        Self {
            contact: ContactParams::default(),
            coupling: CouplingParams::default(),
            limits: ProjectionLimits::default(),
            solver: SolverParams::default(),
            rho_f: 1000.0,
            gravity: unit_axis::<D>(1) * -9.81,
            flip_blend: 0.97,
            particles_per_cell: (1usize << D) as f64,
            seed: 0,
            exchange_alpha_floor: 0.1,
            extrapolation_layers: 2,
            max_dt: None,
            events: Vec::new(),
        }
    }
}

impl<const D: usize> SimParams<D> {
    pub fn r_max(&self) -> f64 {
        self.coupling.r_max()
    }
}

/// The complete simulation state.
#[derive(Clone, Debug)]
pub struct SimState<const D: usize> {
    pub grid: MacGrid<D>,
    pub granules: Vec<Granule<D>>,
    pub fluid: Vec<FluidParticle<D>>,
    pub solids: SolidSet<D>,
    pub params: SimParams<D>,
    pub t: f64,
    pub step_index: u64,
    /// Length of the previous fluid step, zero before the first one.
    pub dt_prev: f64,
}

impl<const D: usize> SimState<D> {
    /// Wraps a grid, solids and particles; fills the solid SDF and cell kinds.
    pub fn new(
        mut grid: MacGrid<D>,
        solids: SolidSet<D>,
        granules: Vec<Granule<D>>,
        fluid: Vec<FluidParticle<D>>,
        params: SimParams<D>,
    ) -> Self {
        grid.set_solid_sdf(|x| crate::solid::Sdf::distance(&solids, x));
        grid.classify_cells(&fluid);
        Self { grid, granules, fluid, solids, params, t: 0.0, step_index: 0, dt_prev: 0.0 }
    }

    /// Volume carried by one fluid particle.
    pub fn particle_volume(&self) -> f64 {
        self.grid.cell_volume() / self.params.particles_per_cell
    }

    /// Largest speed over granules and fluid particles.
    pub fn max_speed(&self) -> f64 {
        let g = self.granules.iter().filter(|g| !g.fixed).map(|g| g.v.norm());
        let f = self.fluid.iter().map(|p| p.v.norm());
        g.chain(f).fold(0.0, f64::max)
    }

    /// First non-finite quantity found, if any.
    pub fn find_non_finite(&self) -> Option<String> {
        use crate::math::is_finite;
        if let Some(i) =
            self.granules.iter().position(|g| !is_finite(&g.x) || !is_finite(&g.v) || !g.moisture.is_finite())
        {
            return Some(format!("granule {i}"));
        }
        if let Some(i) = self.fluid.iter().position(|p| !is_finite(&p.x) || !is_finite(&p.v)) {
            return Some(format!("fluid particle {i}"));
        }
        if self.grid.has_non_finite() {
            return Some("grid field".to_string());
        }
        None
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("non-finite value in {what} at step {step} (t = {t})")]
    NonFinite { what: String, step: u64, t: f64 },
    #[error("invalid time step {0}")]
    BadTimeStep(f64),
    #[error("end time {end} is before the current time {t}")]
    EndBeforeStart { end: f64, t: f64 },
    #[error("frame callback failed: {0}")]
    Output(String),
}
