//! Soft-sphere granules: contact forces, neighbour search, solid response and
//! the substep integrator that advances sand inside one fluid step.

mod boundary;
mod contact;
mod neighbors;
mod substep;

pub use boundary::{clamp_to_box, solid_boundary_response};
pub use contact::contact_force;
pub use neighbors::{neighbor_pairs, NeighborGrid};
pub use substep::{rayleigh_dt, sand_substep_loop, substep_count, SandEnv, SubstepStats};

use crate::math::{sphere_volume, Vector};

/// One sand granule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Granule<const D: usize> {
    pub x: Vector<D>,
    pub v: Vector<D>,
    pub radius: f64,
    /// Absorbed water volume as a fraction of the solid volume.
    pub moisture: f64,
    /// Momentum picked up from absorbed water, drained over the next substeps.
    pub absorbed_momentum: Vector<D>,
    /// Density of the dry solid (kg/m³).
    pub density: f64,
    /// Fixed granules take part in contacts and fractions but never move.
    pub fixed: bool,
}

impl<const D: usize> Granule<D> {
    pub fn new(x: Vector<D>, v: Vector<D>, radius: f64, density: f64) -> Self {
        Self { x, v, radius, moisture: 0.0, absorbed_momentum: Vector::<D>::zeros(), density, fixed: false }
    }

    /// Solid volume, always the sphere volume `4/3 pi r^3`.
    pub fn volume(&self) -> f64 {
        sphere_volume(self.radius)
    }

    pub fn dry_mass(&self) -> f64 {
        self.volume() * self.density
    }

    /// Mass including absorbed water: `V (rho_s + r_i rho_f)`.
    pub fn mass(&self, rho_f: f64) -> f64 {
        self.volume() * (self.density + self.moisture * rho_f)
    }
}

/// Contact model parameters. Stiffness scales with radius: `k_n = E r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContactParams {
    /// Young's modulus (Pa).
    pub young: f64,
    pub poisson: f64,
    /// Friction angle (rad).
    pub friction_angle: f64,
    /// `k_t / k_n`.
    pub tangential_ratio: f64,
}

impl Default for ContactParams {
    fn default() -> Self {
        Self { young: 1e6, poisson: 0.3, friction_angle: 30f64.to_radians(), tangential_ratio: 0.5 }
    }
}

impl ContactParams {
    pub fn normal_stiffness(&self, r: f64) -> f64 {
        self.young * r
    }

    pub fn tangential_stiffness(&self, r: f64) -> f64 {
        self.tangential_ratio * self.normal_stiffness(r)
    }

    pub fn tan_phi(&self) -> f64 {
        self.friction_angle.tan()
    }
}
