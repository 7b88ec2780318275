use std::f64::consts::PI;

use super::{CouplingParams, FluidSample};
use crate::dem::Granule;
use crate::math::Vector;

/// `F_p = -V_s (1 + r_i) grad p`; absorbed water counts as displaced volume.
pub fn pressure_gradient_force<const D: usize>(g: &Granule<D>, fluid: &FluidSample<D>) -> Vector<D> {
    fluid.grad_p * (-g.volume() * (1.0 + g.moisture))
}

/// `F_d = 12 pi r^2 rho_f mu |v_f - v_s| (v_f - v_s)`.
pub fn drag_force<const D: usize>(
    g: &Granule<D>,
    fluid: &FluidSample<D>,
    params: &CouplingParams,
    rho_f: f64,
) -> Vector<D> {
    let dv = fluid.velocity - g.v;
    dv * (12.0 * PI * g.radius * g.radius * rho_f * params.mu_drag * dv.norm())
}

/// Virtual mass coefficient `C = (2/3) pi r^3 rho_f (1 + r_i)`, half the displaced fluid mass.
pub fn added_mass<const D: usize>(g: &Granule<D>, rho_f: f64) -> f64 {
    2.0 / 3.0 * PI * g.radius.powi(3) * rho_f * (1.0 + g.moisture)
}

/// Velocity increment over `dt` of `(m + C) dv/dt = C a_f + F_other`.
pub fn virtual_mass_integration<const D: usize>(
    mass: f64,
    added: f64,
    a_f: &Vector<D>,
    f_other: &Vector<D>,
    dt: f64,
) -> Vector<D> {
    (a_f * added + f_other) * (dt / (mass + added))
}
