use crate::grid::{sample_cell, sample_face_vector, Geometry, MacGrid};
use crate::math::Vector;

/// Fluid state frozen at the start of a step, read by every granule substep.
#[derive(Clone, Debug)]
pub struct FluidSnapshot<const D: usize> {
    geom: Geometry<D>,
    velocity: [Vec<f64>; D],
    accel: [Vec<f64>; D],
    pressure_grad: [Vec<f64>; D],
    alpha_f: Vec<f64>,
}

/// Fluid quantities interpolated at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluidSample<const D: usize> {
    pub grad_p: Vector<D>,
    pub velocity: Vector<D>,
    /// Grid velocity increment of the last step divided by its duration.
    pub accel: Vector<D>,
    pub alpha_f: f64,
}

impl<const D: usize> FluidSample<D> {
    /// No fluid at all.
    pub fn dry() -> Self {
        Self { grad_p: Vector::<D>::zeros(), velocity: Vector::<D>::zeros(), accel: Vector::<D>::zeros(), alpha_f: 0.0 }
    }
}

impl<const D: usize> FluidSnapshot<D> {
    /// Copies the fields out of `grid`. `dt_prev` is the duration of the step that
    /// produced `face_vel` from `face_vel_old`; zero disables the acceleration.
    pub fn from_grid(grid: &MacGrid<D>, dt_prev: f64) -> Self {
        let accel = std::array::from_fn(|a| {
            if dt_prev > 0.0 {
                grid.face_vel[a].iter().zip(grid.face_vel_old[a].iter()).map(|(n, o)| (n - o) / dt_prev).collect()
            } else {
                vec![0.0; grid.face_vel[a].len()]
            }
        });
        Self {
            geom: grid.geom.clone(),
            velocity: grid.face_vel.clone(),
            accel,
            pressure_grad: grid.pressure_grad.clone(),
            alpha_f: grid.alpha_f.clone(),
        }
    }

    pub fn sample(&self, x: &Vector<D>) -> FluidSample<D> {
        FluidSample {
            grad_p: sample_face_vector(&self.geom, &self.pressure_grad, x),
            velocity: sample_face_vector(&self.geom, &self.velocity, x),
            accel: sample_face_vector(&self.geom, &self.accel, x),
            alpha_f: sample_cell(&self.geom, &self.alpha_f, x),
        }
    }
}
