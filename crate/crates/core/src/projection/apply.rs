use rayon::prelude::*;

use super::poisson::{weighted_divergence_at, NONE};
use super::{
    assemble_density_ppe, assemble_velocity_ppe, push_out_rhs, solve_ppe, PoissonSystem, ProjectionLimits, PushOut,
    SolveStats, SolverParams,
};
use crate::grid::{rasterize_fluid_fraction, sample_face_vector, CellKind, FluidParticle, MacGrid};
use crate::solid::Sdf;

fn q_at<const D: usize>(sys: &PoissonSystem<D>, q: &[f64], c: Option<[usize; D]>) -> f64 {
    match c {
        Some(c) => {
            let r = sys.row_of[sys.geom.cell_index(c)];
            if r == NONE {
                0.0
            } else {
                q[r]
            }
        }
        None => 0.0,
    }
}

/// `u -= grad q` on every face next to fluid; solid faces get zero velocity.
///
/// Also stores the cell pressure `rho_f q / dt` and the face pressure gradient
/// `rho_f (u* - u') / dt`, which on solid faces is the Neumann value `rho_f u* / dt`.
pub fn apply_velocity_projection<const D: usize>(
    grid: &mut MacGrid<D>,
    sys: &PoissonSystem<D>,
    q: &[f64],
    dt: f64,
    rho_f: f64,
) {
    let geom = grid.geom.clone();
    let h = geom.h();
    let scale = rho_f / dt;
    grid.pressure.iter_mut().for_each(|p| *p = 0.0);
    for (r, &c) in sys.cells.iter().enumerate() {
        grid.pressure[c] = scale * q[r];
    }
    for axis in 0..D {
        for i in 0..geom.face_count(axis) {
            let f = geom.face_coords(axis, i);
            let (lo, hi) = geom.face_cells(axis, f);
            let (klo, khi) = grid.face_sides(axis, f);
            let wet = klo == CellKind::Fluid || khi == CellKind::Fluid;
            if klo == CellKind::Solid || khi == CellKind::Solid {
                grid.pressure_grad[axis][i] = if wet { scale * grid.face_vel[axis][i] } else { 0.0 };
                grid.face_vel[axis][i] = 0.0;
            } else if wet {
                let g = (q_at(sys, q, hi) - q_at(sys, q, lo)) / h;
                grid.face_vel[axis][i] -= g;
                grid.pressure_grad[axis][i] = scale * g;
            } else {
                grid.pressure_grad[axis][i] = 0.0;
            }
        }
    }
}

/// Face position corrections `-grad q`, with push-out values on solid faces.
fn density_corrections<const D: usize>(
    grid: &MacGrid<D>,
    sys: &PoissonSystem<D>,
    q: &[f64],
    push: &PushOut,
) -> [Vec<f64>; D] {
    let geom = &grid.geom;
    let h = geom.h();
    let mut dx = geom.new_face_fields(0.0);
    for axis in 0..D {
        for i in 0..geom.face_count(axis) {
            let f = geom.face_coords(axis, i);
            let (klo, khi) = grid.face_sides(axis, f);
            let wet = klo == CellKind::Fluid || khi == CellKind::Fluid;
            if wet && klo != CellKind::Solid && khi != CellKind::Solid {
                let (lo, hi) = geom.face_cells(axis, f);
                dx[axis][i] = -(q_at(sys, q, hi) - q_at(sys, q, lo)) / h;
            }
        }
    }
    for &(axis, i, v) in &push.faces {
        dx[axis][i] = v;
    }
    dx
}

/// Moves particles by the interpolated correction, clamped to `max_correction * h`;
/// particles still inside a solid afterwards are projected to its surface.
/// Velocities are untouched.
pub fn apply_density_projection<const D: usize>(
    grid: &MacGrid<D>,
    sys: &PoissonSystem<D>,
    q: &[f64],
    push: &PushOut,
    fluid: &mut [FluidParticle<D>],
    solids: &impl Sdf<D>,
    limits: &ProjectionLimits,
) {
    let dx = density_corrections(grid, sys, q, push);
    let geom = &grid.geom;
    let h = geom.h();
    let max = limits.max_correction * h;
    fluid.par_iter_mut().for_each(|p| {
        let mut d = sample_face_vector(geom, &dx, &p.x);
        let len = d.norm();
        if len > max {
            d *= max / len;
        }
        p.x += d;
        project_out_of_solid(&mut p.x, solids, h);
        geom.clamp_to_domain(&mut p.x);
    });
}

pub(crate) fn project_out_of_solid<const D: usize>(x: &mut crate::Vector<D>, solids: &impl Sdf<D>, h: f64) {
    let d = solids.distance(x);
    if d >= 0.0 {
        return;
    }
    let g = solids.gradient(x, 1e-3 * h);
    let len = g.norm();
    if len < 1e-9 {
        return;
    }
    *x += g * ((-d + 1e-6 * h) / len);
}

/// Assembles, solves and applies the velocity projection. Cell kinds and
/// `alpha_f_target` must be current.
pub fn velocity_projection<const D: usize>(
    grid: &mut MacGrid<D>,
    dt: f64,
    rho_f: f64,
    solver: &SolverParams,
) -> SolveStats {
    let sys = assemble_velocity_ppe(grid);
    let (q, stats) = solve_ppe(&sys, solver);
    apply_velocity_projection(grid, &sys, &q, dt, rho_f);
    stats
}

/// Rasterizes `alpha_f`, relabels cells, then solves and applies the density
/// projection (with push-out) to the fluid particles.
pub fn density_projection<const D: usize>(
    grid: &mut MacGrid<D>,
    fluid: &mut [FluidParticle<D>],
    solids: &impl Sdf<D>,
    limits: &ProjectionLimits,
    solver: &SolverParams,
    particles_per_cell: f64,
) -> SolveStats {
    rasterize_fluid_fraction(grid, fluid, particles_per_cell);
    grid.classify_cells(fluid);
    let mut sys = assemble_density_ppe(grid, &grid.alpha_f, limits);
    let push = push_out_rhs(&mut sys, grid, fluid, solids);
    let (q, stats) = solve_ppe(&sys, solver);
    apply_density_projection(grid, &sys, &q, &push, fluid, solids, limits);
    stats
}

/// `div(alpha' u)` per cell (zero outside fluid cells).
pub fn weighted_divergence<const D: usize>(grid: &MacGrid<D>) -> Vec<f64> {
    (0..grid.geom.cell_count())
        .map(|i| {
            if grid.cell_kind[i] == CellKind::Fluid {
                weighted_divergence_at(grid, grid.geom.cell_coords(i))
            } else {
                0.0
            }
        })
        .collect()
}
