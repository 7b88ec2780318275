use crate::dem::Granule;
use crate::grid::{CellKind, Geometry, MacGrid, Stencil};
use crate::math::Vector;

/// Adds `scale * f` to the face force field with the face kernel at `x`.
pub fn scatter_exchange_force<const D: usize>(
    geom: &Geometry<D>,
    field: &mut [Vec<f64>; D],
    x: &Vector<D>,
    f: &Vector<D>,
    scale: f64,
) {
    for axis in 0..D {
        let amount = scale * f[axis];
        if amount == 0.0 {
            continue;
        }
        Stencil::face(geom, axis, x).for_each(|i, w| field[axis][i] += w * amount);
    }
}

/// Mass-weighted granule velocity on every face, `NaN` where no granule reaches.
pub fn granule_face_velocity<const D: usize>(geom: &Geometry<D>, granules: &[Granule<D>], rho_f: f64) -> [Vec<f64>; D] {
    let mut momentum = geom.new_face_fields(0.0);
    let mut mass = geom.new_face_fields(0.0);
    for g in granules {
        let m = g.mass(rho_f);
        for axis in 0..D {
            Stencil::face(geom, axis, &g.x).for_each(|i, w| {
                momentum[axis][i] += w * m * g.v[axis];
                mass[axis][i] += w * m;
            });
        }
    }
    for axis in 0..D {
        for (p, &m) in momentum[axis].iter_mut().zip(&mass[axis]) {
            *p = if m > 0.0 { *p / m } else { f64::NAN };
        }
    }
    momentum
}

/// Momentum moved by [`apply_exchange_force`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExchangeReport<const D: usize> {
    /// Momentum deposited on the grid.
    pub deposited: Vector<D>,
    /// Momentum dropped by the overshoot bound.
    pub clipped: Vector<D>,
}

/// Turns the accumulated force into face velocity: `dv = F dt / (alpha_f rho_f V)`.
///
/// Only faces next to a fluid cell and away from solids receive it. The face
/// fluid fraction is floored at `alpha_floor`. With `sand_velocity`, a face's
/// change is bounded so the fluid moves toward the local granule velocity but
/// never past it; the dropped part is reported as clipped.
pub fn apply_exchange_force<const D: usize>(
    grid: &mut MacGrid<D>,
    dt: f64,
    rho_f: f64,
    alpha_floor: f64,
    sand_velocity: Option<&[Vec<f64>; D]>,
) -> ExchangeReport<D> {
    let geom = grid.geom.clone();
    let v = geom.cell_volume();
    let mut report = ExchangeReport { deposited: Vector::<D>::zeros(), clipped: Vector::<D>::zeros() };
    for axis in 0..D {
        for i in 0..geom.face_count(axis) {
            let f = grid.exchange_force[axis][i];
            if f == 0.0 {
                continue;
            }
            let fc = geom.face_coords(axis, i);
            let (a, b) = grid.face_sides(axis, fc);
            let wet = a == CellKind::Fluid || b == CellKind::Fluid;
            if !wet || a == CellKind::Solid || b == CellKind::Solid {
                continue;
            }
            let fluid_mass = grid.face_alpha_f(axis, fc).max(alpha_floor) * rho_f * v;
            let mut du = f * dt / fluid_mass;
            if let Some(target) = sand_velocity.map(|s| s[axis][i]).filter(|t| t.is_finite()) {
                let gap = target - grid.face_vel[axis][i];
                du = du.clamp(gap.min(0.0), gap.max(0.0));
            }
            grid.face_vel[axis][i] += du;
            report.deposited[axis] += du * fluid_mass;
            report.clipped[axis] += f * dt - du * fluid_mass;
        }
    }
    report
}
