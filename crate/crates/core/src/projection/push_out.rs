use std::collections::BTreeMap;

use super::PoissonSystem;
use crate::grid::{CellKind, FluidParticle, MacGrid};
use crate::math::Vector;
use crate::solid::Sdf;

/// Push-out displacements on solid faces, `(axis, face index, dx)` with `dx`
/// signed along `+axis`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PushOut {
    pub faces: Vec<(usize, usize, f64)>,
}

/// Adds the push-out Neumann term for fluid particles that ended up inside solids.
///
/// Each offending particle wants to move by `-d grad(d) / |grad(d)|`. For every
/// solid cell next to a fluid cell, the largest component of that displacement
/// pointing into the fluid cell becomes the ghost displacement `dx_h`, and the
/// fluid row's RHS drops by `(beta_ghost / alpha') dx_h / h` with
/// `beta_ghost = alpha' / 2`.
pub fn push_out_rhs<const D: usize>(
    sys: &mut PoissonSystem<D>,
    grid: &MacGrid<D>,
    fluid: &[FluidParticle<D>],
    solids: &impl Sdf<D>,
) -> PushOut {
    let geom = &grid.geom;
    let h = geom.h();
    let mut best: BTreeMap<(usize, usize), (usize, f64, f64)> = BTreeMap::new();
    for p in fluid {
        let d = solids.distance(&p.x);
        if d >= 0.0 {
            continue;
        }
        let c = geom.cell_of(&p.x);
        if grid.kind(c) != CellKind::Solid {
            continue;
        }
        let g = solids.gradient(&p.x, 1e-3 * h);
        let len = g.norm();
        if len < 1e-9 {
            continue;
        }
        let dx: Vector<D> = g * (-d / len);
        for a in 0..D {
            for dir in [-1i32, 1] {
                let Some(nb) = geom.neighbor(c, a, dir) else { continue };
                if grid.kind(nb) != CellKind::Fluid {
                    continue;
                }
                let comp = dx[a] * dir as f64;
                if comp <= 0.0 {
                    continue;
                }
                let face = if dir > 0 { nb } else { c };
                let key = (a, geom.face_index(a, face));
                let row = sys.row_of[geom.cell_index(nb)];
                let entry = best.entry(key).or_insert((row, dir as f64, 0.0));
                entry.2 = entry.2.max(comp);
            }
        }
    }
    let mut out = PushOut::default();
    for ((axis, face), (row, sign, dx)) in best {
        sys.rhs[row] -= 0.5 * dx / h;
        out.faces.push((axis, face, sign * dx));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Geometry;
    use crate::projection::{assemble_density_ppe, ProjectionLimits};
    use crate::solid::SolidSet;

    fn setup() -> (MacGrid<2>, SolidSet<2>, Vec<FluidParticle<2>>) {
        let h = 0.1;
        let geom = Geometry::<2>::new([6, 6], h).unwrap();
        let solids = SolidSet::with_walls(geom.domain_size(), h);
        let mut grid = MacGrid::new(geom.clone());
        grid.set_solid_sdf(|x| solids.distance(x));
        let mut fluid = Vec::new();
        for i in 1..5 {
            for j in 1..5 {
                fluid.push(FluidParticle::at(geom.cell_center([i, j])));
            }
        }
        grid.classify_cells(&fluid);
        (grid, solids, fluid)
    }

    #[test]
    fn no_offenders_no_change() {
        let (grid, solids, fluid) = setup();
        let star = vec![1.0; grid.geom.cell_count()];
        let mut sys = assemble_density_ppe(&grid, &star, &ProjectionLimits::default());
        let before = sys.rhs.clone();
        let push = push_out_rhs(&mut sys, &grid, &fluid, &solids);
        assert!(push.faces.is_empty());
        assert_eq!(before, sys.rhs);
    }

    #[test]
    fn single_offender_left_wall() {
        let (grid, solids, mut fluid) = setup();
        let h = grid.h();
        let star = vec![1.0; grid.geom.cell_count()];
        let mut sys = assemble_density_ppe(&grid, &star, &ProjectionLimits::default());
        let before = sys.rhs.clone();
        fluid.push(FluidParticle::at(Vector::<2>::new(0.7 * h, 2.5 * h)));
        let push = push_out_rhs(&mut sys, &grid, &fluid, &solids);
        let row = sys.row_of[grid.geom.cell_index([1, 2])];
        assert!((before[row] - sys.rhs[row] - 0.15).abs() < 1e-9);
        assert_eq!(push.faces.len(), 1);
        let (axis, face, dx) = push.faces[0];
        assert_eq!(axis, 0);
        assert_eq!(face, grid.geom.face_index(0, [1, 2]));
        assert!((dx - 0.3 * h).abs() < 1e-9);
    }

    #[test]
    fn deepest_offender_wins_and_right_wall_is_negative() {
        let (grid, solids, mut fluid) = setup();
        let h = grid.h();
        let star = vec![1.0; grid.geom.cell_count()];
        let mut sys = assemble_density_ppe(&grid, &star, &ProjectionLimits::default());
        let before = sys.rhs.clone();
        fluid.push(FluidParticle::at(Vector::<2>::new(5.1 * h, 3.5 * h)));
        fluid.push(FluidParticle::at(Vector::<2>::new(5.4 * h, 3.5 * h)));
        let push = push_out_rhs(&mut sys, &grid, &fluid, &solids);
        let row = sys.row_of[grid.geom.cell_index([4, 3])];
        assert!((before[row] - sys.rhs[row] - 0.2).abs() < 1e-9);
        assert!((push.faces[0].2 + 0.4 * h).abs() < 1e-9);
    }
}
