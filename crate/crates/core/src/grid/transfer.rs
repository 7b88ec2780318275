use rayon::prelude::*;

use super::{Geometry, MacGrid, Stencil};
use crate::dem::Granule;
use crate::math::Vector;

/// One PIC/FLIP marker particle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluidParticle<const D: usize> {
    pub x: Vector<D>,
    pub v: Vector<D>,
}

impl<const D: usize> FluidParticle<D> {
    pub fn new(x: Vector<D>, v: Vector<D>) -> Self {
        Self { x, v }
    }

    /// A particle at rest.
    pub fn at(x: Vector<D>) -> Self {
        Self { x, v: Vector::<D>::zeros() }
    }
}

/// Scatters `(position, amount)` pairs onto a cell field with the hat kernel.
/// Items are accumulated in iteration order, so the result is deterministic.
pub fn scatter_cell<const D: usize>(
    geom: &Geometry<D>,
    out: &mut [f64],
    items: impl IntoIterator<Item = (Vector<D>, f64)>,
) {
    for (x, amount) in items {
        Stencil::cell(geom, &x).for_each(|i, w| out[i] += w * amount);
    }
}

/// `alpha_s = (1/V) * sum_i V_i (1 + r_i) N(x_i - x)`; absorbed water counts as sand volume.
pub fn rasterize_sand_fraction<const D: usize>(grid: &mut MacGrid<D>, granules: &[Granule<D>]) {
    let inv_v = 1.0 / grid.cell_volume();
    grid.alpha_s.iter_mut().for_each(|a| *a = 0.0);
    scatter_cell(
        &grid.geom,
        &mut grid.alpha_s,
        granules.iter().map(|g| (g.x, g.volume() * (1.0 + g.moisture) * inv_v)),
    );
}

/// `alpha_f = (1/n) * sum_i N(x_i - x)` with `n` the seeding density per cell.
pub fn rasterize_fluid_fraction<const D: usize>(
    grid: &mut MacGrid<D>,
    fluid: &[FluidParticle<D>],
    particles_per_cell: f64,
) {
    let inv_n = 1.0 / particles_per_cell;
    grid.alpha_f.iter_mut().for_each(|a| *a = 0.0);
    scatter_cell(&grid.geom, &mut grid.alpha_f, fluid.iter().map(|p| (p.x, inv_n)));
}

/// PIC scatter: each face becomes the kernel-weighted mean of nearby particle
/// velocities. Faces without weight are flagged invalid and then filled from
/// their valid neighbours (one ring).
pub fn p2g_velocity<const D: usize>(grid: &mut MacGrid<D>, fluid: &[FluidParticle<D>]) {
    let geom = grid.geom.clone();
    for axis in 0..D {
        let n = geom.face_count(axis);
        let mut sum_wv = vec![0.0; n];
        let mut sum_w = vec![0.0; n];
        for p in fluid {
            Stencil::face(&geom, axis, &p.x).for_each(|i, w| {
                sum_wv[i] += w * p.v[axis];
                sum_w[i] += w;
            });
        }
        for i in 0..n {
            if sum_w[i] > 0.0 {
                grid.face_vel[axis][i] = sum_wv[i] / sum_w[i];
                grid.face_valid[axis][i] = true;
            } else {
                grid.face_vel[axis][i] = 0.0;
                grid.face_valid[axis][i] = false;
            }
        }
    }
    let known = grid.face_valid.clone();
    extrapolate_faces(&geom, &mut grid.face_vel, &known, 1);
}

/// Fills unknown faces with the mean of known same-axis neighbours, `layers` rings deep.
pub fn extrapolate_faces<const D: usize>(
    geom: &Geometry<D>,
    fields: &mut [Vec<f64>; D],
    known: &[Vec<bool>; D],
    layers: usize,
) {
    for axis in 0..D {
        let dims = geom.face_dims(axis);
        let strides = geom.face_strides(axis);
        let mut known_now = known[axis].clone();
        for _ in 0..layers {
            let mut updates = Vec::new();
            for i in 0..known_now.len() {
                if known_now[i] {
                    continue;
                }
                let f = geom.face_coords(axis, i);
                let mut sum = 0.0;
                let mut count = 0usize;
                for b in 0..D {
                    if f[b] > 0 && known_now[i - strides[b]] {
                        sum += fields[axis][i - strides[b]];
                        count += 1;
                    }
                    if f[b] + 1 < dims[b] && known_now[i + strides[b]] {
                        sum += fields[axis][i + strides[b]];
                        count += 1;
                    }
                }
                if count > 0 {
                    updates.push((i, sum / count as f64));
                }
            }
            if updates.is_empty() {
                break;
            }
            for (i, v) in updates {
                fields[axis][i] = v;
                known_now[i] = true;
            }
        }
    }
}

/// FLIP/PIC blend: `v <- blend * (v + dv_grid) + (1 - blend) * v_grid`.
pub fn g2p_flip<const D: usize>(grid: &MacGrid<D>, fluid: &mut [FluidParticle<D>], blend: f64) {
    let geom = &grid.geom;
    let delta: [Vec<f64>; D] = std::array::from_fn(|a| {
        grid.face_vel[a].iter().zip(grid.face_vel_old[a].iter()).map(|(new, old)| new - old).collect()
    });
    fluid.par_iter_mut().for_each(|p| {
        let v_grid = super::sample_face_vector(geom, &grid.face_vel, &p.x);
        let dv = super::sample_face_vector(geom, &delta, &p.x);
        p.v = (p.v + dv) * blend + v_grid * (1.0 - blend);
    });
}
