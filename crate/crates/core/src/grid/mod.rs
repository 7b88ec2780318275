//! Staggered (MAC) grid storage, interpolation kernels and particle/grid transfers.
//!
//! Pressure, volume fractions and the solid signed-distance field live at cell
//! centers; velocity components live on the faces normal to their axis. The
//! domain spans `[0, dims[a] * h)` on every axis.

mod kernel;
mod transfer;

pub use kernel::{hat_weight, sample_cell, sample_cell_gradient, sample_face, sample_face_vector, Stencil};
pub use transfer::{
    extrapolate_faces, g2p_flip, p2g_velocity, rasterize_fluid_fraction, rasterize_sand_fraction, scatter_cell,
    FluidParticle,
};

use crate::math::{for_each_index, Vector};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("cell width must be positive, got {0}")]
    NonPositiveSpacing(f64),
    #[error("grid needs at least 3 cells per axis, axis {axis} has {cells}")]
    TooFewCells { axis: usize, cells: usize },
    #[error("slab depth must be positive, got {0}")]
    NonPositiveDepth(f64),
}

/// Per-cell label used by the pressure solves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellKind {
    Fluid,
    Air,
    Solid,
}

/// Shape of the grid: cell counts, spacing, and the out-of-plane slab depth used
/// to turn 2D areas into volumes.
#[derive(Clone, Debug, PartialEq)]
pub struct Geometry<const D: usize> {
    dims: [usize; D],
    h: f64,
    slab_depth: f64,
    strides: [usize; D],
}

impl<const D: usize> Geometry<D> {
    pub fn new(dims: [usize; D], h: f64) -> Result<Self, GridError> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(GridError::NonPositiveSpacing(h));
        }
        for (axis, &cells) in dims.iter().enumerate() {
            if cells < 3 {
                return Err(GridError::TooFewCells { axis, cells });
            }
        }
        Ok(Self { dims, h, slab_depth: 1.0, strides: strides_of(dims) })
    }

    /// Sets the thickness of the simulated slab in 2D. Ignored in 3D.
    pub fn with_slab_depth(mut self, depth: f64) -> Result<Self, GridError> {
        if !(depth > 0.0) || !depth.is_finite() {
            return Err(GridError::NonPositiveDepth(depth));
        }
        self.slab_depth = depth;
        Ok(self)
    }

    pub fn dims(&self) -> [usize; D] {
        self.dims
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn slab_depth(&self) -> f64 {
        if D == 2 {
            self.slab_depth
        } else {
            1.0
        }
    }

    /// Volume of one cell: `h^3` in 3D, `h^2 * slab_depth` in 2D.
    pub fn cell_volume(&self) -> f64 {
        match D {
            2 => self.h * self.h * self.slab_depth,
            _ => self.h.powi(D as i32),
        }
    }

    pub fn cell_count(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn cell_strides(&self) -> [usize; D] {
        self.strides
    }

    pub fn face_dims(&self, axis: usize) -> [usize; D] {
        let mut d = self.dims;
        d[axis] += 1;
        d
    }

    pub fn face_strides(&self, axis: usize) -> [usize; D] {
        strides_of(self.face_dims(axis))
    }

    pub fn face_count(&self, axis: usize) -> usize {
        self.face_dims(axis).iter().product()
    }

    pub fn domain_size(&self) -> Vector<D> {
        Vector::<D>::from_fn(|a, _| self.dims[a] as f64 * self.h)
    }

    pub fn cell_index(&self, c: [usize; D]) -> usize {
        c.iter().zip(self.strides.iter()).map(|(i, s)| i * s).sum()
    }

    pub fn cell_coords(&self, mut idx: usize) -> [usize; D] {
        let mut c = [0; D];
        for a in 0..D {
            c[a] = idx % self.dims[a];
            idx /= self.dims[a];
        }
        c
    }

    pub fn face_index(&self, axis: usize, f: [usize; D]) -> usize {
        let s = self.face_strides(axis);
        f.iter().zip(s.iter()).map(|(i, s)| i * s).sum()
    }

    pub fn face_coords(&self, axis: usize, mut idx: usize) -> [usize; D] {
        let dims = self.face_dims(axis);
        let mut c = [0; D];
        for a in 0..D {
            c[a] = idx % dims[a];
            idx /= dims[a];
        }
        c
    }

    pub fn cell_center(&self, c: [usize; D]) -> Vector<D> {
        Vector::<D>::from_fn(|a, _| (c[a] as f64 + 0.5) * self.h)
    }

    pub fn face_center(&self, axis: usize, f: [usize; D]) -> Vector<D> {
        Vector::<D>::from_fn(|a, _| if a == axis { f[a] as f64 * self.h } else { (f[a] as f64 + 0.5) * self.h })
    }

    /// Cell containing `x`, clamped to the grid.
    pub fn cell_of(&self, x: &Vector<D>) -> [usize; D] {
        let mut c = [0; D];
        for a in 0..D {
            let i = (x[a] / self.h).floor();
            c[a] = if i < 0.0 || i.is_nan() { 0 } else { (i as usize).min(self.dims[a] - 1) };
        }
        c
    }

    /// Neighbouring cell of `c` along `axis`, `dir = -1 | +1`.
    pub fn neighbor(&self, c: [usize; D], axis: usize, dir: i32) -> Option<[usize; D]> {
        let mut n = c;
        if dir < 0 {
            if c[axis] == 0 {
                return None;
            }
            n[axis] -= 1;
        } else {
            if c[axis] + 1 >= self.dims[axis] {
                return None;
            }
            n[axis] += 1;
        }
        Some(n)
    }

    /// The two cells sharing face `f` on `axis` (either may be outside the grid).
    pub fn face_cells(&self, axis: usize, f: [usize; D]) -> (Option<[usize; D]>, Option<[usize; D]>) {
        let lo = if f[axis] == 0 {
            None
        } else {
            let mut c = f;
            c[axis] -= 1;
            Some(c)
        };
        let hi = if f[axis] >= self.dims[axis] { None } else { Some(f) };
        (lo, hi)
    }

    /// Clamps a position into the closed domain box.
    pub fn clamp_to_domain(&self, x: &mut Vector<D>) {
        for a in 0..D {
            let hi = self.dims[a] as f64 * self.h;
            x[a] = x[a].clamp(0.0, hi);
        }
    }

    pub fn new_cell_field(&self, value: f64) -> Vec<f64> {
        vec![value; self.cell_count()]
    }

    pub fn new_face_fields(&self, value: f64) -> [Vec<f64>; D] {
        std::array::from_fn(|a| vec![value; self.face_count(a)])
    }
}

fn strides_of<const D: usize>(dims: [usize; D]) -> [usize; D] {
    let mut s = [1; D];
    for a in 1..D {
        s[a] = s[a - 1] * dims[a - 1];
    }
    s
}

/// The simulation grid with every field the integrator needs.
#[derive(Clone, Debug)]
pub struct MacGrid<const D: usize> {
    pub geom: Geometry<D>,
    /// Face-centered velocity per axis (m/s).
    pub face_vel: [Vec<f64>; D],
    /// Velocity snapshot taken right after P2G, for FLIP deltas.
    pub face_vel_old: [Vec<f64>; D],
    /// Faces that received particle weight in the last P2G.
    pub face_valid: [Vec<bool>; D],
    /// Face-centered pressure gradient from the last velocity projection (Pa/m).
    pub pressure_grad: [Vec<f64>; D],
    /// Cell-centered pressure from the last velocity projection (Pa).
    pub pressure: Vec<f64>,
    pub alpha_s: Vec<f64>,
    pub alpha_f: Vec<f64>,
    pub alpha_f_target: Vec<f64>,
    /// Signed distance to the nearest solid, negative inside (m).
    pub solid_sdf: Vec<f64>,
    pub cell_kind: Vec<CellKind>,
    /// Accumulated granule-to-fluid force per face (N).
    pub exchange_force: [Vec<f64>; D],
}

impl<const D: usize> MacGrid<D> {
    /// A grid with no solids, zero velocity and zero fractions.
    pub fn new(geom: Geometry<D>) -> Self {
        let cells = geom.cell_count();
        Self {
            face_vel: geom.new_face_fields(0.0),
            face_vel_old: geom.new_face_fields(0.0),
            face_valid: std::array::from_fn(|a| vec![false; geom.face_count(a)]),
            pressure_grad: geom.new_face_fields(0.0),
            pressure: vec![0.0; cells],
            alpha_s: vec![0.0; cells],
            alpha_f: vec![0.0; cells],
            alpha_f_target: vec![1.0; cells],
            solid_sdf: vec![f64::MAX; cells],
            cell_kind: vec![CellKind::Air; cells],
            exchange_force: geom.new_face_fields(0.0),
            geom,
        }
    }

    pub fn h(&self) -> f64 {
        self.geom.h()
    }

    pub fn cell_volume(&self) -> f64 {
        self.geom.cell_volume()
    }

    pub fn is_solid(&self, c: [usize; D]) -> bool {
        self.cell_kind[self.geom.cell_index(c)] == CellKind::Solid
    }

    pub fn kind(&self, c: [usize; D]) -> CellKind {
        self.cell_kind[self.geom.cell_index(c)]
    }

    /// Fills `solid_sdf` by evaluating `sdf` at every cell center.
    pub fn set_solid_sdf(&mut self, sdf: impl Fn(&Vector<D>) -> f64) {
        let geom = self.geom.clone();
        for_each_index(geom.dims(), |c| {
            let i = geom.cell_index(c);
            self.solid_sdf[i] = sdf(&geom.cell_center(c));
        });
    }

    /// Labels cells: solid where the SDF is negative at the center, fluid where at
    /// least one fluid particle sits, air otherwise.
    pub fn classify_cells(&mut self, fluid: &[FluidParticle<D>]) {
        for (kind, &d) in self.cell_kind.iter_mut().zip(self.solid_sdf.iter()) {
            *kind = if d < 0.0 { CellKind::Solid } else { CellKind::Air };
        }
        for p in fluid {
            let i = self.geom.cell_index(self.geom.cell_of(&p.x));
            if self.cell_kind[i] == CellKind::Air {
                self.cell_kind[i] = CellKind::Fluid;
            }
        }
    }

    /// Kinds of the two cells on either side of a face; outside the grid counts as solid.
    pub fn face_sides(&self, axis: usize, f: [usize; D]) -> (CellKind, CellKind) {
        let (lo, hi) = self.geom.face_cells(axis, f);
        let k = |c: Option<[usize; D]>| c.map_or(CellKind::Solid, |c| self.kind(c));
        (k(lo), k(hi))
    }

    /// Zeroes the normal velocity on every face touching a solid cell or the domain edge.
    pub fn enforce_solid_faces(&mut self) {
        for axis in 0..D {
            for i in 0..self.geom.face_count(axis) {
                let f = self.geom.face_coords(axis, i);
                let (a, b) = self.face_sides(axis, f);
                if a == CellKind::Solid || b == CellKind::Solid {
                    self.face_vel[axis][i] = 0.0;
                }
            }
        }
    }

    /// Fluid fraction averaged onto a face from its two cells.
    pub fn face_alpha_f(&self, axis: usize, f: [usize; D]) -> f64 {
        let (lo, hi) = self.geom.face_cells(axis, f);
        let mut sum = 0.0;
        let mut n = 0.0;
        for c in [lo, hi].into_iter().flatten() {
            sum += self.alpha_f[self.geom.cell_index(c)];
            n += 1.0;
        }
        if n > 0.0 {
            sum / n
        } else {
            0.0
        }
    }

    /// True when any field holds a NaN or infinity.
    pub fn has_non_finite(&self) -> bool {
        let cell_bad = [&self.pressure, &self.alpha_s, &self.alpha_f, &self.alpha_f_target]
            .iter()
            .any(|f| f.iter().any(|v| !v.is_finite()));
        let face_bad = (0..D).any(|a| {
            self.face_vel[a].iter().any(|v| !v.is_finite()) || self.exchange_force[a].iter().any(|v| !v.is_finite())
        });
        cell_bad || face_bad
    }
}
