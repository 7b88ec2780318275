use super::Geometry;
use crate::math::Vector;

/// Multilinear hat kernel `N(d) = prod_a max(0, 1 - |d_a| / h)`.
pub fn hat_weight<const D: usize>(d: &Vector<D>, h: f64) -> f64 {
    d.iter().map(|c| (1.0 - c.abs() / h).max(0.0)).product()
}

/// The `2^D` grid samples touched by the hat kernel around a point.
///
/// Indices are clamped to the sampled lattice, so corners that fall outside
/// collapse onto the edge sample and the weights still sum to one.
#[derive(Clone, Copy, Debug)]
pub struct Stencil<const D: usize> {
    idx: [[usize; 2]; D],
    w: [[f64; 2]; D],
    strides: [usize; D],
}

impl<const D: usize> Stencil<D> {
    /// Stencil over cell centers.
    pub fn cell(geom: &Geometry<D>, x: &Vector<D>) -> Self {
        let mut max = geom.dims();
        for m in max.iter_mut() {
            *m -= 1;
        }
        Self::build(x, geom.h(), [0.5; D], max, geom.cell_strides())
    }

    /// Stencil over the faces normal to `axis`.
    pub fn face(geom: &Geometry<D>, axis: usize, x: &Vector<D>) -> Self {
        let mut offset = [0.5; D];
        offset[axis] = 0.0;
        let mut max = geom.face_dims(axis);
        for m in max.iter_mut() {
            *m -= 1;
        }
        Self::build(x, geom.h(), offset, max, geom.face_strides(axis))
    }

    fn build(x: &Vector<D>, h: f64, offset: [f64; D], max: [usize; D], strides: [usize; D]) -> Self {
        let mut idx = [[0; 2]; D];
        let mut w = [[0.0; 2]; D];
        for a in 0..D {
            let p = x[a] / h - offset[a];
            let base = p.floor();
            let frac = p - base;
            let clamp = |i: f64| -> usize {
                if i <= 0.0 || i.is_nan() {
                    0
                } else {
                    (i as usize).min(max[a])
                }
            };
            idx[a] = [clamp(base), clamp(base + 1.0)];
            w[a] = [1.0 - frac, frac];
        }
        Self { idx, w, strides }
    }

    /// Calls `f(linear_index, weight)` for every touched sample with nonzero weight.
    pub fn for_each(&self, mut f: impl FnMut(usize, f64)) {
        self.for_each_coords(|_, i, w| f(i, w));
    }

    /// Like [`Stencil::for_each`] but also passes the multi-index.
    pub fn for_each_coords(&self, mut f: impl FnMut([usize; D], usize, f64)) {
        for mask in 0..(1usize << D) {
            let mut weight = 1.0;
            let mut lin = 0;
            let mut coords = [0; D];
            for a in 0..D {
                let bit = (mask >> a) & 1;
                weight *= self.w[a][bit];
                coords[a] = self.idx[a][bit];
                lin += coords[a] * self.strides[a];
            }
            if weight != 0.0 {
                f(coords, lin, weight);
            }
        }
    }
}

/// Multilinear interpolation of a cell-centered field.
pub fn sample_cell<const D: usize>(geom: &Geometry<D>, field: &[f64], x: &Vector<D>) -> f64 {
    let mut s = 0.0;
    Stencil::cell(geom, x).for_each(|i, w| s += w * field[i]);
    s
}

/// Multilinear interpolation of one face-centered component.
pub fn sample_face<const D: usize>(geom: &Geometry<D>, axis: usize, field: &[f64], x: &Vector<D>) -> f64 {
    let mut s = 0.0;
    Stencil::face(geom, axis, x).for_each(|i, w| s += w * field[i]);
    s
}

/// Interpolates a full vector from per-axis face fields.
pub fn sample_face_vector<const D: usize>(geom: &Geometry<D>, fields: &[Vec<f64>; D], x: &Vector<D>) -> Vector<D> {
    Vector::<D>::from_fn(|a, _| sample_face(geom, a, &fields[a], x))
}

/// Gradient of a cell field at `x`: central differences at cell centers (one-sided
/// on the outermost layer), interpolated multilinearly.
pub fn sample_cell_gradient<const D: usize>(geom: &Geometry<D>, field: &[f64], x: &Vector<D>) -> Vector<D> {
    let dims = geom.dims();
    let strides = geom.cell_strides();
    let h = geom.h();
    let mut g = Vector::<D>::zeros();
    Stencil::cell(geom, x).for_each_coords(|c, lin, w| {
        for a in 0..D {
            let lo = if c[a] > 0 { lin - strides[a] } else { lin };
            let hi = if c[a] + 1 < dims[a] { lin + strides[a] } else { lin };
            let span = if c[a] > 0 && c[a] + 1 < dims[a] { 2.0 * h } else { h };
            g[a] += w * (field[hi] - field[lo]) / span;
        }
    });
    g
}
