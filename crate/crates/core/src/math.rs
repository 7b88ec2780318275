//! Small vector helpers shared by every module.

/// Spatial vector in `D` dimensions.
pub type Vector<const D: usize> = nalgebra::SVector<f64, D>;

/// Unit vector along `axis`.
pub fn unit_axis<const D: usize>(axis: usize) -> Vector<D> {
    let mut v = Vector::<D>::zeros();
    v[axis] = 1.0;
    v
}

/// Volume of a sphere of radius `r`.
pub fn sphere_volume(r: f64) -> f64 {
    4.0 / 3.0 * std::f64::consts::PI * r * r * r
}

/// Iterates every multi-index in `[0, dims)` in row-major order (axis 0 fastest).
pub fn for_each_index<const D: usize>(dims: [usize; D], mut f: impl FnMut([usize; D])) {
    if dims.iter().any(|&n| n == 0) {
        return;
    }
    let mut idx = [0usize; D];
    loop {
        f(idx);
        let mut axis = 0;
        loop {
            if axis == D {
                return;
            }
            idx[axis] += 1;
            if idx[axis] < dims[axis] {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
    }
}

/// Returns true when every component is finite.
pub fn is_finite<const D: usize>(v: &Vector<D>) -> bool {
    v.iter().all(|c| c.is_finite())
}
