use super::Granule;
use crate::math::Vector;
use crate::solid::Sdf;

/// Pushes a granule out of a solid so that `d(x) >= r`, removes the inward normal
/// velocity and applies Coulomb friction `|dv_t| <= tan(phi) |dv_n|`.
///
/// Returns false if the granule was not touching or the gradient was degenerate.
pub fn solid_boundary_response<const D: usize>(g: &mut Granule<D>, sdf: &impl Sdf<D>, tan_phi: f64) -> bool {
    let d = sdf.distance(&g.x);
    if d >= g.radius {
        return false;
    }
    let grad = sdf.gradient(&g.x, 0.01 * g.radius);
    let len = grad.norm();
    if len < 1e-9 {
        return false;
    }
    let n = grad / len;
    g.x += n * (g.radius - d);
    let vn = g.v.dot(&n);
    if vn < 0.0 {
        let vt = g.v - n * vn;
        let vt_len = vt.norm();
        let cut = (tan_phi * -vn).min(vt_len);
        g.v = if vt_len > 0.0 { vt * (1.0 - cut / vt_len) } else { Vector::<D>::zeros() };
    }
    true
}

/// Clamps a granule into `[lo, hi]`, zeroing the velocity component on each clamped axis.
pub fn clamp_to_box<const D: usize>(g: &mut Granule<D>, lo: &Vector<D>, hi: &Vector<D>) {
    for a in 0..D {
        if g.x[a] < lo[a] {
            g.x[a] = lo[a];
            g.v[a] = g.v[a].max(0.0);
        } else if g.x[a] > hi[a] {
            g.x[a] = hi[a];
            g.v[a] = g.v[a].min(0.0);
        }
    }
}
