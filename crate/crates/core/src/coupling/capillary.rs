use std::f64::consts::PI;

use super::CouplingParams;
use crate::dem::Granule;
use crate::math::Vector;

/// Moisture response `Gamma(sr)`: zero when dry or saturated, one at `r_max`.
///
/// Two quadratic Bézier arcs meet at the apex `(r_max, 1)` with a horizontal
/// tangent. `rise` and `fall` place the x coordinate of each arc's middle
/// control point as a fraction of the arc's span; 0.5 gives parabolas.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoistureCurve {
    pub r_max: f64,
    pub rise: f64,
    pub fall: f64,
}

impl MoistureCurve {
    pub fn new(r_max: f64) -> Self {
        Self { r_max, rise: 0.5, fall: 0.5 }
    }

    pub fn gamma(&self, sr: f64) -> f64 {
        let rm = self.r_max;
        if rm <= 0.0 || sr <= 0.0 || sr >= 1.0 {
            return 0.0;
        }
        if sr == rm {
            return 1.0;
        }
        if sr < rm {
            let t = bezier_t(0.0, self.rise * rm, rm, sr);
            1.0 - (1.0 - t) * (1.0 - t)
        } else {
            let t = bezier_t(rm, rm + self.fall * (1.0 - rm), 1.0, sr);
            1.0 - t * t
        }
    }
}

/// Parameter `t` in `[0, 1]` where the quadratic Bézier `x0, x1, x2` reaches `x`.
fn bezier_t(x0: f64, x1: f64, x2: f64, x: f64) -> f64 {
    let a = x0 - 2.0 * x1 + x2;
    let b = 2.0 * (x1 - x0);
    let c = x0 - x;
    let t = if a.abs() < 1e-12 * (x2 - x0).abs() {
        -c / b
    } else {
        let disc = (b * b - 4.0 * a * c).max(0.0);
        2.0 * -c / (b + disc.sqrt())
    };
    t.clamp(0.0, 1.0)
}

/// `sr = r_i + alpha_f / (1 - alpha_f)`, clamped to `[0, 1]`.
pub fn moisture_saturation(moisture: f64, alpha_f: f64) -> f64 {
    let a = alpha_f.clamp(0.0, 1.0 - 1e-9);
    (moisture + a / (1.0 - a)).clamp(0.0, 1.0)
}

/// Separation beyond which a liquid bridge of volume `vstar` breaks.
pub fn rupture_distance(vstar: f64) -> f64 {
    vstar.cbrt() + 0.1 * vstar.powf(2.0 / 3.0)
}

/// Liquid bridge force magnitude at gap `s` (positive means attraction).
pub fn liquid_bridge_force(s: f64, r: f64, sigma: f64, vstar: f64) -> f64 {
    let cap = 2.0 * PI * sigma * r;
    if s <= 0.0 {
        return cap;
    }
    if s >= rupture_distance(vstar) {
        return 0.0;
    }
    -cap * ((1.0 + 2.0 * vstar / (PI * r * s * s)).powf(-0.5) - 1.0)
}

/// Capillary force on `i` from `j`, attractive along the center line.
pub fn concentration_gradient_force<const D: usize>(
    i: &Granule<D>,
    j: &Granule<D>,
    sr_i: f64,
    sr_j: f64,
    params: &CouplingParams,
) -> Vector<D> {
    let delta = i.x - j.x;
    let d = delta.norm();
    if d < 1e-12 {
        return Vector::<D>::zeros();
    }
    let g = params.curve.gamma(0.5 * (sr_i + sr_j));
    if g == 0.0 {
        return Vector::<D>::zeros();
    }
    let r = 0.5 * (i.radius + j.radius);
    let s = d - (i.radius + j.radius);
    let vstar = params.vstar_ratio * crate::math::sphere_volume(r);
    if s >= rupture_distance(vstar) {
        return Vector::<D>::zeros();
    }
    delta * (-g * liquid_bridge_force(s, r, params.sigma, vstar) / d)
}
