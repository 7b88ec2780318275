use crate::grid::MacGrid;
use crate::math::Vector;

/// A body acceleration field applied to the water.
#[derive(Clone, Debug, PartialEq)]
pub enum BodyForce<const D: usize> {
    /// The same acceleration everywhere (m/s²).
    Uniform(Vector<D>),
    /// Tangential acceleration of fixed magnitude around `center`, turning
    /// counter-clockwise in the plane of axes 0 and `D - 1`.
    Swirl { center: Vector<D>, magnitude: f64 },
}

impl<const D: usize> BodyForce<D> {
    pub fn accel(&self, x: &Vector<D>) -> Vector<D> {
        match self {
            Self::Uniform(a) => *a,
            Self::Swirl { center, magnitude } => {
                let (u, w) = (0, D - 1);
                let d0 = x[u] - center[u];
                let d1 = x[w] - center[w];
                let len = (d0 * d0 + d1 * d1).sqrt();
                let mut a = Vector::<D>::zeros();
                if len > 0.0 {
                    a[u] = -d1 / len * magnitude;
                    a[w] = d0 / len * magnitude;
                }
                a
            }
        }
    }
}

/// A body force active over `[start, end)` seconds.
#[derive(Clone, Debug, PartialEq)]
pub struct ForceEvent<const D: usize> {
    pub force: BodyForce<D>,
    pub start: f64,
    pub end: f64,
}

impl<const D: usize> ForceEvent<D> {
    pub fn active(&self, t: f64) -> bool {
        t >= self.start && t < self.end
    }
}

/// Adds `accel dt` on every face for gravity and every event active at `t`.
pub(crate) fn apply_body_forces<const D: usize>(
    grid: &mut MacGrid<D>,
    gravity: &Vector<D>,
    events: &[ForceEvent<D>],
    t: f64,
    dt: f64,
) {
    let active: Vec<&ForceEvent<D>> = events.iter().filter(|e| e.active(t)).collect();
    for axis in 0..D {
        let g = gravity[axis] * dt;
        for i in 0..grid.geom.face_count(axis) {
            let mut dv = g;
            if !active.is_empty() {
                let x = grid.geom.face_center(axis, grid.geom.face_coords(axis, i));
                dv += active.iter().map(|e| e.force.accel(&x)[axis]).sum::<f64>() * dt;
            }
            grid.face_vel[axis][i] += dv;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swirl_is_tangential() {
        let f = BodyForce::Swirl { center: Vector::<2>::new(1.0, 1.0), magnitude: 2.0 };
        let a = f.accel(&Vector::<2>::new(2.0, 1.0));
        assert!((a - Vector::<2>::new(0.0, 2.0)).norm() < 1e-15);
        assert_eq!(f.accel(&Vector::<2>::new(1.0, 1.0)), Vector::<2>::zeros());
        let f3 = BodyForce::Swirl { center: Vector::<3>::zeros(), magnitude: 1.0 };
        let a3 = f3.accel(&Vector::<3>::new(0.0, 5.0, 1.0));
        assert!((a3 - Vector::<3>::new(-1.0, 0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn window_is_half_open() {
        let e = ForceEvent { force: BodyForce::Uniform(Vector::<2>::new(1.0, 0.0)), start: 0.5, end: 1.0 };
        assert!(!e.active(0.49));
        assert!(e.active(0.5));
        assert!(!e.active(1.0));
    }
}
