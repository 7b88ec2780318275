use super::{ContactParams, Granule};
use crate::math::{unit_axis, Vector};

const COINCIDENT: f64 = 1e-12;

/// Force on granule `i` from its contact with `j`.
///
/// Normal part `k_n (r_i + r_j - d) x_ij` along `x_ij = (x_i - x_j)/d`; tangential part
/// `-k_t v_t` capped by the Coulomb cone `|F_n| tan(phi)`. Zero when not overlapping.
pub fn contact_force<const D: usize>(i: &Granule<D>, j: &Granule<D>, params: &ContactParams) -> Vector<D> {
    let delta = i.x - j.x;
    let d = delta.norm();
    let reach = i.radius + j.radius;
    if d >= reach {
        return Vector::<D>::zeros();
    }
    let (n, overlap) = if d < COINCIDENT { (unit_axis::<D>(0), reach) } else { (delta / d, reach - d) };
    let r = 0.5 * reach;
    let f_n = n * (params.normal_stiffness(r) * overlap);

    let v_ij = i.v - j.v;
    let v_t = v_ij - n * v_ij.dot(&n);
    let f_t = v_t * -params.tangential_stiffness(r);
    let ft_len = f_t.norm();
    if ft_len == 0.0 {
        return f_n;
    }
    let cap = f_n.norm() * params.tan_phi();
    f_n + f_t * (ft_len.min(cap) / ft_len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type V2 = Vector<2>;

    fn granule(x: V2, v: V2) -> Granule<2> {
        Granule::new(x, v, 3.9e-4, 2500.0)
    }

    #[test]
    fn touching_gives_zero() {
        let r = 3.9e-4;
        let a = granule(V2::new(0.0, 0.0), V2::new(0.0, 1.0));
        let b = granule(V2::new(2.0 * r, 0.0), V2::zeros());
        assert_eq!(contact_force(&a, &b, &ContactParams::default()), V2::zeros());
    }

    #[test]
    fn paper_normal_magnitude() {
        let r = 3.9e-4;
        let a = granule(V2::new(0.0, 0.0), V2::zeros());
        let b = granule(V2::new(1.9 * r, 0.0), V2::zeros());
        let f = contact_force(&a, &b, &ContactParams::default());
        assert!((f.norm() - 1.521e-2).abs() < 1e-9);
        assert!(f[0] < 0.0, "pushes i away from j");
    }

    #[test]
    fn radial_velocity_has_no_tangential_part() {
        let r = 3.9e-4;
        let a = granule(V2::new(0.0, 0.0), V2::new(0.5, 0.0));
        let b = granule(V2::new(1.5 * r, 0.0), V2::new(-0.5, 0.0));
        let f = contact_force(&a, &b, &ContactParams::default());
        assert_eq!(f[1], 0.0);
    }

    #[test]
    fn coincident_centers_use_fallback_axis() {
        let a = granule(V2::new(0.1, 0.1), V2::zeros());
        let f = contact_force(&a, &a.clone(), &ContactParams::default());
        assert!((f - V2::new(390.0 * 7.8e-4, 0.0)).norm() < 1e-12);
    }

    fn pair() -> impl Strategy<Value = (Granule<2>, Granule<2>)> {
        let r = 3.9e-4;
        (-1.0f64..1.0, -1.0f64..1.0, 0.2f64..2.0, 0.0f64..std::f64::consts::TAU, prop::array::uniform4(-2.0f64..2.0))
            .prop_map(move |(cx, cy, dist, ang, v)| {
                let xi = V2::new(cx, cy) * 1e-2;
                let xj = xi + V2::new(ang.cos(), ang.sin()) * (dist * r);
                (granule(xi, V2::new(v[0], v[1])), granule(xj, V2::new(v[2], v[3])))
            })
    }

    proptest! {
        #[test]
        fn antisymmetric((a, b) in pair()) {
            let p = ContactParams::default();
            prop_assert_eq!(contact_force(&a, &b, &p), -contact_force(&b, &a, &p));
        }

        #[test]
        fn friction_cone((a, b) in pair(), phi in 0.0f64..1.4) {
            let p = ContactParams { friction_angle: phi, ..ContactParams::default() };
            let f = contact_force(&a, &b, &p);
            let n = (a.x - b.x).normalize();
            let f_n = n * f.dot(&n);
            let f_t = f - f_n;
            prop_assert!(f_t.norm() <= f_n.norm() * phi.tan() * (1.0 + 1e-12) + 1e-18);
        }
    }
}
