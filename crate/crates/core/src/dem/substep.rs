use rayon::prelude::*;

use super::{clamp_to_box, contact_force, solid_boundary_response, ContactParams, Granule, NeighborGrid};
use crate::coupling::{
    added_mass, concentration_gradient_force, drag_force, moisture_saturation, pressure_gradient_force,
    rupture_distance, scatter_exchange_force, virtual_mass_integration, CouplingParams, FluidSample, FluidSnapshot,
    FLUID_GATE,
};
use crate::grid::Geometry;
use crate::math::Vector;
use crate::solid::SolidSet;
use crate::wetting::drain_absorbed_momentum;

/// Rayleigh time step `0.5 sqrt(m / k_n)` using the current (wet) mass.
pub fn rayleigh_dt<const D: usize>(g: &Granule<D>, params: &ContactParams, rho_f: f64) -> f64 {
    0.5 * (g.mass(rho_f) / params.normal_stiffness(g.radius)).sqrt()
}

/// `ceil(dt / dt_sub)`, at least one, tolerant to round-off in the ratio.
pub fn substep_count(dt: f64, dt_sub: f64) -> usize {
    let ratio = dt / dt_sub;
    ((ratio - 1e-9 * ratio.max(1.0)).ceil() as usize).max(1)
}

/// Everything the substep loop reads but never writes.
pub struct SandEnv<'a, const D: usize> {
    pub geom: &'a Geometry<D>,
    pub fluid: Option<&'a FluidSnapshot<D>>,
    pub solids: &'a SolidSet<D>,
    pub contact: &'a ContactParams,
    pub coupling: &'a CouplingParams,
    pub rho_f: f64,
    pub gravity: Vector<D>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubstepStats<const D: usize> {
    pub substeps: usize,
    pub dt_sub: f64,
    /// Momentum handed to the granules by all fluid forces over the whole loop.
    pub fluid_impulse: Vector<D>,
}

/// Advances the granules by `dt` in `N = ceil(dt / dt_max)` equal substeps.
///
/// Each substep evaluates fluid forces from the frozen snapshot, contact and
/// capillary forces, integrates the velocity (with virtual mass and the
/// absorbed-momentum drain), moves the granules and resolves solid contact.
/// The drag and virtual-mass forces of every substep are scattered into
/// `exchange` with weight `-dt_sub / dt`. The pressure-gradient force is not:
/// its counterpart is already in the fluid's own `-alpha_f grad p`.
pub fn sand_substep_loop<const D: usize>(
    granules: &mut [Granule<D>],
    env: &SandEnv<'_, D>,
    dt: f64,
    dt_max: f64,
    exchange: &mut [Vec<f64>; D],
) -> SubstepStats<D> {
    let n = substep_count(dt, dt_max);
    let h = dt / n as f64;
    let mut stats = SubstepStats { substeps: n, dt_sub: h, fluid_impulse: Vector::<D>::zeros() };
    if granules.is_empty() {
        return stats;
    }
    let r_big = granules.iter().map(|g| g.radius).fold(0.0, f64::max);
    let capillary = env.coupling.r_max() > 0.0 && env.coupling.sigma > 0.0;
    let reach = if capillary { 2.0 * r_big + rupture_distance(env.coupling.bridge_volume(r_big)) } else { 2.0 * r_big };
    let size = env.geom.domain_size();
    let tan_phi = env.contact.tan_phi();

    for _ in 0..n {
        let points: Vec<Vector<D>> = granules.iter().map(|g| g.x).collect();
        let neighbors = NeighborGrid::build(&points, reach);
        let samples: Vec<FluidSample<D>> = granules
            .par_iter()
            .map(|g| match env.fluid {
                Some(s) => s.sample(&g.x),
                None => FluidSample::dry(),
            })
            .collect();
        let sr: Vec<f64> =
            granules.iter().zip(samples.iter()).map(|(g, s)| moisture_saturation(g.moisture, s.alpha_f)).collect();

        let snapshot: &[Granule<D>] = granules;
        let updates: Vec<(Vector<D>, Vector<D>, Vector<D>)> = (0..snapshot.len())
            .into_par_iter()
            .map(|i| {
                let g = &snapshot[i];
                if g.fixed {
                    return (Vector::<D>::zeros(), Vector::<D>::zeros(), Vector::<D>::zeros());
                }
                let m = g.mass(env.rho_f);
                let mut f_other = env.gravity * m;
                neighbors.for_each_neighbor(&points, i, |j| {
                    f_other += contact_force(g, &snapshot[j], env.contact);
                    if capillary {
                        f_other += concentration_gradient_force(g, &snapshot[j], sr[i], sr[j], env.coupling);
                    }
                });
                let s = &samples[i];
                let zero = Vector::<D>::zeros();
                let (dv, f_exchange, f_fluid) = if s.alpha_f >= FLUID_GATE {
                    let f_p = pressure_gradient_force(g, s);
                    let f_d = drag_force(g, s, env.coupling, env.rho_f);
                    let c = added_mass(g, env.rho_f);
                    let dv = virtual_mass_integration(m, c, &s.accel, &(f_other + f_p + f_d), h);
                    let f_v = (s.accel - dv / h) * c;
                    (dv, f_d + f_v, f_p + f_d + f_v)
                } else {
                    (f_other * (h / m), zero, zero)
                };
                (dv + drain_absorbed_momentum(g, dt, h, env.rho_f), f_exchange, f_fluid)
            })
            .collect();

        for (g, (dv, f_exchange, f_fluid)) in granules.iter_mut().zip(updates.iter()) {
            if g.fixed {
                continue;
            }
            if *f_exchange != Vector::<D>::zeros() {
                scatter_exchange_force(env.geom, exchange, &g.x, f_exchange, -h / dt);
            }
            stats.fluid_impulse += f_fluid * h;
            g.v += dv;
        }
        granules.par_iter_mut().filter(|g| !g.fixed).for_each(|g| {
            g.x += g.v * h;
            solid_boundary_response(g, env.solids, tan_phi);
            clamp_to_box(g, &Vector::<D>::zeros(), &size);
        });
    }
    for g in granules.iter_mut() {
        g.absorbed_momentum = Vector::<D>::zeros();
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;

    type V2 = Vector<2>;
    const R: f64 = 3.9e-4;

    struct Fixture {
        geom: Geometry<2>,
        solids: SolidSet<2>,
        contact: ContactParams,
        coupling: CouplingParams,
    }

    impl Fixture {
        fn new() -> Self {
            Self {
                geom: Geometry::new([64, 64], 1e-3).unwrap(),
                solids: SolidSet::default(),
                contact: ContactParams { friction_angle: 0.0, ..Default::default() },
                coupling: CouplingParams::default(),
            }
        }

        fn env(&self, gravity: V2) -> SandEnv<'_, 2> {
            SandEnv {
                geom: &self.geom,
                fluid: None,
                solids: &self.solids,
                contact: &self.contact,
                coupling: &self.coupling,
                rho_f: 1000.0,
                gravity,
            }
        }
    }

    #[test]
    fn paper_rayleigh_step() {
        let g = Granule::<2>::new(V2::zeros(), V2::zeros(), R, 2500.0);
        let dt = rayleigh_dt(&g, &ContactParams::default(), 1000.0);
        assert!((dt - 1.995e-5).abs() < 1e-8);
        let mut heavy = g;
        heavy.density *= 4.0;
        let ratio = rayleigh_dt(&heavy, &ContactParams::default(), 1000.0) / dt;
        assert!((ratio - 2.0).abs() < 1e-12);
        let stiff = ContactParams { young: 4e6, ..Default::default() };
        assert!((rayleigh_dt(&g, &stiff, 1000.0) / dt - 0.5).abs() < 1e-12);
    }

    #[test]
    fn substep_count_examples() {
        assert_eq!(substep_count(1e-3, 2e-5), 50);
        assert_eq!(substep_count(1e-3, 3e-5), 34);
        assert_eq!(substep_count(1e-6, 2e-5), 1);
    }

    #[test]
    fn free_flight() {
        let fx = Fixture::new();
        let v = V2::new(0.3, -0.1);
        let x0 = V2::new(0.03, 0.03);
        let mut gs = [Granule::new(x0, v, R, 2500.0)];
        let mut ex = fx.geom.new_face_fields(0.0);
        let stats = sand_substep_loop(&mut gs, &fx.env(V2::zeros()), 1e-3, 2e-5, &mut ex);
        assert_eq!(stats.substeps, 50);
        assert_eq!(gs[0].v, v);
        assert!((gs[0].x - (x0 + v * 1e-3)).norm() < 1e-15);
    }

    #[test]
    fn head_on_collision_conserves_momentum() {
        let fx = Fixture::new();
        let mut gs = [
            Granule::new(V2::new(0.030, 0.03), V2::new(0.5, 0.0), R, 2500.0),
            Granule::new(V2::new(0.030 + 2.2 * R, 0.03), V2::new(-0.2, 0.0), R, 2500.0),
        ];
        let p0: V2 = gs.iter().map(|g| g.v * g.mass(1000.0)).sum();
        let mut ex = fx.geom.new_face_fields(0.0);
        let dt_sub = rayleigh_dt(&gs[0], &fx.contact, 1000.0);
        sand_substep_loop(&mut gs, &fx.env(V2::zeros()), 5e-3, dt_sub, &mut ex);
        let p1: V2 = gs.iter().map(|g| g.v * g.mass(1000.0)).sum();
        assert!(gs[0].v[0] < 0.5, "collision happened");
        assert!((p1 - p0).norm() <= 1e-10 * p0.norm());
    }

    #[test]
    fn gravity_without_fluid() {
        let fx = Fixture::new();
        let mut gs = [Granule::new(V2::new(0.03, 0.03), V2::zeros(), R, 2500.0)];
        let mut ex = fx.geom.new_face_fields(0.0);
        sand_substep_loop(&mut gs, &fx.env(V2::new(0.0, -9.81)), 1e-3, 2e-5, &mut ex);
        assert!((gs[0].v[1] + 9.81e-3).abs() < 1e-15);
        assert!(ex.iter().flatten().all(|&f| f == 0.0));
    }

    #[test]
    fn absorbed_momentum_drains_fully() {
        let fx = Fixture::new();
        let mut g = Granule::new(V2::new(0.03, 0.03), V2::zeros(), R, 2500.0);
        g.moisture = 0.3;
        let m = g.mass(1000.0);
        assert!((m - 6.957e-7).abs() < 1e-10);
        g.absorbed_momentum = V2::new(m, 0.0);
        let mut gs = [g];
        let mut ex = fx.geom.new_face_fields(0.0);
        sand_substep_loop(&mut gs, &fx.env(V2::zeros()), 1e-3, 3e-5, &mut ex);
        assert!((gs[0].v[0] - 1.0).abs() < 1e-12);
        assert_eq!(gs[0].absorbed_momentum, V2::zeros());
    }

    #[test]
    fn fixed_granules_do_not_move() {
        let fx = Fixture::new();
        let mut a = Granule::new(V2::new(0.03, 0.03), V2::zeros(), R, 2500.0);
        a.fixed = true;
        let b = Granule::new(V2::new(0.03 + 1.5 * R, 0.03), V2::zeros(), R, 2500.0);
        let mut gs = [a, b];
        let mut ex = fx.geom.new_face_fields(0.0);
        sand_substep_loop(&mut gs, &fx.env(V2::new(0.0, -9.81)), 1e-3, 2e-5, &mut ex);
        assert_eq!(gs[0].x, a.x);
        assert!(gs[1].x[0] > b.x[0]);
    }
}
