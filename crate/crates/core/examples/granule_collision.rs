//! Two granules collide head-on inside one substep loop.

use gic::coupling::CouplingParams;
use gic::dem::{rayleigh_dt, sand_substep_loop, ContactParams, Granule, SandEnv};
use gic::grid::Geometry;
use gic::solid::SolidSet;
use gic::Vector;

fn main() {
    type V2 = Vector<2>;
    let r = 3.9e-4;
    let contact = ContactParams { friction_angle: 0.0, ..ContactParams::default() };
    let geom = Geometry::<2>::new([32, 32], 7.8e-4).unwrap();
    let mid = geom.domain_size() * 0.5;
    let mut pair = vec![
        Granule::new(mid - V2::new(1.2 * r, 0.0), V2::new(0.2, 0.0), r, 2500.0),
        Granule::new(mid + V2::new(1.2 * r, 0.0), V2::new(-0.2, 0.0), r, 2500.0),
    ];
    let coupling = CouplingParams::default();
    let solids = SolidSet::default();
    let env = SandEnv {
        geom: &geom,
        fluid: None,
        solids: &solids,
        contact: &contact,
        coupling: &coupling,
        rho_f: 1000.0,
        gravity: V2::zeros(),
    };
    let dt_sub = rayleigh_dt(&pair[0], &contact, 1000.0);
    let mut exchange = geom.new_face_fields(0.0);
    println!("substep {dt_sub:.4e} s");
    for frame in 0..6 {
        let p: V2 = pair.iter().map(|g| g.v * g.mass(1000.0)).sum();
        let gap = (pair[1].x - pair[0].x).norm() - 2.0 * r;
        println!(
            "t = {:.2e} s  v = ({:+.4}, {:+.4}) m/s  gap = {:+.3e} m  momentum = {:+.3e}",
            frame as f64 * 1e-3,
            pair[0].v[0],
            pair[1].v[0],
            gap,
            p[0]
        );
        sand_substep_loop(&mut pair, &env, 1e-3, dt_sub, &mut exchange);
    }
}
