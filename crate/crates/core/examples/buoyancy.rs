//! Pressure-gradient force on a fixed granule in a resting water column.

use gic::coupling::{pressure_gradient_force, FluidSnapshot};
use gic::dem::Granule;
use gic::math::sphere_volume;
use gic::scene::{build_state, parse_scene};
use gic::sim::step;
use gic::Vector;

fn main() {
    let text = "[domain]\ncells = 24 32\nwalls = 1\n[blocks]\nwater = box 1 1 23 26\n";
    let mut s = build_state::<2>(&parse_scene(text).unwrap()).unwrap();
    let h = s.grid.h();
    let r = 3.9e-4;
    let mut g = Granule::new(Vector::<2>::new(12.0 * h, 10.0 * h), Vector::<2>::zeros(), r, 2500.0);
    g.fixed = true;
    s.granules.push(g);
    let expected = 1000.0 * 9.81 * sphere_volume(r);
    for _ in 0..5 {
        step(&mut s).unwrap();
        let snapshot = FluidSnapshot::from_grid(&s.grid, s.dt_prev);
        let f = pressure_gradient_force(&s.granules[0], &snapshot.sample(&s.granules[0].x));
        println!("t = {:.4} s  F_p = ({:+.4e}, {:+.4e}) N  rho g V = {expected:.4e} N", s.t, f[0], f[1]);
    }
}
