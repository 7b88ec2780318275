//! Stirs a sand-water tank with a scripted swirl force and prints the kinetic energy.

use gic::scene::{build_state, parse_scene};
use gic::sim::step;

const SCENE: &str = "
[domain]
cells = 48 48
walls = 1
[materials]
r_max = 0.02
[blocks]
water = box 1 1 47 36
sand = box 10 1 38 8
[events]
force = swirl 40 at 24 20 from 0.02 to 0.12
";

fn main() {
    let cfg = parse_scene(SCENE).unwrap();
    let mut s = build_state::<2>(&cfg).unwrap();
    let mut next = 0.0;
    while s.t < 0.2 {
        step(&mut s).unwrap();
        if s.t >= next {
            let rho_f = s.params.rho_f;
            let vp = s.particle_volume();
            let ke_f: f64 = s.fluid.iter().map(|p| 0.5 * rho_f * vp * p.v.norm_squared()).sum();
            let ke_s: f64 = s.granules.iter().map(|g| 0.5 * g.mass(rho_f) * g.v.norm_squared()).sum();
            println!("t = {:.3} s  fluid KE {ke_f:.3e} J  sand KE {ke_s:.3e} J", s.t);
            next += 0.02;
        }
    }
}
