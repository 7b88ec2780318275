//! Liquid bridge force against gap, and the moisture response curve.

use gic::coupling::{liquid_bridge_force, rupture_distance, CouplingParams, MoistureCurve};

fn main() {
    let (r, sigma) = (3.9e-4, 0.07);
    let params = CouplingParams::default();
    let vstar = params.bridge_volume(r);
    let d_r = rupture_distance(vstar);
    println!(
        "bridge volume {vstar:.4e} m^3, rupture distance {d_r:.4e} m, 2 pi sigma r = {:.4e} N",
        2.0 * std::f64::consts::PI * sigma * r
    );
    println!("gap/d_r    force (N)");
    for k in 0..=12 {
        let s = d_r * k as f64 / 10.0;
        println!("{:6.2}  {:.4e}", k as f64 / 10.0, liquid_bridge_force(s, r, sigma, vstar));
    }
    let curve = MoistureCurve::new(0.05);
    println!("sr       gamma");
    for sr in [0.0, 0.01, 0.025, 0.05, 0.1, 0.3, 0.6, 0.9, 1.0] {
        println!("{sr:<7}  {:.4}", curve.gamma(sr));
    }
}
