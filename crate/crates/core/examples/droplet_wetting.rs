//! A water drop lands on a sand bed and is absorbed; prints the per-step
//! wetting ledger.

use gic::scene::{build_state, parse_scene, volume_report};
use gic::sim::step;

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/scenes/droplet.cfg");
    let cfg = parse_scene(&std::fs::read_to_string(path).unwrap()).unwrap();
    let mut s = build_state::<2>(&cfg).unwrap();
    let initial = volume_report(&s);
    while s.t < cfg.end_time {
        let r = step(&mut s).unwrap();
        let w = r.wetting;
        if w.removed > 0 || w.refunded > 0 {
            println!(
                "step {:3} t = {:.4}  absorbed {:3} particles ({:.3e} m^3)  credited {:.3e} m^3  refunded {}",
                r.step, r.t, w.removed, w.removed_volume, w.credited_volume, w.refunded
            );
        }
    }
    let v = volume_report(&s);
    let mean = s.granules.iter().map(|g| g.moisture).sum::<f64>() / s.granules.len() as f64;
    println!(
        "free {:.4e}  absorbed {:.4e}  mean moisture {mean:.4}  deviation {:.2e}",
        v.free_water,
        v.absorbed_water,
        v.deviation_from(&initial)
    );
}
