//! Drops a sand disk into a water tank and prints the volume accounting.
//!
//! cargo run --release --example ball_drop [-- end_time]

use gic::scene::{build_state, parse_scene, volume_report};
use gic::sim::step;

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/scenes/ball_drop.cfg");
    let mut cfg = parse_scene(&std::fs::read_to_string(path).unwrap()).unwrap();
    if let Some(end) = std::env::args().nth(1) {
        cfg.end_time = end.parse().expect("end time in seconds");
    }
    let mut state = build_state::<2>(&cfg).unwrap();
    let initial = volume_report(&state);
    println!("{} granules, {} fluid particles", state.granules.len(), state.fluid.len());
    println!("{}", gic::scene::VolumeReport::CSV_HEADER);
    println!("{}", initial.csv_row());
    let mut next_print = 0.05;
    while state.t < cfg.end_time {
        step(&mut state).unwrap();
        if state.t >= next_print {
            println!("{}", volume_report(&state).csv_row());
            next_print += 0.05;
        }
    }
    let lowest = state.granules.iter().map(|g| g.x[1]).fold(f64::INFINITY, f64::min);
    println!("steps {}, lowest granule at {:.2} cells", state.step_index, lowest / state.grid.h());
    println!("volume deviation {:.3e}", volume_report(&state).deviation_from(&initial));
}
