//! Writes a frame file and its CSV export, then reads the frame back.

use gic::scene::{build_state, parse_scene, read_frame, write_frame, write_frame_csv, Frame};
use gic::sim::step;

fn main() {
    let text = "[domain]\ncells = 16 16\n[blocks]\nwater = box 1 1 15 6\nsand = ball 8 11 2\n";
    let mut s = build_state::<2>(&parse_scene(text).unwrap()).unwrap();
    for _ in 0..3 {
        step(&mut s).unwrap();
    }
    let dir = std::env::temp_dir().join("gic_frame_io");
    std::fs::create_dir_all(&dir).unwrap();
    let bin = dir.join("frame.gicf");
    let csv = dir.join("frame.csv");
    write_frame(&s, &bin, true).unwrap();
    write_frame_csv(&s, &csv).unwrap();
    let frame = read_frame::<2>(&bin).unwrap();
    assert_eq!(frame, Frame::from_state(&s, true));
    println!(
        "{} ({} bytes): step {}, t = {:.4e}, {} granules, {} fluid particles",
        bin.display(),
        std::fs::metadata(&bin).unwrap().len(),
        frame.step,
        frame.t,
        frame.granules.len(),
        frame.fluid.len()
    );
    for (name, values) in &frame.grid_fields {
        println!("  field {name}: {} cells, max {:.4e}", values.len(), values.iter().cloned().fold(f64::MIN, f64::max));
    }
    let text = std::fs::read_to_string(&csv).unwrap();
    for line in text.lines().take(3) {
        println!("  {line}");
    }
}
