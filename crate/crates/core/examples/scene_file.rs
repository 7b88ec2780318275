//! Parses a scene file, prints it back in canonical form and builds the state.
//!
//! cargo run --example scene_file [-- path/to/scene.cfg]

use gic::scene::{build_state, parse_scene, serialize_scene};

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenes/funnel_wet.cfg").to_string());
    let cfg = match parse_scene(&std::fs::read_to_string(&path).unwrap()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{path}: {e}");
            std::process::exit(1);
        }
    };
    let text = serialize_scene(&cfg);
    assert_eq!(parse_scene(&text).unwrap(), cfg);
    println!("{text}");
    if cfg.dimension == 2 {
        let s = build_state::<2>(&cfg).unwrap();
        println!(
            "# {} granules, {} fluid particles, {} solid shapes",
            s.granules.len(),
            s.fluid.len(),
            s.solids.shapes.len()
        );
    }
}
