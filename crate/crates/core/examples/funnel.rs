//! Sand in a funnel: dry sand drains, sand at r_max arches over the outlet,
//! and flooding the funnel with water releases it again.
//!
//! cargo run --release --example funnel

use gic::scene::{add_water, build_state, parse_scene, SceneConfig};
use gic::sim::{run, RunObserver, SimState};

struct Report;

impl RunObserver<2> for Report {
    fn on_frame(&mut self, s: &SimState<2>, _frame: usize) -> Result<(), String> {
        let h = s.grid.h();
        let out = s.granules.iter().filter(|g| g.x[1] < 16.0 * h).count();
        println!(
            "  t = {:.2} s  {out:3}/{} granules below the funnel  {} fluid particles",
            s.t,
            s.granules.len(),
            s.fluid.len()
        );
        Ok(())
    }
}

fn scene(name: &str) -> SceneConfig {
    let path = format!("{}/scenes/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_scene(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn main() {
    println!("dry");
    let cfg = scene("funnel_dry.cfg");
    let mut s = build_state::<2>(&cfg).unwrap();
    run(&mut s, cfg.end_time, 2.0, &mut Report).unwrap();

    println!("wet at r_max");
    let cfg = scene("funnel_wet.cfg");
    let mut s = build_state::<2>(&cfg).unwrap();
    run(&mut s, cfg.end_time, 2.0, &mut Report).unwrap();

    println!("re-flooded");
    let flood = parse_scene("[domain]\ncells = 64 64\n[blocks]\nwater = box 20 24 44 56\n").unwrap();
    add_water(&mut s, &cfg, &flood.blocks[0]);
    run(&mut s, cfg.end_time + 1.0, 4.0, &mut Report).unwrap();
}
