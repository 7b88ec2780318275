//! 60,000 fluid particles packed into one cell among fixed sand spread out
//! under repeated density projections.
//!
//! cargo run --release --example density_recovery [-- particles_per_cell]

use gic::grid::{rasterize_sand_fraction, FluidParticle};
use gic::projection::{compute_target_fraction, density_projection};
use gic::scene::{build_state, parse_scene};
use gic::Vector;
use rand::{Rng, SeedableRng};

fn main() {
    let n: f64 = std::env::args().nth(1).map_or(256.0, |a| a.parse().expect("particles per cell"));
    let text = "[domain]\ncells = 64 64\nwalls = 1\n[blocks]\nsand = box 16 16 48 48 fixed\n";
    let mut s = build_state::<2>(&parse_scene(text).unwrap()).unwrap();
    let h = s.grid.h();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
    s.fluid = (0..60_000)
        .map(|_| {
            FluidParticle::at(Vector::<2>::new((32.0 + rng.random::<f64>()) * h, (32.0 + rng.random::<f64>()) * h))
        })
        .collect();
    rasterize_sand_fraction(&mut s.grid, &s.granules);
    compute_target_fraction(&mut s.grid, &s.params.limits, 0.0);
    let geom = s.grid.geom.clone();
    println!("{} fixed granules, n = {n}, threshold 2n = {}", s.granules.len(), 2.0 * n);
    for k in 1..=30 {
        let stats = density_projection(&mut s.grid, &mut s.fluid, &s.solids, &s.params.limits, &s.params.solver, n);
        let mut counts = vec![0usize; geom.cell_count()];
        for p in &s.fluid {
            counts[geom.cell_index(geom.cell_of(&p.x))] += 1;
        }
        let occupied = counts.iter().filter(|&&c| c > 0).count();
        println!(
            "step {k:2}  max per cell {:6}  occupied cells {occupied:5}  solver iterations {}",
            counts.iter().max().unwrap(),
            stats.iterations
        );
    }
}
