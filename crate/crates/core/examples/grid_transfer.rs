//! Particle-to-grid and grid-to-particle transfers on a MAC grid.

use gic::dem::Granule;
use gic::grid::{
    g2p_flip, p2g_velocity, rasterize_fluid_fraction, rasterize_sand_fraction, FluidParticle, Geometry, MacGrid,
};
use gic::Vector;

fn main() {
    type V2 = Vector<2>;
    let geom = Geometry::<2>::new([8, 8], 0.1).unwrap();
    let mut grid = MacGrid::new(geom.clone());
    let mut fluid = Vec::new();
    for i in 0..8 {
        for j in 0..4 {
            for (a, b) in [(0.25, 0.25), (0.75, 0.25), (0.25, 0.75), (0.75, 0.75)] {
                let x = V2::new((i as f64 + a) * 0.1, (j as f64 + b) * 0.1);
                fluid.push(FluidParticle::new(x, V2::new(x[1], 0.0)));
            }
        }
    }
    grid.classify_cells(&fluid);
    rasterize_fluid_fraction(&mut grid, &fluid, 4.0);
    let sand = [Granule::new(V2::new(0.4, 0.2), V2::zeros(), 0.03, 2500.0)];
    rasterize_sand_fraction(&mut grid, &sand);
    p2g_velocity(&mut grid, &fluid);
    println!("row  alpha_f  alpha_s   u on the face left of column 4");
    for j in 0..5 {
        let c = geom.cell_index([4, j]);
        println!(
            "{j:3}  {:.3}    {:.4}    {:.4}",
            grid.alpha_f[c],
            grid.alpha_s[c],
            grid.face_vel[0][geom.face_index(0, [4, j])]
        );
    }
    grid.face_vel_old = grid.face_vel.clone();
    grid.face_vel[0].iter_mut().for_each(|u| *u += 1.0);
    g2p_flip(&grid, &mut fluid, 0.97);
    println!("after a uniform +1 m/s grid kick: particle 5 velocity {:?}", fluid[5].v.as_slice());
}
