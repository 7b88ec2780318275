//! Variable-coefficient pressure solve against a manufactured solution on
//! three grid sizes, printing the error and observed order.

use std::f64::consts::PI;

use gic::grid::{CellKind, Geometry, MacGrid};
use gic::projection::{assemble_operator, solve_ppe, SolverParams};
use gic::Vector;

type V2 = Vector<2>;

fn max_error(n: usize) -> (f64, usize) {
    let h = 1.0 / n as f64;
    let geom = Geometry::<2>::new([n, n], h).unwrap();
    let mut grid = MacGrid::new(geom.clone());
    let a = PI / ((n as f64 - 1.0) * h);
    let x0 = 0.5 * h;
    let alpha = |x: &V2| 0.6 + 0.3 * (PI * x[0]).sin() * (PI * x[1]).cos();
    let q = |x: &V2| (a * (x[0] - x0)).sin() * (a * (x[1] - x0)).sin();
    for i in 0..geom.cell_count() {
        let c = geom.cell_coords(i);
        grid.alpha_f_target[i] = alpha(&geom.cell_center(c));
        grid.cell_kind[i] = if c.iter().any(|&k| k == 0 || k == n - 1) { CellKind::Air } else { CellKind::Fluid };
    }
    let mut sys = assemble_operator(&grid);
    for r in 0..sys.len() {
        let x = geom.cell_center(geom.cell_coords(sys.cells[r]));
        let ga = V2::new(
            0.3 * PI * (PI * x[0]).cos() * (PI * x[1]).cos(),
            -0.3 * PI * (PI * x[0]).sin() * (PI * x[1]).sin(),
        );
        let (sx, cx) = (a * (x[0] - x0)).sin_cos();
        let (sy, cy) = (a * (x[1] - x0)).sin_cos();
        let gq = V2::new(a * cx * sy, a * sx * cy);
        sys.rhs[r] = ga.dot(&gq) / alpha(&x) - 2.0 * a * a * q(&x);
    }
    let (sol, stats) = solve_ppe(&sys, &SolverParams { tol: 1e-13, max_iter: 10_000 });
    let err = sys
        .cells
        .iter()
        .zip(&sol)
        .map(|(&c, v)| (v - q(&geom.cell_center(geom.cell_coords(c)))).abs())
        .fold(0.0, f64::max);
    (err, stats.iterations)
}

fn main() {
    let mut prev = None;
    for n in [16, 32, 64, 128] {
        let (err, iters) = max_error(n);
        let order = prev.map_or(String::from("-"), |p: f64| format!("{:.3}", (p / err).log2()));
        println!("n = {n:4}  iterations {iters:4}  max error {err:.3e}  order {order}");
        prev = Some(err);
    }
}
