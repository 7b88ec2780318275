use super::{clamp_ratio, ProjectionLimits};
use crate::grid::{CellKind, Geometry, MacGrid};
use crate::math::for_each_index;

pub(crate) const NONE: usize = usize::MAX;

/// Discrete `-div(alpha' grad q)` over the fluid cells, scaled by `h^2`.
///
/// Row `r` reads `sum_faces beta (q_r - q_nb) = -alpha'_r h^2 rhs_r`, where
/// `beta = (alpha'_a + alpha'_b) / 2` on each face. Air neighbours are Dirichlet
/// (`q = 0`), solid faces are dropped (Neumann). The unknown `q` is the pressure
/// scaled by `dt / rho_f` for the velocity solve and `dt^2 / rho_f` for the
/// density solve.
#[derive(Clone, Debug)]
pub struct PoissonSystem<const D: usize> {
    pub geom: Geometry<D>,
    /// Row of each cell, `usize::MAX` for non-fluid cells.
    pub row_of: Vec<usize>,
    /// Cell of each row, in increasing cell order.
    pub cells: Vec<usize>,
    pub diag: Vec<f64>,
    /// `plus[r][a]`: coefficient to the fluid neighbour in `+a` (0 if none).
    pub plus: Vec<[f64; D]>,
    pub plus_row: Vec<[usize; D]>,
    pub minus_row: Vec<[usize; D]>,
    /// `alpha'` per row.
    pub alpha: Vec<f64>,
    /// Right-hand side of the unscaled equation `(1/alpha') div(alpha' grad q) = rhs`.
    pub rhs: Vec<f64>,
    /// Rows that touch at least one air cell.
    pub dirichlet: Vec<bool>,
}

impl<const D: usize> PoissonSystem<D> {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for r in 0..self.len() {
            let mut s = self.diag[r] * x[r];
            for a in 0..D {
                let p = self.plus_row[r][a];
                if p != NONE {
                    s -= self.plus[r][a] * x[p];
                }
                let m = self.minus_row[r][a];
                if m != NONE {
                    s -= self.plus[m][a] * x[m];
                }
            }
            y[r] = s;
        }
    }

    /// Off-diagonal entry `A[r][s]` (zero when not neighbours).
    pub fn entry(&self, r: usize, s: usize) -> f64 {
        if r == s {
            return self.diag[r];
        }
        for a in 0..D {
            if self.plus_row[r][a] == s {
                return -self.plus[r][a];
            }
            if self.minus_row[r][a] == s {
                return -self.plus[s][a];
            }
        }
        0.0
    }

    /// Scaled right-hand side `b = -alpha' h^2 rhs`.
    pub fn scaled_rhs(&self) -> Vec<f64> {
        let h2 = self.geom.h() * self.geom.h();
        self.rhs.iter().zip(self.alpha.iter()).map(|(r, a)| -a * h2 * r).collect()
    }
}

/// Builds the operator from `cell_kind` and `alpha_f_target`; the RHS is zero.
pub fn assemble_operator<const D: usize>(grid: &MacGrid<D>) -> PoissonSystem<D> {
    let geom = grid.geom.clone();
    let mut row_of = vec![NONE; geom.cell_count()];
    let mut cells = Vec::new();
    for (i, &k) in grid.cell_kind.iter().enumerate() {
        if k == CellKind::Fluid {
            row_of[i] = cells.len();
            cells.push(i);
        }
    }
    let n = cells.len();
    let mut sys = PoissonSystem {
        row_of,
        diag: vec![0.0; n],
        plus: vec![[0.0; D]; n],
        plus_row: vec![[NONE; D]; n],
        minus_row: vec![[NONE; D]; n],
        alpha: cells.iter().map(|&c| grid.alpha_f_target[c]).collect(),
        rhs: vec![0.0; n],
        dirichlet: vec![false; n],
        cells,
        geom: geom.clone(),
    };
    for r in 0..n {
        let c = geom.cell_coords(sys.cells[r]);
        let ac = sys.alpha[r];
        for a in 0..D {
            for dir in [-1, 1] {
                let Some(nb) = geom.neighbor(c, a, dir) else { continue };
                let ni = geom.cell_index(nb);
                match grid.cell_kind[ni] {
                    CellKind::Solid => {}
                    CellKind::Air => {
                        sys.diag[r] += 0.5 * (ac + grid.alpha_f_target[ni]);
                        sys.dirichlet[r] = true;
                    }
                    CellKind::Fluid => {
                        let beta = 0.5 * (ac + grid.alpha_f_target[ni]);
                        sys.diag[r] += beta;
                        let s = sys.row_of[ni];
                        if dir > 0 {
                            sys.plus[r][a] = beta;
                            sys.plus_row[r][a] = s;
                        } else {
                            sys.minus_row[r][a] = s;
                        }
                    }
                }
            }
        }
    }
    sys
}

/// `rhs = (1/alpha') div(alpha' u*)` from the current face velocities; solid faces carry zero.
pub fn assemble_velocity_ppe<const D: usize>(grid: &MacGrid<D>) -> PoissonSystem<D> {
    let mut sys = assemble_operator(grid);
    for r in 0..sys.len() {
        let c = sys.geom.cell_coords(sys.cells[r]);
        sys.rhs[r] = weighted_divergence_at(grid, c) / sys.alpha[r];
    }
    sys
}

/// `rhs = 1 - clamp(alpha* / alpha')`. Cells with any non-fluid cell in their
/// `3^D` neighbourhood use `limits.boundary_ratio_lo` as the lower clamp.
pub fn assemble_density_ppe<const D: usize>(
    grid: &MacGrid<D>,
    alpha_star: &[f64],
    limits: &ProjectionLimits,
) -> PoissonSystem<D> {
    let mut sys = assemble_operator(grid);
    for r in 0..sys.len() {
        let ci = sys.cells[r];
        let lo = if touches_non_fluid(grid, ci) { limits.boundary_ratio_lo } else { limits.ratio_lo };
        sys.rhs[r] = 1.0 - clamp_ratio(alpha_star[ci], sys.alpha[r], lo, limits.ratio_hi);
    }
    sys
}

fn touches_non_fluid<const D: usize>(grid: &MacGrid<D>, ci: usize) -> bool {
    let geom = &grid.geom;
    let c = geom.cell_coords(ci);
    let dims = geom.dims();
    let mut found = false;
    for_each_index([3; D], |off| {
        if found {
            return;
        }
        let mut nb = [0; D];
        for a in 0..D {
            let v = c[a] as isize + off[a] as isize - 1;
            if v < 0 || v >= dims[a] as isize {
                found = true;
                return;
            }
            nb[a] = v as usize;
        }
        if grid.cell_kind[geom.cell_index(nb)] != CellKind::Fluid {
            found = true;
        }
    });
    found
}

/// `div(alpha' u)` at cell `c` with `alpha'` averaged onto faces and zero flux through solid faces.
pub(crate) fn weighted_divergence_at<const D: usize>(grid: &MacGrid<D>, c: [usize; D]) -> f64 {
    let geom = &grid.geom;
    let ci = geom.cell_index(c);
    let ac = grid.alpha_f_target[ci];
    let mut div = 0.0;
    for a in 0..D {
        for (dir, sign) in [(-1, -1.0), (1, 1.0)] {
            let mut f = c;
            if dir > 0 {
                f[a] += 1;
            }
            let fi = geom.face_index(a, f);
            let beta = match geom.neighbor(c, a, dir) {
                None => continue,
                Some(nb) => {
                    let ni = geom.cell_index(nb);
                    if grid.cell_kind[ni] == CellKind::Solid || grid.cell_kind[ci] == CellKind::Solid {
                        continue;
                    }
                    0.5 * (ac + grid.alpha_f_target[ni])
                }
            };
            div += sign * beta * grid.face_vel[a][fi];
        }
    }
    div / geom.h()
}
