use crate::grid::{CellKind, MacGrid};

/// Clamp values used by both projections.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectionLimits {
    pub ratio_lo: f64,
    pub ratio_hi: f64,
    /// Lower ratio clamp for fluid cells that touch air or solid. 1.0 means such
    /// cells are only ever decompressed, never pulled together.
    pub boundary_ratio_lo: f64,
    /// Largest particle correction, in cell widths.
    pub max_correction: f64,
    pub alpha_s_cap_2d: f64,
    pub alpha_s_cap_3d: f64,
    /// Smallest target fluid fraction, used when the wet packing cap exceeds 1.
    pub min_target: f64,
}

impl Default for ProjectionLimits {
    fn default() -> Self {
        Self {
            ratio_lo: 0.5,
            ratio_hi: 1.5,
            boundary_ratio_lo: 1.0,
            max_correction: 1.0,
            alpha_s_cap_2d: 0.907,
            alpha_s_cap_3d: 0.740,
            min_target: 0.01,
        }
    }
}

impl ProjectionLimits {
    /// Densest packing, scaled up by absorbed water, kept below `1 - min_target`.
    pub fn alpha_s_cap<const D: usize>(&self, r_max: f64) -> f64 {
        let cap = if D == 2 { self.alpha_s_cap_2d } else { self.alpha_s_cap_3d };
        (cap * (1.0 + r_max)).min(1.0 - self.min_target)
    }
}

/// `1 - min(alpha_s, cap)`.
pub fn target_fraction(alpha_s: f64, cap: f64) -> f64 {
    1.0 - alpha_s.min(cap)
}

/// Clamps `alpha_star / alpha_target` into `[lo, hi]`.
pub fn clamp_ratio(alpha_star: f64, alpha_target: f64, lo: f64, hi: f64) -> f64 {
    (alpha_star / alpha_target).clamp(lo, hi)
}

/// Fills `alpha_f_target` on every non-solid cell from `alpha_s`.
pub fn compute_target_fraction<const D: usize>(grid: &mut MacGrid<D>, limits: &ProjectionLimits, r_max: f64) {
    let cap = limits.alpha_s_cap::<D>(r_max);
    for ((t, &a), &k) in grid.alpha_f_target.iter_mut().zip(grid.alpha_s.iter()).zip(grid.cell_kind.iter()) {
        *t = if k == CellKind::Solid { 1.0 } else { target_fraction(a, cap) };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Geometry;

    #[test]
    fn examples() {
        let l = ProjectionLimits::default();
        assert_eq!(target_fraction(0.0, l.alpha_s_cap::<2>(0.0)), 1.0);
        assert!((target_fraction(0.95, l.alpha_s_cap::<2>(0.0)) - 0.093).abs() < 1e-12);
        assert!((target_fraction(1.2, l.alpha_s_cap::<3>(0.3)) - 0.038).abs() < 1e-12);
    }

    #[test]
    fn ratio_clamp() {
        assert_eq!(1.0 - clamp_ratio(2.0, 1.0, 0.5, 1.5), -0.5);
        assert_eq!(1.0 - clamp_ratio(0.1, 1.0, 0.5, 1.5), 0.5);
        assert_eq!(clamp_ratio(0.9, 1.0, 0.5, 1.5), 0.9);
    }

    #[test]
    fn idempotent_on_grid() {
        let mut grid = MacGrid::new(Geometry::<2>::new([4, 4], 1.0).unwrap());
        for (i, a) in grid.alpha_s.iter_mut().enumerate() {
            *a = i as f64 * 0.09;
        }
        let l = ProjectionLimits::default();
        compute_target_fraction(&mut grid, &l, 0.2);
        let once = grid.alpha_f_target.clone();
        compute_target_fraction(&mut grid, &l, 0.2);
        assert_eq!(once, grid.alpha_f_target);
        assert!(once.iter().all(|&t| t >= l.min_target - 1e-15));
        assert!((l.alpha_s_cap::<2>(0.05) - 0.907 * 1.05).abs() < 1e-15);
    }
}
