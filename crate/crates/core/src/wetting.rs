//! Absorption of free water into granules.
//!
//! The unsaturated capacity of the granules is spread onto the grid; each cell
//! then removes as many fluid particles as fit into its capacity, and the removed
//! volume and momentum are handed back to the granules in proportion to their
//! share of that capacity. The momentum is not applied at once: it is drained
//! into the granule velocity over the next substep loop.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dem::Granule;
use crate::grid::{scatter_cell, FluidParticle, Geometry, Stencil};
use crate::math::Vector;

/// Per-cell absorbed volume and momentum from one absorption pass.
#[derive(Clone, Debug, PartialEq)]
pub struct AbsorptionLedger<const D: usize> {
    pub deficit: Vec<f64>,
    pub volume: Vec<f64>,
    pub momentum: Vec<Vector<D>>,
    pub removed: usize,
}

/// Totals of one wetting pass, for conservation checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WettingReport<const D: usize> {
    pub removed: usize,
    pub removed_volume: f64,
    pub removed_momentum: Vector<D>,
    pub credited_volume: f64,
    pub credited_momentum: Vector<D>,
    pub refunded: usize,
    pub refunded_volume: f64,
    pub refunded_momentum: Vector<D>,
}

impl<const D: usize> Default for WettingReport<D> {
    fn default() -> Self {
        Self {
            removed: 0,
            removed_volume: 0.0,
            removed_momentum: Vector::<D>::zeros(),
            credited_volume: 0.0,
            credited_momentum: Vector::<D>::zeros(),
            refunded: 0,
            refunded_volume: 0.0,
            refunded_momentum: Vector::<D>::zeros(),
        }
    }
}

/// `deficit(x) = sum_i V_i (r_max - r_i) N(x_i - x)`, a volume per cell.
pub fn project_deficit<const D: usize>(geom: &Geometry<D>, granules: &[Granule<D>], r_max: f64) -> Vec<f64> {
    let mut out = geom.new_cell_field(0.0);
    scatter_cell(geom, &mut out, granules.iter().map(|g| (g.x, g.volume() * (r_max - g.moisture).max(0.0))));
    out
}

fn cell_rng(seed: u64, step: u64, cell: usize) -> ChaCha8Rng {
    let mut z = seed ^ step.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (cell as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

/// Removes `floor(deficit / v_p)` particles from each cell with positive deficit,
/// picked by a shuffle keyed on `(seed, step, cell)`. Cells run in index order.
pub fn absorb_particles<const D: usize>(
    geom: &Geometry<D>,
    deficit: Vec<f64>,
    fluid: &mut Vec<FluidParticle<D>>,
    particle_volume: f64,
    rho_f: f64,
    seed: u64,
    step: u64,
) -> AbsorptionLedger<D> {
    let cells = geom.cell_count();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); cells];
    for (i, p) in fluid.iter().enumerate() {
        let c = geom.cell_index(geom.cell_of(&p.x));
        if deficit[c] >= particle_volume {
            members[c].push(i);
        }
    }
    let mut ledger =
        AbsorptionLedger { volume: vec![0.0; cells], momentum: vec![Vector::<D>::zeros(); cells], removed: 0, deficit };
    let mut remove = vec![false; fluid.len()];
    for c in 0..cells {
        if members[c].is_empty() {
            continue;
        }
        let want = (ledger.deficit[c] / particle_volume).floor() as usize;
        let k = want.min(members[c].len());
        let mut rng = cell_rng(seed, step, c);
        let mut picked: Vec<usize> = sample(&mut rng, members[c].len(), k).into_iter().collect();
        picked.sort_unstable();
        for j in picked {
            let i = members[c][j];
            remove[i] = true;
            ledger.volume[c] += particle_volume;
            ledger.momentum[c] += fluid[i].v * (rho_f * particle_volume);
            ledger.removed += 1;
        }
    }
    let mut k = 0;
    fluid.retain(|_| {
        let keep = !remove[k];
        k += 1;
        keep
    });
    ledger
}

/// Hands each cell's absorbed volume and momentum to the granules by their share of
/// that cell's deficit. Cells whose deficit has no granule left to claim it get
/// their water back as one particle per absorbed particle volume at the cell center.
pub fn distribute_absorption<const D: usize>(
    geom: &Geometry<D>,
    granules: &mut [Granule<D>],
    ledger: &AbsorptionLedger<D>,
    r_max: f64,
    particle_volume: f64,
    rho_f: f64,
    fluid: &mut Vec<FluidParticle<D>>,
) -> WettingReport<D> {
    let mut report = WettingReport::<D> {
        removed: ledger.removed,
        removed_volume: ledger.volume.iter().sum(),
        removed_momentum: ledger.momentum.iter().sum(),
        ..Default::default()
    };
    let weight = project_deficit(geom, granules, r_max);
    for g in granules.iter_mut() {
        let share = g.volume() * (r_max - g.moisture).max(0.0);
        if share == 0.0 {
            continue;
        }
        let mut dv = 0.0;
        let mut dp = Vector::<D>::zeros();
        Stencil::cell(geom, &g.x).for_each(|c, w| {
            if ledger.volume[c] > 0.0 && weight[c] > 0.0 {
                let frac = share * w / weight[c];
                dv += frac * ledger.volume[c];
                dp += ledger.momentum[c] * frac;
            }
        });
        if dv > 0.0 {
            g.moisture = (g.moisture + dv / g.volume()).min(r_max);
            g.absorbed_momentum += dp;
            report.credited_volume += dv;
            report.credited_momentum += dp;
        }
    }
    for c in 0..geom.cell_count() {
        if ledger.volume[c] > 0.0 && !(weight[c] > 0.0) {
            let count = (ledger.volume[c] / particle_volume).round() as usize;
            let v = ledger.momentum[c] / (rho_f * ledger.volume[c]);
            let x = geom.cell_center(geom.cell_coords(c));
            for _ in 0..count {
                fluid.push(FluidParticle::new(x, v));
            }
            report.refunded += count;
            report.refunded_volume += ledger.volume[c];
            report.refunded_momentum += ledger.momentum[c];
        }
    }
    report
}

/// Velocity increment of one substep: `(dt_sub / dt) p_absorb / m`.
pub fn drain_absorbed_momentum<const D: usize>(g: &Granule<D>, dt: f64, dt_sub: f64, rho_f: f64) -> Vector<D> {
    g.absorbed_momentum * (dt_sub / dt / g.mass(rho_f))
}

/// One full wetting pass: deficit, absorption and distribution.
#[allow(clippy::too_many_arguments)]
pub fn wet_granules<const D: usize>(
    geom: &Geometry<D>,
    granules: &mut [Granule<D>],
    fluid: &mut Vec<FluidParticle<D>>,
    r_max: f64,
    particle_volume: f64,
    rho_f: f64,
    seed: u64,
    step: u64,
) -> WettingReport<D> {
    if r_max <= 0.0 || granules.is_empty() || fluid.is_empty() {
        return WettingReport::default();
    }
    let deficit = project_deficit(geom, granules, r_max);
    let ledger = absorb_particles(geom, deficit, fluid, particle_volume, rho_f, seed, step);
    if ledger.removed == 0 {
        return WettingReport::default();
    }
    distribute_absorption(geom, granules, &ledger, r_max, particle_volume, rho_f, fluid)
}
