use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{Block, ForceSpec, Material, SceneConfig, ShapeSpec, Slab};
use super::SceneError;
use crate::coupling::{CouplingParams, MoistureCurve};
use crate::dem::{ContactParams, Granule};
use crate::grid::{FluidParticle, Geometry, MacGrid};
use crate::math::{for_each_index, Vector};
use crate::projection::SolverParams;
use crate::sim::{BodyForce, ForceEvent, SimParams, SimState};
use crate::solid::{Sdf, Shape, SolidSet};

fn vector<const D: usize>(v: &[f64], scale: f64) -> Vector<D> {
    Vector::<D>::from_fn(|a, _| v[a] * scale)
}

fn shape_of<const D: usize>(spec: &ShapeSpec, s: f64) -> Shape<D> {
    match spec {
        ShapeSpec::Box { lo, hi } => Shape::Box { lo: vector(lo, s), hi: vector(hi, s) },
        ShapeSpec::Ball { center, radius } => Shape::Ball { center: vector(center, s), radius: radius * s },
        ShapeSpec::Segment { a, b, radius } => Shape::Capsule { a: vector(a, s), b: vector(b, s), radius: radius * s },
    }
}

fn bounds<const D: usize>(shape: &Shape<D>) -> (Vector<D>, Vector<D>) {
    match shape {
        Shape::Box { lo, hi } => (*lo, *hi),
        Shape::Ball { center, radius } => {
            (center - Vector::<D>::repeat(*radius), center + Vector::<D>::repeat(*radius))
        }
        Shape::Capsule { a, b, radius } => {
            (a.inf(b) - Vector::<D>::repeat(*radius), a.sup(b) + Vector::<D>::repeat(*radius))
        }
    }
}

/// Simulation parameters taken from the scene.
pub fn sim_params<const D: usize>(cfg: &SceneConfig) -> SimParams<D> {
    let s = cfg.unit_scale();
    let events = cfg
        .events
        .iter()
        .map(|e| ForceEvent {
            force: match &e.force {
                ForceSpec::Uniform(a) => BodyForce::Uniform(vector(a, 1.0)),
                ForceSpec::Swirl { magnitude, center } => {
                    BodyForce::Swirl { center: vector(center, s), magnitude: *magnitude }
                }
            },
            start: e.start,
            end: e.end,
        })
        .collect();
    SimParams {
        contact: ContactParams {
            young: cfg.young,
            poisson: cfg.poisson,
            friction_angle: cfg.friction_angle.to_radians(),
            ..ContactParams::default()
        },
        coupling: CouplingParams {
            mu_drag: cfg.mu_drag,
            sigma: cfg.sigma,
            theta: cfg.contact_angle.to_radians(),
            vstar_ratio: cfg.vstar_ratio,
            curve: MoistureCurve { r_max: cfg.r_max, rise: cfg.moisture_rise, fall: cfg.moisture_fall },
        },
        solver: SolverParams { tol: cfg.solver_tol, max_iter: cfg.solver_max_iter },
        rho_f: cfg.rho_f,
        gravity: vector(&cfg.gravity, 1.0),
        flip_blend: cfg.flip_blend,
        particles_per_cell: cfg.particles_per_cell as f64,
        seed: cfg.seed,
        exchange_alpha_floor: cfg.exchange_alpha_floor,
        max_dt: cfg.max_dt,
        events,
        ..SimParams::default()
    }
}

/// Builds the initial state: walls and solid blocks, sand on a lattice, water
/// particles seeded per cell and skipped where they would sit inside a granule
/// or a solid.
pub fn build_state<const D: usize>(cfg: &SceneConfig) -> Result<SimState<D>, SceneError> {
    if cfg.dimension != D {
        return Err(SceneError::Dimension { found: cfg.dimension, expected: D });
    }
    let dims: [usize; D] = std::array::from_fn(|a| cfg.cells[a]);
    let mut geom = Geometry::<D>::new(dims, cfg.h)?;
    if D == 2 {
        let depth = match cfg.slab {
            Slab::Disk => 4.0 * cfg.radius / 3.0,
            Slab::Depth(d) => d,
        };
        geom = geom.with_slab_depth(depth)?;
    }
    let s = cfg.unit_scale();
    let mut solids = if cfg.walls > 0 {
        SolidSet::with_walls(geom.domain_size(), cfg.walls as f64 * cfg.h)
    } else {
        SolidSet::default()
    };
    for b in cfg.blocks.iter().filter(|b| b.material == Material::Solid) {
        solids.push(shape_of(&b.shape, s));
    }

    let mut granules = Vec::new();
    for b in cfg.blocks.iter().filter(|b| b.material == Material::Sand) {
        seed_sand(cfg, b, &solids, &mut granules);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut fluid = Vec::new();
    let lookup = GranuleLookup::new(&geom, &granules);
    for b in cfg.blocks.iter().filter(|b| b.material == Material::Water) {
        seed_water(cfg, &geom, b, &solids, &lookup, &mut rng, &mut fluid);
    }

    let params = sim_params::<D>(cfg);
    Ok(SimState::new(MacGrid::new(geom), solids, granules, fluid, params))
}

/// Seeds a water block into a running state with the same rules as
/// [`build_state`]. Random seeding is keyed on the scene seed and the step index.
pub fn add_water<const D: usize>(state: &mut SimState<D>, cfg: &SceneConfig, block: &Block) -> usize {
    let before = state.fluid.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ state.step_index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let lookup = GranuleLookup::new(&state.grid.geom, &state.granules);
    seed_water(cfg, &state.grid.geom, block, &state.solids, &lookup, &mut rng, &mut state.fluid);
    state.grid.classify_cells(&state.fluid);
    state.fluid.len() - before
}

fn seed_sand<const D: usize>(cfg: &SceneConfig, b: &Block, solids: &SolidSet<D>, out: &mut Vec<Granule<D>>) {
    let shape: Shape<D> = shape_of(&b.shape, cfg.unit_scale());
    let (lo, hi) = bounds(&shape);
    let r = cfg.radius;
    let spacing = cfg.sand_spacing * r;
    // hexagonal rows in 2D, simple cubic in 3D
    let row = if D == 2 { spacing * 3f64.sqrt() / 2.0 } else { spacing };
    let counts: [usize; D] = std::array::from_fn(|a| {
        let step = if a == 0 { spacing } else { row };
        (((hi[a] - lo[a]) / step).floor() as usize) + 1
    });
    let velocity = vector::<D>(&b.velocity, 1.0);
    for_each_index(counts, |k| {
        let mut x = Vector::<D>::zeros();
        for a in 0..D {
            let step = if a == 0 { spacing } else { row };
            x[a] = lo[a] + r + k[a] as f64 * step;
        }
        if D == 2 && k[1] % 2 == 1 {
            x[0] += spacing / 2.0;
        }
        if shape.distance(&x) <= 0.0 && solids.distance(&x) >= r {
            let mut g = Granule::new(x, velocity, r, cfg.rho_s);
            g.moisture = b.moisture;
            g.fixed = b.fixed;
            out.push(g);
        }
    });
}

/// Granules bucketed by cell for point-in-granule queries.
struct GranuleLookup<'a, const D: usize> {
    geom: &'a Geometry<D>,
    buckets: Vec<Vec<usize>>,
    granules: &'a [Granule<D>],
    reach: usize,
}

impl<'a, const D: usize> GranuleLookup<'a, D> {
    fn new(geom: &'a Geometry<D>, granules: &'a [Granule<D>]) -> Self {
        let mut buckets = vec![Vec::new(); geom.cell_count()];
        for (i, g) in granules.iter().enumerate() {
            buckets[geom.cell_index(geom.cell_of(&g.x))].push(i);
        }
        let r_big = granules.iter().map(|g| g.radius).fold(0.0, f64::max);
        Self { geom, buckets, granules, reach: (r_big / geom.h()).ceil() as usize }
    }

    fn covers(&self, x: &Vector<D>) -> bool {
        if self.granules.is_empty() {
            return false;
        }
        let c = self.geom.cell_of(x);
        let dims = self.geom.dims();
        let lo: [usize; D] = std::array::from_fn(|a| c[a].saturating_sub(self.reach));
        let span: [usize; D] = std::array::from_fn(|a| (c[a] + self.reach).min(dims[a] - 1) - lo[a] + 1);
        let mut hit = false;
        for_each_index(span, |o| {
            if hit {
                return;
            }
            let cell: [usize; D] = std::array::from_fn(|a| lo[a] + o[a]);
            hit = self.buckets[self.geom.cell_index(cell)]
                .iter()
                .any(|&i| (self.granules[i].x - x).norm() < self.granules[i].radius);
        });
        hit
    }
}

fn seed_water<const D: usize>(
    cfg: &SceneConfig,
    geom: &Geometry<D>,
    b: &Block,
    solids: &SolidSet<D>,
    lookup: &GranuleLookup<'_, D>,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<FluidParticle<D>>,
) {
    let shape: Shape<D> = shape_of(&b.shape, cfg.unit_scale());
    let (lo, hi) = bounds(&shape);
    let h = geom.h();
    let dims = geom.dims();
    let ppc = cfg.particles_per_cell;
    let side = (ppc as f64).powf(1.0 / D as f64).round() as usize;
    let lattice = side.pow(D as u32) == ppc;
    let velocity = vector::<D>(&b.velocity, 1.0);
    let c_lo: [usize; D] = std::array::from_fn(|a| ((lo[a] / h).floor().max(0.0) as usize).min(dims[a] - 1));
    let span: [usize; D] = std::array::from_fn(|a| ((hi[a] / h).ceil() as usize).min(dims[a]) - c_lo[a]);
    for_each_index(span, |o| {
        let c: [usize; D] = std::array::from_fn(|a| c_lo[a] + o[a]);
        let corner = geom.cell_center(c) - Vector::<D>::repeat(0.5 * h);
        let mut place = |x: Vector<D>| {
            if shape.distance(&x) <= 0.0 && solids.distance(&x) > 0.0 && !lookup.covers(&x) {
                out.push(FluidParticle::new(x, velocity));
            }
        };
        if lattice {
            for_each_index([side; D], |k| {
                let x = corner + Vector::<D>::from_fn(|a, _| (k[a] as f64 + 0.5) * h / side as f64);
                place(x);
            });
        } else {
            for _ in 0..ppc {
                let x = corner + Vector::<D>::from_fn(|_, _| rng.random::<f64>() * h);
                place(x);
            }
        }
    });
}
