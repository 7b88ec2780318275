use rayon::prelude::*;

use super::events::apply_body_forces;
use super::{SimError, SimState};
use crate::coupling::{apply_exchange_force, granule_face_velocity, FluidSnapshot};
use crate::dem::{rayleigh_dt, sand_substep_loop, SandEnv};
use crate::grid::{
    extrapolate_faces, g2p_flip, p2g_velocity, rasterize_fluid_fraction, rasterize_sand_fraction, sample_face_vector,
    CellKind, FluidParticle, MacGrid,
};
use crate::math::Vector;
use crate::projection::{compute_target_fraction, density_projection, velocity_projection, SolveStats};
use crate::wetting::{wet_granules, WettingReport};

/// The pieces of a fluid step size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DtInfo {
    pub dt: f64,
    /// Smallest Rayleigh step over all granules, `None` without granules.
    pub rayleigh: Option<f64>,
    /// `h / max speed`, infinite when nothing moves.
    pub cfl: f64,
}

/// `min(h / max speed, 1000 dt')`, further capped by `max_dt`.
pub fn compute_fluid_dt<const D: usize>(state: &SimState<D>) -> DtInfo {
    let p = &state.params;
    let rayleigh = state.granules.iter().map(|g| rayleigh_dt(g, &p.contact, p.rho_f)).reduce(f64::min);
    let speed = state.max_speed();
    let cfl = if speed > 0.0 { state.grid.h() / speed } else { f64::INFINITY };
    let mut dt = cfl;
    if let Some(r) = rayleigh {
        dt = dt.min(1000.0 * r);
    }
    if let Some(m) = p.max_dt {
        dt = dt.min(m);
    }
    DtInfo { dt, rayleigh, cfl }
}

/// What one fluid step did.
#[derive(Clone, Debug, PartialEq)]
pub struct StepReport<const D: usize> {
    pub step: u64,
    /// Time at the end of the step.
    pub t: f64,
    pub dt: f64,
    pub dt_rayleigh: Option<f64>,
    pub substeps: usize,
    pub density: Option<SolveStats>,
    pub velocity: Option<SolveStats>,
    pub wetting: WettingReport<D>,
    /// Momentum the fluid handed to the granules during the substeps.
    pub fluid_impulse: Vector<D>,
    /// Momentum the granules handed back to the grid.
    pub deposited: Vector<D>,
    /// Exchange momentum dropped by the overshoot bound.
    pub clipped: Vector<D>,
}

/// Advances one step with the size from [`compute_fluid_dt`].
pub fn step<const D: usize>(state: &mut SimState<D>) -> Result<StepReport<D>, SimError> {
    let info = compute_fluid_dt(state);
    step_with_dt(state, info.dt)
}

/// Moves fluid particles through the face velocity field with the RK2 midpoint rule.
pub fn advect_fluid<const D: usize>(grid: &MacGrid<D>, fluid: &mut [FluidParticle<D>], dt: f64) {
    let geom = &grid.geom;
    fluid.par_iter_mut().for_each(|p| {
        let v1 = sample_face_vector(geom, &grid.face_vel, &p.x);
        let mut mid = p.x + v1 * (0.5 * dt);
        geom.clamp_to_domain(&mut mid);
        let v2 = sample_face_vector(geom, &grid.face_vel, &mid);
        p.x += v2 * dt;
        geom.clamp_to_domain(&mut p.x);
    });
}

/// Advances one step of exactly `dt` seconds.
///
/// Order: granule substeps against the fluid frozen at `t`, target fraction
/// from the new sand, fluid advection, density projection, P2G, body and
/// exchange forces, velocity projection, G2P and finally wetting.
pub fn step_with_dt<const D: usize>(state: &mut SimState<D>, dt: f64) -> Result<StepReport<D>, SimError> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(SimError::BadTimeStep(dt));
    }
    let rayleigh = compute_fluid_dt(state).rayleigh;
    let mut report = StepReport {
        step: state.step_index,
        t: state.t,
        dt,
        dt_rayleigh: rayleigh,
        substeps: 0,
        density: None,
        velocity: None,
        wetting: WettingReport::default(),
        fluid_impulse: Vector::<D>::zeros(),
        deposited: Vector::<D>::zeros(),
        clipped: Vector::<D>::zeros(),
    };
    let SimState { grid, granules, fluid, solids, params, .. } = state;

    if let Some(dt_sub) = rayleigh {
        let snapshot = (!fluid.is_empty()).then(|| FluidSnapshot::from_grid(grid, state.dt_prev));
        let env = SandEnv {
            geom: &grid.geom,
            fluid: snapshot.as_ref(),
            solids,
            contact: &params.contact,
            coupling: &params.coupling,
            rho_f: params.rho_f,
            gravity: params.gravity,
        };
        let stats = sand_substep_loop(granules, &env, dt, dt_sub, &mut grid.exchange_force);
        report.substeps = stats.substeps;
        report.fluid_impulse = stats.fluid_impulse;
    }

    rasterize_sand_fraction(grid, granules);
    compute_target_fraction(grid, &params.limits, params.r_max());

    if fluid.is_empty() {
        for a in 0..D {
            grid.face_vel[a].iter_mut().for_each(|v| *v = 0.0);
            grid.face_vel_old[a].iter_mut().for_each(|v| *v = 0.0);
        }
        grid.classify_cells(fluid);
        rasterize_fluid_fraction(grid, fluid, params.particles_per_cell);
    } else {
        advect_fluid(grid, fluid, dt);
        report.density =
            Some(density_projection(grid, fluid, solids, &params.limits, &params.solver, params.particles_per_cell));
        rasterize_fluid_fraction(grid, fluid, params.particles_per_cell);
        p2g_velocity(grid, fluid);
        grid.face_vel_old = grid.face_vel.clone();
        apply_body_forces(grid, &params.gravity, &params.events, state.t, dt);
        let sand_velocity = granule_face_velocity(&grid.geom, granules, params.rho_f);
        let exchange = apply_exchange_force(grid, dt, params.rho_f, params.exchange_alpha_floor, Some(&sand_velocity));
        report.deposited = exchange.deposited;
        report.clipped = exchange.clipped;
        report.velocity = Some(velocity_projection(grid, dt, params.rho_f, &params.solver));
        extrapolate_air_faces(grid, params.extrapolation_layers);
        g2p_flip(grid, fluid, params.flip_blend);
    }
    for a in 0..D {
        grid.exchange_force[a].iter_mut().for_each(|f| *f = 0.0);
    }

    let particle_volume = grid.cell_volume() / params.particles_per_cell;
    report.wetting = wet_granules(
        &grid.geom,
        granules,
        fluid,
        params.r_max(),
        particle_volume,
        params.rho_f,
        params.seed,
        state.step_index,
    );

    state.t += dt;
    state.step_index += 1;
    state.dt_prev = dt;
    report.t = state.t;
    if let Some(what) = state.find_non_finite() {
        return Err(SimError::NonFinite { what, step: report.step, t: state.t });
    }
    for s in [report.density, report.velocity].into_iter().flatten() {
        if !s.converged {
            log::warn!("step {}: solve stopped at residual {:.3e}", report.step, s.residual);
        }
    }
    log::debug!(
        "step {} t={:.6} dt={:.3e} dt'={:.3e} N={} density_it={} velocity_it={} absorbed={}",
        report.step,
        report.t,
        dt,
        rayleigh.unwrap_or(f64::NAN),
        report.substeps,
        report.density.map_or(0, |s| s.iterations),
        report.velocity.map_or(0, |s| s.iterations),
        report.wetting.removed,
    );
    Ok(report)
}

/// Fills faces with no fluid or solid cell on either side from their neighbours.
fn extrapolate_air_faces<const D: usize>(grid: &mut MacGrid<D>, layers: usize) {
    let geom = grid.geom.clone();
    let known: [Vec<bool>; D] = std::array::from_fn(|axis| {
        (0..geom.face_count(axis))
            .map(|i| {
                let (a, b) = grid.face_sides(axis, geom.face_coords(axis, i));
                a != CellKind::Air || b != CellKind::Air
            })
            .collect()
    });
    extrapolate_faces(&geom, &mut grid.face_vel, &known, layers);
}

/// Totals of a whole run.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RunSummary {
    pub steps: u64,
    pub frames: usize,
    pub unconverged_solves: usize,
}

/// Callbacks of [`run`].
pub trait RunObserver<const D: usize> {
    /// Called at `t = 0` and at every frame time, including the end time.
    fn on_frame(&mut self, state: &SimState<D>, frame: usize) -> Result<(), String>;

    fn on_step(&mut self, _state: &SimState<D>, _report: &StepReport<D>) {}
}

/// Steps until `end_time`, landing exactly on every frame time `t0 + k / frame_rate`
/// and on `end_time` itself.
pub fn run<const D: usize>(
    state: &mut SimState<D>,
    end_time: f64,
    frame_rate: f64,
    observer: &mut impl RunObserver<D>,
) -> Result<RunSummary, SimError> {
    if end_time < state.t {
        return Err(SimError::EndBeforeStart { end: end_time, t: state.t });
    }
    let mut summary = RunSummary::default();
    let t0 = state.t;
    let mut targets = Vec::new();
    let n = ((end_time - t0) * frame_rate + 1e-9).floor() as usize;
    for k in 1..=n {
        targets.push(t0 + k as f64 / frame_rate);
    }
    let eps = 1e-9 * end_time.abs().max(1.0) / frame_rate.max(1.0);
    if targets.last().is_none_or(|&t| t < end_time - eps) && end_time > t0 {
        targets.push(end_time);
    }

    observer.on_frame(state, 0).map_err(SimError::Output)?;
    summary.frames = 1;
    for target in targets {
        while state.t < target {
            let mut dt = compute_fluid_dt(state).dt;
            let land = state.t + dt >= target - eps;
            if land {
                dt = target - state.t;
            }
            let report = step_with_dt(state, dt)?;
            if land {
                state.t = target;
            }
            summary.steps += 1;
            summary.unconverged_solves +=
                [report.density, report.velocity].iter().flatten().filter(|s| !s.converged).count();
            observer.on_step(state, &report);
        }
        observer.on_frame(state, summary.frames).map_err(SimError::Output)?;
        summary.frames += 1;
    }
    Ok(summary)
}
