use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, Subcommand};

use super::{build_state, parse_scene, volume_report, write_frame, write_frame_csv, SceneConfig, VolumeCsv};
use crate::sim::{run, RunObserver, SimError, SimState, StepReport};

#[derive(Debug, Parser)]
#[command(name = "gic", about = "Granule-in-cell sand and water simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scene and write frames, volumes.csv and run.log.
    Run {
        scene: PathBuf,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Overrides the scene seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of frames to write, including the initial one.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        frames: Option<u64>,
        /// Also store alpha_s, alpha_f and pressure in every frame.
        #[arg(long)]
        grid_fields: bool,
        /// Overrides the pressure solver tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Also write a CSV copy of every frame.
        #[arg(long)]
        csv: bool,
    },
    /// Parse and check a scene without simulating it.
    Validate { scene: PathBuf },
}

/// Options of one `gic run`.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub out: PathBuf,
    pub frames: Option<u64>,
    pub grid_fields: bool,
    pub csv: bool,
}

/// Entry point of the `gic` binary. Returns the process exit code: 0 on
/// success, 1 on scene, output or simulation failure, 2 on bad arguments.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let text = e.render().to_string();
            return usage_error(text.trim_end());
        }
        Err(e) => {
            let _ = e.print();
            return 0;
        }
    };
    match cli.command {
        Command::Validate { scene } => match load(&scene) {
            Ok(cfg) => {
                println!(
                    "{}: ok ({}D, {} cells, {} blocks, {} events)",
                    scene.display(),
                    cfg.dimension,
                    cfg.cells.iter().map(|n| n.to_string()).collect::<Vec<_>>().join("x"),
                    cfg.blocks.len(),
                    cfg.events.len()
                );
                0
            }
            Err(msg) => {
                eprintln!("{msg}");
                1
            }
        },
        Command::Run { scene, out, seed, frames, grid_fields, tol, csv } => {
            let mut cfg = match load(&scene) {
                Ok(cfg) => cfg,
                Err(msg) => {
                    eprintln!("{msg}");
                    return 1;
                }
            };
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(tol) = tol {
                if !(tol > 0.0) {
                    return usage_error("error: --tol must be positive");
                }
                cfg.solver_tol = tol;
            }
            let opts = RunOptions { out, frames, grid_fields, csv };
            match run_scene(&cfg, &opts) {
                Ok(summary) => {
                    println!("{summary}");
                    0
                }
                Err(msg) => {
                    eprintln!("{msg}");
                    1
                }
            }
        }
    }
}

/// Prints `msg` and the usage text to stderr and returns exit code 2.
fn usage_error(msg: &str) -> i32 {
    eprintln!("{msg}");
    if !msg.contains("Usage:") {
        eprintln!("\n{}", Cli::command().render_usage());
    }
    2
}

fn load(path: &Path) -> Result<SceneConfig, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_scene(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Runs a parsed scene into `opts.out`. Returns a one-line summary.
pub fn run_scene(cfg: &SceneConfig, opts: &RunOptions) -> Result<String, String> {
    match cfg.dimension {
        2 => run_dim::<2>(cfg, opts),
        3 => run_dim::<3>(cfg, opts),
        d => Err(format!("unsupported dimension {d}")),
    }
}

struct Output {
    dir: PathBuf,
    grid_fields: bool,
    csv: bool,
    volumes: VolumeCsv<BufWriter<File>>,
    log: BufWriter<File>,
    error: Option<String>,
}

impl Output {
    fn record(&mut self, r: std::io::Result<impl Sized>) {
        if let Err(e) = r {
            self.error.get_or_insert_with(|| e.to_string());
        }
    }
}

impl<const D: usize> RunObserver<D> for Output {
    fn on_frame(&mut self, state: &SimState<D>, frame: usize) -> Result<(), String> {
        let path = self.dir.join(format!("frame_{frame:05}.gicf"));
        write_frame(state, &path, self.grid_fields).map_err(|e| format!("{}: {e}", path.display()))?;
        if self.csv {
            let path = self.dir.join(format!("frame_{frame:05}.csv"));
            write_frame_csv(state, &path).map_err(|e| format!("{}: {e}", path.display()))?;
        }
        let r = writeln!(self.log, "frame {frame} t={:?} step={}", state.t, state.step_index);
        self.record(r);
        self.error.clone().map_or(Ok(()), Err)
    }

    fn on_step(&mut self, state: &SimState<D>, report: &StepReport<D>) {
        let v = volume_report(state);
        let line = format!(
            "step {} t={:?} dt={:.4e} dt'={} substeps={} density_iters={} velocity_iters={} unconverged={} absorbed={} refunded={} volume={:.6e}",
            report.step,
            report.t,
            report.dt,
            report.dt_rayleigh.map_or("-".to_string(), |d| format!("{d:.4e}")),
            report.substeps,
            report.density.map_or(0, |s| s.iterations),
            report.velocity.map_or(0, |s| s.iterations),
            [report.density, report.velocity].iter().flatten().filter(|s| !s.converged).count(),
            report.wetting.removed,
            report.wetting.refunded,
            v.total,
        );
        let r = writeln!(self.log, "{line}");
        self.record(r);
        let r = self.volumes.push(&v);
        self.record(r);
    }
}

fn run_dim<const D: usize>(cfg: &SceneConfig, opts: &RunOptions) -> Result<String, String> {
    let mut state = build_state::<D>(cfg).map_err(|e| e.to_string())?;
    fs::create_dir_all(&opts.out).map_err(|e| format!("{}: {e}", opts.out.display()))?;
    let create = |name: &str| {
        let path = opts.out.join(name);
        File::create(&path).map(BufWriter::new).map_err(|e| format!("{}: {e}", path.display()))
    };
    let mut out = Output {
        dir: opts.out.clone(),
        grid_fields: opts.grid_fields,
        csv: opts.csv,
        volumes: VolumeCsv::new(create("volumes.csv")?).map_err(|e| e.to_string())?,
        log: create("run.log")?,
        error: None,
    };
    let initial = volume_report(&state);
    out.volumes.push(&initial).map_err(|e| e.to_string())?;
    let _ = writeln!(
        out.log,
        "scene {}D cells={:?} granules={} fluid={} seed={} tol={:e}",
        D,
        cfg.cells,
        state.granules.len(),
        state.fluid.len(),
        cfg.seed,
        cfg.solver_tol
    );
    let mut end = cfg.end_time;
    if let Some(n) = opts.frames {
        end = end.min((n - 1) as f64 / cfg.frame_rate);
    }
    let result = run(&mut state, end, cfg.frame_rate, &mut out);
    let final_report = volume_report(&state);
    let deviation = final_report.deviation_from(&initial);
    let outcome = match result {
        Ok(summary) => {
            let line = format!(
                "{} frames, {} steps, {} unconverged solves, volume deviation {:.3e}",
                summary.frames, summary.steps, summary.unconverged_solves, deviation
            );
            let _ = writeln!(out.log, "done: {line}");
            Ok(line)
        }
        Err(SimError::NonFinite { what, step, t }) => {
            let dump = opts.out.join("nan_dump.gicf");
            let _ = write_frame(&state, &dump, true);
            let msg =
                format!("non-finite value in {what} at step {step} (t = {t}); state dumped to {}", dump.display());
            let _ = writeln!(out.log, "abort: {msg}");
            Err(msg)
        }
        Err(e) => {
            let _ = writeln!(out.log, "abort: {e}");
            Err(e.to_string())
        }
    };
    out.volumes.flush().map_err(|e| e.to_string())?;
    out.log.flush().map_err(|e| e.to_string())?;
    if let Some(e) = out.error {
        return Err(e);
    }
    outcome
}
