//! Scene files, initial state construction, frame output, volume accounting
//! and the command line front end.

mod build;
mod cli;
mod config;
mod frame;
mod volume;

pub use build::{add_water, build_state, sim_params};
pub use cli::{cli_main, run_scene, RunOptions};
pub use config::{
    parse_scene, serialize_scene, Block, EventSpec, ForceSpec, Material, SceneConfig, ShapeSpec, Slab, Units,
};
pub use frame::{decode_frame, encode_frame, read_frame, write_frame, write_frame_csv, Frame, MAGIC, VERSION};
pub use volume::{volume_report, VolumeCsv, VolumeReport};

use thiserror::Error;

use crate::grid::GridError;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error("scene is {found}D but a {expected}D state was requested")]
    Dimension { found: usize, expected: usize },
    #[error(transparent)]
    Grid(#[from] GridError),
}
