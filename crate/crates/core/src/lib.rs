//! Granule-in-cell simulation of sand–water mixtures.
//!
//! Sand is modelled as discrete soft-sphere granules (DEM) that are sub-stepped
//! inside each fluid step. Water is a PIC/FLIP fluid on a staggered MAC grid.
//! The two phases share the grid through volume fractions: the granules set a
//! target fluid fraction per cell, and an implicit density projection moves the
//! fluid particles so that sand and water together fill every wet cell exactly.
//!
//! The crate is dimension-generic (`D = 2` or `D = 3`). The main entry points:
//!
//! * [`scene::parse_scene`] and [`scene::build_state`] turn a scene file into a
//!   [`sim::SimState`];
//! * [`sim::step`] advances one fluid step (with its granule substeps) and
//!   [`sim::run`] drives a whole run with frame output;
//! * [`scene::volume_report`] gives the per-frame volume accounting.
//!
//! Lower-level building blocks (contact forces, capillary bridges, Poisson
//! assembly, particle transfers) are public so they can be used and tested on
//! their own.

pub mod coupling;
pub mod dem;
pub mod grid;
pub mod math;
pub mod projection;
pub mod scene;
pub mod sim;
pub mod solid;
pub mod wetting;

pub use math::Vector;
