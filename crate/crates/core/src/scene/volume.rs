use std::io::{self, Write};

use crate::sim::SimState;

/// Volume accounting of one state (m³).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeReport {
    pub t: f64,
    /// Fluid particle count times the particle volume.
    pub free_water: f64,
    /// `sum r_i V_i` over granules.
    pub absorbed_water: f64,
    /// `sum V_i` over granules.
    pub solid_sand: f64,
    pub total: f64,
}

impl VolumeReport {
    pub const CSV_HEADER: &'static str = "t,free_water,absorbed_water,solid_sand,total";

    pub fn csv_row(&self) -> String {
        format!("{:?},{:?},{:?},{:?},{:?}", self.t, self.free_water, self.absorbed_water, self.solid_sand, self.total)
    }

    /// `(total - reference) / reference`.
    pub fn deviation_from(&self, reference: &VolumeReport) -> f64 {
        (self.total - reference.total) / reference.total
    }
}

pub fn volume_report<const D: usize>(state: &SimState<D>) -> VolumeReport {
    let free_water = state.fluid.len() as f64 * state.particle_volume();
    let absorbed_water = state.granules.iter().map(|g| g.moisture * g.volume()).sum();
    let solid_sand = state.granules.iter().map(|g| g.volume()).sum();
    VolumeReport { t: state.t, free_water, absorbed_water, solid_sand, total: free_water + absorbed_water + solid_sand }
}

/// Appends volume rows to a CSV stream, keeping `t` strictly increasing.
pub struct VolumeCsv<W: Write> {
    out: W,
    last_t: Option<f64>,
}

impl<W: Write> VolumeCsv<W> {
    pub fn new(mut out: W) -> io::Result<Self> {
        writeln!(out, "{}", VolumeReport::CSV_HEADER)?;
        Ok(Self { out, last_t: None })
    }

    /// Writes the row unless its time does not advance past the last one.
    pub fn push(&mut self, report: &VolumeReport) -> io::Result<bool> {
        if self.last_t.is_some_and(|t| report.t <= t) {
            return Ok(false);
        }
        writeln!(self.out, "{}", report.csv_row())?;
        self.last_t = Some(report.t);
        Ok(true)
    }

    pub fn into_inner(self) -> W {
        self.out
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{build_state, parse_scene};

    #[test]
    fn water_only_counts_cells() {
        let s = build_state::<2>(&parse_scene("[domain]\ncells = 10 10\n[blocks]\nwater = box 1 1 4 4\n").unwrap())
            .unwrap();
        let r = volume_report(&s);
        assert!((r.free_water - 9.0 * s.grid.cell_volume()).abs() < 1e-12 * r.free_water);
        assert_eq!(r.absorbed_water, 0.0);
        assert_eq!(r.solid_sand, 0.0);
        assert_eq!(r.total, r.free_water);
    }

    #[test]
    fn sand_volumes() {
        let text = "[domain]\ncells = 20 20\n[materials]\nr_max = 0.3\n[blocks]\nsand = box 2 2 8 8 moisture 0.2\n";
        let s = build_state::<2>(&parse_scene(text).unwrap()).unwrap();
        let r = volume_report(&s);
        let v = crate::math::sphere_volume(3.9e-4);
        assert!((r.solid_sand - s.granules.len() as f64 * v).abs() < 1e-20);
        assert!((r.absorbed_water - 0.2 * r.solid_sand).abs() < 1e-20);
        assert!((r.total - r.free_water - r.absorbed_water - r.solid_sand).abs() == 0.0);
    }

    #[test]
    fn csv_rows_strictly_increase() {
        let mut csv = VolumeCsv::new(Vec::new()).unwrap();
        let mut r = VolumeReport { t: 0.0, free_water: 1.0, absorbed_water: 0.0, solid_sand: 0.5, total: 1.5 };
        assert!(csv.push(&r).unwrap());
        assert!(!csv.push(&r).unwrap());
        r.t = 0.1;
        assert!(csv.push(&r).unwrap());
        let text = String::from_utf8(csv.into_inner()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,free_water,absorbed_water,solid_sand,total");
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[2], "0.1,1.0,0.0,0.5,1.5");
    }
}
