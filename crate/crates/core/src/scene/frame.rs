//! Frame files.
//!
//! Layout, all numbers little-endian:
//!
//! ```text
//! magic        4 bytes  "GICF"
//! version      u32      1
//! dimension    u32      D
//! step         u64
//! t            f64
//! cells        u32 x D
//! h            f64
//! granules     u64      record count G
//! fluid        u64      record count F
//! grid fields  u32      field count K
//! granule table   u32 field count, then per field: u8 name length, name, u32 components
//! fluid table     same shape
//! granule records G x (sum of granule components) f64
//! fluid records   F x (sum of fluid components) f64
//! grid fields     K x (u8 name length, name, cell count u64, values f64)
//! ```
//!
//! Granule fields are `x`, `v` (D each), `radius`, `moisture`, `density`,
//! `absorbed_momentum` (D) and `fixed` (0 or 1). Fluid fields are `x` and `v`.
//! The optional grid fields are `alpha_s`, `alpha_f` and `pressure`.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::dem::Granule;
use crate::grid::FluidParticle;
use crate::math::Vector;
use crate::sim::SimState;

pub const MAGIC: &[u8; 4] = b"GICF";
pub const VERSION: u32 = 1;

/// The contents of one frame file.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame<const D: usize> {
    pub step: u64,
    pub t: f64,
    pub cells: [usize; D],
    pub h: f64,
    pub granules: Vec<Granule<D>>,
    pub fluid: Vec<FluidParticle<D>>,
    pub grid_fields: Vec<(String, Vec<f64>)>,
}

impl<const D: usize> Frame<D> {
    pub fn from_state(state: &SimState<D>, grid_fields: bool) -> Self {
        let fields = if grid_fields {
            vec![
                ("alpha_s".to_string(), state.grid.alpha_s.clone()),
                ("alpha_f".to_string(), state.grid.alpha_f.clone()),
                ("pressure".to_string(), state.grid.pressure.clone()),
            ]
        } else {
            Vec::new()
        };
        Self {
            step: state.step_index,
            t: state.t,
            cells: state.grid.geom.dims(),
            h: state.grid.h(),
            granules: state.granules.clone(),
            fluid: state.fluid.clone(),
            grid_fields: fields,
        }
    }
}

fn granule_table(d: usize) -> Vec<(&'static str, usize)> {
    vec![("x", d), ("v", d), ("radius", 1), ("moisture", 1), ("density", 1), ("absorbed_momentum", d), ("fixed", 1)]
}

fn fluid_table(d: usize) -> Vec<(&'static str, usize)> {
    vec![("x", d), ("v", d)]
}

/// Serializes a frame to bytes.
pub fn encode_frame<const D: usize>(frame: &Frame<D>) -> Vec<u8> {
    let mut b = Vec::with_capacity(64 + 8 * (frame.granules.len() * (3 * D + 4) + frame.fluid.len() * 2 * D));
    b.extend_from_slice(MAGIC);
    b.extend_from_slice(&VERSION.to_le_bytes());
    b.extend_from_slice(&(D as u32).to_le_bytes());
    b.extend_from_slice(&frame.step.to_le_bytes());
    b.extend_from_slice(&frame.t.to_le_bytes());
    for &n in &frame.cells {
        b.extend_from_slice(&(n as u32).to_le_bytes());
    }
    b.extend_from_slice(&frame.h.to_le_bytes());
    b.extend_from_slice(&(frame.granules.len() as u64).to_le_bytes());
    b.extend_from_slice(&(frame.fluid.len() as u64).to_le_bytes());
    b.extend_from_slice(&(frame.grid_fields.len() as u32).to_le_bytes());
    for table in [granule_table(D), fluid_table(D)] {
        b.extend_from_slice(&(table.len() as u32).to_le_bytes());
        for (name, n) in table {
            b.push(name.len() as u8);
            b.extend_from_slice(name.as_bytes());
            b.extend_from_slice(&(n as u32).to_le_bytes());
        }
    }
    let put = |b: &mut Vec<u8>, v: f64| b.extend_from_slice(&v.to_le_bytes());
    for g in &frame.granules {
        g.x.iter().chain(g.v.iter()).for_each(|&v| put(&mut b, v));
        put(&mut b, g.radius);
        put(&mut b, g.moisture);
        put(&mut b, g.density);
        g.absorbed_momentum.iter().for_each(|&v| put(&mut b, v));
        put(&mut b, if g.fixed { 1.0 } else { 0.0 });
    }
    for p in &frame.fluid {
        p.x.iter().chain(p.v.iter()).for_each(|&v| put(&mut b, v));
    }
    for (name, values) in &frame.grid_fields {
        b.push(name.len() as u8);
        b.extend_from_slice(name.as_bytes());
        b.extend_from_slice(&(values.len() as u64).to_le_bytes());
        values.iter().for_each(|&v| put(&mut b, v));
    }
    b
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

fn bad(msg: impl Into<String>) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.into())
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> io::Result<&[u8]> {
        let end =
            self.pos.checked_add(n).filter(|&e| e <= self.bytes.len()).ok_or_else(|| bad("frame file is truncated"))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> io::Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> io::Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> io::Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn f64(&mut self) -> io::Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn name(&mut self) -> io::Result<String> {
        let n = self.u8()? as usize;
        String::from_utf8(self.take(n)?.to_vec()).map_err(|_| bad("field name is not UTF-8"))
    }

    fn table(&mut self) -> io::Result<Vec<(String, usize)>> {
        let n = self.u32()? as usize;
        (0..n).map(|_| Ok((self.name()?, self.u32()? as usize))).collect()
    }

    fn vector<const D: usize>(&mut self) -> io::Result<Vector<D>> {
        let mut v = Vector::<D>::zeros();
        for a in 0..D {
            v[a] = self.f64()?;
        }
        Ok(v)
    }
}

/// Parses bytes written by [`encode_frame`].
pub fn decode_frame<const D: usize>(bytes: &[u8]) -> io::Result<Frame<D>> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(bad("not a GICF frame file"));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(bad(format!("unsupported frame version {version}")));
    }
    let dim = r.u32()? as usize;
    if dim != D {
        return Err(bad(format!("frame is {dim}D, expected {D}D")));
    }
    let step = r.u64()?;
    let t = r.f64()?;
    let mut cells = [0usize; D];
    for c in cells.iter_mut() {
        *c = r.u32()? as usize;
    }
    let h = r.f64()?;
    let n_granules = r.u64()? as usize;
    let n_fluid = r.u64()? as usize;
    let n_fields = r.u32()? as usize;
    let gt = r.table()?;
    let ft = r.table()?;
    let expect = |t: Vec<(&str, usize)>| t.into_iter().map(|(n, c)| (n.to_string(), c)).collect::<Vec<_>>();
    if gt != expect(granule_table(D)) || ft != expect(fluid_table(D)) {
        return Err(bad("unexpected record layout"));
    }
    let mut granules = Vec::with_capacity(n_granules.min(bytes.len() / 8));
    for _ in 0..n_granules {
        let x = r.vector()?;
        let v = r.vector()?;
        let radius = r.f64()?;
        let moisture = r.f64()?;
        let density = r.f64()?;
        let mut g = Granule::new(x, v, radius, density);
        g.moisture = moisture;
        g.absorbed_momentum = r.vector()?;
        g.fixed = r.f64()? != 0.0;
        granules.push(g);
    }
    let mut fluid = Vec::with_capacity(n_fluid.min(bytes.len() / 8));
    for _ in 0..n_fluid {
        let x = r.vector()?;
        let v = r.vector()?;
        fluid.push(FluidParticle::new(x, v));
    }
    let mut grid_fields = Vec::new();
    for _ in 0..n_fields {
        let name = r.name()?;
        let n = r.u64()? as usize;
        let values = (0..n).map(|_| r.f64()).collect::<io::Result<Vec<f64>>>()?;
        grid_fields.push((name, values));
    }
    if r.pos != bytes.len() {
        return Err(bad("trailing bytes after frame"));
    }
    Ok(Frame { step, t, cells, h, granules, fluid, grid_fields })
}

/// Writes the state as a frame file.
pub fn write_frame<const D: usize>(state: &SimState<D>, path: &Path, grid_fields: bool) -> io::Result<()> {
    fs::write(path, encode_frame(&Frame::from_state(state, grid_fields)))
}

pub fn read_frame<const D: usize>(path: &Path) -> io::Result<Frame<D>> {
    decode_frame(&fs::read(path)?)
}

/// Plain-text export: one row per particle, `kind,x..,v..,radius,moisture`.
pub fn write_frame_csv<const D: usize>(state: &SimState<D>, path: &Path) -> io::Result<()> {
    let mut out = io::BufWriter::new(fs::File::create(path)?);
    let axes = ["x", "y", "z"];
    let mut header = vec!["kind".to_string()];
    header.extend(axes[..D].iter().map(|a| a.to_string()));
    header.extend(axes[..D].iter().map(|a| format!("v{a}")));
    header.push("radius".into());
    header.push("moisture".into());
    writeln!(out, "{}", header.join(","))?;
    let row = |kind: &str, x: &Vector<D>, v: &Vector<D>, r: f64, m: f64| {
        let mut cols = vec![kind.to_string()];
        cols.extend(x.iter().chain(v.iter()).map(|c| format!("{c:?}")));
        cols.push(format!("{r:?}"));
        cols.push(format!("{m:?}"));
        cols.join(",")
    };
    for g in &state.granules {
        writeln!(out, "{}", row("sand", &g.x, &g.v, g.radius, g.moisture))?;
    }
    for p in &state.fluid {
        writeln!(out, "{}", row("water", &p.x, &p.v, 0.0, 0.0))?;
    }
    out.flush()
}
