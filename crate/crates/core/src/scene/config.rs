use std::fmt::Write as _;
use std::str::FromStr;

use super::SceneError;

/// How block coordinates are given.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Units {
    /// Multiples of the cell width `h`.
    Cells,
    Meters,
}

/// Thickness of the simulated slab in 2D.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Slab {
    /// `4 r / 3`, so a disk of radius `r` has the volume of the sphere.
    Disk,
    Depth(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Material {
    Water,
    Sand,
    Solid,
}

impl Material {
    fn name(self) -> &'static str {
        match self {
            Material::Water => "water",
            Material::Sand => "sand",
            Material::Solid => "solid",
        }
    }
}

/// Block geometry in scene units.
#[derive(Clone, Debug, PartialEq)]
pub enum ShapeSpec {
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    /// Segment `a`–`b` thickened by `radius`.
    Segment {
        a: Vec<f64>,
        b: Vec<f64>,
        radius: f64,
    },
}

/// One initial block of water, sand or solid.
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub material: Material,
    pub shape: ShapeSpec,
    /// Initial velocity (m/s).
    pub velocity: Vec<f64>,
    /// Initial moisture of sand granules.
    pub moisture: f64,
    /// Sand granules that never move.
    pub fixed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ForceSpec {
    /// Uniform acceleration (m/s²).
    Uniform(Vec<f64>),
    /// Tangential acceleration of `magnitude` around `center` (scene units).
    Swirl { magnitude: f64, center: Vec<f64> },
}

/// A body force on the water over `[start, end)` seconds.
#[derive(Clone, Debug, PartialEq)]
pub struct EventSpec {
    pub force: ForceSpec,
    pub start: f64,
    pub end: f64,
}

/// A parsed scene file.
#[derive(Clone, Debug, PartialEq)]
pub struct SceneConfig {
    pub dimension: usize,
    pub cells: Vec<usize>,
    /// Cell width (m).
    pub h: f64,
    /// Wall thickness in cells, 0 for an open box.
    pub walls: usize,
    pub slab: Slab,
    pub units: Units,
    /// Gravity (m/s²).
    pub gravity: Vec<f64>,

    pub rho_f: f64,
    pub rho_s: f64,
    pub young: f64,
    pub poisson: f64,
    /// Friction angle (degrees).
    pub friction_angle: f64,
    /// Granule radius (m).
    pub radius: f64,
    pub sigma: f64,
    pub mu_drag: f64,
    /// Contact angle (degrees).
    pub contact_angle: f64,
    pub r_max: f64,
    pub vstar_ratio: f64,
    pub moisture_rise: f64,
    pub moisture_fall: f64,

    pub end_time: f64,
    pub frame_rate: f64,
    pub particles_per_cell: usize,
    pub flip_blend: f64,
    pub solver_tol: f64,
    pub solver_max_iter: usize,
    pub seed: u64,
    pub max_dt: Option<f64>,
    /// Lattice spacing of seeded granules, in radii.
    pub sand_spacing: f64,
    pub exchange_alpha_floor: f64,

    pub blocks: Vec<Block>,
    pub events: Vec<EventSpec>,
}

impl SceneConfig {
    /// Defaults for a domain of `cells`, with no blocks.
    pub fn with_cells(cells: Vec<usize>) -> Self {
        let d = cells.len();
        let mut gravity = vec![0.0; d];
        if d > 1 {
            gravity[1] = -9.81;
        }
        Self {
            dimension: d,
            cells,
            h: 7.8e-4,
            walls: 1,
            slab: Slab::Disk,
            units: Units::Cells,
            gravity,
            rho_f: 1000.0,
            rho_s: 2500.0,
            young: 1e6,
            poisson: 0.3,
            friction_angle: 30.0,
            radius: 3.9e-4,
            sigma: 0.07,
            mu_drag: 0.44,
            contact_angle: 0.0,
            r_max: 0.0,
            vstar_ratio: 1e-4,
            moisture_rise: 0.5,
            moisture_fall: 0.5,
            end_time: 1.0,
            frame_rate: 30.0,
            particles_per_cell: 1 << d,
            flip_blend: 0.97,
            solver_tol: 1e-6,
            solver_max_iter: 2000,
            seed: 0,
            max_dt: None,
            sand_spacing: 2.0,
            exchange_alpha_floor: 0.1,
            blocks: Vec::new(),
            events: Vec::new(),
        }
    }

    /// Factor that turns scene units into meters.
    pub fn unit_scale(&self) -> f64 {
        match self.units {
            Units::Cells => self.h,
            Units::Meters => 1.0,
        }
    }

    /// Domain extent (m).
    pub fn domain_size(&self) -> Vec<f64> {
        self.cells.iter().map(|&n| n as f64 * self.h).collect()
    }
}

fn err(line: usize, msg: impl Into<String>) -> SceneError {
    SceneError::Parse { line, msg: msg.into() }
}

fn num<T: FromStr>(line: usize, key: &str, tok: &str) -> Result<T, SceneError> {
    tok.parse().map_err(|_| err(line, format!("{key}: cannot read '{tok}' as a number")))
}

fn one<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, SceneError> {
    let toks: Vec<&str> = value.split_whitespace().collect();
    match toks.as_slice() {
        [t] => num(line, key, t),
        _ => Err(err(line, format!("{key}: expected one value, got '{value}'"))),
    }
}

fn positive(line: usize, key: &str, value: &str) -> Result<f64, SceneError> {
    let v: f64 = one(line, key, value)?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(err(line, format!("{key} must be positive, got {v}")))
    }
}

fn non_negative(line: usize, key: &str, value: &str) -> Result<f64, SceneError> {
    let v: f64 = one(line, key, value)?;
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(err(line, format!("{key} must not be negative, got {v}")))
    }
}

fn floats(line: usize, key: &str, toks: &[&str]) -> Result<Vec<f64>, SceneError> {
    toks.iter().map(|t| num::<f64>(line, key, t)).collect()
}

struct Pending {
    line: usize,
    key: String,
    value: String,
}

/// Parses the sectioned `key = value` scene format.
///
/// Sections are `[domain]`, `[materials]`, `[run]`, `[blocks]` and `[events]`.
/// `#` starts a comment. Every omitted physical constant takes its default.
pub fn parse_scene(text: &str) -> Result<SceneConfig, SceneError> {
    let mut section = String::new();
    let mut entries: Vec<(String, Pending)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim();
            if !matches!(name, "domain" | "materials" | "run" | "blocks" | "events") {
                return Err(err(line, format!("unknown section [{name}]")));
            }
            section = name.to_string();
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(err(line, format!("expected 'key = value', got '{content}'")));
        };
        if section.is_empty() {
            return Err(err(line, "entry before any section"));
        }
        let pending = Pending { line, key: key.trim().to_string(), value: value.trim().to_string() };
        entries.push((section.clone(), pending));
    }

    let cells_entry = entries
        .iter()
        .find(|(s, p)| s == "domain" && p.key == "cells")
        .ok_or_else(|| SceneError::Invalid("[domain] cells is required".into()))?;
    let cells: Vec<usize> = cells_entry
        .1
        .value
        .split_whitespace()
        .map(|t| num(cells_entry.1.line, "cells", t))
        .collect::<Result<_, _>>()?;
    if !(cells.len() == 2 || cells.len() == 3) {
        return Err(err(cells_entry.1.line, "cells needs 2 or 3 counts"));
    }
    if let Some(&n) = cells.iter().find(|&&n| n < 3) {
        return Err(err(cells_entry.1.line, format!("cells must be at least 3 per axis, got {n}")));
    }
    let mut cfg = SceneConfig::with_cells(cells);
    let d = cfg.dimension;

    let mut deferred = Vec::new();
    for (section, p) in &entries {
        let (line, key, value) = (p.line, p.key.as_str(), p.value.as_str());
        match (section.as_str(), key) {
            ("domain", "cells") => {}
            ("domain", "dimension") => {
                let dim: usize = one(line, key, value)?;
                if dim != d {
                    return Err(err(line, format!("dimension {dim} does not match {d} cell counts")));
                }
            }
            ("domain", "h") => cfg.h = positive(line, key, value)?,
            ("domain", "walls") => cfg.walls = one(line, key, value)?,
            ("domain", "slab") => {
                cfg.slab = if value == "disk" { Slab::Disk } else { Slab::Depth(positive(line, key, value)?) }
            }
            ("domain", "units") => {
                cfg.units = match value {
                    "cells" => Units::Cells,
                    "meters" => Units::Meters,
                    _ => return Err(err(line, format!("units must be 'cells' or 'meters', got '{value}'"))),
                }
            }
            ("domain", "gravity") => {
                let toks: Vec<&str> = value.split_whitespace().collect();
                if toks.len() != d {
                    return Err(err(line, format!("gravity needs {d} components")));
                }
                cfg.gravity = floats(line, key, &toks)?;
            }
            ("materials", "rho_f") => cfg.rho_f = positive(line, key, value)?,
            ("materials", "rho_s") => cfg.rho_s = positive(line, key, value)?,
            ("materials", "young") => cfg.young = positive(line, key, value)?,
            ("materials", "poisson") => cfg.poisson = non_negative(line, key, value)?,
            ("materials", "friction_angle") => {
                let v = non_negative(line, key, value)?;
                if v >= 90.0 {
                    return Err(err(line, format!("friction_angle must be below 90 degrees, got {v}")));
                }
                cfg.friction_angle = v;
            }
            ("materials", "radius") => cfg.radius = positive(line, key, value)?,
            ("materials", "sigma") => cfg.sigma = non_negative(line, key, value)?,
            ("materials", "mu_drag") => cfg.mu_drag = non_negative(line, key, value)?,
            ("materials", "contact_angle") => cfg.contact_angle = non_negative(line, key, value)?,
            ("materials", "r_max") => {
                let v = non_negative(line, key, value)?;
                if v >= 1.0 {
                    return Err(err(line, format!("r_max must be below 1, got {v}")));
                }
                cfg.r_max = v;
            }
            ("materials", "vstar_ratio") => cfg.vstar_ratio = positive(line, key, value)?,
            ("materials", "moisture_rise") => cfg.moisture_rise = unit_interval(line, key, value)?,
            ("materials", "moisture_fall") => cfg.moisture_fall = unit_interval(line, key, value)?,
            ("run", "end_time") => cfg.end_time = non_negative(line, key, value)?,
            ("run", "frame_rate") => cfg.frame_rate = positive(line, key, value)?,
            ("run", "particles_per_cell") => {
                let n: usize = one(line, key, value)?;
                if n == 0 {
                    return Err(err(line, "particles_per_cell must be positive"));
                }
                cfg.particles_per_cell = n;
            }
            ("run", "flip_blend") => cfg.flip_blend = unit_interval(line, key, value)?,
            ("run", "solver_tol") => cfg.solver_tol = positive(line, key, value)?,
            ("run", "solver_max_iter") => cfg.solver_max_iter = one(line, key, value)?,
            ("run", "seed") => cfg.seed = one(line, key, value)?,
            ("run", "max_dt") => cfg.max_dt = if value == "none" { None } else { Some(positive(line, key, value)?) },
            ("run", "sand_spacing") => cfg.sand_spacing = positive(line, key, value)?,
            ("run", "exchange_alpha_floor") => cfg.exchange_alpha_floor = positive(line, key, value)?,
            ("blocks", _) | ("events", _) => deferred.push((section.as_str(), p)),
            _ => return Err(err(line, format!("unknown key '{key}' in [{section}]"))),
        }
    }
    for (section, p) in deferred {
        if section == "blocks" {
            cfg.blocks.push(parse_block(p, d)?);
        } else {
            cfg.events.push(parse_event(p, d)?);
        }
    }
    validate(&cfg)?;
    Ok(cfg)
}

fn unit_interval(line: usize, key: &str, value: &str) -> Result<f64, SceneError> {
    let v: f64 = one(line, key, value)?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(err(line, format!("{key} must lie in [0, 1], got {v}")))
    }
}

fn parse_block(p: &Pending, d: usize) -> Result<Block, SceneError> {
    let line = p.line;
    let material = match p.key.as_str() {
        "water" => Material::Water,
        "sand" => Material::Sand,
        "solid" => Material::Solid,
        k => return Err(err(line, format!("unknown block material '{k}'"))),
    };
    let toks: Vec<&str> = p.value.split_whitespace().collect();
    let Some((&kind, rest)) = toks.split_first() else {
        return Err(err(line, "block needs a shape"));
    };
    let (n, make): (usize, fn(&[f64], usize) -> ShapeSpec) = match kind {
        "box" => (2 * d, |v, d| ShapeSpec::Box { lo: v[..d].to_vec(), hi: v[d..].to_vec() }),
        "ball" => (d + 1, |v, d| ShapeSpec::Ball { center: v[..d].to_vec(), radius: v[d] }),
        "segment" => {
            (2 * d + 1, |v, d| ShapeSpec::Segment { a: v[..d].to_vec(), b: v[d..2 * d].to_vec(), radius: v[2 * d] })
        }
        _ => return Err(err(line, format!("unknown shape '{kind}', expected box, ball or segment"))),
    };
    if rest.len() < n {
        return Err(err(line, format!("{kind} needs {n} numbers")));
    }
    let shape = make(&floats(line, kind, &rest[..n])?, d);
    let mut block = Block { material, shape, velocity: vec![0.0; d], moisture: 0.0, fixed: false };
    let mut i = n;
    while i < rest.len() {
        match rest[i] {
            "velocity" if material != Material::Solid => {
                if rest.len() < i + 1 + d {
                    return Err(err(line, format!("velocity needs {d} components")));
                }
                block.velocity = floats(line, "velocity", &rest[i + 1..i + 1 + d])?;
                i += 1 + d;
            }
            "moisture" if material == Material::Sand => {
                let Some(tok) = rest.get(i + 1) else {
                    return Err(err(line, "moisture needs a value"));
                };
                block.moisture = num(line, "moisture", tok)?;
                i += 2;
            }
            "fixed" if material == Material::Sand => {
                block.fixed = true;
                i += 1;
            }
            other => return Err(err(line, format!("unexpected '{other}' in {} block", material.name()))),
        }
    }
    match &block.shape {
        ShapeSpec::Box { lo, hi } if lo.iter().zip(hi.iter()).any(|(a, b)| a >= b) => {
            Err(err(line, "box corners must satisfy lo < hi on every axis"))
        }
        ShapeSpec::Ball { radius, .. } | ShapeSpec::Segment { radius, .. } if !(*radius > 0.0) => {
            Err(err(line, "radius must be positive"))
        }
        _ => Ok(block),
    }
}

fn parse_event(p: &Pending, d: usize) -> Result<EventSpec, SceneError> {
    let line = p.line;
    if p.key != "force" {
        return Err(err(line, format!("unknown event '{}', expected 'force'", p.key)));
    }
    let toks: Vec<&str> = p.value.split_whitespace().collect();
    let (force, rest) = match toks.first() {
        Some(&"uniform") if toks.len() > d => {
            (ForceSpec::Uniform(floats(line, "uniform", &toks[1..=d])?), &toks[d + 1..])
        }
        Some(&"swirl") if toks.len() >= d + 3 && toks[2] == "at" => {
            let magnitude = num(line, "swirl", toks[1])?;
            (ForceSpec::Swirl { magnitude, center: floats(line, "swirl", &toks[3..3 + d])? }, &toks[3 + d..])
        }
        _ => return Err(err(
            line,
            "force must be 'uniform <accel> from <t0> to <t1>' or 'swirl <magnitude> at <center> from <t0> to <t1>'",
        )),
    };
    match rest {
        ["from", a, "to", b] => {
            let start: f64 = num(line, "from", a)?;
            let end: f64 = num(line, "to", b)?;
            if end <= start {
                return Err(err(line, "event window must end after it starts"));
            }
            Ok(EventSpec { force, start, end })
        }
        _ => Err(err(line, "force needs a window 'from <t0> to <t1>'")),
    }
}

fn validate(cfg: &SceneConfig) -> Result<(), SceneError> {
    let size = cfg.domain_size();
    let s = cfg.unit_scale();
    let tol = 1e-9 * size.iter().fold(0.0f64, |m, &v| m.max(v));
    let inside =
        |p: &[f64], pad: f64| p.iter().zip(size.iter()).all(|(&x, &l)| x * s - pad >= -tol && x * s + pad <= l + tol);
    for (k, b) in cfg.blocks.iter().enumerate() {
        let ok = match &b.shape {
            ShapeSpec::Box { lo, hi } => inside(lo, 0.0) && inside(hi, 0.0),
            ShapeSpec::Ball { center, radius } => inside(center, radius * s),
            ShapeSpec::Segment { a, b, .. } => inside(a, 0.0) && inside(b, 0.0),
        };
        if !ok {
            return Err(SceneError::Invalid(format!(
                "block {} ({}) reaches outside the domain",
                k + 1,
                b.material.name()
            )));
        }
        if b.material == Material::Sand && !(0.0..=cfg.r_max.max(0.0)).contains(&b.moisture) {
            return Err(SceneError::Invalid(format!(
                "block {}: moisture {} is outside [0, r_max = {}]",
                k + 1,
                b.moisture,
                cfg.r_max
            )));
        }
    }
    Ok(())
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" ")
}

/// Writes `cfg` back in the scene format; parsing the result gives `cfg` again.
pub fn serialize_scene(cfg: &SceneConfig) -> String {
    let mut s = String::new();
    let cells: Vec<String> = cfg.cells.iter().map(|n| n.to_string()).collect();
    let slab = match cfg.slab {
        Slab::Disk => "disk".to_string(),
        Slab::Depth(v) => format!("{v:?}"),
    };
    let units = match cfg.units {
        Units::Cells => "cells",
        Units::Meters => "meters",
    };
    let _ = writeln!(s, "[domain]");
    let _ = writeln!(s, "dimension = {}", cfg.dimension);
    let _ = writeln!(s, "cells = {}", cells.join(" "));
    let _ = writeln!(s, "h = {:?}", cfg.h);
    let _ = writeln!(s, "walls = {}", cfg.walls);
    let _ = writeln!(s, "slab = {slab}");
    let _ = writeln!(s, "units = {units}");
    let _ = writeln!(s, "gravity = {}", join(&cfg.gravity));
    let _ = writeln!(s, "\n[materials]");
    for (k, v) in [
        ("rho_f", cfg.rho_f),
        ("rho_s", cfg.rho_s),
        ("young", cfg.young),
        ("poisson", cfg.poisson),
        ("friction_angle", cfg.friction_angle),
        ("radius", cfg.radius),
        ("sigma", cfg.sigma),
        ("mu_drag", cfg.mu_drag),
        ("contact_angle", cfg.contact_angle),
        ("r_max", cfg.r_max),
        ("vstar_ratio", cfg.vstar_ratio),
        ("moisture_rise", cfg.moisture_rise),
        ("moisture_fall", cfg.moisture_fall),
    ] {
        let _ = writeln!(s, "{k} = {v:?}");
    }
    let _ = writeln!(s, "\n[run]");
    let _ = writeln!(s, "end_time = {:?}", cfg.end_time);
    let _ = writeln!(s, "frame_rate = {:?}", cfg.frame_rate);
    let _ = writeln!(s, "particles_per_cell = {}", cfg.particles_per_cell);
    let _ = writeln!(s, "flip_blend = {:?}", cfg.flip_blend);
    let _ = writeln!(s, "solver_tol = {:?}", cfg.solver_tol);
    let _ = writeln!(s, "solver_max_iter = {}", cfg.solver_max_iter);
    let _ = writeln!(s, "seed = {}", cfg.seed);
    match cfg.max_dt {
        Some(v) => {
            let _ = writeln!(s, "max_dt = {v:?}");
        }
        None => {
            let _ = writeln!(s, "max_dt = none");
        }
    }
    let _ = writeln!(s, "sand_spacing = {:?}", cfg.sand_spacing);
    let _ = writeln!(s, "exchange_alpha_floor = {:?}", cfg.exchange_alpha_floor);
    let _ = writeln!(s, "\n[blocks]");
    for b in &cfg.blocks {
        let shape = match &b.shape {
            ShapeSpec::Box { lo, hi } => format!("box {} {}", join(lo), join(hi)),
            ShapeSpec::Ball { center, radius } => format!("ball {} {radius:?}", join(center)),
            ShapeSpec::Segment { a, b, radius } => format!("segment {} {} {radius:?}", join(a), join(b)),
        };
        let _ = write!(s, "{} = {shape}", b.material.name());
        if b.material != Material::Solid {
            let _ = write!(s, " velocity {}", join(&b.velocity));
        }
        if b.material == Material::Sand {
            let _ = write!(s, " moisture {:?}", b.moisture);
            if b.fixed {
                let _ = write!(s, " fixed");
            }
        }
        let _ = writeln!(s);
    }
    let _ = writeln!(s, "\n[events]");
    for e in &cfg.events {
        let force = match &e.force {
            ForceSpec::Uniform(a) => format!("uniform {}", join(a)),
            ForceSpec::Swirl { magnitude, center } => format!("swirl {magnitude:?} at {}", join(center)),
        };
        let _ = writeln!(s, "force = {force} from {:?} to {:?}", e.start, e.end);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCENE: &str = "
# a small tank
[domain]
cells = 32 24
walls = 1

[materials]
r_max = 0.3

[run]
end_time = 0.5
seed = 9

[blocks]
water = box 1 1 31 10
sand = ball 16 16 4 velocity 0 -0.5 moisture 0.1
solid = segment 4 20 12 14 0.5
sand = box 2 2 6 6 fixed

[events]
force = uniform 0.5 0 from 0 to 0.25
force = swirl 2 at 16 12 from 0.1 to 0.2
";

    #[test]
    fn defaults_for_empty_sections() {
        let cfg = parse_scene("[domain]\ncells = 8 8\n[materials]\n").unwrap();
        assert_eq!(cfg.rho_f, 1000.0);
        assert_eq!(cfg.rho_s, 2500.0);
        assert_eq!(cfg.young, 1e6);
        assert_eq!(cfg.poisson, 0.3);
        assert_eq!(cfg.radius, 3.9e-4);
        assert_eq!(cfg.sigma, 0.07);
        assert_eq!(cfg.mu_drag, 0.44);
        assert_eq!(cfg.h, 7.8e-4);
        assert_eq!(cfg.dimension, 2);
        assert_eq!(cfg.gravity, vec![0.0, -9.81]);
        assert_eq!(cfg.particles_per_cell, 4);
    }

    #[test]
    fn negative_h_names_line_and_field() {
        let e = parse_scene("[domain]\ncells = 8 8\nh = -1\n").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("line 3") && msg.contains("h must be positive"), "{msg}");
    }

    #[test]
    fn parse_errors() {
        let cases = [
            ("[domain]\ncells = 8 8\nbogus = 1\n", "line 3"),
            ("[domain]\nh = 1e-3\n", "cells is required"),
            ("[nope]\n", "line 1"),
            ("[domain]\ncells = 8 8\n[blocks]\nwater = box 1 1 9 4\n", "outside the domain"),
            ("[domain]\ncells = 8 8\n[blocks]\nwater = cone 1 1\n", "line 4"),
            ("[domain]\ncells = 8 8\n[blocks]\nsolid = ball 4 4 1 velocity 1 0\n", "line 4"),
            ("[domain]\ncells = 8 8\n[blocks]\nsand = ball 4 4 1 moisture 0.2\n", "outside [0, r_max"),
            ("[domain]\ncells = 8 8\n[events]\nforce = uniform 1 0 from 1 to 0\n", "line 4"),
            ("[domain]\ncells = 8 8\ndimension = 3\n", "line 3"),
        ];
        for (text, want) in cases {
            let msg = parse_scene(text).unwrap_err().to_string();
            assert!(msg.contains(want), "{text:?}: {msg}");
        }
    }

    #[test]
    fn full_scene() {
        let cfg = parse_scene(SCENE).unwrap();
        assert_eq!(cfg.blocks.len(), 4);
        assert_eq!(cfg.blocks[1].velocity, vec![0.0, -0.5]);
        assert_eq!(cfg.blocks[1].moisture, 0.1);
        assert!(cfg.blocks[3].fixed);
        assert_eq!(cfg.events.len(), 2);
        assert_eq!(cfg.seed, 9);
        assert!(matches!(cfg.blocks[2].shape, ShapeSpec::Segment { radius, .. } if radius == 0.5));
    }

    #[test]
    fn round_trip() {
        let cfg = parse_scene(SCENE).unwrap();
        let text = serialize_scene(&cfg);
        let again = parse_scene(&text).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(text, serialize_scene(&again));
    }
}
