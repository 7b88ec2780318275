//! Static solid geometry as signed distance functions (negative inside).

use crate::math::Vector;

/// Anything that can report a signed distance, negative inside the solid.
pub trait Sdf<const D: usize>: Sync {
    fn distance(&self, x: &Vector<D>) -> f64;

    /// Gradient by central differences with step `eps`.
    fn gradient(&self, x: &Vector<D>, eps: f64) -> Vector<D> {
        Vector::<D>::from_fn(|a, _| {
            let mut hi = *x;
            let mut lo = *x;
            hi[a] += eps;
            lo[a] -= eps;
            (self.distance(&hi) - self.distance(&lo)) / (2.0 * eps)
        })
    }
}

impl<const D: usize, F: Fn(&Vector<D>) -> f64 + Sync> Sdf<D> for F {
    fn distance(&self, x: &Vector<D>) -> f64 {
        self(x)
    }
}

/// A solid primitive.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape<const D: usize> {
    /// Axis-aligned box between two corners.
    Box {
        lo: Vector<D>,
        hi: Vector<D>,
    },
    Ball {
        center: Vector<D>,
        radius: f64,
    },
    /// Segment `a`–`b` thickened by `radius`.
    Capsule {
        a: Vector<D>,
        b: Vector<D>,
        radius: f64,
    },
}

impl<const D: usize> Shape<D> {
    pub fn distance(&self, x: &Vector<D>) -> f64 {
        match self {
            Shape::Box { lo, hi } => box_distance(x, lo, hi),
            Shape::Ball { center, radius } => (x - center).norm() - radius,
            Shape::Capsule { a, b, radius } => {
                let ab = b - a;
                let len2 = ab.norm_squared();
                let t = if len2 > 0.0 { ((x - a).dot(&ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
                (x - (a + ab * t)).norm() - radius
            }
        }
    }
}

fn box_distance<const D: usize>(x: &Vector<D>, lo: &Vector<D>, hi: &Vector<D>) -> f64 {
    let center = (lo + hi) * 0.5;
    let half = (hi - lo) * 0.5;
    let q = Vector::<D>::from_fn(|a, _| (x[a] - center[a]).abs() - half[a]);
    let outside = q.map(|c| c.max(0.0)).norm();
    let inside = q.max().min(0.0);
    outside + inside
}

/// Union of the domain walls and any number of primitives.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolidSet<const D: usize> {
    /// Open box `(lo, hi)`; everything outside it is wall.
    pub walls: Option<(Vector<D>, Vector<D>)>,
    pub shapes: Vec<Shape<D>>,
}

impl<const D: usize> SolidSet<D> {
    /// Walls of thickness `thickness` lining the inside of `[0, size]`.
    pub fn with_walls(size: Vector<D>, thickness: f64) -> Self {
        let lo = Vector::<D>::repeat(thickness);
        let hi = size - lo;
        Self { walls: Some((lo, hi)), shapes: Vec::new() }
    }

    pub fn push(&mut self, shape: Shape<D>) {
        self.shapes.push(shape);
    }

    pub fn is_empty(&self) -> bool {
        self.walls.is_none() && self.shapes.is_empty()
    }
}

impl<const D: usize> Sdf<D> for SolidSet<D> {
    fn distance(&self, x: &Vector<D>) -> f64 {
        let wall = self.walls.map_or(f64::MAX, |(lo, hi)| -box_distance(x, &lo, &hi));
        self.shapes.iter().fold(wall, |d, s| d.min(s.distance(x)))
    }
}
