use crate::math::Vector;

const MAX_BINS: usize = 1 << 22;

/// Uniform bin grid over a point set, built with a counting sort.
///
/// Bins are at least `cutoff` wide, so every pair closer than `cutoff` lies in
/// adjacent bins. Within a bin points keep their input order, which makes the
/// neighbour enumeration order deterministic.
#[derive(Clone, Debug)]
pub struct NeighborGrid<const D: usize> {
    origin: Vector<D>,
    bin: f64,
    dims: [usize; D],
    start: Vec<usize>,
    items: Vec<usize>,
    cutoff: f64,
}

impl<const D: usize> NeighborGrid<D> {
    pub fn build(points: &[Vector<D>], cutoff: f64) -> Self {
        assert!(cutoff > 0.0, "cutoff must be positive");
        let mut lo = Vector::<D>::repeat(f64::MAX);
        let mut hi = Vector::<D>::repeat(f64::MIN);
        for p in points {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        if points.is_empty() {
            lo = Vector::zeros();
            hi = Vector::zeros();
        }
        let mut bin = cutoff;
        let mut dims = [1usize; D];
        loop {
            let counts: Vec<f64> = (0..D).map(|a| ((hi[a] - lo[a]) / bin).floor() + 1.0).collect();
            if counts.iter().product::<f64>() <= MAX_BINS.max(points.len()) as f64 {
                for a in 0..D {
                    dims[a] = counts[a] as usize;
                }
                break;
            }
            bin *= 2.0;
        }
        let mut grid = Self { origin: lo, bin, dims, start: Vec::new(), items: Vec::new(), cutoff };
        let nbins: usize = dims.iter().product();
        let keys: Vec<usize> = points.iter().map(|p| grid.bin_index(&grid.bin_of(p))).collect();
        let mut start = vec![0usize; nbins + 1];
        for &k in &keys {
            start[k + 1] += 1;
        }
        for b in 0..nbins {
            start[b + 1] += start[b];
        }
        let mut fill = start.clone();
        let mut items = vec![0usize; points.len()];
        for (i, &k) in keys.iter().enumerate() {
            items[fill[k]] = i;
            fill[k] += 1;
        }
        grid.start = start;
        grid.items = items;
        grid
    }

    fn bin_of(&self, p: &Vector<D>) -> [usize; D] {
        let mut c = [0; D];
        for a in 0..D {
            let i = ((p[a] - self.origin[a]) / self.bin).floor();
            c[a] = if i > 0.0 { (i as usize).min(self.dims[a] - 1) } else { 0 };
        }
        c
    }

    fn bin_index(&self, c: &[usize; D]) -> usize {
        let mut idx = 0;
        for a in (0..D).rev() {
            idx = idx * self.dims[a] + c[a];
        }
        idx
    }

    /// Calls `f(j)` for every `j != i` with `|x_i - x_j| < cutoff`.
    pub fn for_each_neighbor(&self, points: &[Vector<D>], i: usize, mut f: impl FnMut(usize)) {
        let xi = points[i];
        let c = self.bin_of(&xi);
        let cut2 = self.cutoff * self.cutoff;
        for mask in 0..3usize.pow(D as u32) {
            let mut m = mask;
            let mut nb = [0usize; D];
            let mut inside = true;
            for a in 0..D {
                let off = (m % 3) as isize - 1;
                m /= 3;
                let v = c[a] as isize + off;
                if v < 0 || v >= self.dims[a] as isize {
                    inside = false;
                    break;
                }
                nb[a] = v as usize;
            }
            if !inside {
                continue;
            }
            let b = self.bin_index(&nb);
            for &j in &self.items[self.start[b]..self.start[b + 1]] {
                if j != i && (points[j] - xi).norm_squared() < cut2 {
                    f(j);
                }
            }
        }
    }

    /// Every unordered pair closer than the cutoff, as `(i, j)` with `i < j`, sorted.
    pub fn pairs(&self, points: &[Vector<D>]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..points.len() {
            let first = out.len();
            self.for_each_neighbor(points, i, |j| {
                if j > i {
                    out.push((i, j));
                }
            });
            out[first..].sort_unstable();
        }
        out
    }
}

/// Every unordered pair of points closer than `cutoff`.
pub fn neighbor_pairs<const D: usize>(points: &[Vector<D>], cutoff: f64) -> Vec<(usize, usize)> {
    NeighborGrid::build(points, cutoff).pairs(points)
}
