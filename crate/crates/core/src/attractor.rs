//! Floating-point attractor sampling and set-distance diagnostics.
//!
//! Sampling is reproducible: the chaos game draws map indices from
//! [`ChaCha8Rng`] seeded with [`SeedableRng::seed_from_u64`], so a seed fixes
//! the cloud bit for bit.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::affine::{FloatAffine, IteratedFunctionSystem};
use crate::error::{Error, Result};
use crate::rational;

/// Largest cloud [`hutchinson_iterate`] will build.
pub const HUTCHINSON_LIMIT: u128 = 10_000_000;
/// Clouds up to this size get an exact pairwise diameter.
pub const EXACT_DIAMETER_LIMIT: usize = 10_000;

/// Points in `dim`-space, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    data: Vec<f64>,
}

impl PointCloud {
    pub fn new(dim: usize) -> Self {
        assert!(dim > 0, "point cloud dimension must be positive");
        PointCloud {
            dim,
            data: Vec::new(),
        }
    }

    pub fn from_points(dim: usize, points: &[Vec<f64>]) -> Result<Self> {
        let mut c = Self::new(dim);
        for p in points {
            c.push(p)?;
        }
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn push(&mut self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.len(),
            });
        }
        self.data.extend_from_slice(p);
        Ok(())
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    /// Image of every point under `f`.
    pub fn map(&self, f: &FloatAffine) -> PointCloud {
        let mut out = PointCloud::new(self.dim);
        let mut buf = Vec::with_capacity(self.dim);
        for p in self.points() {
            f.apply_into(p, &mut buf);
            out.data.extend_from_slice(&buf);
        }
        out
    }

    pub fn extend(&mut self, other: &PointCloud) -> Result<()> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        self.data.extend_from_slice(&other.data);
        Ok(())
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

fn start_point(ifs: &IteratedFunctionSystem) -> Vec<f64> {
    let x0 = ifs.maps()[0]
        .fixed_point()
        .expect("contractive maps have a fixed point");
    rational::vec_to_f64(&x0)
}

/// Random-orbit sampling. Runs `iterations` steps from the fixed point of
/// the first map, choosing maps uniformly, and keeps the points after the
/// first `burn_in`.
pub fn chaos_game(
    ifs: &IteratedFunctionSystem,
    iterations: usize,
    burn_in: usize,
    seed: u64,
) -> Result<PointCloud> {
    if iterations <= burn_in {
        return Err(Error::invalid("iterations must exceed burn-in"));
    }
    let maps: Vec<FloatAffine> = ifs.maps().iter().map(|f| f.to_f64()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = start_point(ifs);
    let mut next = Vec::with_capacity(x.len());
    let mut cloud = PointCloud::new(ifs.dim());
    cloud.data.reserve((iterations - burn_in) * ifs.dim());
    for step in 0..iterations {
        let f = &maps[rng.gen_range(0..maps.len())];
        f.apply_into(&x, &mut next);
        core::mem::swap(&mut x, &mut next);
        if step >= burn_in {
            cloud.data.extend_from_slice(&x);
        }
    }
    Ok(cloud)
}

/// `{ f_w(x₀) : |w| = depth }` with `x₀` the fixed point of the first map.
pub fn hutchinson_iterate(ifs: &IteratedFunctionSystem, depth: u32) -> Result<PointCloud> {
    let size = (ifs.len() as u128)
        .checked_pow(depth)
        .filter(|&s| s <= HUTCHINSON_LIMIT)
        .ok_or(Error::TooLarge {
            requested: (ifs.len() as u128).saturating_pow(depth),
            limit: HUTCHINSON_LIMIT,
        })?;
    let maps: Vec<FloatAffine> = ifs.maps().iter().map(|f| f.to_f64()).collect();
    let mut level = PointCloud::new(ifs.dim());
    level.data.extend(start_point(ifs));
    for _ in 0..depth {
        let mut next = PointCloud::new(ifs.dim());
        next.data.reserve(level.data.len() * maps.len());
        for f in &maps {
            next.extend(&level.map(f))?;
        }
        level = next;
    }
    debug_assert_eq!(level.len() as u128, size);
    Ok(level)
}

/// Lower and upper bounds on the diameter from a linear scan: the lower
/// bound is the largest distance from an axis-extreme point to any point,
/// the upper bound the bounding-box diagonal (at most `√dim` times the
/// lower bound).
pub fn diameter_bounds(cloud: &PointCloud) -> Result<(f64, f64)> {
    if cloud.is_empty() {
        return Err(Error::invalid("empty point cloud"));
    }
    let dim = cloud.dim;
    let mut lo = alloc::vec![f64::INFINITY; dim];
    let mut hi = alloc::vec![f64::NEG_INFINITY; dim];
    let mut extremes = alloc::vec![0usize; 2 * dim];
    for (i, p) in cloud.points().enumerate() {
        for k in 0..dim {
            if p[k] < lo[k] {
                lo[k] = p[k];
                extremes[2 * k] = i;
            }
            if p[k] > hi[k] {
                hi[k] = p[k];
                extremes[2 * k + 1] = i;
            }
        }
    }
    let upper = distance(&lo, &hi);
    let mut lower: f64 = 0.0;
    for &e in &extremes {
        let a = cloud.point(e);
        for p in cloud.points() {
            lower = lower.max(distance(a, p));
        }
    }
    Ok((lower, upper.max(lower)))
}

/// Largest pairwise distance: exact for clouds of at most
/// [`EXACT_DIAMETER_LIMIT`] points, otherwise the lower bound of
/// [`diameter_bounds`] (within a factor `√dim` of the truth).
pub fn diameter(cloud: &PointCloud) -> Result<f64> {
    if cloud.is_empty() {
        return Err(Error::invalid("empty point cloud"));
    }
    if cloud.len() > EXACT_DIAMETER_LIMIT {
        return Ok(diameter_bounds(cloud)?.0);
    }
    let mut best: f64 = 0.0;
    for i in 0..cloud.len() {
        let a = cloud.point(i);
        for j in i + 1..cloud.len() {
            best = best.max(distance(a, cloud.point(j)));
        }
    }
    Ok(best)
}

/// Bucket grid over the first (up to) two coordinates of a cloud.
struct Grid<'a> {
    cloud: &'a PointCloud,
    axes: usize,
    cell: f64,
    origin: [f64; 2],
    cells: BTreeMap<[i64; 2], Vec<usize>>,
    extent: [(i64, i64); 2],
}

impl<'a> Grid<'a> {
    fn new(cloud: &'a PointCloud) -> Self {
        let axes = cloud.dim.min(2);
        let mut lo = [0.0f64; 2];
        let mut hi = [0.0f64; 2];
        for a in 0..axes {
            lo[a] = cloud.points().map(|p| p[a]).fold(f64::INFINITY, f64::min);
            hi[a] = cloud.points().map(|p| p[a]).fold(f64::NEG_INFINITY, f64::max);
        }
        let span = (0..axes).map(|a| hi[a] - lo[a]).fold(0.0, f64::max);
        let per_axis = libm::pow(cloud.len() as f64, 1.0 / axes as f64).max(1.0);
        let cell = if span > 0.0 { span / per_axis } else { 1.0 };
        let mut grid = Grid {
            cloud,
            axes,
            cell,
            origin: lo,
            cells: BTreeMap::new(),
            extent: [(0, 0); 2],
        };
        for (i, p) in cloud.points().enumerate() {
            let key = grid.key(p);
            grid.cells.entry(key).or_default().push(i);
        }
        for a in 0..axes {
            let lo_k = grid.cells.keys().map(|k| k[a]).min().unwrap_or(0);
            let hi_k = grid.cells.keys().map(|k| k[a]).max().unwrap_or(0);
            grid.extent[a] = (lo_k, hi_k);
        }
        grid
    }

    fn key(&self, p: &[f64]) -> [i64; 2] {
        let mut k = [0i64; 2];
        for a in 0..self.axes {
            k[a] = libm::floor((p[a] - self.origin[a]) / self.cell) as i64;
        }
        k
    }

    /// Exact nearest distance from `q` to the cloud. Rings of cells are
    /// scanned outward; a ring at Chebyshev radius `r` only holds points at
    /// projected distance at least `(r − 1)·cell`, so the scan stops once
    /// that exceeds the best distance found.
    fn nearest(&self, q: &[f64]) -> f64 {
        let c = self.key(q);
        let max_r = (0..self.axes)
            .map(|a| (c[a] - self.extent[a].0).abs().max((self.extent[a].1 - c[a]).abs()))
            .max()
            .unwrap_or(0);
        let mut best = f64::INFINITY;
        let mut r: i64 = 0;
        loop {
            if (r - 1) as f64 * self.cell > best || r > max_r {
                break;
            }
            self.visit_ring(c, r, |i| best = best.min(distance(q, self.cloud.point(i))));
            r += 1;
        }
        best
    }

    fn visit_ring(&self, c: [i64; 2], r: i64, mut f: impl FnMut(usize)) {
        let mut visit = |k: [i64; 2]| {
            if let Some(ids) = self.cells.get(&k) {
                for &i in ids {
                    f(i);
                }
            }
        };
        if self.axes == 1 {
            visit([c[0] - r, 0]);
            if r > 0 {
                visit([c[0] + r, 0]);
            }
            return;
        }
        if r == 0 {
            visit(c);
            return;
        }
        for dx in -r..=r {
            visit([c[0] + dx, c[1] - r]);
            visit([c[0] + dx, c[1] + r]);
        }
        for dy in -r + 1..r {
            visit([c[0] - r, c[1] + dy]);
            visit([c[0] + r, c[1] + dy]);
        }
    }
}

/// `sup_{x ∈ from} min_{y ∈ to} |x − y|`, exact; a bucket grid on `to`
/// prunes the inner search without changing the result.
pub fn one_sided_hausdorff(from: &PointCloud, to: &PointCloud) -> Result<f64> {
    if from.is_empty() || to.is_empty() {
        return Err(Error::invalid("empty point cloud"));
    }
    if from.dim != to.dim {
        return Err(Error::DimensionMismatch {
            expected: from.dim,
            found: to.dim,
        });
    }
    let grid = Grid::new(to);
    Ok(from.points().map(|q| grid.nearest(q)).fold(0.0, f64::max))
}

/// Symmetric Hausdorff distance between two clouds.
pub fn hausdorff(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    Ok(one_sided_hausdorff(a, b)?.max(one_sided_hausdorff(b, a)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::AffineMap;
    use crate::linalg::Matrix;
    use crate::rational::{frac, int};
    use alloc::vec;

    fn halves() -> IteratedFunctionSystem {
        let f = AffineMap::new(Matrix::diagonal(&[frac(1, 2)]), vec![int(0)]).unwrap();
        let g = AffineMap::new(Matrix::diagonal(&[frac(1, 2)]), vec![frac(1, 2)]).unwrap();
        IteratedFunctionSystem::new(vec![f, g]).unwrap()
    }

    fn cloud(points: &[&[f64]]) -> PointCloud {
        let pts: Vec<Vec<f64>> = points.iter().map(|p| p.to_vec()).collect();
        PointCloud::from_points(points[0].len(), &pts).unwrap()
    }

    #[test]
    fn chaos_game_on_interval() {
        let c = chaos_game(&halves(), 5000, 10, 7).unwrap();
        assert_eq!(c.len(), 4990);
        assert!(c.points().all(|p| (0.0..=1.0).contains(&p[0])));
        assert_eq!(chaos_game(&halves(), 11, 10, 1).unwrap().len(), 1);
        assert_eq!(chaos_game(&halves(), 300, 0, 42).unwrap(), chaos_game(&halves(), 300, 0, 42).unwrap());
        assert_ne!(chaos_game(&halves(), 300, 0, 42).unwrap(), chaos_game(&halves(), 300, 0, 43).unwrap());
        assert!(chaos_game(&halves(), 10, 10, 1).is_err());
    }

    #[test]
    fn hutchinson_levels() {
        let c = hutchinson_iterate(&halves(), 0).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.point(0), &[0.0]);
        let c = hutchinson_iterate(&halves(), 3).unwrap();
        assert_eq!(c.len(), 8);
        let mut xs: Vec<f64> = c.points().map(|p| p[0]).collect();
        xs.sort_by(f64::total_cmp);
        let expect: Vec<f64> = (0..8).map(|k| k as f64 / 8.0).collect();
        assert_eq!(xs, expect);
        assert!(matches!(hutchinson_iterate(&halves(), 40), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn diameters() {
        assert_eq!(diameter(&cloud(&[&[1.0, 1.0]])).unwrap(), 0.0);
        assert_eq!(diameter(&cloud(&[&[0.0, 0.0], &[3.0, 4.0]])).unwrap(), 5.0);
        let square = cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]);
        assert!((diameter(&square).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        let (lo, hi) = diameter_bounds(&square).unwrap();
        assert!(lo <= 2f64.sqrt() + 1e-15 && hi >= 2f64.sqrt() - 1e-15);
        assert!(diameter(&PointCloud::new(2)).is_err());
    }

    #[test]
    fn hausdorff_basics() {
        let a = cloud(&[&[0.0, 0.0]]);
        let b = cloud(&[&[1.0, 0.0]]);
        assert_eq!(one_sided_hausdorff(&a, &a).unwrap(), 0.0);
        assert_eq!(one_sided_hausdorff(&a, &b).unwrap(), 1.0);
        assert!(one_sided_hausdorff(&a, &PointCloud::new(2)).is_err());
        assert!(one_sided_hausdorff(&a, &cloud(&[&[0.0]])).is_err());
    }

    #[test]
    fn grid_matches_brute_force() {
        let c = chaos_game(&halves(), 400, 0, 3).unwrap();
        let mut planar = PointCloud::new(3);
        for (i, p) in c.points().enumerate() {
            planar.push(&[p[0], libm::sin(i as f64), p[0] * p[0]]).unwrap();
        }
        let probe = chaos_game(&halves(), 250, 0, 9).unwrap();
        let mut q = PointCloud::new(3);
        for p in probe.points() {
            q.push(&[p[0] * 3.0 - 1.0, p[0], 0.5]).unwrap();
        }
        let brute = q
            .points()
            .map(|x| planar.points().map(|y| distance(x, y)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        assert_eq!(one_sided_hausdorff(&q, &planar).unwrap(), brute);
    }
}
