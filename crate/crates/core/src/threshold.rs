//! Grid functions and the threshold functions defined by oriented prime segments.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{convex_hull, cross, hulls_intersect, OrientedSegment, Point};
use crate::numtheory::gcd_i64;
use crate::scalar::Coord;
use crate::GridPoint;

/// Cap on `m·n` for any grid.
pub const MAX_GRID_CELLS: u64 = 1 << 30;
/// Cap on `m·n` for [`enumerate_threshold`].
pub const THRESHOLD_ENUM_LIMIT: u64 = 4096;

/// The grid `{0..m-1} x {0..n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridDims {
    m: u32,
    n: u32,
}

impl GridDims {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::invalid(format!("grid {m}x{n}: dimensions must be positive")));
        }
        let bound = <i32 as Coord>::MAX_ABS as u32 + 1;
        if m > bound || n > bound {
            return Err(Error::invalid(format!("grid {m}x{n} exceeds coordinate bound")));
        }
        Error::guard("grid cells", m as u64 * n as u64, MAX_GRID_CELLS)?;
        Ok(GridDims { m, n })
    }

    #[inline(always)]
    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline(always)]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline(always)]
    pub fn cells(&self) -> usize {
        self.m as usize * self.n as usize
    }

    pub fn transposed(&self) -> GridDims {
        GridDims { m: self.n, n: self.m }
    }

    #[inline(always)]
    pub fn words(&self) -> usize {
        self.cells().div_ceil(64)
    }

    #[inline(always)]
    pub fn contains(&self, p: GridPoint) -> bool {
        p.x >= 0 && p.y >= 0 && (p.x as u32) < self.m && (p.y as u32) < self.n
    }

    #[inline(always)]
    pub fn index(&self, p: GridPoint) -> usize {
        debug_assert!(self.contains(p));
        p.x as usize + p.y as usize * self.m as usize
    }

    #[inline(always)]
    pub fn point(&self, i: usize) -> GridPoint {
        let m = self.m as usize;
        Point::new((i % m) as i32, (i / m) as i32)
    }

    /// Points in index order.
    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        (0..self.cells()).map(move |i| self.point(i))
    }

    /// Whether `p` lies on the outer boundary `B(G)`.
    #[inline]
    pub fn is_boundary(&self, p: GridPoint) -> bool {
        self.contains(p)
            && (p.x == 0 || p.y == 0 || p.x as u32 == self.m - 1 || p.y as u32 == self.n - 1)
    }
}

impl fmt::Display for GridDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.m, self.n)
    }
}

/// A `{0,1}`-valued function on a grid, one bit per point at `x + y·m`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridFunction {
    dims: GridDims,
    bits: Box<[u64]>,
}

impl GridFunction {
    pub fn zeros(dims: GridDims) -> Self {
        GridFunction {
            dims,
            bits: vec![0; dims.words()].into_boxed_slice(),
        }
    }

    pub fn ones(dims: GridDims) -> Self {
        let mut f = Self::zeros(dims);
        f.bits.iter_mut().for_each(|w| *w = !0);
        f.clear_padding();
        f
    }

    pub fn from_fn(dims: GridDims, mut value: impl FnMut(GridPoint) -> bool) -> Self {
        let mut f = Self::zeros(dims);
        for i in 0..dims.cells() {
            if value(dims.point(i)) {
                f.bits[i / 64] |= 1 << (i % 64);
            }
        }
        f
    }

    /// Builds from raw words; bits past `m·n` must be clear.
    pub fn from_words(dims: GridDims, words: &[u64]) -> Result<Self> {
        if words.len() != dims.words() {
            return Err(Error::invalid(format!(
                "expected {} words for {dims}, got {}",
                dims.words(),
                words.len()
            )));
        }
        let f = GridFunction {
            dims,
            bits: words.into(),
        };
        let mut g = f.clone();
        g.clear_padding();
        if g != f {
            return Err(Error::invalid("bits set beyond the grid"));
        }
        Ok(f)
    }

    fn clear_padding(&mut self) {
        let r = self.dims.cells() % 64;
        if r != 0 {
            let last = self.bits.len() - 1;
            self.bits[last] &= (1u64 << r) - 1;
        }
    }

    #[inline(always)]
    pub fn dims(&self) -> GridDims {
        self.dims
    }

    #[inline(always)]
    pub fn words(&self) -> &[u64] {
        &self.bits
    }

    #[inline(always)]
    pub fn get_index(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    /// Value at `p`; panics if `p` is off the grid.
    #[inline]
    pub fn get(&self, p: GridPoint) -> bool {
        assert!(self.dims.contains(p), "point {p} outside grid {}", self.dims);
        self.get_index(self.dims.index(p))
    }

    pub fn set(&mut self, p: GridPoint, value: bool) {
        assert!(self.dims.contains(p), "point {p} outside grid {}", self.dims);
        let i = self.dims.index(p);
        if value {
            self.bits[i / 64] |= 1 << (i % 64);
        } else {
            self.bits[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_constant(&self) -> bool {
        let c = self.count_ones();
        c == 0 || c == self.dims.cells() as u64
    }

    /// Points of `M_v(f)` in index order.
    pub fn level_set(&self, v: bool) -> Vec<GridPoint> {
        (0..self.dims.cells())
            .filter(|&i| self.get_index(i) == v)
            .map(|i| self.dims.point(i))
            .collect()
    }

    pub fn complement(&self) -> GridFunction {
        let mut f = self.clone();
        f.bits.iter_mut().for_each(|w| *w = !*w);
        f.clear_padding();
        f
    }
}

impl fmt::Debug for GridFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GridFunction {}", self.dims)?;
        for y in (0..self.dims.n as i32).rev() {
            let row: String = (0..self.dims.m as i32)
                .map(|x| if self.get(Point::new(x, y)) { '1' } else { '.' })
                .collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

/// `f_AB(x)` for an oriented segment `a -> b`, without validation.
#[inline(always)]
pub fn segment_value(a: GridPoint, b: GridPoint, x: GridPoint) -> bool {
    let c = cross(a, b, x);
    if c != 0 {
        return c > 0;
    }
    let da = a.sq_dist(x);
    let db = b.sq_dist(x);
    // a prime segment has no lattice midpoint, so equal distances cannot occur
    debug_assert!(da != db || !crate::geometry::is_prime_segment(a, b).unwrap_or(false));
    da < db
}

fn check_segment(dims: GridDims, seg: &OrientedSegment<i32>) -> Result<()> {
    for p in [seg.head, seg.tail] {
        if !dims.contains(p) {
            return Err(Error::invalid(format!("endpoint {p} outside grid {dims}")));
        }
    }
    if seg.head == seg.tail {
        return Err(Error::invalid("segment endpoints coincide"));
    }
    if !seg.is_prime() {
        return Err(Error::invalid(format!(
            "segment {} -> {} is not prime",
            seg.head, seg.tail
        )));
    }
    Ok(())
}

/// The function defined by an oriented prime segment.
pub fn threshold_from_segment(dims: GridDims, seg: OrientedSegment<i32>) -> Result<GridFunction> {
    check_segment(dims, &seg)?;
    Ok(function_of(dims, seg))
}

#[inline]
pub(crate) fn function_of(dims: GridDims, seg: OrientedSegment<i32>) -> GridFunction {
    GridFunction::from_fn(dims, |x| segment_value(seg.head, seg.tail, x))
}

/// Whether `Conv(M0) ∩ Conv(M1) = ∅`. Constant functions are threshold.
pub fn is_threshold(f: &GridFunction) -> bool {
    let ones = f.level_set(true);
    let zeros = f.level_set(false);
    if ones.is_empty() || zeros.is_empty() {
        return true;
    }
    !hulls_intersect(&convex_hull(&ones), &convex_hull(&zeros))
}

/// All oriented prime segments with both endpoints in the grid, sorted.
pub fn oriented_prime_segments(dims: GridDims) -> Vec<OrientedSegment<i32>> {
    let (m, n) = (dims.m as i32, dims.n as i32);
    let mut out = Vec::new();
    for head in dims.points() {
        for dy in -(n - 1)..n {
            for dx in -(m - 1)..m {
                if gcd_i64(dx as i64, dy as i64) != 1 {
                    continue;
                }
                let tail = Point::new(head.x + dx, head.y + dy);
                if dims.contains(tail) {
                    out.push(OrientedSegment { head, tail });
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Number of oriented prime segments, by summing translates of each
/// primitive direction.
pub fn count_oriented_prime_segments(dims: GridDims) -> u64 {
    let (m, n) = (dims.m as i64, dims.n as i64);
    let mut total = 0u64;
    for dy in -(n - 1)..n {
        for dx in -(m - 1)..m {
            if gcd_i64(dx, dy) == 1 {
                total += ((m - dx.abs()) * (n - dy.abs())) as u64;
            }
        }
    }
    total
}

/// Every threshold function on the grid: the functions of all oriented prime
/// segments plus the two constants, deduplicated and sorted.
pub fn enumerate_threshold(dims: GridDims) -> Result<Vec<GridFunction>> {
    Error::guard("threshold enumeration cells", dims.cells() as u64, THRESHOLD_ENUM_LIMIT)?;
    let mut all: Vec<GridFunction> = oriented_prime_segments(dims)
        .into_par_iter()
        .map(|s| function_of(dims, s))
        .collect();
    all.push(GridFunction::zeros(dims));
    all.push(GridFunction::ones(dims));
    all.par_sort_unstable();
    all.dedup();
    Ok(all)
}

/// Pointwise AND.
pub fn conjunction(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    if f.dims != g.dims {
        return Err(Error::invalid(format!(
            "conjunction of functions on {} and {}",
            f.dims, g.dims
        )));
    }
    let mut h = f.clone();
    h.bits.iter_mut().zip(g.bits.iter()).for_each(|(a, b)| *a &= b);
    Ok(h)
}

/// Whether some boundary point of the grid is mapped to 1.
pub fn has_boundary_true(f: &GridFunction) -> bool {
    let d = f.dims;
    let (m, n) = (d.m as i32, d.n as i32);
    (0..m).any(|x| f.get(Point::new(x, 0)) || f.get(Point::new(x, n - 1)))
        || (0..n).any(|y| f.get(Point::new(0, y)) || f.get(Point::new(m - 1, y)))
}
