//! Exact integer predicates on lattice points and segments.

mod triangle;

pub use triangle::{
    lattice_points_in_scaled, prime_points_in_triangle_direct, prime_points_in_triangle_mobius,
    LatticeTriangle,
};

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numtheory::gcd_i64;
use crate::scalar::Coord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Coord> Point<T> {
    #[inline(always)]
    pub const fn new(x: T, y: T) -> Self {
        Point { x, y }
    }

    /// Builds a point, rejecting coordinates beyond `T::MAX_ABS`.
    pub fn checked(x: T, y: T) -> Result<Self> {
        let p = Point { x, y };
        p.validate()?;
        Ok(p)
    }

    pub fn in_bounds(&self) -> bool {
        self.x.abs() <= T::MAX_ABS && self.y.abs() <= T::MAX_ABS
    }

    pub fn validate(&self) -> Result<()> {
        if self.in_bounds() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "point ({:?}, {:?}) outside coordinate bound {:?}",
                self.x,
                self.y,
                T::MAX_ABS
            )))
        }
    }

    #[inline(always)]
    pub fn sq_dist(self, other: Self) -> T::Wide {
        let dx = self.x.widen() - other.x.widen();
        let dy = self.y.widen() - other.y.widen();
        dx * dx + dy * dy
    }
}

impl<T: fmt::Display> fmt::Display for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    Counterclockwise,
    Collinear,
}

impl Orientation {
    #[inline(always)]
    fn from_sign<W: Signed + Zero + PartialOrd>(v: W) -> Self {
        if v > W::zero() {
            Orientation::Counterclockwise
        } else if v < W::zero() {
            Orientation::Clockwise
        } else {
            Orientation::Collinear
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::Clockwise => Orientation::Counterclockwise,
            Orientation::Counterclockwise => Orientation::Clockwise,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

/// `(b - a) x (c - a)` in the wide type; positive when `a, b, c` turn left.
#[inline(always)]
pub fn cross<T: Coord>(a: Point<T>, b: Point<T>, c: Point<T>) -> T::Wide {
    let (ax, ay) = (a.x.widen(), a.y.widen());
    (b.x.widen() - ax) * (c.y.widen() - ay) - (b.y.widen() - ay) * (c.x.widen() - ax)
}

/// Orientation without bound checks; callers guarantee in-bound coordinates.
#[inline(always)]
pub fn orient<T: Coord>(a: Point<T>, b: Point<T>, c: Point<T>) -> Orientation {
    Orientation::from_sign(cross(a, b, c))
}

/// Orientation of the triangle `a, b, c`.
pub fn orientation<T: Coord>(a: Point<T>, b: Point<T>, c: Point<T>) -> Result<Orientation> {
    a.validate()?;
    b.validate()?;
    c.validate()?;
    Ok(orient(a, b, c))
}

/// Whether `p` lies on the closed segment `ab` (which may be a single point).
#[inline]
pub fn on_segment<T: Coord>(p: Point<T>, a: Point<T>, b: Point<T>) -> bool {
    cross(a, b, p).is_zero()
        && p.x >= a.x.min(b.x)
        && p.x <= a.x.max(b.x)
        && p.y >= a.y.min(b.y)
        && p.y <= a.y.max(b.y)
}

/// Whether the closed segments `ab` and `cd` share a point.
pub fn segments_intersect<T: Coord>(a: Point<T>, b: Point<T>, c: Point<T>, d: Point<T>) -> bool {
    let d1 = cross(a, b, c).signum();
    let d2 = cross(a, b, d).signum();
    let d3 = cross(c, d, a).signum();
    let d4 = cross(c, d, b).signum();
    let zero = T::Wide::zero();
    if d1 * d2 < zero && d3 * d4 < zero {
        return true;
    }
    on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

/// Whether the segment between two distinct lattice points has no other
/// lattice point on it.
pub fn is_prime_segment<T: Coord>(a: Point<T>, b: Point<T>) -> Result<bool> {
    if a == b {
        return Err(Error::invalid("segment endpoints coincide"));
    }
    a.validate()?;
    b.validate()?;
    Ok(is_prime_unchecked(a, b))
}

#[inline(always)]
pub(crate) fn is_prime_unchecked<T: Coord>(a: Point<T>, b: Point<T>) -> bool {
    gcd_i64(b.x.as_i64() - a.x.as_i64(), b.y.as_i64() - a.y.as_i64()) == 1
}

/// Directed segment; `head` is the true side and `tail` the false side of the
/// threshold function it defines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedSegment<T> {
    pub head: Point<T>,
    pub tail: Point<T>,
}

impl<T: Coord> OrientedSegment<T> {
    pub fn new(head: Point<T>, tail: Point<T>) -> Result<Self> {
        if head == tail {
            return Err(Error::invalid("oriented segment endpoints coincide"));
        }
        Ok(OrientedSegment { head, tail })
    }

    pub fn reversed(self) -> Self {
        OrientedSegment {
            head: self.tail,
            tail: self.head,
        }
    }

    pub fn is_prime(&self) -> bool {
        is_prime_unchecked(self.head, self.tail)
    }

    pub fn unoriented(self) -> Segment<T> {
        Segment::new(self.head, self.tail)
    }
}

/// Unordered segment, stored with endpoints in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment<T> {
    pub a: Point<T>,
    pub b: Point<T>,
}

impl<T: Coord> Segment<T> {
    pub fn new(p: Point<T>, q: Point<T>) -> Self {
        if p <= q {
            Segment { a: p, b: q }
        } else {
            Segment { a: q, b: p }
        }
    }
}

/// Whether two segments are opposite sides of a convex quadrilateral: neither
/// segment meets the supporting line of the other.
pub fn in_convex_position<T: Coord>(s1: Segment<T>, s2: Segment<T>) -> bool {
    let (a, b, c, d) = (s1.a, s1.b, s2.a, s2.b);
    if a == b || c == d {
        return false;
    }
    line_misses_segment(a, b, c, d) && line_misses_segment(c, d, a, b)
}

/// `ℓ(ab) ∩ cd = ∅`: both endpoints strictly on the same side of the line.
#[inline(always)]
fn line_misses_segment<T: Coord>(a: Point<T>, b: Point<T>, c: Point<T>, d: Point<T>) -> bool {
    let sc = cross(a, b, c).signum();
    let sd = cross(a, b, d).signum();
    !sc.is_zero() && sc == sd
}

/// General position plus `abd ~ abc` and `cda ~ cdb` in orientation.
///
/// This is also the membership test for the admissible region of `d` with
/// respect to `a, b, c`.
pub fn orientation_equivalence_check<T: Coord>(
    a: Point<T>,
    b: Point<T>,
    c: Point<T>,
    d: Point<T>,
) -> bool {
    let abc = orient(a, b, c);
    let abd = orient(a, b, d);
    let cda = orient(c, d, a);
    let cdb = orient(c, d, b);
    // the four triples cover every 3-subset of {a, b, c, d}
    let general = [abc, abd, cda, cdb]
        .iter()
        .all(|&o| o != Orientation::Collinear);
    general && abd == abc && cda == cdb
}

/// Axis-parallel bounding box; `width`/`height` may be zero for degenerate
/// inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rect<T> {
    pub origin: Point<T>,
    pub width: T,
    pub height: T,
}

impl<T: Coord> Rect<T> {
    pub fn new(origin: Point<T>, width: T, height: T) -> Result<Self> {
        if width < T::one() || height < T::one() {
            return Err(Error::invalid("rectangle sides must be at least 1"));
        }
        Ok(Rect {
            origin,
            width,
            height,
        })
    }

    pub fn is_degenerate(&self) -> bool {
        self.width.is_zero() || self.height.is_zero()
    }

    pub fn far_corner(&self) -> Point<T> {
        Point::new(self.origin.x + self.width, self.origin.y + self.height)
    }

    /// Corners counterclockwise from the origin.
    pub fn corners(&self) -> [Point<T>; 4] {
        let o = self.origin;
        let f = self.far_corner();
        [o, Point::new(f.x, o.y), f, Point::new(o.x, f.y)]
    }

    pub fn is_corner(&self, p: Point<T>) -> bool {
        let f = self.far_corner();
        (p.x == self.origin.x || p.x == f.x) && (p.y == self.origin.y || p.y == f.y)
    }

    pub fn contains(&self, p: Point<T>) -> bool {
        let f = self.far_corner();
        p.x >= self.origin.x && p.x <= f.x && p.y >= self.origin.y && p.y <= f.y
    }

    /// Strictly inside.
    pub fn is_interior(&self, p: Point<T>) -> bool {
        let f = self.far_corner();
        p.x > self.origin.x && p.x < f.x && p.y > self.origin.y && p.y < f.y
    }
}

/// Smallest axis-parallel rectangle containing `points`.
pub fn bounding_rect<T: Coord>(points: &[Point<T>]) -> Result<Rect<T>> {
    let first = *points
        .first()
        .ok_or_else(|| Error::invalid("bounding_rect of an empty point set"))?;
    let (mut lo, mut hi) = (first, first);
    for p in &points[1..] {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    Ok(Rect {
        origin: lo,
        width: hi.x - lo.x,
        height: hi.y - lo.y,
    })
}

/// Number of the four endpoints sitting on corners of `r`, which must be their
/// bounding rectangle.
pub fn corner_count<T: Coord>(s1: Segment<T>, s2: Segment<T>, r: &Rect<T>) -> Result<u8> {
    let pts = [s1.a, s1.b, s2.a, s2.b];
    if r.is_degenerate() {
        return Err(Error::invalid("corner_count on a degenerate rectangle"));
    }
    if bounding_rect(&pts)? != *r {
        return Err(Error::invalid(
            "rectangle is not the bounding rectangle of the endpoints",
        ));
    }
    Ok(pts.iter().filter(|&&p| r.is_corner(p)).count() as u8)
}

/// Convex hull by monotone chain: counterclockwise, strictly convex vertices
/// only. Returns 0, 1 or 2 points for degenerate inputs.
pub fn convex_hull<T: Coord>(points: &[Point<T>]) -> Vec<Point<T>> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut hull: Vec<Point<T>> = Vec::with_capacity(pts.len() + 1);
    let zero = T::Wide::zero();
    for &p in pts.iter() {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= zero {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= zero
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Whether `p` is in the closed convex polygon `hull` (counterclockwise,
/// at least three vertices).
pub fn in_convex_polygon<T: Coord>(hull: &[Point<T>], p: Point<T>) -> bool {
    let n = hull.len();
    debug_assert!(n >= 3);
    (0..n).all(|i| cross(hull[i], hull[(i + 1) % n], p) >= T::Wide::zero())
}

/// Whether the convex hulls of two (hull-reduced) point sets intersect.
/// Handles hulls of 1, 2 or more vertices; empty hulls never intersect.
pub fn hulls_intersect<T: Coord>(h1: &[Point<T>], h2: &[Point<T>]) -> bool {
    if h1.is_empty() || h2.is_empty() {
        return false;
    }
    let edges = |h: &[Point<T>]| -> Vec<(Point<T>, Point<T>)> {
        match h.len() {
            1 => vec![(h[0], h[0])],
            2 => vec![(h[0], h[1])],
            n => (0..n).map(|i| (h[i], h[(i + 1) % n])).collect(),
        }
    };
    let e1 = edges(h1);
    let e2 = edges(h2);
    for &(a, b) in &e1 {
        for &(c, d) in &e2 {
            if segments_intersect(a, b, c, d) {
                return true;
            }
        }
    }
    // no boundary contact: the only remaining overlap is full containment
    (h2.len() >= 3 && in_convex_polygon(h2, h1[0])) || (h1.len() >= 3 && in_convex_polygon(h1, h2[0]))
}

/// Squared distance from `p` to `ℓ(cd)` is at most one.
#[inline]
pub fn within_unit_of_line<T: Coord>(p: Point<T>, c: Point<T>, d: Point<T>) -> bool {
    let cr = cross(c, d, p);
    cr * cr <= c.sq_dist(d)
}
