use num_integer::Integer;
use num_traits::{NumCast, One, Signed, Zero};

use super::{bounding_rect, cross, is_prime_unchecked, Point};
use crate::error::{Error, Result};
use crate::numtheory::ArithTables;
use crate::scalar::Coord;

/// Non-degenerate triangle with lattice vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeTriangle<T> {
    pub a: Point<T>,
    pub b: Point<T>,
    pub c: Point<T>,
}

impl<T: Coord> LatticeTriangle<T> {
    pub fn new(a: Point<T>, b: Point<T>, c: Point<T>) -> Result<Self> {
        for p in [a, b, c] {
            p.validate()?;
        }
        if cross(a, b, c).is_zero() {
            return Err(Error::invalid("triangle vertices are collinear"));
        }
        Ok(LatticeTriangle { a, b, c })
    }

    /// The other two vertices seen from `apex`, in counterclockwise order.
    fn around(&self, apex: Point<T>) -> Result<(Point<T>, Point<T>)> {
        let (p, q) = if apex == self.a {
            (self.b, self.c)
        } else if apex == self.b {
            (self.c, self.a)
        } else if apex == self.c {
            (self.a, self.b)
        } else {
            return Err(Error::invalid("apex is not a vertex of the triangle"));
        };
        if cross(apex, p, q) > T::Wide::zero() {
            Ok((p, q))
        } else {
            Ok((q, p))
        }
    }

    /// Width plus height of the bounding rectangle.
    pub fn extent(&self) -> u64 {
        let r = bounding_rect(&[self.a, self.b, self.c]).expect("nonempty");
        (r.width.as_i64() + r.height.as_i64()) as u64
    }

    /// Twice the area.
    pub fn doubled_area(&self) -> T::Wide {
        cross(self.a, self.b, self.c).abs()
    }

    fn contains(&self, x: Point<T>) -> bool {
        let z = T::Wide::zero();
        let s1 = cross(self.a, self.b, x);
        let s2 = cross(self.b, self.c, x);
        let s3 = cross(self.c, self.a, x);
        (s1 >= z && s2 >= z && s3 >= z) || (s1 <= z && s2 <= z && s3 <= z)
    }
}

/// Lattice points `X` of the closed triangle with `apex X` a prime segment,
/// by scanning every point of the bounding box.
pub fn prime_points_in_triangle_direct<T: Coord>(
    t: &LatticeTriangle<T>,
    apex: Point<T>,
) -> Result<u64> {
    t.around(apex)?;
    let r = bounding_rect(&[t.a, t.b, t.c])?;
    let f = r.far_corner();
    let mut count = 0;
    let mut y = r.origin.y;
    while y <= f.y {
        let mut x = r.origin.x;
        while x <= f.x {
            let p = Point::new(x, y);
            if p != apex && t.contains(p) && is_prime_unchecked(apex, p) {
                count += 1;
            }
            x = x + T::one();
        }
        y = y + T::one();
    }
    Ok(count)
}

/// `L(T/h)`: lattice points `Y` with `apex + h·Y` in the closed triangle,
/// the apex itself included. Exact per-row floor/ceil bounds.
pub fn lattice_points_in_scaled<T: Coord>(
    t: &LatticeTriangle<T>,
    apex: Point<T>,
    h: u64,
) -> Result<u64> {
    if h == 0 {
        return Err(Error::invalid("scale divisor must be positive"));
    }
    let (p, q) = t.around(apex)?;
    Ok(scaled_count::<T>(apex, p, q, h))
}

fn scaled_count<T: Coord>(apex: Point<T>, p: Point<T>, q: Point<T>, h: u64) -> u64 {
    let w = |v: T| v.widen();
    let h: T::Wide = NumCast::from(h).expect("scale fits the wide type");
    let (px, py) = (w(p.x) - w(apex.x), w(p.y) - w(apex.y));
    let (qx, qy) = (w(q.x) - w(apex.x), w(q.y) - w(apex.y));
    let area2 = px * qy - py * qx;
    let z = T::Wide::zero();
    // alpha*x + beta*y + gamma >= 0 for the scaled point (x, y)
    let constraints = [
        // left of apex -> p
        (-py, px, z),
        // left of q -> apex
        (qy, -qx, z),
        // left of p -> q, after dividing out h where possible
        (-(qy - py) * h, (qx - px) * h, area2),
    ];
    let lo_y = py.min(qy).min(z).div_floor(&h);
    let hi_y = py.max(qy).max(z).div_ceil(&h);
    let mut count = 0u64;
    let mut y = lo_y;
    let one = T::Wide::one();
    while y <= hi_y {
        let mut lo: Option<T::Wide> = None;
        let mut hi: Option<T::Wide> = None;
        let mut empty = false;
        for &(alpha, beta, gamma) in &constraints {
            let rest = beta * y + gamma;
            if alpha > z {
                // x >= ceil(-rest / alpha)
                let b = (-rest).div_ceil(&alpha);
                lo = Some(lo.map_or(b, |l: T::Wide| l.max(b)));
            } else if alpha < z {
                // x <= floor(rest / -alpha)
                let b = rest.div_floor(&(-alpha));
                hi = Some(hi.map_or(b, |u: T::Wide| u.min(b)));
            } else if rest < z {
                empty = true;
            }
        }
        if !empty {
            if let (Some(lo), Some(hi)) = (lo, hi) {
                if hi >= lo {
                    count += NumCast::from(hi - lo + one).unwrap_or(0u64);
                }
            }
        }
        y = y + one;
    }
    count
}

/// The same count as [`prime_points_in_triangle_direct`], by Möbius inversion
/// over the lattice-point counts of the apex-anchored shrunken triangles.
pub fn prime_points_in_triangle_mobius<T: Coord>(
    t: &LatticeTriangle<T>,
    apex: Point<T>,
    tables: &ArithTables,
) -> Result<u64> {
    let (p, q) = t.around(apex)?;
    let extent = t.extent();
    if (tables.limit() as u64) < extent {
        return Err(Error::invalid(format!(
            "sieve limit {} below triangle extent {extent}",
            tables.limit()
        )));
    }
    let mut total: i64 = 0;
    for h in 1..=extent {
        let mu = tables.mu(h as usize);
        if mu == 0 {
            continue;
        }
        // the apex lies in every scaled copy but is never a prime endpoint
        let nonzero = scaled_count::<T>(apex, p, q, h) - 1;
        if nonzero == 0 {
            break;
        }
        total += mu as i64 * nonzero as i64;
    }
    Ok(total as u64)
}
