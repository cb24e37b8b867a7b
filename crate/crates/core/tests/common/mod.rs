//! Test oracles written from the definitions, sharing no code with the
//! library beyond its point type.
#![allow(dead_code)]

use gridthresh::{GridPoint, Point};

pub fn p(x: i32, y: i32) -> GridPoint {
    Point::new(x, y)
}

pub fn det(a: GridPoint, b: GridPoint, c: GridPoint) -> i64 {
    let (bx, by) = ((b.x - a.x) as i64, (b.y - a.y) as i64);
    let (cx, cy) = ((c.x - a.x) as i64, (c.y - a.y) as i64);
    bx * cy - by * cx
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn grid(m: i32, n: i32) -> Vec<GridPoint> {
    (0..n).flat_map(|y| (0..m).map(move |x| p(x, y))).collect()
}

/// Value of the function of the oriented segment `a -> b` at `x`.
pub fn f_seg(a: GridPoint, b: GridPoint, x: GridPoint) -> bool {
    let d = det(a, b, x);
    if d != 0 {
        return d > 0;
    }
    let sq = |u: GridPoint, v: GridPoint| {
        let (dx, dy) = ((u.x - v.x) as i64, (u.y - v.y) as i64);
        dx * dx + dy * dy
    };
    sq(a, x) < sq(b, x)
}

/// Oriented prime segments as `(head, tail)`.
pub fn oriented_segments(m: i32, n: i32) -> Vec<(GridPoint, GridPoint)> {
    let pts = grid(m, n);
    let mut out = Vec::new();
    for &a in &pts {
        for &b in &pts {
            if a != b && gcd((a.x - b.x) as i64, (a.y - b.y) as i64) == 1 {
                out.push((a, b));
            }
        }
    }
    out
}

/// Bit mask of the function of `a -> b`, bit `x + y·m`.
pub fn seg_mask(m: i32, n: i32, a: GridPoint, b: GridPoint) -> u64 {
    grid(m, n)
        .iter()
        .enumerate()
        .filter(|(_, &x)| f_seg(a, b, x))
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

/// Strict linear separability of grid functions with at most 64 cells.
///
/// A strictly separable pair of point sets admits a separating normal
/// strictly inside the open cone of separating normals. For non-collinear
/// point sets the boundary rays of that cone are perpendicular to
/// differences of grid points, so the sum of two neighbouring boundary
/// normals is an integer direction with `|wx| <= 2(n-1)` and
/// `|wy| <= 2(m-1)`; collinear grids need only an axis direction. Trying
/// every `w` in `[-2n, 2n] x [-2m, 2m]` therefore decides separability.
pub struct SeparabilityOracle {
    /// Per direction: cell indices sorted by `w·x`, with the projections.
    orders: Vec<Vec<(i64, u8)>>,
    cells: usize,
}

impl SeparabilityOracle {
    pub fn new(m: i32, n: i32) -> Self {
        let pts = grid(m, n);
        assert!(pts.len() <= 64);
        let mut orders = Vec::new();
        for wy in -2 * m..=2 * m {
            for wx in -2 * n..=2 * n {
                if wx == 0 && wy == 0 {
                    continue;
                }
                let mut o: Vec<(i64, u8)> = pts
                    .iter()
                    .enumerate()
                    .map(|(i, q)| ((wx * q.x + wy * q.y) as i64, i as u8))
                    .collect();
                o.sort_unstable();
                orders.push(o);
            }
        }
        SeparabilityOracle {
            orders,
            cells: pts.len(),
        }
    }

    /// Whether some `w, θ` has `w·x > θ` on the ones and `w·x < θ` on the zeros.
    pub fn separable(&self, mask: u64) -> bool {
        let full = if self.cells == 64 { u64::MAX } else { (1u64 << self.cells) - 1 };
        if mask == 0 || mask == full {
            return true;
        }
        'dir: for o in &self.orders {
            let mut max_zero = i64::MIN;
            let mut min_one: Option<i64> = None;
            for &(v, i) in o {
                if mask >> i & 1 == 1 {
                    if min_one.is_none() {
                        if v <= max_zero {
                            continue 'dir;
                        }
                        min_one = Some(v);
                    }
                } else if min_one.is_some() {
                    continue 'dir;
                } else {
                    max_zero = v;
                }
            }
            return true;
        }
        false
    }
}

/// Every threshold function of the grid as a mask, by filtering all `2^(mn)`.
pub fn brute_force_threshold(m: i32, n: i32) -> Vec<u64> {
    let cells = (m * n) as u32;
    assert!(cells <= 20);
    let oracle = SeparabilityOracle::new(m, n);
    (0..1u64 << cells).filter(|&f| oracle.separable(f)).collect()
}

/// Each segment's endpoints take the value 1 under the other's function.
pub fn proper_oracle(s: (GridPoint, GridPoint), t: (GridPoint, GridPoint)) -> bool {
    f_seg(t.0, t.1, s.0) && f_seg(t.0, t.1, s.1) && f_seg(s.0, s.1, t.0) && f_seg(s.0, s.1, t.1)
}

/// Unordered pairs of distinct oriented prime segments forming a proper pair.
pub fn q_oracle(m: i32, n: i32) -> u64 {
    let segs = oriented_segments(m, n);
    let mut count = 0;
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            count += proper_oracle(segs[i], segs[j]) as u64;
        }
    }
    count
}

/// The endpoints, walked as `a b c d` or `a b d c`, form a strictly convex
/// quadrilateral.
pub fn convex_position_oracle(a: GridPoint, b: GridPoint, c: GridPoint, d: GridPoint) -> bool {
    let strictly_convex = |q: [GridPoint; 4]| {
        let t: Vec<i64> = (0..4).map(|i| det(q[i], q[(i + 1) % 4], q[(i + 2) % 4])).collect();
        t.iter().all(|&v| v > 0) || t.iter().all(|&v| v < 0)
    };
    strictly_convex([a, b, c, d]) || strictly_convex([a, b, d, c])
}

/// Unordered pairs of prime segments in convex position.
pub fn p_oracle(m: i32, n: i32) -> u64 {
    let segs: Vec<_> = oriented_segments(m, n)
        .into_iter()
        .filter(|(a, b)| a < b)
        .collect();
    let mut count = 0;
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let ((a, b), (c, d)) = (segs[i], segs[j]);
            count += convex_position_oracle(a, b, c, d) as u64;
        }
    }
    count
}

/// Distinct conjunctions `f & g` over all pairs of threshold masks.
pub fn t2_oracle(m: i32, n: i32) -> u64 {
    let t = brute_force_threshold(m, n);
    let mut all = std::collections::HashSet::new();
    for &f in &t {
        for &g in &t {
            all.insert(f & g);
        }
    }
    all.len() as u64
}
