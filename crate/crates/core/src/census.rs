//! Pairs of prime segments in convex position sorted by their circumscribed
//! axis-parallel rectangle, and the reconstruction of `p(m, n)` from them.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{in_convex_position, Segment};
use crate::numtheory::gcd_i64;
use crate::pairs::prime_segments;
use crate::scalar::{Constants, Real};
use crate::threshold::GridDims;
use crate::{Ext, GridPoint};

/// Default cap on `(u+1)(v+1)` for one census.
pub const DEFAULT_CENSUS_GUARD: u64 = 4096;

/// Class counts of `Z(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ZCensus {
    pub u: u32,
    pub v: u32,
    /// `|Z_i|` for `i` corner endpoints, `i = 0..=4`.
    pub z: [u64; 5],
    /// Two corners, adjacent.
    pub z2a: u64,
    /// Two opposite corners on one segment.
    pub z2b: u64,
    /// Two opposite corners on different segments.
    pub z2c: u64,
    /// One corner; the other end of its segment is interior.
    pub z1a: u64,
    /// One corner; the other end of its segment is on the boundary.
    pub z1b: u64,
}

impl ZCensus {
    pub fn total(&self) -> u64 {
        self.z.iter().sum()
    }

    /// Whether the subclass counts add up to their classes.
    pub fn is_consistent(&self) -> bool {
        self.z[2] == self.z2a + self.z2b + self.z2c && self.z[1] == self.z1a + self.z1b
    }

    /// The census of the transposed rectangle, by relabeling.
    pub fn transposed(&self) -> ZCensus {
        ZCensus {
            u: self.v,
            v: self.u,
            ..*self
        }
    }

    pub const CSV_HEADER: [&'static str; 11] =
        ["u", "v", "z0", "z1a", "z1b", "z2a", "z2b", "z2c", "z3", "z4", "total"];

    pub fn csv_fields(&self) -> [u64; 11] {
        [
            self.u as u64,
            self.v as u64,
            self.z[0],
            self.z1a,
            self.z1b,
            self.z2a,
            self.z2b,
            self.z2c,
            self.z[3],
            self.z[4],
            self.total(),
        ]
    }

    fn add(&mut self, o: &ZCensus) {
        for i in 0..5 {
            self.z[i] += o.z[i];
        }
        self.z2a += o.z2a;
        self.z2b += o.z2b;
        self.z2c += o.z2c;
        self.z1a += o.z1a;
        self.z1b += o.z1b;
    }
}

fn check_census_size(u: u32, v: u32, guard: u64) -> Result<()> {
    if u == 0 || v == 0 {
        return Err(Error::invalid(format!("census {u}x{v}: sides must be positive")));
    }
    Error::guard("census grid cells", (u as u64 + 1) * (v as u64 + 1), guard)
}

/// Which sides of `[0,u] x [0,v]` an endpoint set touches: left, right,
/// bottom, top as bits 0..3.
#[inline(always)]
fn side_mask(p: GridPoint, u: i32, v: i32) -> u8 {
    (p.x == 0) as u8 | ((p.x == u) as u8) << 1 | ((p.y == 0) as u8) << 2 | ((p.y == v) as u8) << 3
}

struct Rect0 {
    u: i32,
    v: i32,
}

impl Rect0 {
    #[inline(always)]
    fn is_corner(&self, p: GridPoint) -> bool {
        (p.x == 0 || p.x == self.u) && (p.y == 0 || p.y == self.v)
    }

    #[inline(always)]
    fn is_interior(&self, p: GridPoint) -> bool {
        p.x > 0 && p.x < self.u && p.y > 0 && p.y < self.v
    }

    fn classify(&self, s: Segment<i32>, t: Segment<i32>, out: &mut ZCensus) {
        let pts = [s.a, s.b, t.a, t.b];
        let corner = pts.map(|p| self.is_corner(p));
        let i = corner.iter().filter(|&&c| c).count();
        out.z[i] += 1;
        match i {
            2 => {
                let idx: Vec<usize> = (0..4).filter(|&k| corner[k]).collect();
                let (p, q) = (pts[idx[0]], pts[idx[1]]);
                if p.x == q.x || p.y == q.y {
                    out.z2a += 1;
                } else if idx[0] / 2 == idx[1] / 2 {
                    out.z2b += 1;
                } else {
                    out.z2c += 1;
                }
            }
            1 => {
                let k = (0..4).find(|&k| corner[k]).expect("one corner");
                let partner = pts[k ^ 1];
                if self.is_interior(partner) {
                    out.z1a += 1;
                } else {
                    out.z1b += 1;
                }
            }
            _ => {}
        }
    }
}

/// Census of `Z(u, v)`: unordered pairs of prime segments in
/// `[0,u] x [0,v]` in convex position whose bounding box is the whole
/// rectangle. Only segment pairs that jointly touch all four sides are
/// examined.
pub fn census(u: u32, v: u32, guard: u64) -> Result<ZCensus> {
    check_census_size(u, v, guard)?;
    let dims = GridDims::new(u + 1, v + 1)?;
    let (ui, vi) = (u as i32, v as i32);
    let mut buckets: Vec<Vec<Segment<i32>>> = vec![Vec::new(); 16];
    for s in prime_segments(dims) {
        let mask = side_mask(s.a, ui, vi) | side_mask(s.b, ui, vi);
        buckets[mask as usize].push(s);
    }
    let rect = Rect0 { u: ui, v: vi };
    let mut tasks: Vec<(usize, usize, usize)> = Vec::new();
    for m1 in 0..16 {
        for m2 in m1..16 {
            if m1 | m2 == 15 {
                for i in 0..buckets[m1].len() {
                    tasks.push((m1, m2, i));
                }
            }
        }
    }
    let zero = || ZCensus::default();
    let mut out = tasks
        .par_iter()
        .fold(zero, |mut acc, &(m1, m2, i)| {
            let s = buckets[m1][i];
            let others = if m1 == m2 {
                &buckets[m2][i + 1..]
            } else {
                &buckets[m2][..]
            };
            for &t in others {
                if in_convex_position(s, t) {
                    rect.classify(s, t, &mut acc);
                }
            }
            acc
        })
        .reduce(zero, |mut a, b| {
            a.add(&b);
            a
        });
    out.u = u;
    out.v = v;
    Ok(out)
}

/// `|Z(u, v)|` by the plain quadratic scan over all segment pairs, without
/// side-mask pruning or classification.
pub fn census_total_direct(u: u32, v: u32, guard: u64) -> Result<u64> {
    check_census_size(u, v, guard)?;
    let dims = GridDims::new(u + 1, v + 1)?;
    let segs = prime_segments(dims);
    let (ui, vi) = (u as i32, v as i32);
    Ok((0..segs.len())
        .into_par_iter()
        .map(|i| {
            let s = segs[i];
            let mut n = 0u64;
            for &t in &segs[i + 1..] {
                let xs = [s.a.x, s.b.x, t.a.x, t.b.x];
                let ys = [s.a.y, s.b.y, t.a.y, t.b.y];
                let full = xs.iter().min() == Some(&0)
                    && xs.iter().max() == Some(&ui)
                    && ys.iter().min() == Some(&0)
                    && ys.iter().max() == Some(&vi);
                if full && in_convex_position(s, t) {
                    n += 1;
                }
            }
            n
        })
        .sum())
}

/// Censuses for every `1 <= u <= max_u`, `1 <= v <= max_v`.
#[derive(Debug, Clone)]
pub struct CensusTable {
    max_u: u32,
    max_v: u32,
    rows: Vec<ZCensus>,
}

impl CensusTable {
    pub fn build(max_u: u32, max_v: u32, guard: u64) -> Result<Self> {
        if max_u > 0 && max_v > 0 {
            check_census_size(max_u, max_v, guard)?;
        }
        let sizes: Vec<(u32, u32)> = (1..=max_v)
            .flat_map(|v| (1..=max_u).map(move |u| (u, v)))
            .collect();
        let rows = sizes
            .par_iter()
            .map(|&(u, v)| census(u, v, guard))
            .collect::<Result<Vec<_>>>()?;
        Ok(CensusTable { max_u, max_v, rows })
    }

    pub fn get(&self, u: u32, v: u32) -> Option<&ZCensus> {
        if u == 0 || v == 0 || u > self.max_u || v > self.max_v {
            return None;
        }
        self.rows
            .get((v as usize - 1) * self.max_u as usize + (u as usize - 1))
    }

    /// Rows in `(v, u)` order.
    pub fn rows(&self) -> &[ZCensus] {
        &self.rows
    }

    /// `Σ (m-u)(n-v) · w(Z(u, v))` over `1 <= u < m`, `1 <= v < n`.
    pub fn weighted_sum(&self, dims: GridDims, w: impl Fn(&ZCensus) -> u64) -> Result<u128> {
        let (m, n) = (dims.m(), dims.n());
        let mut total = 0u128;
        for v in 1..n {
            for u in 1..m {
                let z = self.get(u, v).ok_or_else(|| {
                    Error::invalid(format!("census table lacks {u}x{v} needed for {dims}"))
                })?;
                total += (m - u) as u128 * (n - v) as u128 * w(z) as u128;
            }
        }
        Ok(total)
    }
}

/// `p(m, n)` as `Σ_{u<m} Σ_{v<n} (m-u)(n-v) |Z(u, v)|`.
pub fn reconstruct_p(dims: GridDims, guard: u64) -> Result<u128> {
    let table = CensusTable::build(dims.m() - 1, dims.n() - 1, guard)?;
    table.weighted_sum(dims, ZCensus::total)
}

fn coprime(a: u32, b: u32) -> bool {
    gcd_i64(a as i64, b as i64) == 1
}

/// Exact census against the main terms of the class estimates for one size.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaRow {
    pub census: ZCensus,
    /// `(z3 + z4) / (u v)`.
    pub z34_over_uv: f64,
    /// `z2a / (u²v + uv²)`.
    pub z2a_over_band: f64,
    /// `u²v²/π²` when `u ⊥ v`, else 0.
    pub z2b_main: f64,
    /// `42 u²v²/π⁴`.
    pub z2c_main: f64,
    /// `72 u²v²/π⁴`.
    pub z1a_main: f64,
    /// The double-sum main term for `z1b`.
    pub z1b_main: f64,
    /// `72 u²v²/π⁴`.
    pub z0_main: f64,
    /// `|z1b - z1b_main| / (u²v + uv²)`.
    pub z1b_band: f64,
}

impl LemmaRow {
    pub fn ratio(exact: u64, main: f64) -> Option<f64> {
        (main != 0.0).then(|| exact as f64 / main)
    }

    pub fn z2b_ratio(&self) -> Option<f64> {
        Self::ratio(self.census.z2b, self.z2b_main)
    }

    pub fn z2c_ratio(&self) -> Option<f64> {
        Self::ratio(self.census.z2c, self.z2c_main)
    }

    pub fn z1a_ratio(&self) -> Option<f64> {
        Self::ratio(self.census.z1a, self.z1a_main)
    }

    pub fn z1b_ratio(&self) -> Option<f64> {
        Self::ratio(self.census.z1b, self.z1b_main)
    }

    pub fn z0_ratio(&self) -> Option<f64> {
        Self::ratio(self.census.z[0], self.z0_main)
    }
}

/// The integer sums inside the `z1b` main term:
/// `(Σ_{b ≤ u, b ⊥ v} (2u - b), Σ_{c ≤ v, c ⊥ u} (2v - c))`.
pub fn z1b_sums(u: u32, v: u32) -> (u64, u64) {
    let first = (1..=u)
        .filter(|&b| coprime(b, v))
        .map(|b| (2 * u - b) as u64)
        .sum();
    let second = (1..=v)
        .filter(|&c| coprime(c, u))
        .map(|c| (2 * v - c) as u64)
        .sum();
    (first, second)
}

/// Main term of the `z1b` estimate, in `R`.
pub fn z1b_main<R: Real>(u: u32, v: u32) -> R {
    let c = Constants::<R>::new();
    let (s1, s2) = z1b_sums(u, v);
    let (u2, v2) = (R::from_u64(u as u64 * u as u64), R::from_u64(v as u64 * v as u64));
    c.six_over_pi2 * (v2 * R::from_u64(s1) + u2 * R::from_u64(s2))
}

fn lemma_row(z: ZCensus) -> LemmaRow {
    let c = Constants::<Ext>::new();
    let (u, v) = (z.u as u64, z.v as u64);
    let uv2 = Ext::from_u64(u * u * v * v);
    let band = (u * u * v + u * v * v) as f64;
    let z1b_main: Ext = z1b_main(z.u, z.v);
    let z1b_main = z1b_main.to_f64();
    LemmaRow {
        census: z,
        z34_over_uv: (z.z[3] + z.z[4]) as f64 / (u * v) as f64,
        z2a_over_band: z.z2a as f64 / band,
        z2b_main: if coprime(z.u, z.v) {
            (c.inv_pi2 * uv2).to_f64()
        } else {
            0.0
        },
        z2c_main: (Ext::from_u64(42) * c.inv_pi4 * uv2).to_f64(),
        z1a_main: (Ext::from_u64(72) * c.inv_pi4 * uv2).to_f64(),
        z1b_main,
        z0_main: (Ext::from_u64(72) * c.inv_pi4 * uv2).to_f64(),
        z1b_band: (z.z1b as f64 - z1b_main).abs() / band,
    }
}

/// Census of each size with the predicted main term of every class.
pub fn lemma_constant_report(sizes: &[(u32, u32)], guard: u64) -> Result<Vec<LemmaRow>> {
    sizes
        .par_iter()
        .map(|&(u, v)| census(u, v, guard).map(lemma_row))
        .collect()
}

/// Weighted class sums against their `m⁴n⁴/π⁴` coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub dims: GridDims,
    /// `Σ (m-u)(n-v) z2b`, coefficient `1/24`.
    pub opposite_same: u128,
    /// `Σ (m-u)(n-v) (z2c + z1a + z0)`, coefficient `31/24`.
    pub dominant: u128,
    /// `Σ (m-u)(n-v) z1b`, coefficient `3/4`.
    pub boundary_one: u128,
    pub opposite_same_ratio: f64,
    pub dominant_ratio: f64,
    pub boundary_one_ratio: f64,
}

/// The three weighted sums for `dims`, using a census table that covers it.
pub fn aggregate_from_table(table: &CensusTable, dims: GridDims) -> Result<AggregateRow> {
    let c = Constants::<Ext>::new();
    let (m, n) = (dims.m() as u64, dims.n() as u64);
    let mn4 = Ext::from_u64(m * n).powi(4);
    let main = |num: u64, den: u64| c.over_pi4(num, den) * mn4;
    let ratio = |exact: u128, main: Ext| {
        let e = Ext::from_u64((exact >> 64) as u64) * Ext::from_f64(18446744073709551616.0)
            + Ext::from_u64(exact as u64);
        (e / main).to_f64()
    };
    let opposite_same = table.weighted_sum(dims, |z| z.z2b)?;
    let dominant = table.weighted_sum(dims, |z| z.z2c + z.z1a + z.z[0])?;
    let boundary_one = table.weighted_sum(dims, |z| z.z1b)?;
    Ok(AggregateRow {
        dims,
        opposite_same,
        dominant,
        boundary_one,
        opposite_same_ratio: ratio(opposite_same, main(1, 24)),
        dominant_ratio: ratio(dominant, main(31, 24)),
        boundary_one_ratio: ratio(boundary_one, main(3, 4)),
    })
}

pub fn aggregate_class_sums(dims: GridDims, guard: u64) -> Result<AggregateRow> {
    let table = CensusTable::build(dims.m() - 1, dims.n() - 1, guard)?;
    aggregate_from_table(&table, dims)
}

/// `1/24 + 31/24 + 3/4` in exact rationals.
pub fn aggregate_coefficient_sum() -> BigRational {
    let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    r(1, 24) + r(31, 24) + r(3, 4)
}

/// The coefficient sum as a reduced `(numerator, denominator)`.
pub fn aggregate_coefficient_parts() -> (i64, i64) {
    let s = aggregate_coefficient_sum();
    (
        s.numer().to_i64().unwrap_or(0),
        s.denom().to_i64().unwrap_or(0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square() {
        let z = census(1, 1, DEFAULT_CENSUS_GUARD).unwrap();
        assert_eq!(z.total(), 2);
        assert_eq!(z.z[4], 2);
    }

    #[test]
    fn shared_factor_has_no_opposite_same() {
        assert_eq!(census(2, 2, DEFAULT_CENSUS_GUARD).unwrap().z2b, 0);
        assert_eq!(census(4, 6, DEFAULT_CENSUS_GUARD).unwrap().z2b, 0);
    }

    #[test]
    fn reconstruction_small() {
        assert_eq!(
            reconstruct_p(GridDims::new(2, 2).unwrap(), DEFAULT_CENSUS_GUARD).unwrap(),
            2
        );
        assert_eq!(
            reconstruct_p(GridDims::new(5, 1).unwrap(), DEFAULT_CENSUS_GUARD).unwrap(),
            0
        );
    }

    #[test]
    fn guard_and_bad_sizes() {
        assert!(matches!(census(64, 64, 4096), Err(Error::ResourceLimit { .. })));
        assert!(census(0, 3, 4096).is_err());
    }

    #[test]
    fn coefficient_identity() {
        assert_eq!(aggregate_coefficient_parts(), (25, 12));
    }

    #[test]
    fn z1b_sums_small() {
        // u = 2, v = 3: b in {1, 2} both ⊥ 3 -> 3 + 2; c in {1, 3} ⊥ 2 -> 5 + 3
        assert_eq!(z1b_sums(2, 3), (5, 8));
    }
}
