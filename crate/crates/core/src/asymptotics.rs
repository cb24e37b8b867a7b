//! Predicted main terms, convergence tables and the k-threshold bounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::census::CensusTable;
use crate::error::{Error, Result};
use crate::pairs::{count_proper_pairs, count_two_threshold, PROPER_PAIR_LIMIT, TWO_THRESHOLD_LIMIT};
use crate::scalar::{Constants, Real};
use crate::threshold::{count_oriented_prime_segments, GridDims};
use crate::Ext;

/// Main terms `6/π² m²n²` for `t` and `25/(12π⁴) m⁴n⁴` for `p`.
pub fn predict<R: Real>(m: u32, n: u32) -> Result<(R, R)> {
    if m == 0 || n == 0 {
        return Err(Error::invalid("predict needs m, n >= 1"));
    }
    let c = Constants::<R>::new();
    let mn = R::from_u64(m as u64 * n as u64);
    let t = c.six_over_pi2 * mn.powi(2);
    let p = c.over_pi4(25, 12) * mn.powi(4);
    Ok((t, p))
}

/// Which exact counts a convergence table computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableLimits {
    /// Cap on `(u+1)(v+1)` for each census behind `p`.
    pub census_guard: u64,
    /// Cap on `m·n` for the exhaustive `q`.
    pub q_cells: u64,
    /// Cap on `m·n` for the exhaustive `t₂`.
    pub t2_cells: u64,
}

impl Default for TableLimits {
    fn default() -> Self {
        TableLimits {
            census_guard: crate::census::DEFAULT_CENSUS_GUARD,
            q_cells: PROPER_PAIR_LIMIT,
            t2_cells: TWO_THRESHOLD_LIMIT,
        }
    }
}

/// One size of a convergence table. Exact fields are absent when a guard
/// precludes computing them; ratios exist only next to exact values.
#[derive(Debug, Clone, PartialEq)]
pub struct CountRow {
    pub m: u32,
    pub n: u32,
    /// `t`, from the segment bijection: oriented prime segments plus two.
    pub t: u64,
    pub q: Option<u64>,
    pub p: Option<u128>,
    pub t2: Option<u64>,
    pub predicted_t: f64,
    pub predicted_p: f64,
    pub t_ratio: f64,
    pub p_ratio: Option<f64>,
    pub t2_over_q: Option<f64>,
    pub t2_over_p: Option<f64>,
}

/// Exact counts and ratios for each size in `sizes` (square grids `n x n`).
pub fn convergence_table(sizes: &[(u32, u32)], limits: TableLimits) -> Result<Vec<CountRow>> {
    if sizes.is_empty() {
        return Err(Error::invalid("convergence table needs at least one size"));
    }
    let max_u = sizes.iter().map(|s| s.0).max().unwrap_or(1).saturating_sub(1);
    let max_v = sizes.iter().map(|s| s.1).max().unwrap_or(1).saturating_sub(1);
    let table = match CensusTable::build(max_u, max_v, limits.census_guard) {
        Ok(t) => Some(t),
        Err(Error::ResourceLimit { .. }) => None,
        Err(e) => return Err(e),
    };
    let mut rows = Vec::with_capacity(sizes.len());
    for &(m, n) in sizes {
        let dims = GridDims::new(m, n)?;
        let cells = dims.cells() as u64;
        let (pt, pp) = predict::<Ext>(m, n)?;
        let t = count_oriented_prime_segments(dims) + 2;
        let p = match &table {
            Some(tab) => Some(tab.weighted_sum(dims, |z| z.total())?),
            None => {
                // the largest census was refused; try this size on its own
                match CensusTable::build(m - 1, n - 1, limits.census_guard) {
                    Ok(tab) => Some(tab.weighted_sum(dims, |z| z.total())?),
                    Err(Error::ResourceLimit { .. }) => None,
                    Err(e) => return Err(e),
                }
            }
        };
        let q = if cells <= limits.q_cells.min(PROPER_PAIR_LIMIT) {
            Some(count_proper_pairs(dims)?)
        } else {
            None
        };
        let t2 = if cells <= limits.t2_cells.min(TWO_THRESHOLD_LIMIT) {
            Some(count_two_threshold(dims)?)
        } else {
            None
        };
        let (pt, pp) = (pt.to_f64(), pp.to_f64());
        let div = |a: u64, b: u64| (b != 0).then(|| a as f64 / b as f64);
        rows.push(CountRow {
            m,
            n,
            t,
            q,
            p,
            t2,
            predicted_t: pt,
            predicted_p: pp,
            t_ratio: t as f64 / pt,
            p_ratio: p.map(|p| p as f64 / pp),
            t2_over_q: t2.zip(q).and_then(|(a, b)| div(a, b)),
            t2_over_p: t2.zip(p).and_then(|(a, b)| div(a, b as u64)),
        });
    }
    Ok(rows)
}

/// Square sizes used when no sweep is given.
pub fn default_sweep(max_n: u32) -> Vec<(u32, u32)> {
    [2u32, 4, 6, 8, 12, 16]
        .into_iter()
        .chain((24..=max_n).step_by(8))
        .filter(|&n| n <= max_n)
        .map(|n| (n, n))
        .collect()
}

/// Main-term coefficients of the two upper bounds on k-threshold functions,
/// both multiplying `π^(-2k) m^(2k) n^(2k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KBounds {
    pub k: u32,
    /// `6^k / k!`.
    pub trivial: BigRational,
    /// `5^k / (12^(k/2) (k/2)!)` for even `k`,
    /// `6·5^(k-1) / (12^⌊k/2⌋ ⌊k/2⌋! k)` for odd `k`.
    pub improved: BigRational,
    pub improved_is_smaller: bool,
}

impl KBounds {
    /// `improved / trivial` as a float.
    pub fn improved_over_trivial(&self) -> f64 {
        (&self.improved / &self.trivial).to_f64().unwrap_or(f64::NAN)
    }

    /// `coefficient · π^(-2k) (mn)^(2k)` as a float, for display.
    pub fn main_terms(&self, m: u32, n: u32) -> (f64, f64) {
        let scale = {
            let c = Constants::<Ext>::new();
            let mn = Ext::from_u64(m as u64 * n as u64);
            (mn * mn * c.inv_pi2).powi(self.k).to_f64()
        };
        let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN) * scale;
        (f(&self.trivial), f(&self.improved))
    }
}

fn factorial(k: u32) -> BigInt {
    (1..=k as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn pow(base: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), e as usize)
}

/// Exact coefficients of both bounds for `k >= 1`.
pub fn k_threshold_bounds(k: u32) -> Result<KBounds> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let trivial = BigRational::new(pow(6, k), factorial(k));
    let h = k / 2;
    let improved = if k % 2 == 0 {
        BigRational::new(pow(5, k), pow(12, h) * factorial(h))
    } else {
        BigRational::new(
            pow(5, k - 1) * BigInt::from(6),
            pow(12, h) * factorial(h) * BigInt::from(k),
        )
    };
    let improved_is_smaller = improved < trivial;
    Ok(KBounds {
        k,
        trivial,
        improved,
        improved_is_smaller,
    })
}
