//! Scalar abstractions.
//!
//! Exact geometry is generic over a signed integer coordinate type whose
//! cross products are evaluated in a wider type ([`Coord`]). Real-valued
//! checks (harmonic sums, zeta partial sums, asymptotic main terms) are
//! generic over [`Real`], implemented for `f32`, `f64` and the double-double
//! [`qd::Quad`].

use std::fmt::Debug;
use std::hash::Hash;
use std::ops::Neg;

use num_integer::Integer;
use num_traits::{PrimInt, Signed};
use qd::Quad;

/// Signed integer coordinate with a widened type for exact 2x2 determinants.
pub trait Coord: PrimInt + Signed + Hash + Debug + Default + Send + Sync + 'static {
    /// Type that holds any cross product of in-bound coordinates exactly.
    type Wide: PrimInt + Signed + Integer + Hash + Debug + Send + Sync;

    /// Largest admissible absolute coordinate value.
    const MAX_ABS: Self;

    fn widen(self) -> Self::Wide;

    fn from_i64(v: i64) -> Option<Self>;

    fn as_i64(self) -> i64;
}

impl Coord for i32 {
    type Wide = i64;
    const MAX_ABS: i32 = 1 << 20;

    #[inline(always)]
    fn widen(self) -> i64 {
        self as i64
    }

    fn from_i64(v: i64) -> Option<i32> {
        i32::try_from(v).ok()
    }

    #[inline(always)]
    fn as_i64(self) -> i64 {
        self as i64
    }
}

impl Coord for i64 {
    type Wide = i128;
    const MAX_ABS: i64 = 1 << 60;

    #[inline(always)]
    fn widen(self) -> i128 {
        self as i128
    }

    fn from_i64(v: i64) -> Option<i64> {
        Some(v)
    }

    #[inline(always)]
    fn as_i64(self) -> i64 {
        self
    }
}

/// Real scalar used for the floating-point side of the crate.
pub trait Real: num_traits::Num + Neg<Output = Self> + Copy + PartialOrd + Debug + Send + Sync {
    fn from_f64(v: f64) -> Self;

    /// Exact for every `u64` representable in the significand.
    fn from_u64(v: u64) -> Self;

    fn to_f64(self) -> f64;

    fn pi() -> Self;

    /// Euler-Mascheroni constant.
    fn euler_gamma() -> Self;

    fn ln(self) -> Self;

    fn abs(self) -> Self;

    /// Significand bits of the representation.
    fn significand_bits() -> u32;

    fn from_i64(v: i64) -> Self {
        let r = Self::from_u64(v.unsigned_abs());
        if v < 0 {
            -r
        } else {
            r
        }
    }

    fn powi(self, exp: u32) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

const EULER_GAMMA_HI: f64 = 0.5772156649015329;
const EULER_GAMMA_LO: f64 = -4.942915152430645e-18;

impl Real for f64 {
    fn from_f64(v: f64) -> f64 {
        v
    }

    fn from_u64(v: u64) -> f64 {
        v as f64
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn pi() -> f64 {
        std::f64::consts::PI
    }

    fn euler_gamma() -> f64 {
        EULER_GAMMA_HI
    }

    fn ln(self) -> f64 {
        f64::ln(self)
    }

    fn abs(self) -> f64 {
        f64::abs(self)
    }

    fn significand_bits() -> u32 {
        f64::MANTISSA_DIGITS
    }
}

impl Real for f32 {
    fn from_f64(v: f64) -> f32 {
        v as f32
    }

    fn from_u64(v: u64) -> f32 {
        v as f32
    }

    fn to_f64(self) -> f64 {
        self as f64
    }

    fn pi() -> f32 {
        std::f32::consts::PI
    }

    fn euler_gamma() -> f32 {
        EULER_GAMMA_HI as f32
    }

    fn ln(self) -> f32 {
        f32::ln(self)
    }

    fn abs(self) -> f32 {
        f32::abs(self)
    }

    fn significand_bits() -> u32 {
        f32::MANTISSA_DIGITS
    }
}

impl Real for Quad {
    fn from_f64(v: f64) -> Quad {
        Quad::from_f64(v)
    }

    fn from_u64(v: u64) -> Quad {
        // split so both halves are exact doubles
        let hi = (v >> 32) as f64 * 4294967296.0;
        let lo = (v & 0xffff_ffff) as f64;
        Quad::from_f64(hi) + Quad::from_f64(lo)
    }

    fn to_f64(self) -> f64 {
        self.0 + self.1
    }

    fn pi() -> Quad {
        Quad::PI
    }

    fn euler_gamma() -> Quad {
        Quad(EULER_GAMMA_HI, EULER_GAMMA_LO)
    }

    fn ln(self) -> Quad {
        Quad::ln(self)
    }

    fn abs(self) -> Quad {
        Quad::abs(self)
    }

    fn significand_bits() -> u32 {
        Quad::MANTISSA_DIGITS
    }
}

/// The π-dependent constants used throughout, computed in `R`.
#[derive(Debug, Clone, Copy)]
pub struct Constants<R> {
    /// 6/π², the density of coprime pairs.
    pub six_over_pi2: R,
    /// 1/π².
    pub inv_pi2: R,
    /// 1/π⁴.
    pub inv_pi4: R,
}

impl<R: Real> Constants<R> {
    pub fn new() -> Self {
        let pi2 = R::pi() * R::pi();
        let inv_pi2 = R::one() / pi2;
        Constants {
            six_over_pi2: R::from_u64(6) * inv_pi2,
            inv_pi2,
            inv_pi4: inv_pi2 * inv_pi2,
        }
    }

    /// `num/den · π⁻⁴`.
    pub fn over_pi4(&self, num: u64, den: u64) -> R {
        R::from_u64(num) * self.inv_pi4 / R::from_u64(den)
    }
}

impl<R: Real> Default for Constants<R> {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quad_from_u64_is_exact_above_f64_precision() {
        let v = (1u64 << 60) + 1;
        let q = <Quad as Real>::from_u64(v);
        let back = q - <Quad as Real>::from_u64(1 << 60);
        assert_eq!(back.to_f64(), 1.0);
    }

    #[test]
    fn constants_agree_across_precisions() {
        let a = Constants::<f64>::new();
        let b = Constants::<Quad>::new();
        assert!((a.six_over_pi2 - b.six_over_pi2.to_f64()).abs() < 1e-15);
        assert!((a.six_over_pi2 - 0.6079271018540267).abs() < 1e-15);
        assert!(Quad::significand_bits() >= 64);
    }

    #[test]
    fn powi_matches_repeated_product() {
        assert_eq!(3.0f64.powi(0), 1.0);
        assert_eq!(Real::powi(3.0f64, 5), 243.0);
    }
}
