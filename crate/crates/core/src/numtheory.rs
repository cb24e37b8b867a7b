//! Sieved arithmetic functions and the coprimality sums built on them.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Euler's totient, the Möbius function and smallest prime factors on `1..=limit`,
/// built by one linear sieve pass.
#[derive(Debug, Clone)]
pub struct ArithTables {
    limit: usize,
    phi: Vec<u32>,
    mu: Vec<i8>,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl ArithTables {
    pub fn new(limit: usize) -> Result<Self> {
        if limit == 0 {
            return Err(Error::invalid("sieve limit must be at least 1"));
        }
        if limit > u32::MAX as usize {
            return Err(Error::invalid("sieve limit exceeds u32 range"));
        }
        let mut phi = vec![0u32; limit + 1];
        let mut mu = vec![0i8; limit + 1];
        let mut spf = vec![0u32; limit + 1];
        let mut primes = Vec::new();
        phi[1] = 1;
        mu[1] = 1;
        spf[1] = 1;
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                phi[i] = i as u32 - 1;
                mu[i] = -1;
                primes.push(i as u32);
            }
            for &p in &primes {
                let p = p as usize;
                let ip = i * p;
                if p > spf[i] as usize || ip > limit {
                    break;
                }
                spf[ip] = p as u32;
                if i % p == 0 {
                    phi[ip] = phi[i] * p as u32;
                    mu[ip] = 0;
                } else {
                    phi[ip] = phi[i] * (p as u32 - 1);
                    mu[ip] = -mu[i];
                }
            }
        }
        Ok(ArithTables {
            limit,
            phi,
            mu,
            spf,
            primes,
        })
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// φ(k) for `1 <= k <= limit`.
    #[inline]
    pub fn phi(&self, k: usize) -> u32 {
        debug_assert!(k >= 1 && k <= self.limit);
        self.phi[k]
    }

    /// μ(k) for `1 <= k <= limit`.
    #[inline]
    pub fn mu(&self, k: usize) -> i8 {
        debug_assert!(k >= 1 && k <= self.limit);
        self.mu[k]
    }

    /// Smallest prime factor of `k`; 1 for `k = 1`.
    #[inline]
    pub fn smallest_prime_factor(&self, k: usize) -> u32 {
        self.spf[k]
    }

    /// φ(1..=limit), index 0 is φ(1).
    pub fn phi_values(&self) -> &[u32] {
        &self.phi[1..]
    }

    /// μ(1..=limit), index 0 is μ(1).
    pub fn mu_values(&self) -> &[i8] {
        &self.mu[1..]
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Number of distinct prime divisors ω(k).
    pub fn distinct_prime_factors(&self, mut k: usize) -> u32 {
        let mut count = 0;
        while k > 1 {
            let p = self.spf[k] as usize;
            count += 1;
            while k % p == 0 {
                k /= p;
            }
        }
        count
    }

    /// Exact number of pairs `(p, q)` in `[1, m] x [1, n]` with `gcd(p, q) = 1`,
    /// as `Σ_d μ(d) ⌊m/d⌋ ⌊n/d⌋`. Requires `min(m, n) <= limit`.
    pub fn coprime_pair_count(&self, m: u64, n: u64) -> Result<u64> {
        let lo = m.min(n);
        if lo as usize > self.limit {
            return Err(Error::invalid(format!(
                "table limit {} below min(m, n) = {lo}",
                self.limit
            )));
        }
        let mut total: i128 = 0;
        for d in 1..=lo {
            let mu = self.mu[d as usize];
            if mu != 0 {
                total += mu as i128 * (m / d) as i128 * (n / d) as i128;
            }
        }
        Ok(total as u64)
    }

    /// `Σ_{h=1..upto} μ(h)/h²` accumulated in `R`.
    pub fn partial_zeta_inverse<R: Real>(&self, upto: usize) -> Result<R> {
        if upto == 0 || upto > self.limit {
            return Err(Error::invalid(format!(
                "partial sum bound {upto} outside 1..={}",
                self.limit
            )));
        }
        let mut sum = R::zero();
        for h in 1..=upto {
            let mu = self.mu[h];
            if mu != 0 {
                let h2 = R::from_u64(h as u64 * h as u64);
                let term = R::one() / h2;
                sum = if mu > 0 { sum + term } else { sum - term };
            }
        }
        Ok(sum)
    }
}

/// Exact count of coprime pairs in `[1, m] x [1, n]`.
pub fn coprime_pair_count(m: u64, n: u64) -> Result<u64> {
    if m == 0 || n == 0 {
        return Err(Error::invalid("coprime_pair_count needs m, n >= 1"));
    }
    ArithTables::new(m.min(n) as usize)?.coprime_pair_count(m, n)
}

/// `Σ_{h=1..limit} μ(h)/h²`, converging to 6/π².
pub fn partial_zeta_inverse<R: Real>(limit: usize) -> Result<R> {
    ArithTables::new(limit)?.partial_zeta_inverse(limit)
}

/// Harmonic number compared with `ln n + γ`.
#[derive(Debug, Clone, Copy)]
pub struct HarmonicCheck<R> {
    pub n: u64,
    pub exact_sum: R,
    pub log_plus_gamma: R,
    pub abs_error: R,
}

pub fn harmonic_check<R: Real>(n: u64) -> Result<HarmonicCheck<R>> {
    if n == 0 {
        return Err(Error::invalid("harmonic_check needs n >= 1"));
    }
    // smallest terms first
    let mut sum = R::zero();
    for i in (1..=n).rev() {
        sum = sum + R::one() / R::from_u64(i);
    }
    let approx = R::from_u64(n).ln() + R::euler_gamma();
    let err = (sum - approx).abs();
    Ok(HarmonicCheck {
        n,
        exact_sum: sum,
        log_plus_gamma: approx,
        abs_error: err,
    })
}

/// `gcd(|a|, |b|)` with `gcd(0, 0) = 0`.
#[inline]
pub fn gcd_i64(a: i64, b: i64) -> u64 {
    a.unsigned_abs().gcd(&b.unsigned_abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use qd::Quad;

    fn phi_by_gcd(k: u64) -> u32 {
        (1..=k).filter(|&j| j.gcd(&k) == 1).count() as u32
    }

    fn mu_by_factoring(mut k: u64) -> i8 {
        let mut sign = 1i8;
        let mut p = 2;
        while p * p <= k {
            if k % p == 0 {
                k /= p;
                if k % p == 0 {
                    return 0;
                }
                sign = -sign;
            }
            p += 1;
        }
        if k > 1 {
            sign = -sign;
        }
        sign
    }

    #[test]
    fn base_cases() {
        let t = ArithTables::new(1).unwrap();
        assert_eq!(t.phi_values(), &[1]);
        assert_eq!(t.mu_values(), &[1]);
    }

    #[test]
    fn rejects_zero_limit() {
        assert!(matches!(ArithTables::new(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn named_values() {
        assert_eq!(ArithTables::new(12).unwrap().phi(12), phi_by_gcd(12));
        assert_eq!(ArithTables::new(12).unwrap().phi(12), 4);
        assert_eq!(ArithTables::new(30).unwrap().mu(30), -1);
        assert_eq!(ArithTables::new(4).unwrap().mu(4), 0);
    }

    #[test]
    fn tables_match_direct_definitions() {
        let t = ArithTables::new(2000).unwrap();
        for k in 1..=2000u64 {
            assert_eq!(t.phi(k as usize), phi_by_gcd(k), "phi({k})");
            assert_eq!(t.mu(k as usize), mu_by_factoring(k), "mu({k})");
        }
        for &p in t.primes() {
            assert_eq!(t.phi(p as usize), p - 1);
            assert_eq!(t.mu(p as usize), -1);
            assert_eq!(t.smallest_prime_factor(p as usize), p);
        }
    }

    #[test]
    fn divisor_sum_identities() {
        let limit = 5000;
        let t = ArithTables::new(limit).unwrap();
        let mut mu_sum = vec![0i64; limit + 1];
        let mut phi_sum = vec![0u64; limit + 1];
        for d in 1..=limit {
            for k in (d..=limit).step_by(d) {
                mu_sum[k] += t.mu(d) as i64;
                phi_sum[k] += t.phi(d) as u64;
            }
        }
        assert_eq!(mu_sum[1], 1);
        assert!(mu_sum[2..].iter().all(|&s| s == 0));
        for k in 1..=limit {
            assert_eq!(phi_sum[k], k as u64);
        }
    }

    #[test]
    fn coprime_pairs_small() {
        assert_eq!(coprime_pair_count(1, 1).unwrap(), 1);
        assert_eq!(coprime_pair_count(3, 3).unwrap(), 7);
    }

    #[test]
    fn coprime_pairs_match_gcd_double_loop() {
        let t = ArithTables::new(200).unwrap();
        for m in 1..=200u64 {
            let mut row = vec![0u64; 201];
            for p in 1..=m {
                for q in 1..=200u64 {
                    row[q as usize] += (p.gcd(&q) == 1) as u64;
                }
            }
            let mut acc = 0;
            for n in 1..=200u64 {
                acc += row[n as usize];
                assert_eq!(t.coprime_pair_count(m, n).unwrap(), acc, "({m},{n})");
                assert_eq!(t.coprime_pair_count(n, m).unwrap(), acc);
            }
        }
    }

    #[test]
    fn coprime_pairs_thousand_near_density() {
        let c = coprime_pair_count(1000, 1000).unwrap();
        let main = 6.0 / (std::f64::consts::PI.powi(2)) * 1e6;
        assert!((c as f64 - main).abs() / main < 0.02);
    }

    #[test]
    fn zeta_partial_sums() {
        assert_eq!(partial_zeta_inverse::<f64>(1).unwrap(), 1.0);
        assert_eq!(partial_zeta_inverse::<f64>(2).unwrap(), 0.75);
        let target = 6.0 / std::f64::consts::PI.powi(2);
        let v: Quad = partial_zeta_inverse(1_000_000).unwrap();
        assert!((v.to_f64() - target).abs() < 1e-5);
    }

    #[test]
    fn zeta_partial_sums_stay_within_tail_bound() {
        let t = ArithTables::new(20000).unwrap();
        let target = Real::to_f64(Quad::from_u64(6) / (Quad::PI * Quad::PI));
        let mut sum = 0.0f64;
        for h in 1..=20000usize {
            sum += t.mu(h) as f64 / (h * h) as f64;
            // Σ_{j>h} 1/j² < 1/h
            assert!((sum - target).abs() <= 1.0 / h as f64, "h={h}");
        }
    }

    #[test]
    fn harmonic_values() {
        let h1 = harmonic_check::<Quad>(1).unwrap();
        assert_eq!(h1.exact_sum.to_f64(), 1.0);
        let h2 = harmonic_check::<Quad>(2).unwrap();
        assert_eq!(h2.exact_sum.to_f64(), 1.5);
        let h = harmonic_check::<Quad>(10_000).unwrap();
        assert!(h.abs_error.to_f64() < 1e-4);
        for n in 2..200 {
            let h = harmonic_check::<Quad>(n).unwrap();
            assert!(h.abs_error.to_f64() < 1.0 / n as f64);
        }
    }
}
