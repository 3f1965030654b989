//! Sieve, primorials, and the prime-counting estimates used by the planner.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use serde::Serialize;

use crate::numeric::{euler_gamma, exp_unit, ln_int, Enclosure, EnclosureReport, DEFAULT_BITS};
use crate::scalar::Rational;

/// Primes `≤ x` by the sieve of Eratosthenes.
pub fn primes_up_to(x: u64) -> Vec<u64> {
    if x < 2 {
        return Vec::new();
    }
    let n = x as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

pub fn product(primes: &[u64]) -> BigUint {
    primes.iter().fold(BigUint::one(), |acc, &p| acc * p)
}

/// `φ(∏Q) = ∏(p - 1)` for distinct primes.
pub fn totient_of_product(primes: &[u64]) -> BigUint {
    primes.iter().fold(BigUint::one(), |acc, &p| acc * (p - 1))
}

/// Ratios that tend to 1: `k·ln x / x`, `ln q / x`, `(φ(q)/q)·e^γ·ln x`.
#[derive(Clone, Debug)]
pub struct PrimeEstimates {
    pub x: u64,
    pub prime_count: Enclosure,
    pub chebyshev: Enclosure,
    pub mertens: Enclosure,
    /// `4 / ln x`.
    pub envelope: Enclosure,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeEstimatesReport {
    pub x: u64,
    pub prime_count_ratio: EnclosureReport,
    pub chebyshev_ratio: EnclosureReport,
    pub mertens_ratio: EnclosureReport,
    pub envelope: EnclosureReport,
    pub within_envelope: bool,
}

impl PrimeEstimates {
    pub fn new(x: u64, primes: &[u64]) -> PrimeEstimates {
        assert!(x >= 2);
        let bits = DEFAULT_BITS;
        let xr = Rational::from_integer(BigInt::from(x));
        let ln_x = ln_int(&BigUint::from(x), bits);
        let k = Rational::from_integer(BigInt::from(primes.len()));
        let prime_count = ln_x.scale(&(k / &xr));

        let ln_q = ln_int(&product(primes), bits);
        let chebyshev = ln_q.scale(&(Rational::one() / &xr));

        let phi_over_q = primes.iter().fold(Rational::one(), |acc, &p| {
            acc * Rational::new(BigInt::from(p - 1), BigInt::from(p))
        });
        let e_gamma = exp_gamma(bits);
        let mertens = e_gamma.mul_pos(&ln_x).scale(&phi_over_q).round(bits);

        let four = Enclosure::point(Rational::from_integer(4.into()));
        let envelope = four.div_pos(&ln_x);
        PrimeEstimates {
            x,
            prime_count,
            chebyshev,
            mertens,
            envelope,
        }
    }

    /// Every ratio provably within `1 ± 4/ln x`.
    pub fn within_envelope(&self) -> bool {
        [&self.prime_count, &self.chebyshev, &self.mertens]
            .iter()
            .all(|r| {
                let dev_lo = (&r.lo - Rational::one()).abs();
                let dev_hi = (&r.hi - Rational::one()).abs();
                dev_lo.max(dev_hi) <= self.envelope.lo
            })
    }

    pub fn report(&self) -> PrimeEstimatesReport {
        PrimeEstimatesReport {
            x: self.x,
            prime_count_ratio: self.prime_count.to_report(12),
            chebyshev_ratio: self.chebyshev.to_report(12),
            mertens_ratio: self.mertens.to_report(12),
            envelope: self.envelope.to_report(12),
            within_envelope: self.within_envelope(),
        }
    }
}

/// `e^γ` from the enclosure of `γ`; exp is monotone.
fn exp_gamma(bits: u32) -> Enclosure {
    let g = euler_gamma();
    Enclosure {
        lo: exp_unit(&g.lo, bits).lo,
        hi: exp_unit(&g.hi, bits).hi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::is_prime_u64;

    #[test]
    fn sieve_matches_trial_division() {
        let expected: Vec<u64> = (0..=500).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(primes_up_to(500), expected);
        assert_eq!(primes_up_to(10), vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(100).len(), 25);
        assert!(primes_up_to(1).is_empty());
    }

    #[test]
    fn primorial_and_totient() {
        let q = [2, 3, 5, 7];
        assert_eq!(product(&q), BigUint::from(210u32));
        assert_eq!(totient_of_product(&q), BigUint::from(48u32));
        // totient oracle by gcd counting
        let phi = (1..=210u32).filter(|&n| num_integer::gcd(n, 210) == 1).count();
        assert_eq!(phi, 48);
    }

    #[test]
    fn estimates_near_one() {
        for x in [20u64, 50, 100, 200] {
            let est = PrimeEstimates::new(x, &primes_up_to(x));
            assert!(est.within_envelope(), "x={x}");
            assert!(est.mertens.lo.is_positive());
        }
        let est = PrimeEstimates::new(100, &primes_up_to(100));
        // 25·ln(100)/100 ≈ 1.1513
        assert!(est.prime_count.lo > Rational::new(115.into(), 100.into()));
        assert!(est.prime_count.hi < Rational::new(116.into(), 100.into()));
    }
}
