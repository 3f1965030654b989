//! Planner for the prime-power slope family over 𝔽_p.
//!
//! Given a set `Q` of primes with product `q`, slopes are the `Q`-powers
//! `a = ∏ q_i^{α_i}` with `0 ≤ α_i ≤ ⌊s/4k⌋`, and intercepts are picked
//! greedily so every new line avoids all earlier intersection points. The
//! length `L = ⌈(8q/φ(q))·q^{(1+δ)s}⌉`, `δ = 1/4k`, is computed exactly when
//! it fits under the configured bit budget.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::affine::AffineMap;
use crate::caps::{check_cap, Caps};
use crate::construct::primes::{primes_up_to, product, totient_of_product, PrimeEstimates};
use crate::error::{Error, Result};
use crate::grid::{image_deficiency, GroundSet};
use crate::numeric::{ceil_times_e, nth_root_floor};
use crate::scalar::{is_prime_u64, render_rational, Field, Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KlaweParams {
    pub primes: Vec<u64>,
    pub k: usize,
    pub q: BigUint,
    pub phi_q: BigUint,
    pub s: u64,
    pub delta: Rational,
    /// `None` when the exact value would exceed the bit budget.
    pub length: Option<BigUint>,
    /// `L ≥ (8q/φ(q))·(s/4k)^{2k}`.
    pub condition_25: bool,
    pub prime: Option<PrimeSplit>,
}

/// `p = M·q^s + r` with `0 ≤ r < q^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSplit {
    pub p: BigUint,
    pub m: BigUint,
    pub r: BigUint,
}

impl KlaweParams {
    /// Parameters for an explicit prime set and exponent `s`.
    pub fn new(primes: Vec<u64>, s: u64, caps: &Caps) -> Result<KlaweParams> {
        if primes.is_empty() {
            return Err(Error::invalid("Q must contain at least one prime"));
        }
        let distinct: BTreeSet<u64> = primes.iter().copied().collect();
        if distinct.len() != primes.len() {
            return Err(Error::invalid("Q must consist of distinct primes"));
        }
        if let Some(&bad) = primes.iter().find(|&&p| !is_prime_u64(p)) {
            return Err(Error::NotPrime(bad));
        }
        if s == 0 {
            return Err(Error::invalid("s must be at least 1"));
        }
        let k = primes.len();
        let q = product(&primes);
        let phi_q = totient_of_product(&primes);
        let delta = Rational::new(BigInt::one(), BigInt::from(4 * k));
        let length = klawe_length(&q, &phi_q, s, k, caps.length_bits);
        let condition_25 = condition_25(&q, &phi_q, s, k, length.as_ref());
        Ok(KlaweParams {
            primes,
            k,
            q,
            phi_q,
            s,
            delta,
            length,
            condition_25,
            prime: None,
        })
    }

    /// Attaches a prime `p` and splits it as `M·q^s + r`.
    pub fn with_prime(mut self, p: BigUint) -> Result<KlaweParams> {
        if !is_probable_prime(&p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        let qs = self.q.pow(self.s as u32);
        let (m, r) = p.div_rem(&qs);
        self.prime = Some(PrimeSplit { p, m, r });
        Ok(self)
    }

    pub fn exponent_bound(&self) -> u64 {
        self.s / (4 * self.k as u64)
    }
}

/// `⌈(8q/φ(q))·q^{s + s/4k}⌉`, or `None` past `max_bits`.
fn klawe_length(q: &BigUint, phi_q: &BigUint, s: u64, k: usize, max_bits: u64) -> Option<BigUint> {
    let c = Rational::new(BigInt::from(8u32 * q), BigInt::from(phi_q.clone()));
    let frac = Rational::new(BigInt::from(s), BigInt::from(4 * k as u64));
    let m = frac.numer().to_u64()?;
    let n = frac.denom().to_u32()?;
    let cn = c.numer().magnitude().clone();
    let cd = c.denom().magnitude().clone();
    let q_bits = q.bits();
    let est_bits = (n as u64)
        .checked_mul(cn.bits() + q_bits.checked_mul(s)?)?
        .checked_add(m.checked_mul(q_bits)?)?;
    if est_bits > max_bits {
        return None;
    }
    let p_base = &cn * q.pow(s as u32);
    let x = p_base.pow(n) * q.pow(m as u32);
    let root = nth_root_floor(&x, n);
    let numerator = if root.pow(n) == x { root } else { root + 1u32 };
    Some(ceil_div(&numerator, &cd))
}

fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    let (d, r) = a.div_rem(b);
    if r.is_zero() {
        d
    } else {
        d + 1u32
    }
}

fn condition_25(q: &BigUint, phi_q: &BigUint, s: u64, k: usize, length: Option<&BigUint>) -> bool {
    let base = Rational::new(BigInt::from(s), BigInt::from(4 * k as u64));
    let power = num_traits::pow(base, 2 * k);
    match length {
        Some(l) => {
            let c = Rational::new(BigInt::from(8u32 * q), BigInt::from(phi_q.clone()));
            Rational::from_integer(BigInt::from(l.clone())) >= c * power
        }
        // L ≥ (8q/φ(q))·q^s, so q^s ≥ (s/4k)^{2k} suffices.
        None => Rational::from_integer(BigInt::from(q.pow(s as u32))) >= power,
    }
}

/// Miller–Rabin with the first twelve prime bases: deterministic below `3.3·10^24`.
fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus = n - &one;
    let twos = n_minus.trailing_zeros().unwrap_or(0);
    let d = &n_minus >> twos;
    'bases: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus {
            continue;
        }
        for _ in 1..twos {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == n_minus {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

#[derive(Clone, Debug, Serialize)]
pub struct KlaweParamsReport {
    pub primes: Vec<u64>,
    pub k: usize,
    pub q: String,
    pub phi_q: String,
    pub s: u64,
    pub delta: String,
    pub length: Option<String>,
    pub length_bits: Option<u64>,
    pub condition_25: bool,
    pub p: Option<String>,
    pub m: Option<String>,
    pub r: Option<String>,
}

impl KlaweParams {
    pub fn report(&self) -> KlaweParamsReport {
        KlaweParamsReport {
            primes: self.primes.clone(),
            k: self.k,
            q: self.q.to_string(),
            phi_q: self.phi_q.to_string(),
            s: self.s,
            delta: render_rational(&self.delta),
            length: self.length.as_ref().map(|l| l.to_string()),
            length_bits: self.length.as_ref().map(|l| l.bits()),
            condition_25: self.condition_25,
            p: self.prime.as_ref().map(|x| x.p.to_string()),
            m: self.prime.as_ref().map(|x| x.m.to_string()),
            r: self.prime.as_ref().map(|x| x.r.to_string()),
        }
    }
}

/// `Q` = primes `≤ x`, `s = ⌈4e·k⌉`, and the estimates for `Q`.
pub fn prime_params(x: u64, caps: &Caps) -> Result<(KlaweParams, PrimeEstimates)> {
    if x < 2 {
        return Err(Error::invalid(format!("x must be at least 2, got {x}")));
    }
    let primes = primes_up_to(x);
    let k = primes.len();
    let s = ceil_times_e(&Rational::from_integer(BigInt::from(4 * k)))
        .to_u64()
        .expect("s fits in u64");
    let estimates = PrimeEstimates::new(x, &primes);
    Ok((KlaweParams::new(primes, s, caps)?, estimates))
}

/// All `∏ q_i^{α_i}` with `0 ≤ α_i ≤ ⌊s/4k⌋`, sorted.
pub fn klawe_slopes(primes: &[u64], s: u64, cap: usize) -> Result<Vec<BigUint>> {
    let k = primes.len() as u64;
    if k == 0 || s < 4 * k {
        return Err(Error::BoxEmpty);
    }
    let e = s / (4 * k);
    let count = (e as u128 + 1).checked_pow(k as u32).unwrap_or(u128::MAX);
    check_cap("slope count", count, cap as u128)?;
    let mut slopes = vec![BigUint::one()];
    for &p in primes {
        let powers: Vec<BigUint> = (0..=e).map(|i| BigUint::from(p).pow(i as u32)).collect();
        slopes = slopes
            .iter()
            .flat_map(|a| powers.iter().map(move |pw| a * pw))
            .collect();
    }
    slopes.sort();
    Ok(slopes)
}

/// Exponent sum of `a` over `Q`; `NotQPower` if another prime divides `a`.
pub fn q_power_exponent(a: &BigUint, primes: &[u64]) -> Result<u64> {
    if a.is_zero() {
        return Err(Error::NotQPower(a.to_string()));
    }
    let mut rest = a.clone();
    let mut mu = 0;
    for &p in primes {
        let p = BigUint::from(p);
        loop {
            let (d, r) = rest.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            rest = d;
            mu += 1;
        }
    }
    if rest.is_one() {
        Ok(mu)
    } else {
        Err(Error::NotQPower(a.to_string()))
    }
}

/// One line per slope, each intercept the least `b ∈ [0, b_max]` avoiding
/// every intersection point of the lines chosen so far.
pub fn klawe_select_lines(slopes: &[BigInt], b_max: &BigInt, field: Field) -> Result<Vec<AffineMap>> {
    let scalars: Vec<Scalar> = slopes
        .iter()
        .map(|a| Scalar::from_bigint(a.clone(), field))
        .collect();
    let distinct: BTreeSet<&Scalar> = scalars.iter().collect();
    if distinct.len() != scalars.len() {
        return Err(Error::invalid("slopes must be distinct in the field"));
    }
    let b_limit = match field.modulus() {
        Some(p) => b_max.clone().min(BigInt::from(p - 1)),
        None => b_max.clone(),
    };
    let mut chosen: Vec<AffineMap> = Vec::with_capacity(scalars.len());
    let mut points: Vec<(Scalar, Scalar)> = Vec::new();
    for (a, raw) in scalars.iter().zip(slopes) {
        if a.is_zero() {
            return Err(Error::ZeroSlope);
        }
        let forbidden: BTreeSet<BigInt> = points
            .iter()
            .filter_map(|(u, v)| (v - &(a * u)).to_bigint())
            .collect();
        let mut b = BigInt::zero();
        for f in &forbidden {
            if *f == b {
                b += 1;
            } else if *f > b {
                break;
            }
        }
        if b > b_limit {
            return Err(Error::Exhausted {
                slope: raw.to_string(),
                b_max: b_max.to_string(),
            });
        }
        let line = AffineMap::new(a.clone(), Scalar::from_bigint(b, field))?;
        for prev in &chosen {
            points.extend(line.intersection(prev));
        }
        chosen.push(line);
    }
    Ok(chosen)
}

/// `μ(a)/s + ((a·r + b)/L)·(q/φ(q))`.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionValue {
    pub mu: u64,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub value: Rational,
    pub at_most_half: bool,
}

pub fn klawe_condition_value(
    a: &BigUint,
    b: &BigUint,
    r: &BigUint,
    params: &KlaweParams,
) -> Result<ConditionValue> {
    let mu = q_power_exponent(a, &params.primes)?;
    let length = params
        .length
        .as_ref()
        .ok_or_else(|| Error::invalid("L was not computed (bit budget exceeded)"))?;
    let mu_term = Rational::new(BigInt::from(mu), BigInt::from(params.s));
    let ratio = Rational::new(
        BigInt::from(params.q.clone()),
        BigInt::from(params.phi_q.clone()),
    );
    let spread = Rational::new(BigInt::from(a * r + b), BigInt::from(length.clone()));
    let value = mu_term + spread * ratio;
    let at_most_half = value <= Rational::new(1.into(), 2.into());
    Ok(ConditionValue {
        mu,
        value,
        at_most_half,
    })
}

/// `|(aY+b)∖Y|` against `value·|Y|` for a ground set over `𝔽_p`.
#[derive(Clone, Debug, Serialize)]
pub struct DeficiencyCheck {
    pub deficiency: usize,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub bound: Rational,
    pub holds: bool,
}

pub fn check_deficiency_bound(
    y: &GroundSet,
    a: &BigUint,
    b: &BigUint,
    value: &Rational,
) -> Result<DeficiencyCheck> {
    if y.field().modulus().is_none() {
        return Err(Error::invalid("the deficiency check needs a ground set over F_p"));
    }
    let field = y.field();
    let g = AffineMap::new(
        Scalar::from_bigint(BigInt::from(a.clone()), field),
        Scalar::from_bigint(BigInt::from(b.clone()), field),
    )?;
    let deficiency = image_deficiency(&g, y)?;
    let bound = value * Rational::from_integer(BigInt::from(y.len()));
    let holds = Rational::from_integer(BigInt::from(deficiency)) <= bound;
    Ok(DeficiencyCheck {
        deficiency,
        bound,
        holds,
    })
}
