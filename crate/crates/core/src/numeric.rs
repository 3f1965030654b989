//! Rigorous rational enclosures for the few transcendental quantities the
//! planners need (`e`, `γ`, logarithms, roots). No floating point is used;
//! every result is an interval `[lo, hi]` of exact rationals that provably
//! contains the true value.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::scalar::{render_rational, Rational};

/// Working precision, in bits, for enclosure arithmetic.
pub const DEFAULT_BITS: u32 = 96;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

fn floor_dyadic(r: &Rational, bits: u32) -> Rational {
    let scale = pow2(bits);
    Rational::new((r * Rational::from_integer(scale.clone())).floor().to_integer(), scale)
}

fn ceil_dyadic(r: &Rational, bits: u32) -> Rational {
    let scale = pow2(bits);
    Rational::new((r * Rational::from_integer(scale.clone())).ceil().to_integer(), scale)
}

impl Enclosure {
    pub fn point(r: Rational) -> Enclosure {
        Enclosure { lo: r.clone(), hi: r }
    }

    pub fn new(lo: Rational, hi: Rational) -> Enclosure {
        assert!(lo <= hi, "empty enclosure");
        Enclosure { lo, hi }
    }

    pub fn contains(&self, r: &Rational) -> bool {
        &self.lo <= r && r <= &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Outward rounding to `bits` fractional bits, to keep sizes bounded.
    pub fn round(&self, bits: u32) -> Enclosure {
        Enclosure {
            lo: floor_dyadic(&self.lo, bits),
            hi: ceil_dyadic(&self.hi, bits),
        }
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn scale(&self, c: &Rational) -> Enclosure {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if c.is_negative() {
            Enclosure { lo: b, hi: a }
        } else {
            Enclosure { lo: a, hi: b }
        }
    }

    /// Product of two enclosures of positive numbers.
    pub fn mul_pos(&self, other: &Enclosure) -> Enclosure {
        debug_assert!(self.lo.is_positive() && other.lo.is_positive());
        Enclosure {
            lo: &self.lo * &other.lo,
            hi: &self.hi * &other.hi,
        }
    }

    /// Quotient of two enclosures of positive numbers.
    pub fn div_pos(&self, other: &Enclosure) -> Enclosure {
        debug_assert!(self.lo.is_positive() && other.lo.is_positive());
        Enclosure {
            lo: &self.lo / &other.hi,
            hi: &self.hi / &other.lo,
        }
    }

    pub fn to_report(&self, digits: usize) -> EnclosureReport {
        EnclosureReport {
            lo: decimal(&self.lo, digits, Rounding::Down),
            hi: decimal(&self.hi, digits, Rounding::Up),
        }
    }
}

/// Decimal rendering of an enclosure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnclosureReport {
    pub lo: String,
    pub hi: String,
}

#[derive(Clone, Copy)]
pub enum Rounding {
    Down,
    Up,
}

/// Renders `r` with `digits` decimals, rounded in the given direction.
pub fn decimal(r: &Rational, digits: usize, rounding: Rounding) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = r * Rational::from_integer(scale.clone());
    let n = match rounding {
        Rounding::Down => scaled.floor().to_integer(),
        Rounding::Up => scaled.ceil().to_integer(),
    };
    let neg = n.is_negative();
    let (int, frac) = n.abs().div_rem(&scale);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
    }
}

/// `atanh(z) = Σ z^{2i+1}/(2i+1)` for `0 ≤ z ≤ 1/2`, with geometric tail bound.
fn atanh_small(z: &Rational, bits: u32) -> Enclosure {
    assert!(!z.is_negative() && z <= &Rational::new(1.into(), 2.into()));
    if z.is_zero() {
        return Enclosure::point(Rational::zero());
    }
    let eps = Rational::new(BigInt::one(), pow2(bits + 2));
    let z2 = z * z;
    let tail_factor = Rational::one() / (Rational::one() - &z2);
    let mut sum = Rational::zero();
    let mut power = z.clone();
    let mut i: u64 = 0;
    loop {
        let term = &power / Rational::from_integer(BigInt::from(2 * i + 1));
        sum = floor_dyadic(&(sum + term), bits + 8);
        power = floor_dyadic(&(&power * &z2), bits + 16);
        i += 1;
        // remaining terms are bounded by z^{2i+1}·1/(1 - z²) (before rounding)
        let tail = &power * &tail_factor;
        if tail < eps {
            // account for downward rounding of at most i ulps in sum and power
            let slack = Rational::new(BigInt::from(2 * i + 2), pow2(bits + 8));
            return Enclosure {
                lo: floor_dyadic(&sum, bits),
                hi: ceil_dyadic(&(sum + tail + slack), bits),
            };
        }
    }
}

/// `ln 2 = 2·atanh(1/3)`.
pub fn ln2(bits: u32) -> Enclosure {
    atanh_small(&Rational::new(1.into(), 3.into()), bits + 2)
        .scale(&Rational::from_integer(2.into()))
        .round(bits)
}

/// Enclosure of `ln n` for an integer `n ≥ 1`.
pub fn ln_int(n: &BigUint, bits: u32) -> Enclosure {
    assert!(!n.is_zero(), "ln of zero");
    let k = n.bits() - 1;
    let base = Rational::from_integer(BigInt::one() << k);
    let m = Rational::from_integer(BigInt::from(n.clone())) / &base;
    // m ∈ [1, 2), z = (m-1)/(m+1) ∈ [0, 1/3)
    let z = (&m - Rational::one()) / (&m + Rational::one());
    let tail = atanh_small(&z, bits + 4).scale(&Rational::from_integer(2.into()));
    let l2 = ln2(bits + 8).scale(&Rational::from_integer(BigInt::from(k)));
    l2.add(&tail).round(bits)
}

/// Enclosure of `ln r` for a positive rational `r`.
pub fn ln_rational(r: &Rational, bits: u32) -> Enclosure {
    assert!(r.is_positive(), "ln of a non-positive number");
    let num = r.numer().magnitude().clone();
    let den = r.denom().magnitude().clone();
    ln_int(&num, bits + 2).sub(&ln_int(&den, bits + 2)).round(bits)
}

/// `ln` of an enclosure of a positive quantity (ln is monotone).
pub fn ln_enclosure(x: &Enclosure, bits: u32) -> Enclosure {
    Enclosure {
        lo: ln_rational(&x.lo, bits).lo,
        hi: ln_rational(&x.hi, bits).hi,
    }
}

/// Enclosure of `exp(x)` for `0 ≤ x ≤ 1` by Taylor series.
pub fn exp_unit(x: &Rational, bits: u32) -> Enclosure {
    assert!(!x.is_negative() && x <= &Rational::one());
    let eps = Rational::new(BigInt::one(), pow2(bits + 2));
    let mut sum = Rational::zero();
    let mut term = Rational::one();
    let mut i: u64 = 0;
    loop {
        sum = &sum + &term;
        i += 1;
        term = floor_dyadic(&(&term * x / Rational::from_integer(BigInt::from(i))), bits + 16);
        // tail Σ_{j≥i} x^j/j! ≤ 2·x^i/i! once i ≥ 1
        let tail = &term * Rational::from_integer(2.into());
        if tail < eps {
            let slack = Rational::new(BigInt::from(i + 1), pow2(bits + 16));
            return Enclosure {
                lo: floor_dyadic(&sum, bits),
                hi: ceil_dyadic(&(&sum + tail + slack), bits),
            };
        }
    }
}

pub fn euler_e(bits: u32) -> Enclosure {
    exp_unit(&Rational::one(), bits)
}

/// `γ ∈ [0.5772156649, 0.5772156650]`.
pub fn euler_gamma() -> Enclosure {
    let den = BigInt::from(10u64.pow(10));
    Enclosure {
        lo: Rational::new(BigInt::from(5_772_156_649u64), den.clone()),
        hi: Rational::new(BigInt::from(5_772_156_650u64), den),
    }
}

/// `⌈c·e⌉` for a positive rational `c`, refining `e` until the ceiling is certain.
pub fn ceil_times_e(c: &Rational) -> BigInt {
    let mut bits = 64;
    loop {
        let e = euler_e(bits);
        let lo = (c * &e.lo).ceil().to_integer();
        let hi = (c * &e.hi).ceil().to_integer();
        if lo == hi {
            return lo;
        }
        bits *= 2;
    }
}

/// `⌊x^{1/n}⌋` for an integer `x ≥ 0`.
pub fn nth_root_floor(x: &BigUint, n: u32) -> BigUint {
    x.nth_root(n)
}

/// Enclosure of `x^{1/n}` for a nonnegative rational `x`, to `bits` fractional bits.
pub fn root_enclosure(x: &Rational, n: u32, bits: u32) -> Enclosure {
    assert!(!x.is_negative() && n >= 1);
    let scale = BigInt::one() << (bits as usize * n as usize);
    let scaled = (x * Rational::from_integer(scale)).floor().to_integer();
    let r = nth_root_floor(scaled.magnitude(), n);
    let lo = Rational::new(BigInt::from(r.clone()), pow2(bits));
    let hi = Rational::new(BigInt::from(r + 1u32), pow2(bits));
    Enclosure { lo, hi }
}

/// Renders an exact rational for reports.
pub fn render(r: &Rational) -> String {
    render_rational(r)
}
