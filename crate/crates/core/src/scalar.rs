//! Exact field elements over ℚ and 𝔽_p.
//!
//! Every construction handled by this crate is rational, so statements made
//! over ℝ or ℂ are realized exactly in ℚ with arbitrary-precision integers.
//! Prime fields use a `u64` modulus with `u128` intermediate products.
//!
//! Two scalars interoperate only when they live in the same [`Field`]. The
//! `try_*` methods report a mismatch as an error; the operator impls on
//! references panic on mismatch and are meant for code that has already
//! checked its inputs share a field.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for the rational `num/den`. Panics if `den == 0`.
pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses an exact rational: an optionally signed integer or `num/den`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (parse_int(n, text)?, parse_int(d, text)?),
        None => (parse_int(t, text)?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(num, den))
}

fn parse_int(s: &str, whole: &str) -> Result<BigInt> {
    let s = s.trim();
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(whole, "expected a decimal integer or num/den"));
    }
    BigInt::from_str(s.strip_prefix('+').unwrap_or(s))
        .map_err(|e| Error::parse(whole, e.to_string()))
}

/// Canonical text of a rational: `n` for integers, `n/d` otherwise.
pub fn render_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Deterministic Miller–Rabin, exact for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// The field a scalar lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "FieldRepr", into = "FieldRepr")]
pub enum Field {
    Rational,
    Prime(u64),
}

#[derive(Serialize, Deserialize)]
struct FieldRepr {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    p: Option<u64>,
}

impl TryFrom<FieldRepr> for Field {
    type Error = Error;
    fn try_from(r: FieldRepr) -> Result<Field> {
        match (r.kind.as_str(), r.p) {
            ("rational", None) => Ok(Field::Rational),
            ("fp" | "prime_field", Some(p)) => Field::prime(p),
            _ => Err(Error::invalid(format!(
                "bad field descriptor kind={:?} p={:?}",
                r.kind, r.p
            ))),
        }
    }
}

impl From<Field> for FieldRepr {
    fn from(f: Field) -> Self {
        match f {
            Field::Rational => FieldRepr {
                kind: "rational".into(),
                p: None,
            },
            Field::Prime(p) => FieldRepr {
                kind: "fp".into(),
                p: Some(p),
            },
        }
    }
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime_u64(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn modulus(self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(p),
        }
    }

    /// Parses `rational`, `fp:<p>`, or the JSON descriptor form.
    pub fn parse(text: &str) -> Result<Field> {
        let t = text.trim();
        if t.starts_with('{') {
            return Ok(serde_json::from_str(t)?);
        }
        match t {
            "rational" | "Q" | "q" => Ok(Field::Rational),
            _ => {
                let p = t
                    .strip_prefix("fp:")
                    .or_else(|| t.strip_prefix("F"))
                    .unwrap_or(t);
                let p: u64 = p
                    .parse()
                    .map_err(|_| Error::parse(text, "expected rational or fp:<prime>"))?;
                Field::prime(p)
            }
        }
    }

    pub fn zero(self) -> Scalar {
        Scalar::from_i64(0, self)
    }

    pub fn one(self) -> Scalar {
        Scalar::from_i64(1, self)
    }

    pub fn check(self, other: Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch(self, other))
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// An exact element of ℚ (in lowest terms) or of 𝔽_p (reduced residue).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rational),
    Residue { value: u64, modulus: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

/// Applies a field operation; binary ops require `y`.
pub fn field_op(op: FieldOp, x: &Scalar, y: Option<&Scalar>) -> Result<Scalar> {
    let rhs = || y.ok_or_else(|| Error::invalid(format!("{op:?} needs two operands")));
    match op {
        FieldOp::Add => x.try_add(rhs()?),
        FieldOp::Sub => x.try_sub(rhs()?),
        FieldOp::Mul => x.try_mul(rhs()?),
        FieldOp::Div => x.try_div(rhs()?),
        FieldOp::Neg => Ok(-x),
        FieldOp::Inv => x.inv(),
    }
}

impl Scalar {
    pub fn from_i64(v: i64, field: Field) -> Scalar {
        Scalar::from_bigint(BigInt::from(v), field)
    }

    pub fn from_bigint(v: BigInt, field: Field) -> Scalar {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v)),
            Field::Prime(p) => {
                let m = BigInt::from(p);
                let r = v.mod_floor(&m);
                Scalar::Residue {
                    value: r.to_u64().expect("residue below modulus"),
                    modulus: p,
                }
            }
        }
    }

    /// Maps an exact rational into `field`; in 𝔽_p the denominator must be invertible.
    pub fn from_rational(r: &Rational, field: Field) -> Result<Scalar> {
        match field {
            Field::Rational => Ok(Scalar::Rational(r.clone())),
            Field::Prime(_) => {
                let n = Scalar::from_bigint(r.numer().clone(), field);
                let d = Scalar::from_bigint(r.denom().clone(), field);
                n.try_div(&d)
            }
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Residue { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Residue { .. } => None,
        }
    }

    /// The integer value, for rationals with denominator one or residues.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Scalar::Rational(r) if r.is_integer() => Some(r.numer().clone()),
            Scalar::Rational(_) => None,
            Scalar::Residue { value, .. } => Some(BigInt::from(*value)),
        }
    }

    pub fn parse(text: &str, field: Field) -> Result<Scalar> {
        let r = parse_rational(text)?;
        Scalar::from_rational(&r, field)
    }

    pub fn render(&self) -> String {
        self.to_string()
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.field().check(other.field())?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.field().check(other.field())?;
        Ok(self.add_unchecked(&-other))
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.field().check(other.field())?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        self.field().check(other.field())?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: inv_mod(*value, *modulus).expect("prime modulus"),
                modulus: *modulus,
            },
        })
    }

    fn add_unchecked(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (Scalar::Residue { value: x, modulus }, Scalar::Residue { value: y, .. }) => {
                Scalar::Residue {
                    value: ((*x as u128 + *y as u128) % *modulus as u128) as u64,
                    modulus: *modulus,
                }
            }
            _ => panic!("mixed fields: {} and {}", self.field(), other.field()),
        }
    }

    fn mul_unchecked(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            (Scalar::Residue { value: x, modulus }, Scalar::Residue { value: y, .. }) => {
                Scalar::Residue {
                    value: mul_mod(*x, *y, *modulus),
                    modulus: *modulus,
                }
            }
            _ => panic!("mixed fields: {} and {}", self.field(), other.field()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => f.write_str(&render_rational(r)),
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Rationals by value, residues by representative in [0, p); different
// fields are ordered by descriptor so sorting is total.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rational(x), Scalar::Rational(y)) => x.cmp(y),
            (
                Scalar::Residue { value: x, modulus: p },
                Scalar::Residue { value: y, modulus: q },
            ) => p.cmp(q).then(x.cmp(y)),
            _ => self.field().cmp(&other.field()),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.add_unchecked(rhs)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.add_unchecked(&-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.mul_unchecked(rhs)
    }
}

/// Panics on a zero divisor; use [`Scalar::try_div`] for fallible division.
impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.mul_unchecked(&rhs.inv().expect("division by zero"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(v: i64, p: u64) -> Scalar {
        Scalar::from_i64(v, Field::Prime(p))
    }

    fn q(text: &str) -> Scalar {
        Scalar::parse(text, Field::Rational).unwrap()
    }

    #[test]
    fn mul_mod_seven() {
        assert_eq!(field_op(FieldOp::Mul, &fp(3, 7), Some(&fp(5, 7))).unwrap(), fp(1, 7));
    }

    #[test]
    fn inverse_matches_extended_euclid() {
        // brute force oracle: the unique y with 3y = 1 mod 7
        let y = (1..7).find(|y| (3 * y) % 7 == 1).unwrap();
        assert_eq!(fp(3, 7).inv().unwrap(), fp(y, 7));
        assert_eq!(y, 5);
    }

    #[test]
    fn rational_sum() {
        assert_eq!(q("1/2").try_add(&q("1/3")).unwrap(), q("5/6"));
    }

    #[test]
    fn parse_examples() {
        assert_eq!(q("-3/6").to_string(), "-1/2");
        assert_eq!(Scalar::parse("10", Field::Prime(7)).unwrap(), fp(3, 7));
        assert_eq!(Scalar::parse("1/2", Field::Prime(7)).unwrap(), fp(4, 7));
        assert_eq!(Scalar::parse("+4", Field::Rational).unwrap(), q("4"));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Scalar::parse("1/7", Field::Prime(7)), Err(Error::DivisionByZero)));
        assert!(matches!(Scalar::parse("1/0", Field::Rational), Err(Error::DivisionByZero)));
        for bad in ["", "abc", "1.5", "1//2", "- 3", "2/x"] {
            assert!(matches!(Scalar::parse(bad, Field::Rational), Err(Error::Parse { .. })), "{bad}");
        }
    }

    #[test]
    fn mismatch_and_zero_division() {
        assert!(matches!(
            fp(1, 7).try_add(&fp(1, 11)),
            Err(Error::DescriptorMismatch(..))
        ));
        assert!(matches!(q("1").try_mul(&fp(1, 7)), Err(Error::DescriptorMismatch(..))));
        assert!(matches!(q("1").try_div(&q("0")), Err(Error::DivisionByZero)));
        assert!(matches!(fp(0, 7).inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn field_descriptor_json() {
        let f: Field = serde_json::from_str(r#"{"kind":"fp","p":101}"#).unwrap();
        assert_eq!(f, Field::Prime(101));
        assert_eq!(serde_json::to_string(&Field::Rational).unwrap(), r#"{"kind":"rational"}"#);
        assert_eq!(serde_json::to_string(&f).unwrap(), r#"{"kind":"fp","p":101}"#);
        assert!(serde_json::from_str::<Field>(r#"{"kind":"fp","p":100}"#).is_err());
        assert_eq!(Field::parse("fp:13").unwrap(), Field::Prime(13));
        assert!(matches!(Field::prime(1), Err(Error::NotPrime(1))));
    }

    #[test]
    fn primality_against_trial_division() {
        for n in 0u64..2000 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime_u64(n), trial, "{n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn field_axioms_exhaustive_small_primes() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let all: Vec<Scalar> = (0..p as i64).map(|v| fp(v, p)).collect();
            for x in &all {
                if !x.is_zero() {
                    assert!((x * &x.inv().unwrap()).is_one());
                }
                assert!((x + &-x).is_zero());
                for y in &all {
                    assert_eq!(x + y, y + x);
                    assert_eq!(x * y, y * x);
                    for z in &all {
                        assert_eq!(&(x + y) + z, x + &(y + z));
                        assert_eq!(&(x * y) * z, x * &(y * z));
                        assert_eq!(x * &(y + z), &(x * y) + &(x * z));
                    }
                }
            }
        }
    }

    #[test]
    fn ordering_is_by_value() {
        let mut v = [q("1/2"), q("-3"), q("2"), q("1/3")];
        v.sort();
        let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(s, ["-3", "1/3", "1/2", "2"]);
        assert!(fp(6, 7) > fp(1, 7));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_rational() -> impl Strategy<Value = Scalar> {
            (-1000i64..1000, 1i64..200).prop_map(|(n, d)| {
                Scalar::Rational(rational(n, d))
            })
        }

        proptest! {
            #[test]
            fn rational_field_axioms(x in small_rational(), y in small_rational(), z in small_rational()) {
                prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
                prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
                prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
                if !x.is_zero() {
                    prop_assert!((&x * &x.inv().unwrap()).is_one());
                }
            }

            #[test]
            fn render_parse_roundtrip(x in small_rational(), v in 0u64..101) {
                prop_assert_eq!(Scalar::parse(&x.render(), Field::Rational).unwrap(), x);
                let y = Scalar::from_i64(v as i64, Field::Prime(101));
                prop_assert_eq!(Scalar::parse(&y.render(), Field::Prime(101)).unwrap(), y);
            }
        }
    }
}
