use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::affine::AffineMap;
use crate::caps::{check_cap, Caps};
use crate::error::{ensure, Error, Result};
use crate::grid::{richness_sweep, GroundSet};
use crate::growth::{bsg_pipeline, StructureReport};
use crate::numeric::{root_enclosure, EnclosureReport, DEFAULT_BITS};
use crate::report::{ser_rational, ser_rational_opt};
use crate::scalar::{Field, Rational, Scalar};

fn common_field(sets: &[&[Scalar]]) -> Result<Field> {
    let mut field = None;
    for s in sets {
        for x in s.iter() {
            match field {
                None => field = Some(x.field()),
                Some(f) => f.check(x.field())?,
            }
        }
    }
    field.ok_or_else(|| Error::invalid("all scalar sets are empty"))
}

fn distinct(v: impl IntoIterator<Item = Scalar>) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = v.into_iter().collect();
    out.sort();
    out.dedup();
    out
}

/// `{x + y}` and `{x·y}` over distinct inputs.
pub fn sumset(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    distinct(a.iter().flat_map(|x| b.iter().map(move |y| x + y)))
}

pub fn product_set(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    distinct(a.iter().flat_map(|x| b.iter().map(move |y| x * y)))
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpanderCheck {
    /// `|A + BC|`.
    pub lhs: usize,
    /// `|A||B||C|`.
    pub volume: String,
    pub p: Option<u64>,
    /// `lhs² / (|A||B||C|)`.
    #[serde(serialize_with = "ser_rational")]
    pub ratio_squared: Rational,
    /// `lhs / √(|A||B||C|)`.
    pub ratio: EnclosureReport,
    /// `lhs ≥ min(√(|A||B||C|), p)`.
    pub meets_bound: bool,
}

pub fn expander_check(a: &[Scalar], b: &[Scalar], c: &[Scalar], cap: u128) -> Result<ExpanderCheck> {
    let field = common_field(&[a, b, c])?;
    let (a, b, c) = (distinct(a.to_vec()), distinct(b.to_vec()), distinct(c.to_vec()));
    if a.is_empty() || b.is_empty() || c.is_empty() {
        return Err(Error::invalid("expander_check needs nonempty A, B, C"));
    }
    check_cap("|B||C|", b.len() as u128 * c.len() as u128, cap)?;
    let bc = product_set(&b, &c);
    check_cap("|A||BC|", a.len() as u128 * bc.len() as u128, cap)?;
    let lhs = sumset(&a, &bc).len();
    let p = field.modulus();
    if let Some(p) = p {
        ensure(lhs as u128 <= p as u128, || format!("|A+BC| = {lhs} exceeds p = {p}"))?;
    }
    let volume = BigInt::from(a.len()) * BigInt::from(b.len()) * BigInt::from(c.len());
    let lhs_r = Rational::from_integer(BigInt::from(lhs));
    let ratio_squared = &lhs_r * &lhs_r / Rational::from_integer(volume.clone());
    let meets_bound = ratio_squared >= Rational::one() || p.is_some_and(|p| lhs as u64 >= p);
    let ratio = root_enclosure(&ratio_squared, 2, DEFAULT_BITS).to_report(12);
    Ok(ExpanderCheck {
        lhs,
        volume: volume.to_string(),
        p,
        ratio_squared,
        ratio,
        meets_bound,
    })
}

/// `ℓ_{b,c}(x) = c(x - b)` for `b ∈ B`, `c ∈ C`, sorted and deduplicated.
pub fn elekes_family(b: &[Scalar], c: &[Scalar]) -> Result<Vec<AffineMap>> {
    if c.iter().any(Scalar::is_zero) {
        return Err(Error::ZeroSlope);
    }
    let mut out = Vec::with_capacity(b.len() * c.len());
    for x in b {
        for y in c {
            out.push(AffineMap::new(y.clone(), -(y * x))?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymReport {
    pub size_a: usize,
    pub size_b: usize,
    pub size_c: usize,
    /// `|A + B|`.
    pub sum: usize,
    /// `|AC|`.
    pub product: usize,
    /// `|Y|` for `Y = (A + B) ∪ AC`.
    pub ground: usize,
    pub family: usize,
    pub min_richness: usize,
    /// `|A|/|Y|`.
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub k: Rational,
    pub depth: u32,
    /// `|AC| + |A+B| > K|A|`.
    pub growth: bool,
    /// `min(|B|,|C|)^J / (K^{J·2^J}|A|)`.
    #[serde(serialize_with = "ser_rational")]
    pub small_side_margin: Rational,
    pub small_side: bool,
    /// `(2K)^{2^J} ≤ |A|`.
    pub k_hypothesis: bool,
    /// Over 𝔽_p: `|A|(2K)^{2^J} ≤ p`.
    pub p_hypothesis: Option<bool>,
    /// `|A| / p`, over 𝔽_p.
    #[serde(serialize_with = "ser_rational_opt")]
    pub density: Option<Rational>,
    pub pipeline: Option<StructureReport>,
}

pub const ASYM_MAX_DEPTH: u32 = 8;

pub fn asym_experiment(
    a: &[Scalar],
    b: &[Scalar],
    c: &[Scalar],
    depth: u32,
    k: &Rational,
    with_pipeline: bool,
    caps: &Caps,
) -> Result<AsymReport> {
    let field = common_field(&[a, b, c])?;
    if depth > ASYM_MAX_DEPTH {
        return Err(Error::invalid(format!("J must be at most {ASYM_MAX_DEPTH}")));
    }
    if k <= &Rational::from_integer(0.into()) {
        return Err(Error::invalid("K must be positive"));
    }
    let (a, b, c) = (distinct(a.to_vec()), distinct(b.to_vec()), distinct(c.to_vec()));
    if a.is_empty() || b.is_empty() || c.is_empty() {
        return Err(Error::invalid("asym_experiment needs nonempty A, B, C"));
    }
    let family = elekes_family(&b, &c)?;
    check_cap("|A||B| + |A||C|", (a.len() * (b.len() + c.len())) as u128, caps.product)?;
    let sum = sumset(&a, &b);
    let prod = product_set(&a, &c);
    let y = GroundSet::new(field, sum.iter().chain(&prod).cloned().collect())?;
    check_cap("family richness counts", family.len() as u128 * y.len() as u128, caps.product)?;
    let richness = richness_sweep(&family, &y)?;
    let min_richness = richness.iter().copied().min().unwrap_or(0);
    for (g, &r) in family.iter().zip(&richness) {
        ensure(r >= a.len(), || {
            format!("line {g} meets (A+B)x(AC) in {r} < |A| = {} points", a.len())
        })?;
    }

    let big = |v: usize| Rational::from_integer(BigInt::from(v));
    let n = big(a.len());
    let growth = big(sum.len() + prod.len()) > k * &n;
    let small = b.len().min(c.len());
    let spread = 1usize << depth;
    let k_pow = num_traits::pow(k.clone(), depth as usize * spread);
    let small_side_margin = num_traits::pow(big(small), depth as usize) / (&k_pow * &n);
    let two_k_pow = num_traits::pow(k * Rational::from_integer(2.into()), spread);
    let k_hypothesis = two_k_pow <= n;
    let p_hypothesis = field
        .modulus()
        .map(|p| &n * &two_k_pow <= Rational::from_integer(BigInt::from(p)));
    let density = field
        .modulus()
        .map(|p| &n / Rational::from_integer(BigInt::from(p)));
    let alpha = &n / big(y.len());
    let pipeline = if with_pipeline {
        Some(bsg_pipeline(&family, &y, &alpha, depth as usize, caps)?)
    } else {
        None
    };
    Ok(AsymReport {
        size_a: a.len(),
        size_b: b.len(),
        size_c: c.len(),
        sum: sum.len(),
        product: prod.len(),
        ground: y.len(),
        family: family.len(),
        min_richness,
        alpha,
        k: k.clone(),
        depth,
        growth,
        small_side: small_side_margin <= Rational::one(),
        small_side_margin,
        k_hypothesis,
        p_hypothesis,
        density,
        pipeline,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn qs(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_i64(x, Field::Rational)).collect()
    }

    fn q(a: i64, b: i64) -> AffineMap {
        AffineMap::from_ints(a, b, Field::Rational).unwrap()
    }

    #[test]
    fn expander_examples() {
        let s = qs(&[1, 2, 3]);
        let r = expander_check(&s, &s, &s, 1 << 20).unwrap();
        assert_eq!(r.lhs, 11);
        assert_eq!(r.volume, "27");
        assert!(r.meets_bound);
        let r = expander_check(&s, &qs(&[0]), &s, 1 << 20).unwrap();
        assert_eq!(r.lhs, 3);
        let f = Field::prime(7).unwrap();
        let all: Vec<Scalar> = (1..7).map(|v| Scalar::from_i64(v, f)).collect();
        let r = expander_check(&all, &all, &all, 1 << 20).unwrap();
        assert_eq!(r.lhs, 7);
        assert!(r.meets_bound);
    }

    #[test]
    fn elekes_examples() {
        let fam = elekes_family(&qs(&[0, 1]), &qs(&[1, 2])).unwrap();
        assert_eq!(fam, vec![q(1, -1), q(1, 0), q(2, -2), q(2, 0)]);
        assert_eq!(elekes_family(&qs(&[0]), &qs(&[1])).unwrap(), vec![q(1, 0)]);
        assert!(matches!(elekes_family(&qs(&[0]), &qs(&[0])), Err(Error::ZeroSlope)));
    }

    #[test]
    fn asym_interval() {
        let a: Vec<i64> = (1..=8).collect();
        let r = asym_experiment(&qs(&a), &qs(&[1, 2]), &qs(&[1, 2]), 1, &rational(3, 2), false, &Caps::default())
            .unwrap();
        assert_eq!(r.sum, 9);
        // {1..8} ∪ {2,4,..,16}
        assert_eq!(r.product, 12);
        assert!(r.min_richness >= 8);
        assert_eq!(r.family, 4);
    }

    #[test]
    fn asym_geometric_with_pipeline() {
        let g: Vec<i64> = (0..6).map(|i| 1 << i).collect();
        let r = asym_experiment(&qs(&g), &qs(&g), &qs(&g), 1, &rational(2, 1), true, &Caps::default())
            .unwrap();
        assert_eq!(r.product, 11);
        assert!(r.pipeline.is_some());
    }
}
