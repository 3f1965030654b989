use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::affine::{AffineMap, FixedPoint};
use crate::error::{Error, Result};
use crate::growth::triple_product;
use crate::product_thm::lemma6::quotient_image;
use crate::report::ser_rational;
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// More than a third of `A` in one torus `stab(x)`.
    TorusThird,
    /// `K¹⁰|A| ≥ |A/U|^{1/2}|A|`.
    SlopeGrowth,
    /// `K¹⁰|A| ≥ |A/U|·p`.
    FieldSaturation,
    /// No branch holds with constant 1.
    None,
}

#[derive(Clone, Debug, Serialize)]
pub struct DichotomyReport {
    pub branch: Branch,
    #[serde(serialize_with = "ser_rational")]
    pub k: Rational,
    pub size: usize,
    pub triple: usize,
    pub quotient: usize,
    /// `max_x |A ∩ stab(x)|`.
    pub torus_overlap: usize,
    /// `max_g |A ∩ gU|`.
    pub coset_overlap: usize,
    pub p: Option<u64>,
    /// `torus_overlap / (|A|/3)`.
    #[serde(serialize_with = "ser_rational")]
    pub torus_margin: Rational,
    /// `K²⁰ / |A/U|`, the square of `K¹⁰|A| / (|A/U|^{1/2}|A|)`.
    #[serde(serialize_with = "ser_rational")]
    pub slope_margin_squared: Rational,
    /// `K¹⁰|A| / (|A/U|·p)`.
    #[serde(serialize_with = "crate::report::ser_rational_opt")]
    pub field_margin: Option<Rational>,
    /// `coset_overlap ≥ K⁻²⁰|A|`.
    pub coset_clause: bool,
}

/// Largest number of maps in `A` fixing one point.
pub fn torus_overlap(a: &[AffineMap]) -> usize {
    let identity = a.iter().filter(|g| g.is_identity()).count();
    let mut by_point: BTreeMap<Scalar, usize> = BTreeMap::new();
    for g in a {
        if let FixedPoint::Point(x) = g.fixed_point() {
            *by_point.entry(x).or_insert(identity) += 1;
        }
    }
    by_point.values().copied().max().unwrap_or(identity)
}

/// Largest slope class of `A`.
pub fn coset_overlap(a: &[AffineMap]) -> usize {
    let mut by_slope: BTreeMap<&Scalar, usize> = BTreeMap::new();
    for g in a {
        *by_slope.entry(g.slope()).or_insert(0) += 1;
    }
    by_slope.values().copied().max().unwrap_or(0)
}

pub fn dichotomy_check(a: &[AffineMap], p: Option<u64>, cap: u128) -> Result<DichotomyReport> {
    let mut a = a.to_vec();
    a.sort();
    a.dedup();
    if a.is_empty() {
        return Err(Error::invalid("dichotomy_check needs a nonempty list"));
    }
    if let (Some(p), Some(m)) = (p, a[0].field().modulus()) {
        if p != m {
            return Err(Error::invalid(format!("p = {p} differs from the field modulus {m}")));
        }
    }
    let t = triple_product(&a, cap)?;
    let size = a.len();
    let big = |v: usize| Rational::from_integer(BigInt::from(v));
    let k = t.tripling.clone();
    let quotient = quotient_image(&a).len();
    let torus = torus_overlap(&a);
    let coset = coset_overlap(&a);

    let torus_margin = big(3 * torus) / big(size);
    let k10 = num_traits::pow(k.clone(), 10);
    let slope_margin_squared = &k10 * &k10 / big(quotient);
    let field_margin = p.map(|p| &k10 * big(size) / (big(quotient) * Rational::from_integer(BigInt::from(p))));
    let branch = if torus_margin > Rational::one() {
        Branch::TorusThird
    } else if slope_margin_squared >= Rational::one() {
        Branch::SlopeGrowth
    } else if field_margin.as_ref().is_some_and(|m| m >= &Rational::one()) {
        Branch::FieldSaturation
    } else {
        Branch::None
    };
    let coset_clause = big(coset) * &k10 * &k10 >= big(size);
    Ok(DichotomyReport {
        branch,
        k,
        size,
        triple: t.set.len(),
        quotient,
        torus_overlap: torus,
        coset_overlap: coset,
        p,
        torus_margin,
        slope_margin_squared,
        field_margin,
        coset_clause,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Field};

    fn q(a: i64, b: i64) -> AffineMap {
        AffineMap::from_ints(a, b, Field::Rational).unwrap()
    }

    #[test]
    fn translations() {
        let a: Vec<AffineMap> = (0..10).map(|i| q(1, i)).collect();
        let r = dichotomy_check(&a, None, 1 << 30).unwrap();
        assert_eq!(r.k, rational(28, 10));
        assert_eq!(r.quotient, 1);
        assert_eq!(r.branch, Branch::SlopeGrowth);
    }

    #[test]
    fn dilations() {
        let a: Vec<AffineMap> = (0..8).map(|i| q(1 << i, 0)).collect();
        let r = dichotomy_check(&a, None, 1 << 30).unwrap();
        assert_eq!(r.branch, Branch::TorusThird);
        assert_eq!(r.coset_overlap, 1);
        assert_eq!(r.torus_overlap, 8);
    }

    #[test]
    fn product_grid() {
        let mut a = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                a.push(q(1 << i, j));
            }
        }
        let r = dichotomy_check(&a, None, 1 << 30).unwrap();
        assert_eq!(r.size, 9);
        assert_eq!(r.quotient, 3);
        assert_eq!(r.coset_overlap, 3);
        assert!(r.k >= rational(1, 1));
    }

    #[test]
    fn field_modulus_checked() {
        let f = Field::prime(7).unwrap();
        let a = vec![AffineMap::from_ints(2, 1, f).unwrap()];
        assert!(dichotomy_check(&a, Some(11), 1 << 20).is_err());
        assert!(dichotomy_check(&a, Some(7), 1 << 20).is_ok());
    }
}
