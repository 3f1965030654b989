//! Exact product sets in `Aff(1, 𝔽)`.

use std::collections::HashSet;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::affine::AffineMap;
use crate::caps::check_cap;
use crate::error::{ensure, Result};
use crate::report::ser_rational;
use crate::scalar::Rational;

/// `{g∘h : g ∈ A, h ∈ B}`, sorted.
pub fn product_set(a: &[AffineMap], b: &[AffineMap], cap: u128) -> Result<Vec<AffineMap>> {
    check_cap("product enumeration", a.len() as u128 * b.len() as u128, cap)?;
    if let (Some(g), Some(h)) = (a.first(), b.first()) {
        g.field().check(h.field())?;
    }
    let set: HashSet<AffineMap> = a
        .par_iter()
        .flat_map_iter(|g| b.iter().map(move |h| g * h))
        .collect();
    let mut out: Vec<AffineMap> = set.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

pub fn inverses(a: &[AffineMap]) -> Vec<AffineMap> {
    let mut out: Vec<AffineMap> = a.iter().map(AffineMap::inverse).collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub(crate) fn distinct_sorted(a: &[AffineMap]) -> Vec<AffineMap> {
    let mut out = a.to_vec();
    out.sort_unstable();
    out.dedup();
    out
}

/// Product of a word in `A` and `A⁻¹`, left to right; `true` is `A⁻¹`.
pub fn word_product(a: &[AffineMap], word: &[bool], cap: u128) -> Result<Vec<AffineMap>> {
    let a = distinct_sorted(a);
    let inv = inverses(&a);
    let letter = |w: bool| if w { &inv } else { &a };
    let Some((&first, rest)) = word.split_first() else {
        return Ok(Vec::new());
    };
    let mut acc = letter(first).clone();
    for &w in rest {
        acc = product_set(&acc, letter(w), cap)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug)]
pub struct TripleProduct {
    pub set: Vec<AffineMap>,
    /// `|A³|/|A|`.
    pub tripling: Rational,
}

/// `A³` over all ordered triples, refusing `|A|³` above `cap`.
pub fn triple_product(a: &[AffineMap], cap: u128) -> Result<TripleProduct> {
    let a = distinct_sorted(a);
    let n = a.len() as u128;
    check_cap("ordered triples", n.saturating_mul(n).saturating_mul(n), cap)?;
    let set = word_product(&a, &[false, false, false], cap)?;
    let tripling = Rational::new(BigInt::from(set.len()), BigInt::from(a.len().max(1)));
    Ok(TripleProduct { set, tripling })
}

#[derive(Clone, Debug, Serialize)]
pub struct RuzsaCheck {
    /// `|AC⁻¹|`.
    pub lhs: usize,
    pub ab: usize,
    pub bc: usize,
    pub b: usize,
    /// `|AB⁻¹||BC⁻¹|/|B|`.
    #[serde(serialize_with = "ser_rational")]
    pub rhs: Rational,
    pub holds: bool,
}

/// `|AC⁻¹| ≤ |AB⁻¹||BC⁻¹|/|B|`; a failure is reported as a broken invariant.
pub fn ruzsa_check(a: &[AffineMap], b: &[AffineMap], c: &[AffineMap], cap: u128) -> Result<RuzsaCheck> {
    let (a, b, c) = (distinct_sorted(a), distinct_sorted(b), distinct_sorted(c));
    let lhs = product_set(&a, &inverses(&c), cap)?.len();
    let ab = product_set(&a, &inverses(&b), cap)?.len();
    let bc = product_set(&b, &inverses(&c), cap)?.len();
    let rhs = Rational::new(BigInt::from(ab * bc), BigInt::from(b.len().max(1)));
    let holds = Rational::from_integer(BigInt::from(lhs)) <= rhs;
    ensure(holds || b.is_empty(), || {
        format!("Ruzsa inequality fails: |AC^-1| = {lhs} > {ab}*{bc}/{}", b.len())
    })?;
    Ok(RuzsaCheck {
        lhs,
        ab,
        bc,
        b: b.len(),
        rhs,
        holds,
    })
}
