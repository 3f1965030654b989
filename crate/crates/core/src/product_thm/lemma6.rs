use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::affine::{AffineMap, CosetDescriptor, FixedPoint, LineRecord};
use crate::error::{ensure, Error, Result};
use crate::growth::{triple_product, word_product};
use crate::report::ser_rational;
use crate::scalar::{Rational, Scalar};

/// Slopes of `A`, i.e. its image in `G/U`.
pub fn quotient_image(a: &[AffineMap]) -> Vec<Scalar> {
    let mut s: Vec<Scalar> = a.iter().map(|g| g.slope().clone()).collect();
    s.sort();
    s.dedup();
    s
}

fn distinct(a: &[AffineMap]) -> Vec<AffineMap> {
    let mut seen = std::collections::BTreeSet::new();
    a.iter().filter(|g| seen.insert(*g)).cloned().collect()
}

/// Largest fraction of `A` inside one maximal abelian subgroup: `U` or a
/// point stabilizer `stab(x)`.
#[derive(Clone, Debug, Serialize)]
pub struct Concentration {
    #[serde(serialize_with = "ser_rational")]
    pub fraction: Rational,
    pub count: usize,
    pub subgroup: CosetDescriptor,
}

pub fn abelian_concentration(a: &[AffineMap]) -> Result<Concentration> {
    let a = distinct(a);
    let Some(first) = a.first() else {
        return Err(Error::invalid("abelian_concentration needs a nonempty list"));
    };
    let field = first.field();
    let in_u = a.iter().filter(|g| g.is_translation()).count();
    let identity = a.iter().filter(|g| g.is_identity()).count();
    let mut fixing: BTreeMap<Scalar, usize> = BTreeMap::new();
    for g in &a {
        if let FixedPoint::Point(x) = g.fixed_point() {
            *fixing.entry(x).or_insert(identity) += 1;
        }
    }
    let mut count = in_u;
    let mut subgroup = CosetDescriptor::TranslationCoset { slope: field.one() };
    for (x, &c) in &fixing {
        if c > count {
            count = c;
            subgroup = CosetDescriptor::ConcurrencyCoset {
                point: (x.clone(), x.clone()),
            };
        }
    }
    Ok(Concentration {
        fraction: Rational::new(BigInt::from(count), BigInt::from(a.len())),
        count,
        subgroup,
    })
}

fn conjugates_times_inverse(a: &[AffineMap], x: &AffineMap) -> Vec<AffineMap> {
    let x_inv = x.inverse();
    let mut s: Vec<AffineMap> = a
        .iter()
        .map(|g| &(&(g * x) * &g.inverse()) * &x_inv)
        .collect();
    s.sort();
    s.dedup();
    s
}

/// First `x ∈ A∖U` in input order with `|{a x a⁻¹ x⁻¹ : a ∈ A}| > 1`.
pub fn commutator_witness(a: &[AffineMap]) -> Option<AffineMap> {
    a.iter()
        .filter(|x| !x.is_translation())
        .find(|x| conjugates_times_inverse(a, x).len() > 1)
        .cloned()
}

#[derive(Clone, Debug)]
pub struct Lemma6Decomposition {
    pub x: AffineMap,
    pub a0: AffineMap,
    /// `{a x a⁻¹ x⁻¹ : a ∈ A}`, all translations.
    pub s: Vec<AffineMap>,
    /// `(a0⁻¹A) ∩ C(x)`.
    pub t: Vec<AffineMap>,
    /// Nonzero offsets of `S`.
    pub b: Vec<Scalar>,
    /// Slopes of `T`.
    pub c: Vec<Scalar>,
    /// `|B - B·C|`, when enumerable.
    pub difference_size: Option<usize>,
    pub quotient_size: usize,
    /// Abelian concentration below `1/3`.
    pub spread_regime: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma6Report {
    pub x: LineRecord,
    pub a0: LineRecord,
    pub s: Vec<LineRecord>,
    pub t: Vec<LineRecord>,
    pub b: Vec<String>,
    pub c: Vec<String>,
    pub difference_size: Option<usize>,
    pub size: usize,
    pub quotient_size: usize,
    pub spread_regime: bool,
}

impl Lemma6Decomposition {
    pub fn report(&self, a_len: usize) -> Lemma6Report {
        let lines = |v: &[AffineMap]| v.iter().map(AffineMap::to_record).collect();
        Lemma6Report {
            x: self.x.to_record(),
            a0: self.a0.to_record(),
            s: lines(&self.s),
            t: lines(&self.t),
            b: self.b.iter().map(Scalar::render).collect(),
            c: self.c.iter().map(Scalar::render).collect(),
            difference_size: self.difference_size,
            size: a_len,
            quotient_size: self.quotient_size,
            spread_regime: self.spread_regime,
        }
    }
}

/// `|B - B·C|` by enumeration; `None` past `cap` ordered triples.
pub fn difference_product_size(b: &[Scalar], c: &[Scalar], cap: u128) -> Option<usize> {
    let n = (b.len() as u128).saturating_mul(b.len() as u128).saturating_mul(c.len() as u128);
    if n > cap {
        return None;
    }
    let mut bc: Vec<Scalar> = b.iter().flat_map(|x| c.iter().map(move |y| x * y)).collect();
    bc.sort();
    bc.dedup();
    let mut out: Vec<Scalar> = b.iter().flat_map(|x| bc.iter().map(move |y| x - y)).collect();
    out.sort();
    out.dedup();
    Some(out.len())
}

pub fn lemma6_decomposition(a: &[AffineMap], cap: u128) -> Result<Lemma6Decomposition> {
    let a = distinct(a);
    let x = commutator_witness(&a).ok_or(Error::NoWitness)?;
    let commutes = |g: &AffineMap| g * &x == &x * g;
    let mut best: Option<(usize, AffineMap, Vec<AffineMap>)> = None;
    for a0 in &a {
        let inv = a0.inverse();
        let t: Vec<AffineMap> = a.iter().map(|g| &inv * g).filter(|h| commutes(h)).collect();
        if best.as_ref().is_none_or(|(n, _, _)| t.len() > *n) {
            best = Some((t.len(), a0.clone(), t));
        }
    }
    let (_, a0, mut t) = best.expect("A is nonempty");
    t.sort();
    let s = conjugates_times_inverse(&a, &x);
    let quotient_size = quotient_image(&a).len();

    ensure(s.iter().all(AffineMap::is_translation), || {
        "a commutator a x a^-1 x^-1 has slope other than 1".to_string()
    })?;
    ensure(s.len() * t.len() >= a.len(), || {
        format!("|S||T| = {}*{} < |A| = {}", s.len(), t.len(), a.len())
    })?;
    ensure(t.len() <= quotient_size, || {
        format!("|T| = {} exceeds |A/U| = {quotient_size}", t.len())
    })?;

    let b: Vec<Scalar> = s
        .iter()
        .map(|g| g.offset().clone())
        .filter(|v| !v.is_zero())
        .collect();
    let c = quotient_image(&t);
    let difference_size = difference_product_size(&b, &c, cap);
    let spread_regime = abelian_concentration(&a)?.fraction < Rational::new(1.into(), 3.into());
    Ok(Lemma6Decomposition {
        x,
        a0,
        s,
        t,
        b,
        c,
        difference_size,
        quotient_size,
        spread_regime,
    })
}

/// `|A³A⁻¹A²A⁻³|` against `K¹⁰|A|` with `K = |A³|/|A|`.
#[derive(Clone, Debug, Serialize)]
pub struct NineFoldCheck {
    pub size: usize,
    pub triple: usize,
    pub lhs: usize,
    #[serde(serialize_with = "ser_rational")]
    pub rhs: Rational,
    pub holds: bool,
}

pub const NINE_FOLD_MAX: usize = 12;

pub fn nine_fold_check(a: &[AffineMap], cap: u128) -> Result<NineFoldCheck> {
    let a = distinct(a);
    if a.is_empty() || a.len() > NINE_FOLD_MAX {
        return Err(Error::invalid(format!(
            "the nine-fold product check takes 1..={NINE_FOLD_MAX} maps, got {}",
            a.len()
        )));
    }
    let word = [false, false, false, true, false, false, true, true, true];
    let lhs = word_product(&a, &word, cap)?.len();
    let triple = triple_product(&a, cap)?.set.len();
    let n = BigInt::from(a.len());
    let rhs = Rational::new(BigInt::from(triple).pow(10) * &n, n.pow(10));
    Ok(NineFoldCheck {
        size: a.len(),
        triple,
        lhs,
        holds: Rational::from_integer(BigInt::from(lhs)) <= rhs,
        rhs,
    })
}
