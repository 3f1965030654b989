//! Approximate and uniform multiplicative closure of a symmetry subset.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::affine::{AffineMap, CosetDescriptor};
use crate::error::{ensure, Error, Result};
use crate::grid::{richness_unchecked, GroundSet};
use crate::growth::relation::{partial_product, Relation};
use crate::scalar::{render_rational, Rational};

/// `E = {(g⁻¹, h) : |Y ∩ gY ∩ hY| ≥ (α²/2)|Y|}` and its products.
#[derive(Clone, Debug)]
pub struct Closure {
    pub relation: Relation,
    pub products: Vec<AffineMap>,
    /// `α²/2`.
    pub alpha_next: Rational,
}

/// The dyadic multiplicity bucket of [`Closure`] with the most pairs.
#[derive(Clone, Debug)]
pub struct UniformClosure {
    pub full: Relation,
    pub relation: Relation,
    pub products: Vec<AffineMap>,
    pub alpha_next: Rational,
    /// Retained multiplicities lie in `[2^bucket, 2^{bucket+1})`.
    pub bucket: u32,
    pub buckets: usize,
}

fn distinct(maps: &[AffineMap]) -> Vec<AffineMap> {
    let mut seen = std::collections::BTreeSet::new();
    maps.iter().filter(|g| seen.insert(*g)).cloned().collect()
}

fn ceil_times(r: &Rational, n: usize) -> usize {
    let v = (r * Rational::from_integer(BigInt::from(n))).ceil().to_integer();
    usize::try_from(v.max(BigInt::from(0))).unwrap_or(usize::MAX)
}

pub(crate) fn check_members(a: &[AffineMap], y: &GroundSet, alpha: &Rational) -> Result<()> {
    let needed = ceil_times(alpha, y.len());
    for g in a {
        y.field().check(g.field())?;
        if richness_unchecked(g, y) < needed {
            return Err(Error::NotSymmetrySubset(g.to_string()));
        }
    }
    Ok(())
}

/// Bit `i` of the mask of `g` is set iff `Y_i ∈ gY`.
fn image_masks(a: &[AffineMap], y: &GroundSet) -> Vec<Vec<u64>> {
    let words = y.len().div_ceil(64);
    a.par_iter()
        .map(|g| {
            let inv = g.inverse();
            let mut mask = vec![0u64; words];
            for (i, e) in y.elements().iter().enumerate() {
                if y.contains(&inv.apply_unchecked(e)) {
                    mask[i / 64] |= 1 << (i % 64);
                }
            }
            mask
        })
        .collect()
}

fn overlap(x: &[u64], z: &[u64]) -> usize {
    x.iter().zip(z).map(|(a, b)| (a & b).count_ones() as usize).sum()
}

pub fn approx_closure(a: &[AffineMap], y: &GroundSet, alpha: &Rational) -> Result<Closure> {
    let a = distinct(a);
    if a.is_empty() {
        return Err(Error::invalid("approx_closure needs a nonempty list"));
    }
    check_members(&a, y, alpha)?;
    let alpha_next = alpha * alpha / Rational::from_integer(2.into());
    let needed = ceil_times(&alpha_next, y.len());
    let masks = image_masks(&a, y);
    let pairs: Vec<(usize, usize)> = (0..a.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let masks = &masks;
            (0..masks.len()).filter_map(move |j| (overlap(&masks[i], &masks[j]) >= needed).then_some((i, j)))
        })
        .collect();
    let inverses: Vec<AffineMap> = a.iter().map(AffineMap::inverse).collect();
    let relation = partial_product(&inverses, &a, &pairs)?;
    let products = relation.product_set();

    let size_sq = Rational::from_integer(BigInt::from(a.len() * a.len()));
    ensure(
        Rational::from_integer(BigInt::from(relation.len())) >= &alpha_next * size_sq,
        || format!("|E| = {} is below (α²/2)|A|² for |A| = {}", relation.len(), a.len()),
    )?;
    check_closure(&products, y, &alpha_next)?;
    Ok(Closure {
        relation,
        products,
        alpha_next,
    })
}

/// Every product is `α′`-rich and the product set is closed under inversion.
fn check_closure(products: &[AffineMap], y: &GroundSet, alpha_next: &Rational) -> Result<()> {
    let needed = ceil_times(alpha_next, y.len());
    let poor = products.par_iter().find_any(|x| richness_unchecked(x, y) < needed);
    ensure(poor.is_none(), || {
        format!(
            "product {} is not {}-rich",
            poor.unwrap(),
            render_rational(alpha_next)
        )
    })?;
    let missing = products
        .par_iter()
        .find_any(|x| products.binary_search(&x.inverse()).is_err());
    ensure(missing.is_none(), || {
        format!("inverse of product {} is missing", missing.unwrap())
    })
}

fn floor_log2(r: usize) -> u32 {
    usize::BITS - 1 - r.leading_zeros()
}

/// The bucket `m` maximizing `Σ r_E(x)` over products with `r_E(x) ∈ [2^m, 2^{m+1})`
/// (ties to the higher bucket), and the number of nonempty buckets.
pub fn dyadic_bucket(e: &Relation) -> (u32, usize) {
    let mut mass: BTreeMap<u32, usize> = BTreeMap::new();
    for &r in e.products().values() {
        *mass.entry(floor_log2(r)).or_insert(0) += r;
    }
    let (&bucket, _) = mass
        .iter()
        .max_by(|(b1, m1), (b2, m2)| m1.cmp(m2).then_with(|| b1.cmp(b2)))
        .unwrap_or((&0, &0));
    (bucket, mass.len())
}

pub fn uniform_closure(a: &[AffineMap], y: &GroundSet, alpha: &Rational) -> Result<UniformClosure> {
    let closure = approx_closure(a, y, alpha)?;
    let full = closure.relation;
    let (bucket, buckets) = dyadic_bucket(&full);
    let relation = full.restrict(|_, r| floor_log2(r) == bucket);
    let products = relation.product_set();

    let kept = relation.len();
    let width = products.len();
    for (x, &r) in relation.products() {
        ensure(2 * r * width >= kept, || {
            format!("fiber bound fails at {x}: r = {r}, |E'| = {kept}, |products| = {width}")
        })?;
    }
    let max_r = full.products().values().copied().max().unwrap_or(1);
    let levels = 1 + floor_log2(max_r) as usize;
    ensure(kept * levels >= full.len(), || {
        format!("|E'| = {kept} is below |E|/{levels} with |E| = {}", full.len())
    })?;
    check_closure(&products, y, &closure.alpha_next)?;
    Ok(UniformClosure {
        full,
        relation,
        products,
        alpha_next: closure.alpha_next,
        bucket,
        buckets,
    })
}

/// The `g ∈ A_j` maximizing `#{h : (g⁻¹, h) ∈ E, g⁻¹h ∈ S}`, the coset `gS`,
/// and `|A_j ∩ gS|`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub element: AffineMap,
    pub coset: CosetDescriptor,
    pub hits: usize,
    pub overlap: usize,
}

pub fn translate_density(a_j: &[AffineMap], e_j: &Relation, s: &CosetDescriptor) -> Result<Pullback> {
    if e_j.is_empty() {
        return Err(Error::EmptyRelation);
    }
    if e_j.right() != a_j || e_j.left().len() != a_j.len() {
        return Err(Error::invalid("relation does not range over A_j⁻¹ × A_j"));
    }
    let mut hits = vec![0usize; a_j.len()];
    for &(i, j) in e_j.pairs() {
        if s.contains(&e_j.product_of(i, j)) {
            hits[i] += 1;
        }
    }
    let (best, &count) = hits
        .iter()
        .enumerate()
        .max_by(|(i1, c1), (i2, c2)| c1.cmp(c2).then_with(|| i2.cmp(i1)))
        .expect("nonempty");
    let element = a_j[best].clone();
    let coset = s.left_translate(&element);
    let overlap = a_j.iter().filter(|h| coset.contains(h)).count();
    Ok(Pullback {
        element,
        coset,
        hits: count,
        overlap,
    })
}

/// `α_j = 2(α/2)^{2^j}`.
pub fn alpha_at(alpha: &Rational, j: u32) -> Rational {
    let two = Rational::from_integer(2.into());
    let half = alpha / &two;
    let mut p = half;
    for _ in 0..j {
        p = &p * &p;
    }
    two * p
}
