//! Symmetry sets `sym_α(Y) = {g : |Y ∩ gY| ≥ α|Y|}`.
//!
//! For `α|Y| ≥ 2` every member moves at least two points of `Y` into `Y`, so
//! it is the unique map sending its two smallest such points `y₁ < y₂` to
//! their images. Enumerating `(y₁, y₂, g(y₁), g(y₂))` and keeping `g` only
//! when `y₁, y₂` really are its two smallest rich points produces each member
//! exactly once.

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::affine::{AffineMap, LineRecord};
use crate::caps::{check_cap, Caps};
use crate::error::{ensure, Error, Result};
use crate::grid::{rich_threshold, richness_at_least, GroundSet};
use crate::report::ser_rational;
use crate::scalar::{render_rational, Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member {
    pub map: AffineMap,
    pub richness: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetrySet {
    pub alpha: Rational,
    pub ground_size: usize,
    /// Sorted by map.
    pub members: Vec<Member>,
}

/// One CSV row of a symmetry set.
#[derive(Clone, Debug, Serialize)]
pub struct MemberRow {
    pub a: String,
    pub b: String,
    pub richness: usize,
}

impl SymmetrySet {
    pub(crate) fn from_members(alpha: Rational, ground_size: usize, mut members: Vec<Member>) -> SymmetrySet {
        members.sort_by(|x, y| x.map.cmp(&y.map));
        SymmetrySet {
            alpha,
            ground_size,
            members,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn maps(&self) -> Vec<AffineMap> {
        self.members.iter().map(|m| m.map.clone()).collect()
    }

    pub fn contains(&self, g: &AffineMap) -> bool {
        self.members.binary_search_by(|m| m.map.cmp(g)).is_ok()
    }

    pub fn richness_of(&self, g: &AffineMap) -> Option<usize> {
        self.members
            .binary_search_by(|m| m.map.cmp(g))
            .ok()
            .map(|i| self.members[i].richness)
    }

    pub fn rows(&self) -> Vec<MemberRow> {
        self.members
            .iter()
            .map(|m| {
                let LineRecord { a, b } = m.map.to_record();
                MemberRow {
                    a,
                    b,
                    richness: m.richness,
                }
            })
            .collect()
    }
}

pub(crate) fn check_alpha(y: &GroundSet, alpha: &Rational) -> Result<()> {
    let min = Rational::new(BigInt::from(2), BigInt::from(y.len()));
    if alpha < &min {
        return Err(Error::AlphaTooSmall {
            alpha: render_rational(alpha),
            min: render_rational(&min),
        });
    }
    Ok(())
}

/// The map sending `y1 ↦ z1` and `y2 ↦ z2`.
fn through(y1: &Scalar, y2: &Scalar, z1: &Scalar, z2: &Scalar) -> Option<AffineMap> {
    let a = &(z2 - z1) / &(y2 - y1);
    let b = z1 - &(&a * y1);
    AffineMap::new(a, b).ok()
}

/// Complete enumeration of `sym_α(Y)` for `α ≥ 2/|Y|`.
pub fn sym_set(y: &GroundSet, alpha: &Rational, caps: &Caps) -> Result<SymmetrySet> {
    check_alpha(y, alpha)?;
    check_cap("symmetry-set ground size", y.len() as u128, caps.sym as u128)?;
    let n = y.len();
    let needed = rich_threshold(y, alpha);
    if needed > n {
        return Ok(SymmetrySet::from_members(alpha.clone(), n, Vec::new()));
    }
    let elems = y.elements();
    // The two smallest rich points lie among the first n - needed + 2 elements.
    let prefix = n - needed + 2;
    let members: Vec<Member> = (0..prefix)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut found = Vec::new();
            for j in i + 1..prefix {
                for (s, z1) in elems.iter().enumerate() {
                    for (t, z2) in elems.iter().enumerate() {
                        if s == t {
                            continue;
                        }
                        let Some(g) = through(&elems[i], &elems[j], z1, z2) else {
                            continue;
                        };
                        let earlier_rich = elems[..j]
                            .iter()
                            .enumerate()
                            .any(|(u, x)| u != i && y.contains(&g.apply_unchecked(x)));
                        if earlier_rich {
                            continue;
                        }
                        if let Some(r) = richness_at_least(&g, y, needed) {
                            found.push(Member { map: g, richness: r });
                        }
                    }
                }
            }
            found
        })
        .collect();
    Ok(SymmetrySet::from_members(alpha.clone(), n, members))
}

/// Size of `sym_α(Y)` against the reference bounds.
#[derive(Clone, Debug, Serialize)]
pub struct SymBoundReport {
    pub ground_size: usize,
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    pub size: usize,
    /// `|sym| / (α⁻³|Y|)`.
    #[serde(serialize_with = "ser_rational")]
    pub ratio_cubic: Rational,
    /// `|sym| / (α⁻⁴|Y|)`.
    #[serde(serialize_with = "ser_rational")]
    pub ratio_quartic: Rational,
    /// `|sym| / (α⁻²|Y|²)`.
    #[serde(serialize_with = "ser_rational")]
    pub ratio_square: Rational,
    /// `|sym| / |Y|⁴`, asserted `≤ 1`.
    #[serde(serialize_with = "ser_rational")]
    pub ratio_trivial: Rational,
    /// Over 𝔽_p: whether `|Y| ≤ (α/2)p`.
    pub small_in_field: Option<bool>,
}

pub fn sym_bound_report(y: &GroundSet, alpha: &Rational, caps: &Caps) -> Result<SymBoundReport> {
    let sym = sym_set(y, alpha, caps)?;
    let r = bound_report(y, &sym);
    ensure(r.ratio_trivial <= Rational::one(), || {
        format!("|sym| = {} exceeds |Y|^4", r.size)
    })?;
    Ok(r)
}

pub(crate) fn bound_report(y: &GroundSet, sym: &SymmetrySet) -> SymBoundReport {
    let n = Rational::from_integer(BigInt::from(y.len()));
    let size = Rational::from_integer(BigInt::from(sym.len()));
    let alpha = &sym.alpha;
    let inv = alpha.recip();
    let ratio = |bound: Rational| &size / bound;
    let small_in_field = y.field().modulus().map(|p| {
        n.clone() <= alpha * Rational::from_integer(BigInt::from(p)) / Rational::from_integer(2.into())
    });
    SymBoundReport {
        ground_size: y.len(),
        alpha: alpha.clone(),
        size: sym.len(),
        ratio_cubic: ratio(num_traits::pow(inv.clone(), 3) * &n),
        ratio_quartic: ratio(num_traits::pow(inv.clone(), 4) * &n),
        ratio_square: ratio(num_traits::pow(inv, 2) * &n * &n),
        ratio_trivial: ratio(num_traits::pow(n.clone(), 4)),
        small_in_field,
    }
}

/// Whether `sym_1(Y)`, the setwise stabilizer of `Y`, is closed under
/// composition and inversion.
#[derive(Clone, Debug, Serialize)]
pub struct GroupCheck {
    pub members: Vec<LineRecord>,
    pub closed: bool,
}

pub fn sym_group_check(y: &GroundSet, caps: &Caps) -> Result<GroupCheck> {
    let sym = sym_set(y, &Rational::one(), caps)?;
    let closed = sym.members.iter().all(|g| {
        sym.contains(&g.map.inverse())
            && sym
                .members
                .iter()
                .all(|h| sym.contains(&(&g.map * &h.map)))
    });
    Ok(GroupCheck {
        members: sym.members.iter().map(|m| m.map.to_record()).collect(),
        closed,
    })
}

/// Number of translations in `sym_α` of a unit-step arithmetic progression of
/// length `n`: `|Y ∩ (Y + b)| = n - |b|`, so `2(n - ⌈αn⌉) + 1`.
pub fn progression_translation_count(n: usize, alpha: &Rational) -> usize {
    let needed = (alpha * Rational::from_integer(BigInt::from(n))).ceil().to_integer();
    let needed = usize::try_from(needed.max(BigInt::one())).unwrap_or(usize::MAX);
    if needed > n {
        0
    } else {
        2 * (n - needed) + 1
    }
}
