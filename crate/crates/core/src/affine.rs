//! The affine group Aff(1,𝔽) and its reading as non-vertical lines.
//!
//! A map `x ↦ ax + b` with `a ≠ 0` is identified with the line `y = ax + b`.
//! Cosets of the translation subgroup `U` are parallel classes; cosets of a
//! point stabilizer (transporters `trans(x, y)`) are pencils of lines through
//! the common point `(x, y)`. Horizontal lines have no inverse and are not
//! representable.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineMap {
    a: Scalar,
    b: Scalar,
}

/// Outcome of solving `ax + b = x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedPoint {
    Point(Scalar),
    None,
    Everywhere,
}

impl AffineMap {
    pub fn new(a: Scalar, b: Scalar) -> Result<AffineMap> {
        a.field().check(b.field())?;
        if a.is_zero() {
            return Err(Error::ZeroSlope);
        }
        Ok(AffineMap { a, b })
    }

    pub fn from_ints(a: i64, b: i64, field: Field) -> Result<AffineMap> {
        AffineMap::new(Scalar::from_i64(a, field), Scalar::from_i64(b, field))
    }

    /// Parses slope and offset text such as `"2"` and `"-1/2"`.
    pub fn parse(a: &str, b: &str, field: Field) -> Result<AffineMap> {
        AffineMap::new(Scalar::parse(a, field)?, Scalar::parse(b, field)?)
    }

    pub fn identity(field: Field) -> AffineMap {
        AffineMap {
            a: field.one(),
            b: field.zero(),
        }
    }

    pub fn translation(b: Scalar) -> AffineMap {
        AffineMap {
            a: b.field().one(),
            b,
        }
    }

    pub fn slope(&self) -> &Scalar {
        &self.a
    }

    pub fn offset(&self) -> &Scalar {
        &self.b
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_translation(&self) -> bool {
        self.a.is_one()
    }

    /// `self ∘ h`, i.e. `x ↦ self(h(x))`.
    pub fn compose(&self, h: &AffineMap) -> Result<AffineMap> {
        self.field().check(h.field())?;
        Ok(self.compose_unchecked(h))
    }

    fn compose_unchecked(&self, h: &AffineMap) -> AffineMap {
        AffineMap {
            a: &self.a * &h.a,
            b: &(&self.a * &h.b) + &self.b,
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let inv_a = self.a.inv().expect("slope is nonzero");
        let b = -&(&self.b * &inv_a);
        AffineMap { a: inv_a, b }
    }

    pub fn apply(&self, x: &Scalar) -> Result<Scalar> {
        self.field().check(x.field())?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &Scalar) -> Scalar {
        &(&self.a * x) + &self.b
    }

    /// `g ∘ h ∘ g⁻¹`.
    pub fn conjugate(g: &AffineMap, h: &AffineMap) -> Result<AffineMap> {
        Ok(g.compose(h)?.compose_unchecked(&g.inverse()))
    }

    /// `g ∘ h ∘ g⁻¹ ∘ h⁻¹`; always a translation since 𝔽* is abelian.
    pub fn commutator(g: &AffineMap, h: &AffineMap) -> Result<AffineMap> {
        Ok(AffineMap::conjugate(g, h)?.compose_unchecked(&h.inverse()))
    }

    pub fn fixed_point(&self) -> FixedPoint {
        if self.a.is_one() {
            if self.b.is_zero() {
                FixedPoint::Everywhere
            } else {
                FixedPoint::None
            }
        } else {
            let one = self.field().one();
            FixedPoint::Point(&self.b / &(&one - &self.a))
        }
    }

    /// Intersection point of the two lines, if their slopes differ.
    pub fn intersection(&self, other: &AffineMap) -> Option<(Scalar, Scalar)> {
        if self.a == other.a {
            return None;
        }
        let x = &(&other.b - &self.b) / &(&self.a - &other.a);
        let y = self.apply_unchecked(&x);
        Some((x, y))
    }

    /// Whether the line passes through `(x, y)`, i.e. the map sends `x` to `y`.
    pub fn passes_through(&self, x: &Scalar, y: &Scalar) -> bool {
        &self.apply_unchecked(x) == y
    }

    pub fn to_record(&self) -> LineRecord {
        LineRecord {
            a: self.a.render(),
            b: self.b.render(),
        }
    }

    pub fn from_record(r: &LineRecord, field: Field) -> Result<AffineMap> {
        AffineMap::parse(&r.a, &r.b, field)
    }
}

/// Panics if the maps live in different fields.
impl Mul for &AffineMap {
    type Output = AffineMap;
    fn mul(self, rhs: &AffineMap) -> AffineMap {
        assert_eq!(self.field(), rhs.field(), "mixed fields");
        self.compose_unchecked(rhs)
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// JSON form of a line: `{"a":"2","b":"-1/2"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineRecord {
    pub a: String,
    pub b: String,
}

/// A left coset of a maximal abelian subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CosetDescriptor {
    /// All maps with slope `slope`: a coset of `U`, a parallel class.
    TranslationCoset {
        #[serde(with = "scalar_text")]
        slope: Scalar,
    },
    /// All maps sending `x` to `y`: a transporter, a pencil through `(x, y)`.
    ConcurrencyCoset {
        #[serde(with = "point_text")]
        point: (Scalar, Scalar),
    },
}

impl CosetDescriptor {
    pub fn contains(&self, g: &AffineMap) -> bool {
        match self {
            CosetDescriptor::TranslationCoset { slope } => g.slope() == slope,
            CosetDescriptor::ConcurrencyCoset { point: (x, y) } => g.passes_through(x, y),
        }
    }

    /// The coset `g · self`.
    pub fn left_translate(&self, g: &AffineMap) -> CosetDescriptor {
        match self {
            CosetDescriptor::TranslationCoset { slope } => CosetDescriptor::TranslationCoset {
                slope: g.slope() * slope,
            },
            CosetDescriptor::ConcurrencyCoset { point: (x, y) } => {
                CosetDescriptor::ConcurrencyCoset {
                    point: (x.clone(), g.apply_unchecked(y)),
                }
            }
        }
    }

    /// Whether the coset is a subgroup (contains the identity).
    pub fn is_subgroup(&self) -> bool {
        match self {
            CosetDescriptor::TranslationCoset { slope } => slope.is_one(),
            CosetDescriptor::ConcurrencyCoset { point: (x, y) } => x == y,
        }
    }
}

impl fmt::Display for CosetDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CosetDescriptor::TranslationCoset { slope } => write!(f, "slope {slope}"),
            CosetDescriptor::ConcurrencyCoset { point: (x, y) } => write!(f, "point ({x}, {y})"),
        }
    }
}

pub(crate) mod scalar_text {
    use crate::scalar::{Field, Scalar};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: &Scalar, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&s.render())
    }

    /// Reads text as a rational; re-interpret in the target field as needed.
    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Scalar, D::Error> {
        let t = String::deserialize(de)?;
        Scalar::parse(&t, Field::Rational).map_err(serde::de::Error::custom)
    }
}

mod point_text {
    use crate::scalar::{Field, Scalar};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(p: &(Scalar, Scalar), ser: S) -> Result<S::Ok, S::Error> {
        [p.0.render(), p.1.render()].serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<(Scalar, Scalar), D::Error> {
        let [x, y] = <[String; 2]>::deserialize(de)?;
        let parse = |t: &str| Scalar::parse(t, Field::Rational).map_err(serde::de::Error::custom);
        Ok((parse(&x)?, parse(&y)?))
    }
}

fn check_fields(maps: &[AffineMap]) -> Result<Field> {
    let field = maps
        .first()
        .ok_or_else(|| Error::invalid("empty list of maps"))?
        .field();
    for g in maps {
        field.check(g.field())?;
    }
    Ok(field)
}

/// Finds a single coset containing every map: a common slope, else a common point.
/// A common slope is preferred when both hold.
pub fn classify_coset(maps: &[AffineMap]) -> Result<Option<CosetDescriptor>> {
    check_fields(maps)?;
    let first = &maps[0];
    if maps.iter().all(|g| g.slope() == first.slope()) {
        return Ok(Some(CosetDescriptor::TranslationCoset {
            slope: first.slope().clone(),
        }));
    }
    let other = maps
        .iter()
        .find(|g| g.slope() != first.slope())
        .expect("slopes differ");
    let (x, y) = first.intersection(other).expect("slopes differ");
    if maps.iter().all(|g| g.passes_through(&x, &y)) {
        Ok(Some(CosetDescriptor::ConcurrencyCoset { point: (x, y) }))
    } else {
        Ok(None)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    ParallelPair,
    ConcurrentTriple,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Slope(Scalar),
    Point(Scalar, Scalar),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GpViolation {
    pub kind: ViolationKind,
    pub indices: Vec<usize>,
    pub witness: Witness,
}

impl GpViolation {
    /// Recomputes the witness from the indexed lines.
    pub fn verify(&self, lines: &[AffineMap]) -> bool {
        match (&self.kind, &self.witness, self.indices.as_slice()) {
            (ViolationKind::ParallelPair, Witness::Slope(s), &[i, j]) => {
                i != j && lines[i].slope() == s && lines[j].slope() == s
            }
            (ViolationKind::ConcurrentTriple, Witness::Point(x, y), &[i, j, k]) => {
                [i, j, k].iter().all(|&t| lines[t].passes_through(x, y))
                    && concurrency_determinant(&lines[i], &lines[j], &lines[k]).is_zero()
            }
            _ => false,
        }
    }
}

impl fmt::Display for GpViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            Witness::Slope(s) => write!(f, "parallel lines {:?} with slope {s}", self.indices),
            Witness::Point(x, y) => write!(f, "lines {:?} concurrent at ({x}, {y})", self.indices),
        }
    }
}

/// `det [[a_i, b_i, 1], [a_j, b_j, 1], [a_k, b_k, 1]]`; zero iff the three
/// lines are concurrent or two of them are parallel.
pub fn concurrency_determinant(li: &AffineMap, lj: &AffineMap, lk: &AffineMap) -> Scalar {
    let (ai, bi) = (li.slope(), li.offset());
    let (aj, bj) = (lj.slope(), lj.offset());
    let (ak, bk) = (lk.slope(), lk.offset());
    let t1 = ai * &(bj - bk);
    let t2 = bi * &(aj - ak);
    let t3 = &(aj * bk) - &(ak * bj);
    &(&t1 - &t2) + &t3
}

/// Lists every way the family fails to be in general position; empty means ok.
///
/// Each parallel class contributes one `ParallelPair` (its first two lines);
/// identical lines count as parallel. Each point lying on three or more lines
/// contributes one `ConcurrentTriple` (the first three lines through it).
pub fn general_position_check(lines: &[AffineMap]) -> Result<Vec<GpViolation>> {
    check_fields(lines)?;
    let mut violations = Vec::new();

    let mut by_slope: BTreeMap<&Scalar, Vec<usize>> = BTreeMap::new();
    for (i, l) in lines.iter().enumerate() {
        by_slope.entry(l.slope()).or_default().push(i);
    }
    for (slope, idx) in &by_slope {
        if idx.len() >= 2 {
            violations.push(GpViolation {
                kind: ViolationKind::ParallelPair,
                indices: vec![idx[0], idx[1]],
                witness: Witness::Slope((*slope).clone()),
            });
        }
    }

    let mut through: HashMap<(Scalar, Scalar), Vec<usize>> = HashMap::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if let Some(p) = lines[i].intersection(&lines[j]) {
                let on = through.entry(p).or_default();
                for t in [i, j] {
                    if !on.contains(&t) {
                        on.push(t);
                    }
                }
            }
        }
    }
    let mut points: Vec<_> = through.into_iter().filter(|(_, v)| v.len() >= 3).collect();
    points.sort();
    for ((x, y), mut idx) in points {
        idx.sort_unstable();
        violations.push(GpViolation {
            kind: ViolationKind::ConcurrentTriple,
            indices: idx[..3].to_vec(),
            witness: Witness::Point(x, y),
        });
    }
    Ok(violations)
}

pub fn in_general_position(lines: &[AffineMap]) -> Result<bool> {
    Ok(general_position_check(lines)?.is_empty())
}
