//! Finite ground sets `Y ⊆ 𝔽` and exact richness counts on the grid `Y × Y`.
//!
//! A line `y = ax + b` meets `Y × Y` in exactly `|{y ∈ Y : ay + b ∈ Y}|`
//! points, which is `|Y ∩ g⁻¹Y|` for the map `g(x) = ax + b`.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::de::{self, DeserializeSeed, MapAccess, SeqAccess, Visitor};
use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::scalar::{Field, Rational, Scalar};

// Prime fields up to this size use a dense residue table for membership.
const DENSE_LIMIT: u64 = 1 << 22;

#[derive(Clone, Debug)]
enum Index {
    Hashed(HashMap<Scalar, usize>),
    Dense(Vec<u32>),
}

#[derive(Clone, Debug)]
pub struct GroundSet {
    field: Field,
    elements: Vec<Scalar>,
    index: Index,
}

/// What happened while building a set from raw input.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    pub read: usize,
    pub duplicates: usize,
}

impl GroundSet {
    /// Sorts and deduplicates `elements`. Fails on an empty set or mixed fields.
    pub fn new(field: Field, elements: Vec<Scalar>) -> Result<GroundSet> {
        Ok(GroundSet::with_report(field, elements)?.0)
    }

    pub fn with_report(field: Field, mut elements: Vec<Scalar>) -> Result<(GroundSet, LoadReport)> {
        for e in &elements {
            field.check(e.field())?;
        }
        let read = elements.len();
        elements.sort_unstable();
        elements.dedup();
        if elements.is_empty() {
            return Err(Error::invalid("ground set must be nonempty"));
        }
        let report = LoadReport {
            read,
            duplicates: read - elements.len(),
        };
        let index = match field {
            Field::Prime(p) if p <= DENSE_LIMIT => {
                let mut table = vec![u32::MAX; p as usize];
                for (i, e) in elements.iter().enumerate() {
                    if let Scalar::Residue { value, .. } = e {
                        table[*value as usize] = i as u32;
                    }
                }
                Index::Dense(table)
            }
            _ => Index::Hashed(elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect()),
        };
        Ok((GroundSet { field, elements, index }, report))
    }

    pub fn from_ints(field: Field, values: impl IntoIterator<Item = i64>) -> Result<GroundSet> {
        GroundSet::new(field, values.into_iter().map(|v| Scalar::from_i64(v, field)).collect())
    }

    pub fn from_bigints(field: Field, values: impl IntoIterator<Item = BigInt>) -> Result<GroundSet> {
        GroundSet::new(field, values.into_iter().map(|v| Scalar::from_bigint(v, field)).collect())
    }

    /// `{start, start+1, …, start+len-1}`.
    pub fn progression(field: Field, start: i64, len: usize) -> Result<GroundSet> {
        GroundSet::from_ints(field, (0..len as i64).map(|i| start + i))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Scalar] {
        &self.elements
    }

    pub fn position(&self, x: &Scalar) -> Option<usize> {
        match &self.index {
            Index::Hashed(map) => map.get(x).copied(),
            Index::Dense(table) => match x {
                Scalar::Residue { value, .. } => match table.get(*value as usize) {
                    Some(&i) if i != u32::MAX => Some(i as usize),
                    _ => None,
                },
                Scalar::Rational(_) => None,
            },
        }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        self.position(x).is_some()
    }

    /// `|Y|·α` as an exact rational.
    pub fn scaled(&self, alpha: &Rational) -> Rational {
        alpha * Rational::from_integer(BigInt::from(self.len()))
    }

    pub fn to_file(&self) -> GroundSetFile {
        GroundSetFile {
            field: self.field,
            elements: self.elements.iter().map(Scalar::render).collect(),
        }
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer(w, &self.to_file())?;
        Ok(())
    }

    /// Reads `{"field":…, "elements":[…]}`. Elements are parsed as they
    /// stream in when `field` precedes them, otherwise buffered as text.
    pub fn read_json<R: BufRead>(r: R) -> Result<(GroundSet, LoadReport)> {
        let mut de = serde_json::Deserializer::from_reader(r);
        let raw = de::Deserializer::deserialize_map(&mut de, GroundVisitor)?;
        de.end()?;
        let RawGround { field, parsed, text } = raw;
        let field = field.ok_or_else(|| Error::invalid("ground set file missing \"field\""))?;
        let mut elements = parsed;
        for t in text {
            elements.push(Scalar::parse(&t, field)?);
        }
        GroundSet::with_report(field, elements)
    }
}

/// Serialized form of a ground set; `field` is written first so readers can stream.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroundSetFile {
    pub field: Field,
    pub elements: Vec<String>,
}

struct RawGround {
    field: Option<Field>,
    parsed: Vec<Scalar>,
    text: Vec<String>,
}

struct GroundVisitor;

impl<'de> Visitor<'de> for GroundVisitor {
    type Value = RawGround;

    fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        f.write_str("a ground set object with \"field\" and \"elements\"")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<RawGround, A::Error> {
        let mut raw = RawGround {
            field: None,
            parsed: Vec::new(),
            text: Vec::new(),
        };
        while let Some(key) = map.next_key::<String>()? {
            match key.as_str() {
                "field" => raw.field = Some(map.next_value()?),
                "elements" => {
                    let seed = ElementsSeed { field: raw.field };
                    let (parsed, text) = map.next_value_seed(seed)?;
                    raw.parsed.extend(parsed);
                    raw.text.extend(text);
                }
                _ => {
                    map.next_value::<de::IgnoredAny>()?;
                }
            }
        }
        Ok(raw)
    }
}

struct ElementsSeed {
    field: Option<Field>,
}

impl<'de> DeserializeSeed<'de> for ElementsSeed {
    type Value = (Vec<Scalar>, Vec<String>);

    fn deserialize<D: de::Deserializer<'de>>(self, d: D) -> std::result::Result<Self::Value, D::Error> {
        d.deserialize_seq(self)
    }
}

impl<'de> Visitor<'de> for ElementsSeed {
    type Value = (Vec<Scalar>, Vec<String>);

    fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        f.write_str("an array of scalar strings")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Self::Value, A::Error> {
        let mut parsed = Vec::new();
        let mut text = Vec::new();
        while let Some(t) = seq.next_element::<std::borrow::Cow<'de, str>>()? {
            match self.field {
                Some(f) => parsed.push(Scalar::parse(&t, f).map_err(de::Error::custom)?),
                None => text.push(t.into_owned()),
            }
        }
        Ok((parsed, text))
    }
}

fn check(g: &AffineMap, y: &GroundSet) -> Result<()> {
    y.field().check(g.field())
}

/// `|{y ∈ Y : g(y) ∈ Y}|`, the number of grid points on the line `y = ax + b`.
pub fn richness(g: &AffineMap, y: &GroundSet) -> Result<usize> {
    check(g, y)?;
    Ok(richness_unchecked(g, y))
}

pub(crate) fn richness_unchecked(g: &AffineMap, y: &GroundSet) -> usize {
    y.elements()
        .iter()
        .filter(|e| y.contains(&g.apply_unchecked(e)))
        .count()
}

/// Stops as soon as the count can no longer reach `needed`.
pub(crate) fn richness_at_least(g: &AffineMap, y: &GroundSet, needed: usize) -> Option<usize> {
    let n = y.len();
    if needed > n {
        return None;
    }
    let allowed_misses = n - needed;
    let mut misses = 0;
    for e in y.elements() {
        if !y.contains(&g.apply_unchecked(e)) {
            misses += 1;
            if misses > allowed_misses {
                return None;
            }
        }
    }
    Some(n - misses)
}

/// `|g(Y) \ Y|`; equals `|Y| - richness` because `g` is injective.
pub fn image_deficiency(g: &AffineMap, y: &GroundSet) -> Result<usize> {
    Ok(y.len() - richness(g, y)?)
}

/// `richness ≥ α|Y|`, compared exactly.
pub fn is_alpha_rich(g: &AffineMap, y: &GroundSet, alpha: &Rational) -> Result<bool> {
    let r = richness(g, y)?;
    Ok(Rational::from_integer(BigInt::from(r)) >= y.scaled(alpha))
}

/// Smallest integer count `m` with `m ≥ α|Y|`.
pub fn rich_threshold(y: &GroundSet, alpha: &Rational) -> usize {
    let t = y.scaled(alpha).ceil();
    let t = t.to_integer();
    if t.sign() == num_bigint::Sign::Minus {
        0
    } else {
        t.to_usize().unwrap_or(usize::MAX)
    }
}

/// Richness of each line, computed in parallel, in input order.
pub fn richness_sweep(lines: &[AffineMap], y: &GroundSet) -> Result<Vec<usize>> {
    for g in lines {
        check(g, y)?;
    }
    Ok(lines.par_iter().map(|g| richness_unchecked(g, y)).collect())
}
