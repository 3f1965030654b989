//! Deterministic report serialization and atomic file output.

use std::io::Write;
use std::path::Path;

use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::scalar::{render_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(crate::error::Error::parse(s, "expected json or csv")),
        }
    }
}

pub fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&render_rational(r))
}

pub fn ser_rational_opt<S: Serializer>(
    r: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&render_rational(r)),
        None => s.serialize_none(),
    }
}

pub fn ser_rational_vec<S: Serializer>(
    rs: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(rs.iter().map(render_rational))
}

/// Pretty JSON with object keys sorted, newline-terminated.
pub fn to_json<T: Serialize>(report: &T) -> Result<String> {
    // Value's map is ordered by key, which canonicalizes struct field order.
    let value = serde_json::to_value(report)?;
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    Ok(text)
}

/// CSV with a header row; every record must serialize to a flat row.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes to a sibling temporary file, then renames over `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
