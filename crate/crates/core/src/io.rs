//! Family files, report envelopes, CSV flattening and atomic writes.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::setfam::SetFamily;

pub const FAMILY_SCHEMA: &str = "fhplab.family/1";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// How a generated family was produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    pub params: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct FamilyFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
    ground: usize,
    sets: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct ParsedFamily {
    pub family: SetFamily,
    pub provenance: Option<Provenance>,
    pub warnings: Vec<String>,
}

pub fn parse_family_str(text: &str) -> Result<ParsedFamily> {
    let file: FamilyFile = serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
    })?;
    let mut family = SetFamily::new(file.ground, &file.sets)?;
    if let Some(labels) = file.labels {
        family = family.with_labels(labels)?;
    }
    let mut warnings = Vec::new();
    if family.is_empty() {
        warnings.push("family has no sets".to_string());
    }
    Ok(ParsedFamily {
        family,
        provenance: file.provenance,
        warnings,
    })
}

pub fn parse_family(path: &Path) -> Result<ParsedFamily> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_family_str(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn emit_family(family: &SetFamily, provenance: Option<&Provenance>) -> String {
    let file = FamilyFile {
        schema: Some(FAMILY_SCHEMA.into()),
        provenance: provenance.cloned(),
        ground: family.ground_size(),
        sets: family.to_lists(),
        labels: family.labels().map(<[String]>::to_vec),
    };
    serde_json::to_string_pretty(&file).expect("family serializes") + "\n"
}

/// Reads any JSON input file into a typed value with line-addressed errors.
pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Error::Parse(format!(
            "{}: line {} column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

/// Wraps a result in the versioned report envelope.
pub fn envelope(kind: &str, command: &str, seed: u64, caps: Value, result: Value) -> Value {
    json!({
        "schema": format!("fhplab.{kind}/1"),
        "version": VERSION,
        "command": command,
        "seed": seed,
        "caps": caps,
        "result": result,
    })
}

fn is_rational(v: &Map<String, Value>) -> bool {
    v.len() == 2 && v.contains_key("num") && v.contains_key("den")
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) if is_rational(m) => {
            let num = m["num"].as_str().map_or_else(|| m["num"].to_string(), str::to_string);
            let den = m["den"].as_str().map_or_else(|| m["den"].to_string(), str::to_string);
            out.push((prefix.to_string(), format!("{num}/{den}")));
        }
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&key(k), x, out)),
        Value::Array(xs) => xs
            .iter()
            .enumerate()
            .for_each(|(i, x)| flatten(&key(&i.to_string()), x, out)),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// One `key,value` row per leaf; rationals render as `num/den`.
pub fn to_csv(report: &Value) -> Result<String> {
    let mut rows = Vec::new();
    flatten("", report, &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["key", "value"]).map_err(io)?;
    for (k, v) in rows {
        w.write_record([k, v]).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// Writes through a temporary file in the target directory and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}
