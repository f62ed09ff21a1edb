//! Schema-versioned JSON Lines and CSV.
//!
//! JSON Lines files open with a header object carrying `schema_version`;
//! CSV files open with a `# schema_version=` comment line. Readers accept
//! any minor version of the major they know.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::IoError;

pub const SCHEMA_VERSION: &str = "1.0";
pub const SCHEMA_MAJOR: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub schema_version: String,
    pub kind: String,
}

pub fn check_version(found: &str, line: usize) -> Result<(), IoError> {
    let major = found.split('.').next().and_then(|m| m.parse::<u32>().ok());
    if major == Some(SCHEMA_MAJOR) {
        Ok(())
    } else {
        Err(IoError::Version {
            line,
            found: found.to_string(),
        })
    }
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|e| IoError::file(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| IoError::file(dir, e))?;
    }
    fs::write(path, text).map_err(|e| IoError::file(path, e))
}

pub fn jsonl_string<'a, T: Serialize + 'a>(
    kind: &str,
    items: impl IntoIterator<Item = &'a T>,
) -> String {
    let header = Header {
        schema_version: SCHEMA_VERSION.into(),
        kind: kind.into(),
    };
    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    for it in items {
        out.push_str(&serde_json::to_string(it).expect("records serialize"));
        out.push('\n');
    }
    out
}

pub fn write_jsonl<'a, T: Serialize + 'a>(
    path: &Path,
    kind: &str,
    items: impl IntoIterator<Item = &'a T>,
) -> Result<(), IoError> {
    write_text(path, &jsonl_string(kind, items))
}

/// Records of one JSON Lines text. Header lines may appear anywhere (so
/// concatenated files still read) and are checked, not returned. A file
/// without any header is read as the current version.
pub fn parse_jsonl<T: DeserializeOwned>(text: &str) -> Result<Vec<(usize, T)>, IoError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let v: serde_json::Value = serde_json::from_str(line).map_err(|e| IoError::Schema {
            line: line_no,
            message: e.to_string(),
        })?;
        if let Some(ver) = v.get("schema_version") {
            let ver = ver.as_str().ok_or(IoError::Schema {
                line: line_no,
                message: "schema_version must be a string".into(),
            })?;
            check_version(ver, line_no)?;
            continue;
        }
        let rec = serde_json::from_value(v).map_err(|e| IoError::Schema {
            line: line_no,
            message: e.to_string(),
        })?;
        out.push((line_no, rec));
    }
    Ok(out)
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, IoError> {
    Ok(parse_jsonl(&read_text(path)?)?
        .into_iter()
        .map(|(_, r)| r)
        .collect())
}

pub fn csv_string(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    let body =
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 in, utf-8 out");
    format!("# schema_version={SCHEMA_VERSION}\n{body}")
}

/// Header and rows of a CSV written by [`csv_string`].
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<String>>), IoError> {
    let (first, body) = text.split_once('\n').unwrap_or((text, ""));
    let ver = first
        .strip_prefix("# schema_version=")
        .ok_or(IoError::Schema {
            line: 1,
            message: "missing schema_version comment".into(),
        })?;
    check_version(ver.trim(), 1)?;
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header = r.headers()?.iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|r| r.iter().map(str::to_string).collect()))
        .collect::<Result<_, _>>()?;
    Ok((header, rows))
}
