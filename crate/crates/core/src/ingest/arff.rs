//! Reader and writer for the ARFF subset used by the air-quality data:
//! `@relation`, `@attribute` with numeric/real/integer, string, date or
//! nominal types, and a dense `@data` section. Sparse rows and relational
//! attributes are rejected. `%` comment lines and blank lines are skipped.

use std::fmt::Write as _;
use std::path::Path;

use super::{build_dataset, read_file, Column, ColumnKind, Dataset, IngestError, IngestOptions};

pub fn parse_arff(path: &Path, options: &IngestOptions) -> Result<Dataset, IngestError> {
    let text = read_file(path)?;
    let mut ds = parse_arff_str(&text, options)?;
    ds.source = Some(path.to_path_buf());
    Ok(ds)
}

pub fn parse_arff_str(text: &str, options: &IngestOptions) -> Result<Dataset, IngestError> {
    if text.trim().is_empty() {
        return Err(IngestError::Empty);
    }
    let mut columns = Vec::new();
    let mut rows = Vec::new();
    let mut in_data = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        if in_data {
            if trimmed.starts_with('{') {
                return Err(IngestError::Unsupported {
                    line,
                    what: "sparse data rows".into(),
                });
            }
            rows.push((line, split_row(trimmed, line)?));
            continue;
        }
        let (keyword, rest) = split_keyword(trimmed);
        match keyword.to_ascii_lowercase().as_str() {
            "@relation" => {}
            "@attribute" => columns.push(parse_attribute(rest, line)?),
            "@data" => in_data = true,
            "@end" => {
                return Err(IngestError::Unsupported {
                    line,
                    what: "relational attributes".into(),
                })
            }
            _ => {
                return Err(IngestError::Malformed {
                    line,
                    message: format!("unexpected header line '{trimmed}'"),
                })
            }
        }
    }
    if !in_data {
        return Err(IngestError::MissingData);
    }
    build_dataset(&columns, rows, options)
}

fn split_keyword(s: &str) -> (&str, &str) {
    match s.find(char::is_whitespace) {
        Some(i) => (&s[..i], s[i..].trim_start()),
        None => (s, ""),
    }
}

fn parse_attribute(rest: &str, line: usize) -> Result<Column, IngestError> {
    let (name, ty) = if let Some(q) = rest.chars().next().filter(|c| *c == '\'' || *c == '"') {
        let (name, consumed) = read_quoted(rest, q, line)?;
        (name, rest[consumed..].trim())
    } else {
        let (n, t) = split_keyword(rest);
        (n.to_string(), t.trim())
    };
    if name.is_empty() || ty.is_empty() {
        return Err(IngestError::Malformed {
            line,
            message: "attribute needs a name and a type".into(),
        });
    }
    let kind = if ty.starts_with('{') {
        ColumnKind::Text
    } else {
        let (word, _) = split_keyword(ty);
        match word.to_ascii_lowercase().as_str() {
            "numeric" | "real" | "integer" => ColumnKind::Numeric,
            "string" | "date" => ColumnKind::Text,
            "relational" => {
                return Err(IngestError::Unsupported {
                    line,
                    what: "relational attributes".into(),
                })
            }
            other => {
                return Err(IngestError::Malformed {
                    line,
                    message: format!("unknown attribute type '{other}'"),
                })
            }
        }
    };
    Ok(Column { name, kind })
}

/// Reads a quoted token starting at `s[0] == quote`; returns the unescaped
/// text and the number of bytes consumed including both quotes.
fn read_quoted(s: &str, quote: char, line: usize) -> Result<(String, usize), IngestError> {
    let mut out = String::new();
    let mut chars = s.char_indices().skip(1);
    while let Some((i, c)) = chars.next() {
        match c {
            '\\' => match chars.next() {
                Some((_, e)) => out.push(e),
                None => break,
            },
            c if c == quote => return Ok((out, i + c.len_utf8())),
            c => out.push(c),
        }
    }
    Err(IngestError::Malformed {
        line,
        message: "unterminated quote".into(),
    })
}

fn split_row(s: &str, line: usize) -> Result<Vec<String>, IngestError> {
    let mut fields = Vec::new();
    let mut rest = s;
    loop {
        let trimmed = rest.trim_start();
        let (field, after) = match trimmed.chars().next() {
            Some(q @ ('\'' | '"')) => {
                let (text, used) = read_quoted(trimmed, q, line)?;
                (text, trimmed[used..].trim_start())
            }
            _ => match trimmed.find(',') {
                Some(i) => (trimmed[..i].trim().to_string(), &trimmed[i..]),
                None => (trimmed.trim().to_string(), ""),
            },
        };
        fields.push(field);
        if after.is_empty() {
            return Ok(fields);
        }
        match after.strip_prefix(',') {
            Some(next) => rest = next,
            None => {
                return Err(IngestError::Malformed {
                    line,
                    message: "expected ',' after quoted value".into(),
                })
            }
        }
    }
}

fn quote(s: &str) -> String {
    let plain = !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.' | '/' | ':'));
    if plain && s != "?" {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\\', "\\\\").replace('\'', "\\'"))
    }
}

/// Renders `ds` as ARFF. Labels become a leading `label` string attribute
/// when any record has one; ids are written as an `id` column only when they
/// are not the default `0..n` sequence (re-read with `id_column = "id"`).
pub fn write_arff(ds: &Dataset, relation: &str) -> String {
    let with_labels = ds.records.iter().any(|r| r.label.is_some());
    let with_ids = ds.records.iter().enumerate().any(|(i, r)| r.id.0 != i as u64);
    let mut out = String::new();
    let _ = writeln!(out, "@relation {}", quote(relation));
    out.push('\n');
    if with_ids {
        out.push_str("@attribute id numeric\n");
    }
    if with_labels {
        out.push_str("@attribute label string\n");
    }
    for name in &ds.attribute_names {
        let _ = writeln!(out, "@attribute {} numeric", quote(name));
    }
    out.push_str("\n@data\n");
    for r in &ds.records {
        let mut fields = Vec::with_capacity(r.vector.dim() + 2);
        if with_ids {
            fields.push(r.id.to_string());
        }
        if with_labels {
            fields.push(r.label.as_deref().map_or_else(|| "?".to_string(), quote));
        }
        fields.extend(r.vector.as_slice().iter().map(f64::to_string));
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}
