//! Comma-separated input with RFC 4180 quoting. A column is numeric when its
//! first non-missing cell parses as a number; later non-numeric cells in a
//! feature column are reported with their line number.

use std::path::Path;

use csv::{ReaderBuilder, Trim, WriterBuilder};

use super::{build_dataset, is_missing, parse_number, read_file, Column, ColumnKind, Dataset, IngestError, IngestOptions};

pub fn parse_csv(path: &Path, has_header: bool, options: &IngestOptions) -> Result<Dataset, IngestError> {
    let text = read_file(path)?;
    let mut ds = parse_csv_str(&text, has_header, options)?;
    ds.source = Some(path.to_path_buf());
    Ok(ds)
}

pub fn parse_csv_str(text: &str, has_header: bool, options: &IngestOptions) -> Result<Dataset, IngestError> {
    let mut reader = ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(Trim::All)
        .from_reader(text.as_bytes());

    let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
    for result in reader.records() {
        let record = result.map_err(|e| IngestError::Malformed {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        rows.push((line, record.iter().map(str::to_string).collect()));
    }
    if rows.is_empty() {
        return Err(IngestError::Empty);
    }

    let names: Vec<String> = if has_header {
        rows.remove(0).1
    } else {
        (0..rows[0].1.len()).map(|i| format!("col{i}")).collect()
    };

    let columns: Vec<Column> = names
        .into_iter()
        .enumerate()
        .map(|(i, name)| {
            let first = rows
                .iter()
                .filter_map(|(_, f)| f.get(i))
                .find(|t| !is_missing(t));
            let kind = match first {
                Some(t) if parse_number(t).is_none() => ColumnKind::Text,
                _ => ColumnKind::Numeric,
            };
            Column { name, kind }
        })
        .collect();

    build_dataset(&columns, rows, options)
}

/// Renders `ds` as CSV with a header. A leading `label` column is written when
/// any record has a label, and an `id` column when ids are not `0..n`.
pub fn write_csv(ds: &Dataset) -> String {
    let with_labels = ds.records.iter().any(|r| r.label.is_some());
    let with_ids = ds.records.iter().enumerate().any(|(i, r)| r.id.0 != i as u64);
    let mut w = WriterBuilder::new().from_writer(Vec::new());

    let mut header: Vec<&str> = Vec::new();
    if with_ids {
        header.push("id");
    }
    if with_labels {
        header.push("label");
    }
    header.extend(ds.attribute_names.iter().map(String::as_str));
    // Writing to a Vec cannot fail.
    w.write_record(&header).expect("in-memory write");

    for r in &ds.records {
        let mut fields = Vec::with_capacity(header.len());
        if with_ids {
            fields.push(r.id.to_string());
        }
        if with_labels {
            fields.push(r.label.clone().unwrap_or_else(|| "?".into()));
        }
        fields.extend(r.vector.as_slice().iter().map(f64::to_string));
        w.write_record(&fields).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}
