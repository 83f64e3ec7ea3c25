//! Reading observation files into [`SortedSample`].
//!
//! Input is UTF-8 text: one value per line, or delimited columns with an
//! optional header. Lines starting with `#` and blank lines are skipped.
//! Values equal to the minimum threshold are retained, duplicates are
//! legitimate order statistics, and scientific notation is accepted.

use crate::error::{Error, Result};
use crate::sample::SortedSample;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Column selector for delimited files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSpec {
    /// 0-based index.
    Index(usize),
    /// Header name; requires a header row.
    Name(String),
}

impl ColumnSpec {
    /// Parses a digit string as an index, anything else as a name.
    pub fn parse(s: &str) -> ColumnSpec {
        match s.parse::<usize>() {
            Ok(i) => ColumnSpec::Index(i),
            Err(_) => ColumnSpec::Name(s.to_string()),
        }
    }
}

/// Where and how to read a dataset.
#[derive(Debug, Clone)]
pub struct DatasetSpec {
    pub path: PathBuf,
    pub column: Option<ColumnSpec>,
    pub delimiter: char,
    /// Keep only values `>= min_threshold`.
    pub min_threshold: Option<f64>,
}

impl DatasetSpec {
    pub fn plain(path: impl Into<PathBuf>) -> Self {
        DatasetSpec {
            path: path.into(),
            column: None,
            delimiter: ',',
            min_threshold: None,
        }
    }
}

/// Loads, filters, validates, and sorts the dataset.
pub fn load(spec: &DatasetSpec) -> Result<SortedSample> {
    let text = std::fs::read_to_string(&spec.path)?;
    load_str(&text, spec)
}

fn load_str(text: &str, spec: &DatasetSpec) -> Result<SortedSample> {
    let path = spec.path.display().to_string();
    let err = |line: usize, reason: String| Error::Dataset {
        path: path.clone(),
        line,
        reason,
    };

    let mut column_index: Option<usize> = match &spec.column {
        Some(ColumnSpec::Index(i)) => Some(*i),
        _ => None,
    };
    let mut header_pending = spec.column.is_some();
    let mut values = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let field = match &spec.column {
            None => line,
            Some(col) => {
                let fields: Vec<&str> = line.split(spec.delimiter).map(str::trim).collect();
                if header_pending {
                    header_pending = false;
                    match col {
                        ColumnSpec::Name(name) => {
                            let idx = fields
                                .iter()
                                .position(|f| f.eq_ignore_ascii_case(name))
                                .ok_or_else(|| {
                                    err(line_no, format!("no column named `{name}` in header"))
                                })?;
                            column_index = Some(idx);
                            continue; // header row consumed
                        }
                        ColumnSpec::Index(idx) => {
                            // Header row is optional with an index: skip the
                            // first row only if the selected field is not a
                            // number.
                            let f = fields.get(*idx).copied().unwrap_or("");
                            if f.parse::<f64>().is_err() {
                                continue;
                            }
                        }
                    }
                }
                let idx = column_index.expect("resolved above");
                *fields.get(idx).ok_or_else(|| {
                    err(line_no, format!("missing column {idx} ({} fields)", fields.len()))
                })?
            }
        };
        let value: f64 = field
            .parse()
            .map_err(|_| err(line_no, format!("cannot parse `{field}` as a number")))?;
        if !value.is_finite() || value <= 0.0 {
            return Err(err(line_no, format!("non-positive value {value}")));
        }
        if let Some(t) = spec.min_threshold {
            if value < t {
                continue;
            }
        }
        values.push(value);
    }

    if values.len() < 2 {
        return Err(Error::Dataset {
            path,
            line: 0,
            reason: format!("{} usable values after filtering; need >= 2", values.len()),
        });
    }
    SortedSample::new(values)
}

/// Writes one value per line with shortest round-trip formatting.
pub fn write_sample<W: Write>(sample: &SortedSample, w: &mut W) -> std::io::Result<()> {
    for v in sample.values() {
        writeln!(w, "{v}")?;
    }
    Ok(())
}

/// Convenience wrapper over [`write_sample`] for a path.
pub fn save(sample: &SortedSample, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_sample(sample, &mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}
