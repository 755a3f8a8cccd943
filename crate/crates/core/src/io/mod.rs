//! Plain-text formats: series files, OEIS-style b-files, transcribed
//! coefficient tables, the rectangle-table cache and report emission.

mod bfile;
mod rect_cache;
mod report;
mod series_file;
mod table;

use std::path::Path;

pub use bfile::{parse_bfile, read_bfile, write_bfile, BFile};
pub use rect_cache::{read_rect_table, write_rect_table};
pub use report::{atomic_write, sha256_file, sha256_hex, Report};
pub use series_file::{read_series_file, write_series_file, SeriesFile};
pub use table::parse_table;

use crate::analysis::Series;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    BFile,
    Table,
    SeriesFile,
}

impl Format {
    pub fn from_tag(s: &str) -> Option<Self> {
        Some(match s {
            "bfile" => Format::BFile,
            "table" => Format::Table,
            "seriesfile" | "series" => Format::SeriesFile,
            _ => return None,
        })
    }
}

/// Guesses the format: series files start with their magic line, b-files
/// have two integer columns on every data line, anything else is a table.
pub fn detect_format(text: &str) -> Format {
    if text.starts_with(series_file::MAGIC) {
        return Format::SeriesFile;
    }
    let mut data = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .peekable();
    if data.peek().is_none() {
        return Format::Table;
    }
    let two_ints = |l: &str| {
        let f: Vec<&str> = l.split_whitespace().collect();
        f.len() == 2
            && f.iter().all(|t| {
                t.trim_start_matches('-')
                    .bytes()
                    .all(|b| b.is_ascii_digit())
            })
    };
    if data.all(two_ints) {
        Format::BFile
    } else {
        Format::Table
    }
}

/// Reads a series in any supported format. B-file indices are used as `L`
/// unless `index_shift` moves them.
pub fn ingest(path: &Path, format: Option<Format>, index_shift: i64) -> Result<Series> {
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".into());
    match format.unwrap_or_else(|| detect_format(&text)) {
        Format::SeriesFile => Ok(read_series_file(&text)?.series),
        Format::BFile => parse_bfile(&text)?.to_series(&name, index_shift),
        Format::Table => {
            let mut s = parse_table(&text)?;
            s.name = name;
            Ok(s)
        }
    }
}

pub(crate) fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
