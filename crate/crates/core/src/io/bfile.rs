use std::fmt::Write as _;
use std::path::Path;

use super::parse_error;
use crate::analysis::Series;
use crate::error::{Error, Result};
use crate::BigCount;

/// `n a(n)` pairs with contiguous increasing `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFile {
    pub comments: Vec<String>,
    pub entries: Vec<(i64, BigCount)>,
}

pub fn parse_bfile(text: &str) -> Result<BFile> {
    let mut comments = Vec::new();
    let mut entries: Vec<(i64, BigCount)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.trim().to_string());
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_error(
                line_no,
                format!("expected `n a(n)`, got {line:?}"),
            ));
        }
        let n: i64 = fields[0]
            .parse()
            .map_err(|_| parse_error(line_no, format!("bad index {:?}", fields[0])))?;
        let v = BigCount::from_str_radix(fields[1], 10)
            .map_err(|_| parse_error(line_no, format!("bad integer {:?}", fields[1])))?;
        if let Some((prev, _)) = entries.last() {
            if n != prev + 1 {
                return Err(Error::NonContiguous {
                    expected: (prev + 1) as u64,
                    found: n as u64,
                });
            }
        }
        entries.push((n, v));
    }
    if entries.is_empty() {
        return Err(parse_error(0, "no data lines"));
    }
    Ok(BFile { comments, entries })
}

pub fn read_bfile(path: &Path) -> Result<BFile> {
    parse_bfile(&std::fs::read_to_string(path)?)
}

pub fn write_bfile(comments: &[String], entries: &[(i64, BigCount)]) -> String {
    let mut out = String::new();
    for c in comments {
        writeln!(out, "# {c}").unwrap();
    }
    for (n, v) in entries {
        writeln!(out, "{n} {v}").unwrap();
    }
    out
}

impl BFile {
    /// Exact series with `L = n + index_shift`; entries mapped below 0 are
    /// dropped.
    pub fn to_series(&self, name: &str, index_shift: i64) -> Result<Series> {
        let mut s = Series::new(name);
        for (n, v) in &self.entries {
            let l = n + index_shift;
            if l < 0 {
                continue;
            }
            s.push_exact(l as u32, v.clone())?;
        }
        Ok(s)
    }

    pub fn value(&self, n: i64) -> Option<&BigCount> {
        let first = self.entries.first()?.0;
        self.entries
            .get(usize::try_from(n - first).ok()?)
            .map(|e| &e.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments() {
        let b = parse_bfile("# cycles\n1 1\n2 13\n\n3 213\n").unwrap();
        assert_eq!(b.comments, ["cycles"]);
        assert_eq!(b.entries.len(), 3);
        assert_eq!(b.value(2).unwrap(), &13);
        let s = b.to_series("p", 0).unwrap();
        assert_eq!(s.first_index(), Some(1));
    }

    #[test]
    fn reports_line_numbers() {
        match parse_bfile("1 1\n2 x3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse_bfile("1 1\n2 2 2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn gaps_rejected() {
        assert!(matches!(
            parse_bfile("1 1\n3 2\n"),
            Err(Error::NonContiguous {
                expected: 2,
                found: 3
            })
        ));
    }

    #[test]
    fn round_trip() {
        let b = parse_bfile("0 0\n1 1\n2 13\n").unwrap();
        let text = write_bfile(&b.comments, &b.entries);
        assert_eq!(parse_bfile(&text).unwrap(), b);
        let s = b.to_series("p", -1).unwrap();
        assert_eq!(s.first_index(), Some(0));
        assert_eq!(s.len(), 2);
    }
}
