use std::fmt::Write as _;

use super::parse_error;
use crate::analysis::{Provenance, Series, Term, Value};
use crate::error::Result;
use crate::BigCount;

pub(crate) const MAGIC: &str = "# sawbox series";

/// A series with `key: value` metadata. Body lines are `L<TAB>value`, with
/// a provenance column for non-exact terms and an error column for
/// extended ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesFile {
    pub header: Vec<(String, String)>,
    pub series: Series,
}

impl SeriesFile {
    pub fn new(series: Series) -> Self {
        SeriesFile {
            header: Vec::new(),
            series,
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.header.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.header
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

pub fn write_series_file(f: &SeriesFile) -> String {
    let mut out = String::new();
    writeln!(out, "{MAGIC}").unwrap();
    writeln!(out, "name: {}", f.series.name).unwrap();
    for (k, v) in &f.header {
        if k != "name" {
            writeln!(out, "{k}: {v}").unwrap();
        }
    }
    out.push('\n');
    for t in f.series.terms() {
        write!(out, "{}\t{}", t.index, t.value).unwrap();
        if t.provenance != Provenance::Exact {
            write!(out, "\t{}", t.provenance).unwrap();
            if let Some(e) = &t.error {
                write!(out, "\t{e}").unwrap();
            }
        }
        out.push('\n');
    }
    out
}

pub fn read_series_file(text: &str) -> Result<SeriesFile> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim() == MAGIC => {}
        _ => return Err(parse_error(1, format!("missing `{MAGIC}` line"))),
    }
    let mut header = Vec::new();
    let mut name = String::from("series");
    for (i, line) in lines.by_ref() {
        if line.trim().is_empty() {
            break;
        }
        let (k, v) = line
            .split_once(':')
            .ok_or_else(|| parse_error(i + 1, format!("expected `key: value`, got {line:?}")))?;
        let (k, v) = (k.trim().to_string(), v.trim().to_string());
        if k == "name" {
            name = v;
        } else {
            header.push((k, v));
        }
    }
    let mut series = Series::new(name);
    for (i, line) in lines {
        let line_no = i + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 2 || cols.len() > 4 {
            return Err(parse_error(
                line_no,
                format!("expected `L<TAB>value`, got {line:?}"),
            ));
        }
        let index: u32 = cols[0]
            .trim()
            .parse()
            .map_err(|_| parse_error(line_no, format!("bad index {:?}", cols[0])))?;
        let provenance = match cols.get(2) {
            None => Provenance::Exact,
            Some(p) => Provenance::from_tag(p.trim())
                .ok_or_else(|| parse_error(line_no, format!("unknown provenance {p:?}")))?,
        };
        let text = cols[1].trim();
        let integral = !text.is_empty()
            && text
                .trim_start_matches('-')
                .bytes()
                .all(|b| b.is_ascii_digit());
        let value = if integral {
            Value::Integer(
                BigCount::from_str_radix(text, 10)
                    .map_err(|_| parse_error(line_no, format!("bad integer {text:?}")))?,
            )
        } else if provenance == Provenance::Exact && cols.len() == 2 && text.parse::<f64>().is_err()
        {
            return Err(parse_error(line_no, format!("bad value {text:?}")));
        } else {
            Value::Decimal(text.to_string())
        };
        series
            .push(Term {
                index,
                value,
                provenance,
                error: cols.get(3).map(|e| e.trim().to_string()),
            })
            .map_err(|e| parse_error(line_no, e.to_string()))?;
    }
    Ok(SeriesFile { header, series })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{BigFloat, Precision};

    #[test]
    fn round_trip_is_exact() {
        let mut s = Series::from_integers("anywhere", 1, [12u64, 322, 14248]);
        s.push_decimal(
            4,
            "1.530196000000000000000000000000000000001e6",
            Provenance::Approximate,
        )
        .unwrap();
        let p = Precision::digits(30);
        let v = BigFloat::with_val(p.bits(), 2.5);
        let e = BigFloat::with_val(p.bits(), 0.01);
        s.push_float(5, &v, 30, Provenance::Extended, Some(&e))
            .unwrap();
        let f = SeriesFile::new(s)
            .with("class", "anywhere")
            .with("precision", 30);
        let text = write_series_file(&f);
        let back = read_series_file(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(write_series_file(&back), text);
        assert_eq!(back.get("class"), Some("anywhere"));
    }

    #[test]
    fn exact_decimal_terms_round_trip() {
        let p = Precision::digits(30);
        let mut s = Series::new("quotient");
        s.push_float(
            1,
            &BigFloat::with_val(p.bits(), 2.0 / 3.0),
            30,
            Provenance::Exact,
            None,
        )
        .unwrap();
        let f = SeriesFile::new(s);
        assert_eq!(read_series_file(&write_series_file(&f)).unwrap(), f);
    }

    #[test]
    fn malformed_body_line() {
        let text = format!("{MAGIC}\nname: x\n\n1\t12\n2\tabc\n");
        match read_series_file(&text) {
            Err(crate::Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("{other:?}"),
        }
    }
}
