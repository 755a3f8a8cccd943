use super::parse_error;
use crate::analysis::{Precision, Provenance, Series};
use crate::error::Result;
use crate::BigCount;

/// Normalises `m x 10^e` spellings (`4.5e82`, `4.5 x 10^82`,
/// `4.5$\times 10^{82}$`) to `4.5e82`. Returns `None` for plain integers.
fn scientific(token: &str) -> Option<String> {
    let t: String = token
        .replace("$\\times", "x")
        .replace("\\times", "x")
        .replace(['$', '{', '}', ' '], "");
    for sep in ["x10^", "*10^", "×10^"] {
        if let Some((m, e)) = t.split_once(sep) {
            return Some(format!("{m}e{e}"));
        }
    }
    if t.contains(['e', 'E', '.']) {
        return Some(t);
    }
    None
}

/// One value per line, optionally preceded by its index. Integer rows are
/// exact, scientific rows approximate; the running index starts at 1 when
/// absent. `\hline`, `---` and `#` lines are ignored, as is a trailing `\\`.
pub fn parse_table(text: &str) -> Result<Series> {
    let mut s = Series::new("table");
    let mut next = 1u32;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim().trim_end_matches("\\\\").trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("---") || line == "\\hline"
        {
            continue;
        }
        let (index, body) = match line.split_once(char::is_whitespace) {
            Some((a, rest)) if a.bytes().all(|b| b.is_ascii_digit()) && scientific(a).is_none() => {
                let rest = rest.trim();
                if rest.is_empty() {
                    (None, line)
                } else {
                    let idx = a
                        .parse()
                        .map_err(|_| parse_error(line_no, format!("bad index {a:?}")))?;
                    (Some(idx), rest)
                }
            }
            _ => (None, line),
        };
        let index = index.unwrap_or(next);
        next = index + 1;
        let result = match scientific(body) {
            Some(text) => {
                Precision::default()
                    .parse(&text)
                    .map_err(|e| parse_error(line_no, e.to_string()))?;
                s.push_decimal(index, text, Provenance::Approximate)
            }
            None => {
                let v = BigCount::from_str_radix(body, 10)
                    .map_err(|_| parse_error(line_no, format!("bad value {body:?}")))?;
                s.push_exact(index, v)
            }
        };
        result.map_err(|e| parse_error(line_no, e.to_string()))?;
    }
    if s.is_empty() {
        return Err(parse_error(0, "no data lines"));
    }
    s.check_contiguous()?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::Value;

    #[test]
    fn mixed_rows() {
        let text = " 12\\\\\n 322\\\\\n\\hline\n4.599082462168733357770670517895290353950$\\times 10^{82}$\\\\\n";
        let s = parse_table(text).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.exact_count(), 2);
        let t = &s.terms()[2];
        assert_eq!(t.index, 3);
        assert_eq!(
            t.value,
            Value::Decimal("4.599082462168733357770670517895290353950e82".into())
        );
    }

    #[test]
    fn indexed_rows() {
        let s = parse_table("# c\n1 12\n2 322\n3 1.4248e4\n").unwrap();
        assert_eq!(s.last_index(), Some(3));
        assert_eq!(s.terms()[2].provenance, Provenance::Approximate);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_table("12\n3x2\n") {
            Err(crate::Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        // an exact row after approximate ones
        assert!(parse_table("1.5e3\n12\n").is_err());
    }
}
