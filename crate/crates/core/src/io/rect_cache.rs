use std::fmt::Write as _;

use super::parse_error;
use crate::error::Result;
use crate::transfer::{RectTable, SweepKind};
use crate::BigCount;

const MAGIC: &str = "# sawbox rect table";

fn kind_tag(kind: SweepKind) -> &'static str {
    match kind {
        SweepKind::Walks => "walks",
        SweepKind::Polygons => "polygons",
    }
}

/// `h<TAB>l<TAB>N` for `h <= l`; exact-bounding-box counts are recomputed
/// on load.
pub fn write_rect_table(t: &RectTable) -> String {
    let mut out = format!("{MAGIC}\nkind: {}\n\n", kind_tag(t.kind));
    for ((h, l), v) in &t.n {
        if h <= l {
            writeln!(out, "{h}\t{l}\t{v}").unwrap();
        }
    }
    out
}

pub fn read_rect_table(text: &str) -> Result<RectTable> {
    let mut lines = text.lines().enumerate();
    if lines.next().map(|(_, l)| l.trim()) != Some(MAGIC) {
        return Err(parse_error(1, format!("missing `{MAGIC}` line")));
    }
    let kind = match lines.next().map(|(_, l)| l.trim()) {
        Some("kind: walks") => SweepKind::Walks,
        Some("kind: polygons") => SweepKind::Polygons,
        other => return Err(parse_error(2, format!("bad kind line {other:?}"))),
    };
    let mut t = RectTable::new(kind);
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let bad = || parse_error(i + 1, format!("expected `h<TAB>l<TAB>N`, got {line:?}"));
        if cols.len() != 3 {
            return Err(bad());
        }
        let h: u32 = cols[0].parse().map_err(|_| bad())?;
        let l: u32 = cols[1].parse().map_err(|_| bad())?;
        let v = BigCount::from_str_radix(cols[2], 10).map_err(|_| bad())?;
        t.insert_n(h, l, v);
    }
    t.refresh_exact()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let t = RectTable::compute(4, SweepKind::Polygons).unwrap();
        let back = read_rect_table(&write_rect_table(&t)).unwrap();
        assert_eq!(back, t);
    }
}
