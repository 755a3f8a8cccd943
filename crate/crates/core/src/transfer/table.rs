use std::collections::BTreeMap;

use super::sweep::{Sweep, SweepKind};
use crate::error::{Error, Result};
use crate::BigCount;

/// Counts for every rectangle `h x l` up to a maximum side: `n` holds the
/// objects contained in the rectangle, `exact` those whose bounding box is
/// the whole rectangle (touching all four sides).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectTable {
    pub kind: SweepKind,
    pub n: BTreeMap<(u32, u32), BigCount>,
    pub exact: BTreeMap<(u32, u32), BigCount>,
}

impl RectTable {
    pub fn new(kind: SweepKind) -> Self {
        RectTable {
            kind,
            n: BTreeMap::new(),
            exact: BTreeMap::new(),
        }
    }

    /// Runs one sweep per height `0..=max_side` and fills both triangles.
    pub fn compute(max_side: u32, kind: SweepKind) -> Result<Self> {
        let mut table = RectTable::new(kind);
        table.extend_to(max_side)?;
        Ok(table)
    }

    /// Fills in every entry with both sides at most `max_side` that is not
    /// present yet.
    pub fn extend_to(&mut self, max_side: u32) -> Result<()> {
        // fail before any sweep runs
        Sweep::new(max_side, self.kind)?;
        for h in 0..=max_side {
            let missing = (h..=max_side).any(|l| !self.n.contains_key(&(h, l)));
            if !missing {
                continue;
            }
            let row = Sweep::new(h, self.kind)?.run(max_side)?;
            for (l, v) in row.into_iter().enumerate().skip(h as usize) {
                self.insert_n(h, l as u32, v);
            }
        }
        self.refresh_exact()
    }

    pub fn insert_n(&mut self, h: u32, l: u32, v: BigCount) {
        self.n.insert((l, h), v.clone());
        self.n.insert((h, l), v);
    }

    /// Largest `L` with `n` known on the whole `L x L` triangle.
    pub fn max_side(&self) -> Option<u32> {
        let mut side = None;
        for l in 0.. {
            if (0..=l).all(|h| self.n.contains_key(&(h, l))) {
                side = Some(l);
            } else {
                return side;
            }
        }
        side
    }

    fn n_or_zero(&self, h: i64, l: i64) -> Result<BigCount> {
        if h < 0 || l < 0 {
            return Ok(BigCount::new());
        }
        self.n
            .get(&(h as u32, l as u32))
            .cloned()
            .ok_or_else(|| Error::IncompleteInput(format!("N[{h},{l}] not computed")))
    }

    /// Recomputes `exact` from `n` wherever the 3x3 stencil is available.
    pub fn refresh_exact(&mut self) -> Result<()> {
        let keys: Vec<(u32, u32)> = self.n.keys().copied().collect();
        for (h, l) in keys {
            if let Ok(v) = self.exact_bbox_count(h, l) {
                self.exact.insert((h, l), v);
            }
        }
        Ok(())
    }

    /// Double second difference of `n`, inverting
    /// `n[h][l] = sum_{a<=h, b<=l} (h-a+1)(l-b+1) exact[a][b]`.
    pub fn exact_bbox_count(&self, h: u32, l: u32) -> Result<BigCount> {
        const W: [i64; 3] = [1, -2, 1];
        let mut acc = BigCount::new();
        for (i, wi) in W.iter().enumerate() {
            for (j, wj) in W.iter().enumerate() {
                let v = self.n_or_zero(h as i64 - i as i64, l as i64 - j as i64)?;
                acc += v * (wi * wj);
            }
        }
        assert!(
            acc >= 0,
            "negative exact-bounding-box count at ({h},{l}): the N table is inconsistent"
        );
        Ok(acc)
    }

    /// `sum_{a<=h, b<=l} (h-a+1)(l-b+1) exact[a][b]`, which must reproduce
    /// `n[h][l]`.
    pub fn reconstruct_n(&self, h: u32, l: u32) -> Result<BigCount> {
        let mut acc = BigCount::new();
        for a in 0..=h {
            for b in 0..=l {
                let e = self
                    .exact
                    .get(&(a, b))
                    .ok_or_else(|| Error::IncompleteInput(format!("exact[{a},{b}] missing")))?;
                acc += BigCount::from(e * ((h - a + 1) as u64 * (l - b + 1) as u64));
            }
        }
        Ok(acc)
    }

    /// Square count from exact-bounding-box counts by placing each rectangle
    /// at every position inside the `L x L` square.
    pub fn assemble(&self, side: u32) -> Result<BigCount> {
        assemble_square(side, |h, l| {
            self.exact
                .get(&(h, l))
                .cloned()
                .ok_or_else(|| Error::IncompleteInput(format!("exact[{h},{l}] missing")))
        })
    }
}

/// `A_L = sum_{l=1}^{L} (L-l+1)^2 E[l,l] + 2 sum_{h=0}^{L-1} sum_{l=h+1}^{L}
/// (L-l+1)(L-h+1) E[h,l]`.
pub fn assemble_square(
    side: u32,
    exact: impl Fn(u32, u32) -> Result<BigCount>,
) -> Result<BigCount> {
    let mut acc = BigCount::new();
    for l in 1..=side {
        let k = (side - l + 1) as u64;
        acc += exact(l, l)? * (k * k);
    }
    let mut off = BigCount::new();
    for h in 0..side {
        for l in h + 1..=side {
            off += exact(h, l)? * ((side - l + 1) as u64 * (side - h + 1) as u64);
        }
    }
    acc += off * 2u32;
    Ok(acc)
}

/// Walks in the `h x l` rectangle touching all four of its sides.
pub fn exact_bbox_count(h: u32, l: u32) -> Result<BigCount> {
    let (h, l) = (h.min(l), h.max(l));
    let mut table = RectTable::new(SweepKind::Walks);
    for hh in h.saturating_sub(2)..=h {
        let row = Sweep::new(hh, SweepKind::Walks)?.run(l)?;
        for (ll, v) in row.into_iter().enumerate() {
            table.n.insert((hh, ll as u32), v);
        }
    }
    table.exact_bbox_count(h, l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_examples() {
        let t = RectTable::compute(2, SweepKind::Walks).unwrap();
        assert_eq!(t.exact[&(1, 1)], 8);
        assert_eq!(t.exact[&(2, 2)], 176);
        assert_eq!(t.exact[&(1, 2)], 24);
        assert_eq!(t.exact[&(2, 1)], 24);
        assert_eq!(t.exact[&(0, 0)], 0);
        for l in 1..=2 {
            assert_eq!(t.exact[&(0, l)], 1);
        }
    }

    #[test]
    fn standalone_exact_count() {
        assert_eq!(exact_bbox_count(1, 1).unwrap(), 8);
        assert_eq!(exact_bbox_count(2, 2).unwrap(), 176);
        assert_eq!(exact_bbox_count(1, 2).unwrap(), 24);
    }

    #[test]
    fn assembly_from_hand_values() {
        // only the entries the formula touches at L = 1 and L = 2
        let e = |h: u32, l: u32| -> Result<BigCount> {
            Ok(BigCount::from(match (h, l) {
                (0, _) => 1,
                (1, 1) => 8,
                (1, 2) => 24,
                (2, 2) => 176,
                _ => unreachable!(),
            }))
        };
        assert_eq!(assemble_square(1, e).unwrap(), 12);
        assert_eq!(assemble_square(2, e).unwrap(), 322);
    }

    #[test]
    fn assembly_reports_missing_entries() {
        let t = RectTable::compute(1, SweepKind::Walks).unwrap();
        assert!(matches!(t.assemble(2), Err(Error::IncompleteInput(_))));
        assert_eq!(t.assemble(1).unwrap(), 12);
    }

    #[test]
    fn third_square() {
        let t = RectTable::compute(3, SweepKind::Walks).unwrap();
        assert_eq!(t.assemble(3).unwrap(), 14248);
        assert_eq!(t.n[&(3, 3)], 14248);
        assert_eq!(t.exact[&(3, 3)], 9172);
    }

    #[test]
    fn polygons_assemble_like_walks() {
        let t = RectTable::compute(3, SweepKind::Polygons).unwrap();
        assert_eq!(t.assemble(2).unwrap(), 13);
        assert_eq!(t.assemble(3).unwrap(), t.n[&(3, 3)]);
        assert_eq!(t.exact[&(1, 1)], 1);
        assert_eq!(t.exact[&(0, 3)], 0);
    }

    #[test]
    fn reconstruction_identity() {
        let t = RectTable::compute(4, SweepKind::Walks).unwrap();
        for (&(h, l), n) in &t.n {
            assert_eq!(&t.reconstruct_n(h, l).unwrap(), n);
        }
    }

    #[test]
    fn extend_keeps_existing_entries() {
        let mut t = RectTable::compute(2, SweepKind::Walks).unwrap();
        let before = t.n.clone();
        t.extend_to(3).unwrap();
        for (k, v) in before {
            assert_eq!(t.n[&k], v);
        }
        assert_eq!(t.max_side(), Some(3));
    }
}
