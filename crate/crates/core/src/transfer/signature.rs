//! Packed boundary signatures.
//!
//! A signature describes the edges cut by the sweep line: `h + 1` horizontal
//! edges and the vertical "kink" edge of the vertex being processed, each
//! tagged as empty, the lower or upper end of an arc whose two ends are
//! connected to the left of the line, or a free end (connected to a walk
//! endpoint already placed). Arc ends nest like parentheses.
//!
//! Layout of the `u64`: two bits per cell starting at bit 0, the number of
//! placed walk endpoints in bits 56..58 and the completed-polygon flag in
//! bit 58.

use std::fmt;

/// Cells are limited by the 56 bits reserved for them.
pub const MAX_CELLS: usize = 28;

const ENDS_SHIFT: u32 = 56;
const DONE_BIT: u64 = 1 << 58;
const CELL_MASK_ALL: u64 = (1 << ENDS_SHIFT) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Edge {
    Empty = 0,
    Lower = 1,
    Upper = 2,
    Free = 3,
}

impl Edge {
    #[inline]
    fn from_bits(b: u64) -> Edge {
        match b & 3 {
            0 => Edge::Empty,
            1 => Edge::Lower,
            2 => Edge::Upper,
            _ => Edge::Free,
        }
    }

    fn symbol(self) -> char {
        match self {
            Edge::Empty => '0',
            Edge::Lower => '(',
            Edge::Upper => ')',
            Edge::Free => '*',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundarySignature(pub(crate) u64);

impl BoundarySignature {
    pub const EMPTY: BoundarySignature = BoundarySignature(0);

    pub fn from_cells(cells: &[Edge], free_ends: u8, done: bool) -> Self {
        assert!(cells.len() <= MAX_CELLS);
        let mut bits = 0u64;
        for (i, c) in cells.iter().enumerate() {
            bits |= (*c as u64) << (2 * i);
        }
        bits |= (free_ends as u64) << ENDS_SHIFT;
        if done {
            bits |= DONE_BIT;
        }
        BoundarySignature(bits)
    }

    #[inline]
    pub fn cell(self, i: usize) -> Edge {
        Edge::from_bits(self.0 >> (2 * i))
    }

    #[inline]
    pub(crate) fn with_cell(self, i: usize, e: Edge) -> Self {
        let shift = 2 * i;
        BoundarySignature((self.0 & !(3 << shift)) | ((e as u64) << shift))
    }

    pub fn cells(self, n: usize) -> Vec<Edge> {
        (0..n).map(|i| self.cell(i)).collect()
    }

    /// Walk endpoints already placed left of (or on) the sweep line.
    #[inline]
    pub fn free_ends_placed(self) -> u8 {
        ((self.0 >> ENDS_SHIFT) & 3) as u8
    }

    #[inline]
    pub(crate) fn with_free_ends(self, n: u8) -> Self {
        BoundarySignature((self.0 & !(3 << ENDS_SHIFT)) | ((n as u64) << ENDS_SHIFT))
    }

    /// A polygon has been closed.
    #[inline]
    pub fn is_done(self) -> bool {
        self.0 & DONE_BIT != 0
    }

    #[inline]
    pub(crate) fn with_done(self) -> Self {
        BoundarySignature(self.0 | DONE_BIT)
    }

    #[inline]
    pub fn cells_empty(self) -> bool {
        self.0 & CELL_MASK_ALL == 0
    }

    /// Some occupied edge or endpoint has been placed.
    pub fn segment_started(self) -> bool {
        !self.cells_empty() || self.free_ends_placed() > 0 || self.is_done()
    }

    /// A completed walk: both endpoints placed, nothing left on the line.
    #[inline]
    pub fn is_complete_walk(self) -> bool {
        self.cells_empty() && self.free_ends_placed() == 2
    }

    #[inline]
    pub(crate) fn has_free(self, n: usize) -> bool {
        (0..n).any(|i| self.cell(i) == Edge::Free)
    }

    /// Number of nonempty cells other than positions `i` and `j`.
    #[inline]
    pub(crate) fn others_empty(self, i: usize, j: usize) -> bool {
        let mask = !((3u64 << (2 * i)) | (3u64 << (2 * j))) & CELL_MASK_ALL;
        self.0 & mask == 0
    }

    /// Position of the arc end matched with the one at `i`.
    pub fn partner(self, i: usize, n: usize) -> usize {
        match self.cell(i) {
            Edge::Lower => {
                let mut depth = 0i32;
                for j in i + 1..n {
                    match self.cell(j) {
                        Edge::Lower => depth += 1,
                        Edge::Upper => {
                            if depth == 0 {
                                return j;
                            }
                            depth -= 1;
                        }
                        _ => {}
                    }
                }
                panic!("unbalanced signature {}", self.render(n))
            }
            Edge::Upper => {
                let mut depth = 0i32;
                for j in (0..i).rev() {
                    match self.cell(j) {
                        Edge::Upper => depth += 1,
                        Edge::Lower => {
                            if depth == 0 {
                                return j;
                            }
                            depth -= 1;
                        }
                        _ => {}
                    }
                }
                panic!("unbalanced signature {}", self.render(n))
            }
            _ => panic!("cell {i} is not an arc end"),
        }
    }

    /// Arc ends are balanced like parentheses over the first `n` cells.
    pub fn is_balanced(self, n: usize) -> bool {
        let mut depth = 0i32;
        for i in 0..n {
            match self.cell(i) {
                Edge::Lower => depth += 1,
                Edge::Upper => {
                    depth -= 1;
                    if depth < 0 {
                        return false;
                    }
                }
                _ => {}
            }
        }
        depth == 0 && self.0 >> (2 * n) & ((1 << (ENDS_SHIFT - 2 * n as u32)) - 1) == 0
    }

    /// Moves every cell one position up, leaving cell 0 empty.
    #[inline]
    pub(crate) fn shifted(self, n: usize) -> Self {
        let cells = self.0 & CELL_MASK_ALL;
        debug_assert_eq!(self.cell(n - 1), Edge::Empty);
        BoundarySignature((self.0 & !CELL_MASK_ALL) | ((cells << 2) & CELL_MASK_ALL))
    }

    pub fn render(self, n: usize) -> String {
        let cells: String = (0..n).map(|i| self.cell(i).symbol()).collect();
        format!(
            "{cells}|{}{}",
            self.free_ends_placed(),
            if self.is_done() { "|done" } else { "" }
        )
    }
}

impl fmt::Display for BoundarySignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(MAX_CELLS))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Edge::*;

    #[test]
    fn partners_nest() {
        let s = BoundarySignature::from_cells(&[Lower, Lower, Free, Upper, Empty, Upper], 1, false);
        assert_eq!(s.partner(0, 6), 5);
        assert_eq!(s.partner(1, 6), 3);
        assert_eq!(s.partner(5, 6), 0);
        assert_eq!(s.partner(3, 6), 1);
        assert!(s.is_balanced(6));
        assert_eq!(s.free_ends_placed(), 1);
    }

    #[test]
    fn unbalanced_detected() {
        let s = BoundarySignature::from_cells(&[Upper, Lower], 0, false);
        assert!(!s.is_balanced(2));
        let s = BoundarySignature::from_cells(&[Lower, Empty], 0, false);
        assert!(!s.is_balanced(2));
    }

    #[test]
    fn shift_moves_cells_up() {
        let s = BoundarySignature::from_cells(&[Lower, Upper, Empty], 2, false);
        let t = s.shifted(3);
        assert_eq!(t.cells(3), [Empty, Lower, Upper]);
        assert_eq!(t.free_ends_placed(), 2);
    }

    #[test]
    fn others_empty_ignores_named_cells() {
        let s = BoundarySignature::from_cells(&[Free, Empty, Free], 2, false);
        assert!(s.others_empty(0, 2));
        assert!(!s.others_empty(0, 1));
    }
}
