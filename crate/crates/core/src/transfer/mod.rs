//! Transfer-matrix enumeration of walks and cycles in rectangles.
//!
//! A sweep of height `h` yields `N[h][l]`, the number of objects contained in
//! the `h x l` rectangle, for every length `l` at once. Counts of objects whose
//! bounding box is the full rectangle follow by double second differences, and
//! square counts by summing those over all placements.

pub mod signature;
pub mod sweep;
pub mod table;
pub mod wide;

pub use signature::{BoundarySignature, Edge};
pub use sweep::{tm_inbox_count, tm_polygon_count, StateVector, Sweep, SweepKind, SweepStats};
pub use table::{assemble_square, exact_bbox_count, RectTable};

use crate::error::Result;
use crate::BigCount;

/// `A_L` for `L = 1..=max_side` (walks) or `P_L` (polygons), via the
/// rectangle table.
pub fn square_series(max_side: u32, kind: SweepKind) -> Result<Vec<BigCount>> {
    let table = RectTable::compute(max_side, kind)?;
    (1..=max_side).map(|l| table.assemble(l)).collect()
}

/// Exact-bounding-box counts on the diagonal, `E[L][L]` for `L = 1..=max_side`.
pub fn diagonal_exact_series(max_side: u32, kind: SweepKind) -> Result<Vec<BigCount>> {
    let table = RectTable::compute(max_side, kind)?;
    Ok((1..=max_side)
        .map(|l| table.exact[&(l, l)].clone())
        .collect())
}
