//! Exact enumeration and asymptotic analysis of self-avoiding walks and
//! polygons confined to rectangles of the square lattice.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`] : points, boxes, walks, polygons and the walk-class predicates.
//! * [`oracle`] : brute-force depth-first enumeration used as ground truth.
//! * [`transfer`] : column-sweep transfer-matrix counting of walks and cycles
//!   in an `h x l` rectangle, exact-bounding-box extraction and assembly of the
//!   square counts.
//! * [`moves`] : the spanning-walk extension map and the endpoint relocation
//!   moves (lengthen, shorten, end-attack, backbite) with antecedent search.
//! * [`analysis`] : high-precision series analysis: growth-constant
//!   estimators, sliding-window fits, ratio of ratios, the `d_L` pipeline,
//!   Hadamard quotients, differential approximants and series extension.
//! * [`io`] : series files, OEIS b-files, coefficient-table transcriptions and
//!   report emission.

pub mod analysis;
pub mod error;
pub mod io;
pub mod lattice;
pub mod moves;
pub mod oracle;
pub mod transfer;
pub mod verify;

pub use error::{Error, Result};

/// Exact nonnegative count. Always arbitrary precision.
pub type BigCount = rug::Integer;
