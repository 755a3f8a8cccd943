//! Column-by-column sweep over the vertices of an `h x l` rectangle.
//!
//! Vertex `(x, y)` is processed with the sweep line holding, at position `y`,
//! the vertical edge entering it from below and, at position `y + 1`, the
//! horizontal edge entering it from the left. Afterwards position `y` holds
//! the edge leaving it to the right and position `y + 1` the edge leaving it
//! upwards. Columns run left to right, vertices bottom to top.

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::signature::{BoundarySignature, Edge};
use super::wide::{limbs_needed, Counter, Wide};
use crate::error::{Error, Result};
use crate::BigCount;

/// Largest rectangle height (in edges) the engine accepts.
pub const MAX_HEIGHT: u32 = 16;
/// Largest rectangle length (in edges) the engine accepts.
pub const MAX_LENGTH: u32 = 64;

/// Below this many signatures a vertex update runs on one thread.
const PARALLEL_THRESHOLD: usize = 1 << 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepKind {
    /// Self-avoiding walks with at least one step.
    Walks,
    /// Self-avoiding polygons.
    Polygons,
}

pub type StateVector<C = BigCount> = FxHashMap<BoundarySignature, C>;

/// Per-sweep statistics, mostly for diagnostics.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepStats {
    pub max_states: usize,
    pub updates: u64,
}

#[derive(Debug, Clone)]
pub struct Sweep {
    height: u32,
    kind: SweepKind,
}

impl Sweep {
    pub fn new(height: u32, kind: SweepKind) -> Result<Self> {
        if height > MAX_HEIGHT {
            return Err(Error::ResourceLimit {
                what: format!("transfer-matrix width {} vertices", height + 1),
                cap: MAX_HEIGHT as u64 + 1,
            });
        }
        Ok(Sweep { height, kind })
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn kind(&self) -> SweepKind {
        self.kind
    }

    fn cells(&self) -> usize {
        self.height as usize + 2
    }

    /// Counts of objects contained in the `height x l` rectangle for every
    /// `l = 0..=max_length`.
    pub fn run(&self, max_length: u32) -> Result<Vec<BigCount>> {
        Ok(self.run_with_stats(max_length)?.0)
    }

    pub fn run_with_stats(&self, max_length: u32) -> Result<(Vec<BigCount>, SweepStats)> {
        if max_length > MAX_LENGTH {
            return Err(Error::ResourceLimit {
                what: format!("transfer-matrix length {max_length}"),
                cap: MAX_LENGTH as u64,
            });
        }
        Ok(match limbs_needed(self.height, max_length) {
            0..=1 => self.run_typed::<Wide<1>>(max_length),
            2 => self.run_typed::<Wide<2>>(max_length),
            3 => self.run_typed::<Wide<3>>(max_length),
            4 => self.run_typed::<Wide<4>>(max_length),
            5..=6 => self.run_typed::<Wide<6>>(max_length),
            7..=8 => self.run_typed::<Wide<8>>(max_length),
            9..=12 => self.run_typed::<Wide<12>>(max_length),
            13..=16 => self.run_typed::<Wide<16>>(max_length),
            17..=24 => self.run_typed::<Wide<24>>(max_length),
            _ => self.run_typed::<Wide<36>>(max_length),
        })
    }

    fn run_typed<C: Counter>(&self, max_length: u32) -> (Vec<BigCount>, SweepStats) {
        let n = self.cells();
        let mut states = StateVector::<C>::default();
        states.insert(BoundarySignature::EMPTY, C::one());
        let mut stats = SweepStats::default();
        let mut totals = Vec::with_capacity(max_length as usize + 1);
        for x in 0..=max_length {
            let last_column = x == max_length;
            for y in 0..=self.height {
                let ctx = VertexCtx {
                    kind: self.kind,
                    y: y as usize,
                    n,
                    can_up: y < self.height,
                    can_right: !last_column,
                };
                stats.updates += states.len() as u64;
                states = ctx.apply(states);
                stats.max_states = stats.max_states.max(states.len());
            }
            states = states.into_iter().map(|(s, c)| (s.shifted(n), c)).collect();
            totals.push(self.completed(&states));
        }
        (totals, stats)
    }

    fn completed<C: Counter>(&self, states: &StateVector<C>) -> BigCount {
        let key = match self.kind {
            SweepKind::Walks => BoundarySignature::EMPTY.with_free_ends(2),
            SweepKind::Polygons => BoundarySignature::EMPTY.with_done(),
        };
        states.get(&key).map(C::to_big).unwrap_or_default()
    }
}

struct VertexCtx {
    kind: SweepKind,
    y: usize,
    n: usize,
    can_up: bool,
    can_right: bool,
}

impl VertexCtx {
    fn apply<C: Counter>(&self, states: StateVector<C>) -> StateVector<C> {
        if states.len() < PARALLEL_THRESHOLD || rayon::current_num_threads() == 1 {
            let mut out =
                StateVector::<C>::with_capacity_and_hasher(states.len() * 2, Default::default());
            let mut buf = Vec::with_capacity(4);
            for (s, c) in states {
                self.successors(s, &mut buf);
                for t in &buf {
                    *out.entry(*t).or_default() += c;
                }
            }
            return out;
        }
        let entries: Vec<(BoundarySignature, C)> = states.into_iter().collect();
        let shards = rayon::current_num_threads().max(1) * 4;
        let chunk = entries.len().div_ceil(shards);
        // successors are bucketed by key shard so each output map is built
        // by a single worker; addition order does not affect exact sums
        let partials: Vec<Vec<Vec<(BoundarySignature, C)>>> = entries
            .par_chunks(chunk)
            .map(|part| {
                let mut local: Vec<Vec<(BoundarySignature, C)>> = (0..shards)
                    .map(|_| Vec::with_capacity(part.len() / shards * 2))
                    .collect();
                let mut buf = Vec::with_capacity(4);
                for &(s, c) in part {
                    self.successors(s, &mut buf);
                    for t in &buf {
                        local[shard_of(*t, shards)].push((*t, c));
                    }
                }
                local
            })
            .collect();
        drop(entries);
        let maps: Vec<StateVector<C>> = (0..shards)
            .into_par_iter()
            .map(|k| {
                let len: usize = partials.iter().map(|p| p[k].len()).sum();
                let mut m = StateVector::<C>::with_capacity_and_hasher(len, Default::default());
                for p in &partials {
                    for &(s, c) in &p[k] {
                        *m.entry(s).or_default() += c;
                    }
                }
                m
            })
            .collect();
        drop(partials);
        let total = maps.iter().map(|m| m.len()).sum();
        let mut out = StateVector::<C>::with_capacity_and_hasher(total, Default::default());
        for m in maps {
            out.extend(m);
        }
        out
    }

    /// All signatures reachable from `s` by deciding the current vertex.
    fn successors(&self, s: BoundarySignature, out: &mut Vec<BoundarySignature>) {
        out.clear();
        let (y, n) = (self.y, self.n);
        let below = s.cell(y);
        let left = s.cell(y + 1);
        let walks = self.kind == SweepKind::Walks;
        let ends = s.free_ends_placed();
        let clear = s.with_cell(y, Edge::Empty).with_cell(y + 1, Edge::Empty);

        match (below, left) {
            (Edge::Empty, Edge::Empty) => {
                self.push(out, s);
                if self.can_up && self.can_right {
                    self.push(
                        out,
                        clear
                            .with_cell(y, Edge::Lower)
                            .with_cell(y + 1, Edge::Upper),
                    );
                }
                if walks && ends < 2 {
                    let t = clear.with_free_ends(ends + 1);
                    if self.can_right {
                        self.push(out, t.with_cell(y, Edge::Free));
                    }
                    if self.can_up {
                        self.push(out, t.with_cell(y + 1, Edge::Free));
                    }
                }
            }
            (e, Edge::Empty) | (Edge::Empty, e) => {
                if self.can_right {
                    self.push(out, clear.with_cell(y, e));
                }
                if self.can_up {
                    self.push(out, clear.with_cell(y + 1, e));
                }
                if walks && ends < 2 {
                    // the vertex becomes a walk endpoint
                    let pos = if below != Edge::Empty { y } else { y + 1 };
                    let t = clear.with_free_ends(ends + 1);
                    match e {
                        Edge::Free => {
                            if s.others_empty(y, y + 1) {
                                self.push(out, t);
                            }
                        }
                        Edge::Lower | Edge::Upper => {
                            let p = s.partner(pos, n);
                            self.push(out, t.with_cell(p, Edge::Free));
                        }
                        Edge::Empty => unreachable!(),
                    }
                }
            }
            (a, b) => {
                match (a, b) {
                    (Edge::Lower, Edge::Lower) => {
                        let p = s.partner(y + 1, n);
                        self.push(out, clear.with_cell(p, Edge::Lower));
                    }
                    (Edge::Upper, Edge::Upper) => {
                        let p = s.partner(y, n);
                        self.push(out, clear.with_cell(p, Edge::Upper));
                    }
                    (Edge::Upper, Edge::Lower) => self.push(out, clear),
                    (Edge::Lower, Edge::Upper) => {
                        // closing an arc on itself makes a loop
                        if !walks && s.others_empty(y, y + 1) {
                            self.push(out, clear.with_done());
                        }
                    }
                    (Edge::Free, Edge::Free) => {
                        if s.others_empty(y, y + 1) {
                            self.push(out, clear);
                        }
                    }
                    (Edge::Free, arc) | (arc, Edge::Free) => {
                        let pos = if a == arc { y } else { y + 1 };
                        let p = s.partner(pos, n);
                        debug_assert!(matches!(arc, Edge::Lower | Edge::Upper));
                        self.push(out, clear.with_cell(p, Edge::Free));
                    }
                    _ => unreachable!(),
                }
            }
        }
    }

    #[inline]
    fn push(&self, out: &mut Vec<BoundarySignature>, t: BoundarySignature) {
        if self.viable(t) {
            debug_assert!(t.is_balanced(self.n), "unbalanced {}", t.render(self.n));
            debug_assert!(t.free_ends_placed() <= 2);
            out.push(t);
        }
    }

    /// Drops signatures that can no longer finish as a single object.
    #[inline]
    fn viable(&self, t: BoundarySignature) -> bool {
        match self.kind {
            SweepKind::Walks => t.free_ends_placed() < 2 || t.cells_empty() || t.has_free(self.n),
            SweepKind::Polygons => !t.is_done() || t.cells_empty(),
        }
    }
}

#[inline]
fn shard_of(s: BoundarySignature, shards: usize) -> usize {
    (s.0.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 40) as usize % shards
}

/// Number of walks (length at least one) with every vertex in the `h x l`
/// rectangle.
pub fn tm_inbox_count(h: u32, l: u32) -> Result<BigCount> {
    let (w, len) = (h.min(l), h.max(l));
    Ok(Sweep::new(w, SweepKind::Walks)?.run(len)?.pop().unwrap())
}

/// Number of cycles contained in the `h x l` rectangle.
pub fn tm_polygon_count(h: u32, l: u32) -> Result<BigCount> {
    let (w, len) = (h.min(l), h.max(l));
    Ok(Sweep::new(w, SweepKind::Polygons)?.run(len)?.pop().unwrap())
}
