//! Brute-force depth-first enumeration of walks and polygons in small boxes.
//!
//! Walks are grown from every admissible starting vertex with pruning only by
//! box containment. Every prefix of length at least one is a directed walk;
//! the undirected walk is counted once, from the end that is lexicographically
//! smaller. This module is the ground truth the transfer-matrix engine and the
//! move constructions are checked against.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{LatticeBox, Point, Polygon, SpanVariant, Walk, WalkClass, WalkSummary};
use crate::BigCount;

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Maximum number of directed walk prefixes (or polygon-search paths)
    /// visited before giving up.
    pub budget: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Exact counts keyed by class and box.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountTable {
    entries: BTreeMap<(WalkClass, LatticeBox), BigCount>,
}

impl CountTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, class: WalkClass, b: LatticeBox, value: BigCount) {
        self.entries.insert((class, b), value);
    }

    pub fn get(&self, class: WalkClass, b: LatticeBox) -> Option<&BigCount> {
        self.entries.get(&(class, b))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(WalkClass, LatticeBox), &BigCount)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `ExactBBox` entries must not depend on orientation of the box.
    pub fn is_symmetric(&self) -> bool {
        self.entries.iter().all(|((class, b), v)| {
            *class != WalkClass::ExactBBox
                || self
                    .entries
                    .get(&(*class, b.transposed()))
                    .is_none_or(|t| t == v)
        })
    }
}

/// Result of [`oracle_spanning_counts`]: `M_l` for `l = 0..=L` and their sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningCounts {
    pub variant: SpanVariant,
    pub m: Vec<BigCount>,
    pub m_hat: BigCount,
}

struct Budget<'a> {
    shared: &'a AtomicU64,
    abort: &'a AtomicBool,
    cap: u64,
    local: u64,
}

impl Budget<'_> {
    const FLUSH: u64 = 1 << 14;

    #[inline]
    fn tick(&mut self) -> bool {
        self.local += 1;
        if self.local == Self::FLUSH {
            self.flush();
        }
        !self.abort.load(Ordering::Relaxed)
    }

    fn flush(&mut self) {
        let total = self.shared.fetch_add(self.local, Ordering::Relaxed) + self.local;
        self.local = 0;
        if total > self.cap {
            self.abort.store(true, Ordering::Relaxed);
        }
    }
}

struct Grid {
    width: i32,
    height: i32,
    occupied: Vec<bool>,
}

impl Grid {
    fn new(b: LatticeBox) -> Self {
        let width = b.width as i32;
        let height = b.height as i32;
        Grid {
            width,
            height,
            occupied: vec![false; ((width + 1) * (height + 1)) as usize],
        }
    }

    #[inline]
    fn index(&self, p: Point) -> Option<usize> {
        (p.x >= 0 && p.y >= 0 && p.x <= self.width && p.y <= self.height)
            .then(|| (p.y * (self.width + 1) + p.x) as usize)
    }
}

fn start_vertices(b: LatticeBox, class: WalkClass) -> Vec<Point> {
    let (w, h) = (b.width as i32, b.height as i32);
    let all = (0..=w).flat_map(|x| (0..=h).map(move |y| Point::new(x, y)));
    match class {
        // the canonical start is the lexicographically smaller endpoint
        WalkClass::OppositeCorners => vec![Point::new(0, 0)],
        WalkClass::OppositeSides => all
            .filter(|p| p.x == 0 || p.y == 0 || p.x == w || p.y == h)
            .collect(),
        _ => all.collect(),
    }
}

fn budget_error(what: &str, cap: u64) -> Error {
    Error::ResourceLimit {
        what: format!("oracle enumeration of {what}"),
        cap,
    }
}

/// Enumerates every canonical walk in `b`, calling `visit` on each together
/// with its summary. Returns `false` if the budget ran out.
fn for_each_walk_from(
    b: LatticeBox,
    start: Point,
    budget: &mut Budget<'_>,
    visit: &mut dyn FnMut(&[Point], &WalkSummary),
) -> bool {
    let mut grid = Grid::new(b);
    let mut path = vec![start];
    let i = grid.index(start).expect("start inside box");
    grid.occupied[i] = true;
    let summary = WalkSummary {
        start,
        end: start,
        min: start,
        max: start,
    };
    extend(&mut grid, &mut path, summary, budget, visit)
}

fn extend(
    grid: &mut Grid,
    path: &mut Vec<Point>,
    summary: WalkSummary,
    budget: &mut Budget<'_>,
    visit: &mut dyn FnMut(&[Point], &WalkSummary),
) -> bool {
    let tip = *path.last().unwrap();
    for next in tip.neighbours() {
        let Some(i) = grid.index(next) else { continue };
        if grid.occupied[i] {
            continue;
        }
        if !budget.tick() {
            return false;
        }
        grid.occupied[i] = true;
        path.push(next);
        let s = WalkSummary {
            start: summary.start,
            end: next,
            min: Point::new(summary.min.x.min(next.x), summary.min.y.min(next.y)),
            max: Point::new(summary.max.x.max(next.x), summary.max.y.max(next.y)),
        };
        if s.start < s.end {
            visit(path, &s);
        }
        let ok = extend(grid, path, s, budget, visit);
        path.pop();
        grid.occupied[i] = false;
        if !ok {
            return false;
        }
    }
    true
}

pub struct Oracle {
    config: OracleConfig,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle::new(OracleConfig::default())
    }
}

impl Oracle {
    pub fn new(config: OracleConfig) -> Self {
        Oracle { config }
    }

    /// Counts walks in `b` for several classes with one traversal.
    pub fn count_many(&self, classes: &[WalkClass], b: LatticeBox) -> Result<Vec<BigCount>> {
        if classes.iter().all(|c| *c == WalkClass::Cycle) {
            return classes.iter().map(|_| self.count_polygons(b)).collect();
        }
        // the start set of the least restrictive class covers all the others
        let start_class = classes
            .iter()
            .copied()
            .filter(|c| *c != WalkClass::Cycle)
            .max_by_key(|c| match c {
                WalkClass::OppositeCorners => 0,
                WalkClass::OppositeSides => 1,
                _ => 2,
            })
            .unwrap();
        let shared = AtomicU64::new(0);
        let abort = AtomicBool::new(false);
        let cap = self.config.budget;
        let totals = start_vertices(b, start_class)
            .into_par_iter()
            .map(|start| {
                let mut budget = Budget {
                    shared: &shared,
                    abort: &abort,
                    cap,
                    local: 0,
                };
                let mut counts = vec![0u64; classes.len()];
                for_each_walk_from(b, start, &mut budget, &mut |_, s| {
                    for (c, class) in counts.iter_mut().zip(classes) {
                        if s.satisfies(b, *class) {
                            *c += 1;
                        }
                    }
                });
                budget.flush();
                counts
            })
            .reduce(
                || vec![0u64; classes.len()],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        if abort.load(Ordering::Relaxed) {
            return Err(budget_error(&format!("{}x{}", b.width, b.height), cap));
        }
        let mut out: Vec<BigCount> = totals.into_iter().map(BigCount::from).collect();
        for (o, class) in out.iter_mut().zip(classes) {
            if *class == WalkClass::Cycle {
                *o = self.count_polygons(b)?;
            }
        }
        Ok(out)
    }

    pub fn count(&self, class: WalkClass, b: LatticeBox) -> Result<BigCount> {
        Ok(self.count_many(&[class], b)?.remove(0))
    }

    /// Every canonical walk of `class` in `b`, sorted.
    pub fn walks(&self, class: WalkClass, b: LatticeBox) -> Result<Vec<Walk>> {
        let shared = AtomicU64::new(0);
        let abort = AtomicBool::new(false);
        let mut budget = Budget {
            shared: &shared,
            abort: &abort,
            cap: self.config.budget,
            local: 0,
        };
        let mut out = Vec::new();
        for start in start_vertices(b, class) {
            let ok = for_each_walk_from(b, start, &mut budget, &mut |path, s| {
                if s.satisfies(b, class) {
                    out.push(Walk::new(path.to_vec()).expect("enumerated walks are valid"));
                }
            });
            if !ok {
                return Err(budget_error(&format!("{class} walks"), self.config.budget));
            }
        }
        budget.flush();
        if abort.load(Ordering::Relaxed) {
            return Err(budget_error(&format!("{class} walks"), self.config.budget));
        }
        out.sort();
        Ok(out)
    }

    /// Number of distinct cycles contained in `b`.
    pub fn count_polygons(&self, b: LatticeBox) -> Result<BigCount> {
        let mut total = 0u64;
        self.for_each_polygon(b, |_| total += 1)?;
        Ok(BigCount::from(total))
    }

    pub fn polygons(&self, b: LatticeBox) -> Result<Vec<Polygon>> {
        let mut out = Vec::new();
        self.for_each_polygon(b, |path| {
            out.push(Polygon::new(path.to_vec()).expect("enumerated polygons are valid"))
        })?;
        out.sort();
        Ok(out)
    }

    fn for_each_polygon(&self, b: LatticeBox, mut visit: impl FnMut(&[Point])) -> Result<()> {
        let shared = AtomicU64::new(0);
        let abort = AtomicBool::new(false);
        let mut budget = Budget {
            shared: &shared,
            abort: &abort,
            cap: self.config.budget,
            local: 0,
        };
        for start in start_vertices(b, WalkClass::Anywhere) {
            let mut grid = Grid::new(b);
            let i = grid.index(start).unwrap();
            grid.occupied[i] = true;
            let mut path = vec![start];
            if !close_loops(&mut grid, &mut path, &mut budget, &mut visit) {
                return Err(budget_error("cycles", self.config.budget));
            }
        }
        budget.flush();
        if abort.load(Ordering::Relaxed) {
            return Err(budget_error("cycles", self.config.budget));
        }
        Ok(())
    }
}

/// Paths from `path[0]` through vertices greater than it; each cycle is
/// reported once, oriented so that its second vertex is below its last.
fn close_loops(
    grid: &mut Grid,
    path: &mut Vec<Point>,
    budget: &mut Budget<'_>,
    visit: &mut dyn FnMut(&[Point]),
) -> bool {
    let start = path[0];
    let tip = *path.last().unwrap();
    for next in tip.neighbours() {
        if next == start && path.len() >= 4 && path[1] < tip {
            visit(path);
            continue;
        }
        if next <= start {
            continue;
        }
        let Some(i) = grid.index(next) else { continue };
        if grid.occupied[i] {
            continue;
        }
        if !budget.tick() {
            return false;
        }
        grid.occupied[i] = true;
        path.push(next);
        let ok = close_loops(grid, path, budget, visit);
        path.pop();
        grid.occupied[i] = false;
        if !ok {
            return false;
        }
    }
    true
}

pub fn oracle_count(class: WalkClass, b: LatticeBox) -> Result<BigCount> {
    Oracle::default().count(class, b)
}

pub fn oracle_count_polygons(b: LatticeBox) -> Result<BigCount> {
    Oracle::default().count_polygons(b)
}

/// `M_l` for `l = 0..=side` with the convention `M_0 = 1`, and `M̂_side`.
pub fn oracle_spanning_counts(side: u32, variant: SpanVariant) -> Result<SpanningCounts> {
    let oracle = Oracle::default();
    let mut m = vec![BigCount::from(1)];
    for l in 1..=side {
        m.push(oracle.count(WalkClass::SpanSquare(variant), LatticeBox::square(l))?);
    }
    let m_hat = m.iter().sum();
    Ok(SpanningCounts { variant, m, m_hat })
}

/// Counts of every class in the boxes `h x l` for `h, l <= max_side`.
pub fn oracle_table(classes: &[WalkClass], max_side: u32) -> Result<CountTable> {
    let oracle = Oracle::default();
    let mut table = CountTable::new();
    for h in 0..=max_side {
        for l in 0..=max_side {
            let b = LatticeBox::new(l, h);
            for (class, v) in classes.iter().zip(oracle.count_many(classes, b)?) {
                table.insert(*class, b, v);
            }
        }
    }
    Ok(table)
}
