//! Square-lattice geometry: points, boxes, walks, polygons and the walk-class
//! predicates shared by the enumeration engines and the move constructions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest box side accepted anywhere in the crate.
pub const MAX_SIDE: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: i32,
    pub y: i32,
}

impl Point {
    pub const fn new(x: i32, y: i32) -> Self {
        Point { x, y }
    }

    pub fn is_adjacent(self, other: Point) -> bool {
        (self.x - other.x).abs() + (self.y - other.y).abs() == 1
    }

    pub fn offset(self, dx: i32, dy: i32) -> Point {
        Point::new(self.x + dx, self.y + dy)
    }

    pub fn neighbours(self) -> [Point; 4] {
        [
            self.offset(1, 0),
            self.offset(0, 1),
            self.offset(-1, 0),
            self.offset(0, -1),
        ]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// An axis-aligned box measured in lattice edges. `width` is the horizontal
/// extent, `height` the vertical one; a box of side `L` has `(L+1)^2`
/// vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticeBox {
    pub width: u32,
    pub height: u32,
}

impl LatticeBox {
    pub const fn new(width: u32, height: u32) -> Self {
        LatticeBox { width, height }
    }

    pub const fn square(side: u32) -> Self {
        LatticeBox::new(side, side)
    }

    pub fn vertex_count(&self) -> u64 {
        (self.width as u64 + 1) * (self.height as u64 + 1)
    }

    /// Whether `p` lies in the box anchored at the origin.
    pub fn contains(&self, p: Point) -> bool {
        p.x >= 0 && p.y >= 0 && p.x as u32 <= self.width && p.y as u32 <= self.height
    }

    pub fn transposed(&self) -> Self {
        LatticeBox::new(self.height, self.width)
    }

    fn check(&self) -> Result<()> {
        if self.width > MAX_SIDE || self.height > MAX_SIDE {
            return Err(Error::ResourceLimit {
                what: format!("box {}x{}", self.width, self.height),
                cap: MAX_SIDE as u64,
            });
        }
        Ok(())
    }
}

/// Which reading of "spans the square" is in force for the `M_l` classes.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub enum SpanVariant {
    /// Bounding box is exactly the full square.
    ExactSquare,
    /// Bounding box reaches both opposite sides in at least one direction.
    #[default]
    AtLeastOneDirection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum WalkClass {
    /// Endpoints at `(0,0)` and `(W,H)`.
    OppositeCorners,
    /// Endpoints on opposite sides (left/right or bottom/top).
    OppositeSides,
    /// Spans the box (`M_L`).
    SpanSquare(SpanVariant),
    /// Lies in `[0,l]^2` and spans it for the unique `l <= L` (the union
    /// counted by `M̂_L`, without the `M_0` convention term).
    SpanUpTo(SpanVariant),
    Anywhere,
    /// Bounding box equals the enclosing box: touches all four sides.
    ExactBBox,
    /// Self-avoiding polygons; never satisfied by a walk.
    Cycle,
}

impl WalkClass {
    pub fn tag(&self) -> &'static str {
        match self {
            WalkClass::OppositeCorners => "opposite-corners",
            WalkClass::OppositeSides => "opposite-sides",
            WalkClass::SpanSquare(SpanVariant::AtLeastOneDirection) => "span",
            WalkClass::SpanSquare(SpanVariant::ExactSquare) => "span-exact",
            WalkClass::SpanUpTo(SpanVariant::AtLeastOneDirection) => "span-up-to",
            WalkClass::SpanUpTo(SpanVariant::ExactSquare) => "span-exact-up-to",
            WalkClass::Anywhere => "anywhere",
            WalkClass::ExactBBox => "exact-bbox",
            WalkClass::Cycle => "cycles",
        }
    }
}

impl fmt::Display for WalkClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// An undirected self-avoiding walk with at least one step, stored in
/// canonical orientation (first vertex lexicographically below the last).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Walk {
    vertices: Vec<Point>,
}

impl Walk {
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidWalk("a walk needs at least one step".into()));
        }
        for pair in vertices.windows(2) {
            if !pair[0].is_adjacent(pair[1]) {
                return Err(Error::InvalidWalk(format!(
                    "{} and {} are not lattice neighbours",
                    pair[0], pair[1]
                )));
            }
        }
        let mut seen = vertices.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidWalk("vertex visited twice".into()));
        }
        if vertices[0] > vertices[vertices.len() - 1] {
            vertices.reverse();
        }
        Ok(Walk { vertices })
    }

    /// Walk starting at `start` following unit steps.
    pub fn from_steps(start: Point, steps: &[(i32, i32)]) -> Result<Self> {
        let mut vertices = vec![start];
        let mut p = start;
        for &(dx, dy) in steps {
            p = p.offset(dx, dy);
            vertices.push(p);
        }
        Walk::new(vertices)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn start(&self) -> Point {
        self.vertices[0]
    }

    pub fn end(&self) -> Point {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn reversed(&self) -> Vec<Point> {
        self.vertices.iter().rev().copied().collect()
    }

    pub fn translated(&self, dx: i32, dy: i32) -> Walk {
        let v = self.vertices.iter().map(|p| p.offset(dx, dy)).collect();
        Walk::new(v).expect("translation preserves validity")
    }

    /// Reflection `(x, y) -> (-x, y)`.
    pub fn mirrored_x(&self) -> Walk {
        let v = self
            .vertices
            .iter()
            .map(|p| Point::new(-p.x, p.y))
            .collect();
        Walk::new(v).expect("reflection preserves validity")
    }

    /// Reflection through the diagonal `(x, y) -> (y, x)`.
    pub fn transposed(&self) -> Walk {
        let v = self.vertices.iter().map(|p| Point::new(p.y, p.x)).collect();
        Walk::new(v).expect("reflection preserves validity")
    }

    pub fn summary(&self) -> WalkSummary {
        WalkSummary::new(self.start(), self.end(), &self.vertices)
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str("-")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// A self-avoiding polygon in canonical form: the least vertex first,
/// followed by its lesser neighbour.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 4 || n % 2 == 1 {
            return Err(Error::InvalidPolygon(format!("{n} vertices")));
        }
        for i in 0..n {
            if !vertices[i].is_adjacent(vertices[(i + 1) % n]) {
                return Err(Error::InvalidPolygon(format!(
                    "{} and {} are not lattice neighbours",
                    vertices[i],
                    vertices[(i + 1) % n]
                )));
            }
        }
        let mut seen = vertices.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPolygon("vertex visited twice".into()));
        }
        let least = (0..n).min_by_key(|&i| vertices[i]).unwrap();
        let mut rotated: Vec<Point> = (0..n).map(|i| vertices[(least + i) % n]).collect();
        if rotated[1] > rotated[n - 1] {
            rotated[1..].reverse();
        }
        Ok(Polygon { vertices: rotated })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Number of edges (equals the number of vertices).
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Endpoints and bounding extremes of a walk; everything the class
/// predicates look at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkSummary {
    pub start: Point,
    pub end: Point,
    pub min: Point,
    pub max: Point,
}

impl WalkSummary {
    pub fn new(start: Point, end: Point, vertices: &[Point]) -> Self {
        let mut min = start;
        let mut max = start;
        for p in vertices {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        WalkSummary {
            start,
            end,
            min,
            max,
        }
    }

    pub fn bbox(&self) -> LatticeBox {
        LatticeBox::new(
            (self.max.x - self.min.x) as u32,
            (self.max.y - self.min.y) as u32,
        )
    }

    /// Class membership, assuming containment in `b` has been checked.
    pub fn satisfies(&self, b: LatticeBox, class: WalkClass) -> bool {
        let w = b.width as i32;
        let h = b.height as i32;
        let (s, e) = (self.start, self.end);
        match class {
            WalkClass::Anywhere => true,
            WalkClass::Cycle => false,
            WalkClass::OppositeCorners => {
                let lo = Point::new(0, 0);
                let hi = Point::new(w, h);
                (s == lo && e == hi) || (s == hi && e == lo)
            }
            WalkClass::OppositeSides => {
                let lr = (s.x == 0 && e.x == w) || (e.x == 0 && s.x == w);
                let bt = (s.y == 0 && e.y == h) || (e.y == 0 && s.y == h);
                lr || bt
            }
            WalkClass::ExactBBox => self.min == Point::new(0, 0) && self.max == Point::new(w, h),
            WalkClass::SpanSquare(variant) => self.spans(variant, w, h),
            WalkClass::SpanUpTo(variant) => {
                let side = self.max.x.max(self.max.y);
                side <= w.min(h) && self.spans(variant, side, side)
            }
        }
    }

    fn spans(&self, variant: SpanVariant, w: i32, h: i32) -> bool {
        let lr = self.min.x == 0 && self.max.x == w;
        let bt = self.min.y == 0 && self.max.y == h;
        match variant {
            SpanVariant::ExactSquare => lr && bt,
            SpanVariant::AtLeastOneDirection => lr || bt,
        }
    }
}

/// Smallest box containing the walk, with its lower-left corner.
pub fn bounding_box(w: &Walk) -> (LatticeBox, Point) {
    let s = w.summary();
    (s.bbox(), s.min)
}

fn check_contained<'a>(b: LatticeBox, points: impl IntoIterator<Item = &'a Point>) -> Result<()> {
    b.check()?;
    for p in points {
        if !b.contains(*p) {
            return Err(Error::ContainmentViolation {
                x: p.x,
                y: p.y,
                width: b.width,
                height: b.height,
            });
        }
    }
    Ok(())
}

/// Whether the walk, which must lie inside `b` anchored at the origin,
/// belongs to `class`.
pub fn classify(w: &Walk, b: LatticeBox, class: WalkClass) -> Result<bool> {
    check_contained(b, w.vertices())?;
    Ok(w.summary().satisfies(b, class))
}

/// Polygons belong only to [`WalkClass::Cycle`] (and trivially to
/// [`WalkClass::Anywhere`]).
pub fn classify_polygon(p: &Polygon, b: LatticeBox, class: WalkClass) -> Result<bool> {
    check_contained(b, p.vertices())?;
    Ok(matches!(class, WalkClass::Cycle | WalkClass::Anywhere))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn walk(pts: &[(i32, i32)]) -> Walk {
        Walk::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn bounding_box_examples() {
        assert_eq!(
            bounding_box(&walk(&[(0, 0), (1, 0)])),
            (LatticeBox::new(1, 0), Point::new(0, 0))
        );
        assert_eq!(
            bounding_box(&walk(&[(0, 0), (1, 0), (1, 1)])),
            (LatticeBox::new(1, 1), Point::new(0, 0))
        );
        assert_eq!(
            bounding_box(&walk(&[(2, 3), (2, 4), (3, 4), (3, 3)])),
            (LatticeBox::new(1, 1), Point::new(2, 3))
        );
    }

    #[test]
    fn classify_examples() {
        let unit = LatticeBox::square(1);
        let ell = walk(&[(0, 0), (1, 0), (1, 1)]);
        assert!(classify(&ell, unit, WalkClass::ExactBBox).unwrap());
        assert!(classify(&ell, unit, WalkClass::OppositeCorners).unwrap());
        let edge = walk(&[(0, 0), (1, 0)]);
        assert!(!classify(&edge, unit, WalkClass::ExactBBox).unwrap());
        assert!(classify(&edge, unit, WalkClass::Anywhere).unwrap());
    }

    #[test]
    fn classify_rejects_escaping_walks() {
        let w = walk(&[(0, 0), (1, 0), (2, 0)]);
        let err = classify(&w, LatticeBox::square(1), WalkClass::Anywhere).unwrap_err();
        assert!(matches!(
            err,
            Error::ContainmentViolation { x: 2, y: 0, .. }
        ));
    }

    #[test]
    fn canonical_orientation() {
        let a = walk(&[(1, 1), (1, 0), (0, 0)]);
        assert_eq!(a.start(), Point::new(0, 0));
        let b = Walk::new(a.reversed()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_walks() {
        assert!(Walk::new(vec![Point::new(0, 0)]).is_err());
        assert!(Walk::new(vec![Point::new(0, 0), Point::new(1, 1)]).is_err());
        let back = vec![Point::new(0, 0), Point::new(1, 0), Point::new(0, 0)];
        assert!(Walk::new(back).is_err());
    }

    #[test]
    fn polygon_canonical_form() {
        let sq = [(1, 1), (0, 1), (0, 0), (1, 0)];
        let p = Polygon::new(sq.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap();
        assert_eq!(
            p.vertices(),
            &[
                Point::new(0, 0),
                Point::new(0, 1),
                Point::new(1, 1),
                Point::new(1, 0)
            ]
        );
        let rev: Vec<Point> = sq.iter().rev().map(|&(x, y)| Point::new(x, y)).collect();
        assert_eq!(Polygon::new(rev).unwrap(), p);
        assert!(Polygon::new(vec![Point::new(0, 0), Point::new(1, 0)]).is_err());
    }

    #[test]
    fn opposite_sides_counts_corner_walks_once() {
        // qualifies both left/right and bottom/top
        let ell = walk(&[(0, 0), (1, 0), (1, 1)]);
        assert!(classify(&ell, LatticeBox::square(1), WalkClass::OppositeSides).unwrap());
    }

    #[test]
    fn span_up_to_picks_unique_side() {
        let b = LatticeBox::square(3);
        let v = SpanVariant::AtLeastOneDirection;
        // spans [0,2]^2 left to right
        let w = walk(&[(0, 1), (1, 1), (2, 1)]);
        assert!(classify(&w, b, WalkClass::SpanUpTo(v)).unwrap());
        // same shape shifted right no longer touches x = 0 or y = 0
        let w = walk(&[(1, 1), (2, 1), (3, 1)]);
        assert!(!classify(&w, b, WalkClass::SpanUpTo(v)).unwrap());
        let w = walk(&[(0, 1), (1, 1), (2, 1)]);
        assert!(!classify(&w, b, WalkClass::SpanUpTo(SpanVariant::ExactSquare)).unwrap());
    }
}
