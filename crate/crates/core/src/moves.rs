//! Constructions on spanning walks: the extension map that embeds walks
//! spanning an `l`-square into walks spanning an `(l+1)`-square, and the
//! endpoint relocation moves that push both endpoints of a spanning walk onto
//! opposite sides of the square.
//!
//! All relocation moves push an endpoint to the right. Left endpoints are
//! handled by reflecting the walk inside its box, and walks that only span
//! bottom to top by transposing it.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{LatticeBox, Point, Walk};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MoveKind {
    /// Append the empty site to the right of the endpoint.
    Lengthen,
    /// Delete the step leading right from the endpoint.
    Shorten,
    /// Connect to the occupied site on the right and cut the edge beyond it;
    /// the endpoint advances two columns.
    EndAttack,
    /// Connect to the occupied site on the right and cut its upward edge.
    BackbiteUp,
    /// Connect to the occupied site on the right and cut its downward edge.
    BackbiteDown,
}

impl MoveKind {
    /// Columns gained by the moved endpoint.
    pub fn column_delta(self) -> u32 {
        match self {
            MoveKind::EndAttack => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoveStep {
    pub kind: MoveKind,
    pub side: Side,
    /// Position of the moved endpoint before the move (original frame).
    pub from: Point,
    /// Position afterwards.
    pub to: Point,
    pub column_delta: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MoveTrace {
    pub steps: Vec<MoveStep>,
}

impl MoveTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

fn index_map(w: &Walk) -> HashMap<Point, usize> {
    w.vertices()
        .iter()
        .enumerate()
        .map(|(i, p)| (*p, i))
        .collect()
}

fn endpoint_index(w: &Walk, endpoint: Point) -> Result<usize> {
    if endpoint == w.start() {
        Ok(0)
    } else if endpoint == w.end() {
        Ok(w.len())
    } else {
        Err(Error::Precondition(format!(
            "{endpoint} is not an endpoint of {w}"
        )))
    }
}

fn other_endpoint(w: &Walk, endpoint: Point) -> Point {
    if endpoint == w.start() {
        w.end()
    } else {
        w.start()
    }
}

/// The right-moving endpoint of the pair: larger column, then larger row.
pub fn rightmost_endpoint(w: &Walk) -> Point {
    let (a, b) = (w.start(), w.end());
    if (a.x, a.y) > (b.x, b.y) {
        a
    } else {
        b
    }
}

/// Move that pushes `endpoint` one step towards the boundary column
/// `target_x`, decided by the configuration immediately to its right.
/// Checks run in the order shorten, lengthen, then the backbite family; at
/// most one applies.
pub fn select_move(w: &Walk, endpoint: Point, target_x: i32) -> Result<MoveKind> {
    let e = endpoint_index(w, endpoint)?;
    if endpoint.x >= target_x {
        return Err(Error::NoMove);
    }
    let right = endpoint.offset(1, 0);
    let index = index_map(w);
    let Some(&k) = index.get(&right) else {
        return Ok(MoveKind::Lengthen);
    };
    if k.abs_diff(e) == 1 {
        if w.len() < 2 {
            return Err(Error::Precondition("cannot shorten a single step".into()));
        }
        return Ok(MoveKind::Shorten);
    }
    if k == 0 || k == w.len() {
        return Err(Error::Precondition(format!(
            "site right of {endpoint} is the other endpoint; {endpoint} is not rightmost"
        )));
    }
    let cut = cut_neighbour(w, e, k);
    Ok(match (cut.x - right.x, cut.y - right.y) {
        (1, 0) => MoveKind::EndAttack,
        (0, 1) => MoveKind::BackbiteUp,
        (0, -1) => MoveKind::BackbiteDown,
        d => unreachable!("cut edge direction {d:?}"),
    })
}

/// Neighbour of vertex `k` on the path towards endpoint index `e`.
fn cut_neighbour(w: &Walk, e: usize, k: usize) -> Point {
    let v = w.vertices();
    if e == 0 {
        v[k - 1]
    } else {
        v[k + 1]
    }
}

/// Applies `m` at `endpoint`; returns the new walk and the new position of
/// the moved endpoint.
pub fn apply_move(w: &Walk, endpoint: Point, target_x: i32, m: MoveKind) -> Result<(Walk, Point)> {
    let selected = select_move(w, endpoint, target_x)?;
    if selected != m {
        return Err(Error::Precondition(format!(
            "{m:?} requested but the configuration calls for {selected:?}"
        )));
    }
    let e = endpoint_index(w, endpoint)?;
    let mut v = w.vertices().to_vec();
    let right = endpoint.offset(1, 0);
    let moved_to = match m {
        MoveKind::Lengthen => {
            if e == 0 {
                v.insert(0, right);
            } else {
                v.push(right);
            }
            right
        }
        MoveKind::Shorten => {
            if e == 0 {
                v.remove(0);
            } else {
                v.pop();
            }
            right
        }
        MoveKind::EndAttack | MoveKind::BackbiteUp | MoveKind::BackbiteDown => {
            let k = index_map(w)[&right];
            let cut = cut_neighbour(w, e, k);
            if e == 0 {
                // v[k-1], ..., v[0], v[k], ..., v[n]
                v[..k].reverse();
            } else {
                // v[0], ..., v[k], v[n], ..., v[k+1]
                v[k + 1..].reverse();
            }
            cut
        }
    };
    Ok((Walk::new(v)?, moved_to))
}

fn reflect_x(w: &Walk, side: i32) -> Walk {
    w.mirrored_x().translated(side, 0)
}

fn reflect_point(p: Point, side: i32) -> Point {
    Point::new(side - p.x, p.y)
}

fn spans_horizontally(w: &Walk, side: i32) -> bool {
    let s = w.summary();
    s.min.x == 0 && s.max.x == side
}

fn check_in_box(w: &Walk, b: LatticeBox) -> Result<()> {
    for p in w.vertices() {
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

/// Moves `endpoint` right until it reaches column `target_x`.
fn push_right(
    mut w: Walk,
    mut endpoint: Point,
    target_x: i32,
    side: Side,
    frame: &dyn Fn(Point) -> Point,
    trace: &mut MoveTrace,
) -> Result<(Walk, Point)> {
    while endpoint.x < target_x {
        let kind = select_move(&w, endpoint, target_x)?;
        let (next, moved) = apply_move(&w, endpoint, target_x, kind)?;
        trace.steps.push(MoveStep {
            kind,
            side,
            from: frame(endpoint),
            to: frame(moved),
            column_delta: (moved.x - endpoint.x) as u32,
        });
        w = next;
        endpoint = moved;
    }
    Ok((w, endpoint))
}

/// Relocates the endpoints of a walk spanning the `L`-square onto opposite
/// sides: the rightmost endpoint to `x = L`, the other to `x = 0` (or the
/// transposed procedure for a walk spanning only bottom to top).
pub fn push_to_sides(w: &Walk, side: u32) -> Result<(Walk, MoveTrace)> {
    let b = LatticeBox::square(side);
    check_in_box(w, b)?;
    let l = side as i32;
    if spans_horizontally(w, l) {
        return push_horizontally(w, l, &|p| p);
    }
    let t = w.transposed();
    if spans_horizontally(&t, l) {
        let (out, mut trace) = push_horizontally(&t, l, &|p| Point::new(p.y, p.x))?;
        for s in &mut trace.steps {
            s.column_delta = (s.to.y - s.from.y).unsigned_abs();
        }
        return Ok((out.transposed(), trace));
    }
    Err(Error::Precondition(format!(
        "{w} does not span the {side}-square"
    )))
}

fn push_horizontally(
    w: &Walk,
    l: i32,
    frame: &dyn Fn(Point) -> Point,
) -> Result<(Walk, MoveTrace)> {
    let mut trace = MoveTrace::default();
    let right = rightmost_endpoint(w);
    let left = other_endpoint(w, right);
    let (w, _) = push_right(w.clone(), right, l, Side::Right, frame, &mut trace)?;
    let mirrored = reflect_x(&w, l);
    let mirror_frame = |p: Point| frame(reflect_point(p, l));
    let (m, _) = push_right(
        mirrored,
        reflect_point(left, l),
        l,
        Side::Left,
        &mirror_frame,
        &mut trace,
    )?;
    Ok((reflect_x(&m, l), trace))
}

/// Every walk `v` with the same other endpoint whose selected move at its
/// rightmost endpoint produces `w` with the moved endpoint at `endpoint`.
pub fn antecedents(w: &Walk, endpoint: Point, side: u32) -> Result<BTreeSet<Walk>> {
    let e = endpoint_index(w, endpoint)?;
    let b = LatticeBox::square(side);
    let l = side as i32;
    // orient with the target endpoint first
    let path: Vec<Point> = if e == 0 {
        w.vertices().to_vec()
    } else {
        w.reversed()
    };
    let index: HashMap<Point, usize> = path.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let back = endpoint.offset(-1, 0);
    let mut candidates: Vec<(Vec<Point>, Point)> = Vec::new();

    // undo a lengthening
    if path.len() > 2 && path[1] == back {
        candidates.push((path[1..].to_vec(), back));
    }
    // undo a shortening
    if !index.contains_key(&back) && b.contains(back) {
        let mut v = vec![back];
        v.extend_from_slice(&path);
        candidates.push((v, back));
    }
    // undo a backbite: w has edge E-R with R adjacent to the endpoint
    for r in [
        endpoint.offset(0, -1),
        endpoint.offset(0, 1),
        endpoint.offset(-1, 0),
    ] {
        let (Some(&ri), Some(&ei)) = (index.get(&r), index.get(&r.offset(-1, 0))) else {
            continue;
        };
        if ri != ei + 1 || ri == 1 {
            continue;
        }
        let mut v: Vec<Point> = path[..=ei].iter().rev().copied().collect();
        v.extend_from_slice(&path[ri..]);
        candidates.push((v, path[ei]));
    }

    let mut out = BTreeSet::new();
    for (verts, moved) in candidates {
        let Ok(v) = Walk::new(verts) else { continue };
        if check_in_box(&v, b).is_err() {
            continue;
        }
        let Ok(kind) = select_move(&v, moved, l) else {
            continue;
        };
        if let Ok((image, to)) = apply_move(&v, moved, l, kind) {
            if image == *w && to == endpoint {
                out.insert(v);
            }
        }
    }
    Ok(out)
}

/// Maps a walk spanning the `l`-square into one spanning the
/// `(l+1)`-square: the first boundary site met going clockwise from the
/// lower-left corner (lower-right corner when the walk only spans bottom to
/// top) either gains an outward step, if it is an endpoint, or has its
/// boundary step replaced by the three steps around the outside plaquette.
pub fn extend_spanning_walk(w: &Walk, side: u32) -> Result<Walk> {
    check_in_box(w, LatticeBox::square(side))?;
    let l = side as i32;
    if spans_horizontally(w, l) {
        return Ok(extend_left(w).translated(1, 0));
    }
    let t = w.transposed();
    if spans_horizontally(&t, l) {
        // bottom side seen from the transposed frame: the rightmost site on
        // y = 0 becomes the topmost site on x = 0, so reflect vertically too
        let flipped = flip_y(&t, l);
        let ext = extend_left(&flipped);
        return Ok(flip_y(&ext, l).transposed().translated(0, 1));
    }
    Err(Error::Precondition(format!(
        "{w} does not span the {side}-square"
    )))
}

fn flip_y(w: &Walk, l: i32) -> Walk {
    let v = w
        .vertices()
        .iter()
        .map(|p| Point::new(p.x, l - p.y))
        .collect();
    Walk::new(v).expect("reflection preserves validity")
}

/// Extension on the left side at the lowest walk site of column 0, without
/// re-anchoring.
fn extend_left(w: &Walk) -> Walk {
    let v = w.vertices();
    let site = *v
        .iter()
        .filter(|p| p.x == 0)
        .min_by_key(|p| p.y)
        .expect("walk touches x = 0");
    let outside = site.offset(-1, 0);
    let mut out = v.to_vec();
    if site == w.start() {
        out.insert(0, outside);
    } else if site == w.end() {
        out.push(outside);
    } else {
        let above = site.offset(0, 1);
        let i = v.iter().position(|p| *p == site).unwrap();
        let j = v
            .iter()
            .position(|p| *p == above)
            .expect("boundary step upwards");
        let detour = [outside, above.offset(-1, 0)];
        if j == i + 1 {
            out.splice(j..j, detour);
        } else {
            debug_assert_eq!(i, j + 1);
            out.splice(i..i, detour.into_iter().rev());
        }
    }
    Walk::new(out).expect("extension stays self-avoiding")
}
