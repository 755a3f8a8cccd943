use std::collections::BTreeSet;

use sawbox::lattice::{classify, LatticeBox, SpanVariant, Walk, WalkClass};
use sawbox::moves::{
    antecedents, apply_move, extend_spanning_walk, push_to_sides, rightmost_endpoint, select_move,
    MoveKind,
};
use sawbox::oracle::Oracle;

fn spanning(side: u32) -> Vec<Walk> {
    Oracle::default()
        .walks(
            WalkClass::SpanSquare(SpanVariant::AtLeastOneDirection),
            LatticeBox::square(side),
        )
        .unwrap()
}

fn contained(w: &Walk, side: u32) -> bool {
    let b = LatticeBox::square(side);
    w.vertices().iter().all(|p| b.contains(*p))
}

#[test]
fn extension_is_injective_and_spans() {
    for side in 1..=3 {
        let walks = spanning(side);
        let mut images = BTreeSet::new();
        for w in &walks {
            let img = extend_spanning_walk(w, side).unwrap();
            assert!(
                classify(
                    &img,
                    LatticeBox::square(side + 1),
                    WalkClass::SpanSquare(SpanVariant::AtLeastOneDirection)
                )
                .unwrap(),
                "{w} -> {img}"
            );
            assert!(images.insert(img), "collision at {w}");
        }
        assert_eq!(images.len(), walks.len());
        assert!(spanning(side + 1).len() >= walks.len());
    }
}

#[test]
fn selected_move_is_valid_and_progresses() {
    for side in 1..=3u32 {
        let l = side as i32;
        let walks = Oracle::default()
            .walks(WalkClass::Anywhere, LatticeBox::square(side))
            .unwrap();
        let mut seen = BTreeSet::new();
        for w in &walks {
            let e = rightmost_endpoint(w);
            if e.x == l {
                continue;
            }
            let m = select_move(w, e, l).unwrap();
            seen.insert(m);
            let (v, to) = apply_move(w, e, l, m).unwrap();
            assert!(contained(&v, side), "{w} {m:?} -> {v}");
            assert_eq!((to.x - e.x) as u32, m.column_delta());
            assert!(to == v.start() || to == v.end());
        }
        if side == 3 {
            assert_eq!(seen.len(), 5, "{seen:?}");
        }
    }
}

#[test]
fn lengthen_is_undone_by_shorten() {
    for w in Oracle::default()
        .walks(WalkClass::Anywhere, LatticeBox::square(2))
        .unwrap()
    {
        let e = rightmost_endpoint(&w);
        if e.x == 2 || select_move(&w, e, 2).unwrap() != MoveKind::Lengthen {
            continue;
        }
        let (v, to) = apply_move(&w, e, 2, MoveKind::Lengthen).unwrap();
        assert!(antecedents(&v, to, 2).unwrap().contains(&w));
    }
}

#[test]
fn push_lands_on_opposite_sides() {
    for side in 1..=3 {
        for w in spanning(side) {
            let (out, trace) = push_to_sides(&w, side).unwrap();
            assert!(
                classify(&out, LatticeBox::square(side), WalkClass::OppositeSides).unwrap(),
                "{w} -> {out}"
            );
            assert!(trace.len() <= side as usize, "{w}: {} moves", trace.len());
            assert!(trace.steps.iter().all(|s| s.column_delta >= 1));
        }
    }
}

#[test]
fn antecedent_sets_are_small() {
    for side in 1..=3u32 {
        let mut largest = 0;
        for w in Oracle::default()
            .walks(WalkClass::Anywhere, LatticeBox::square(side))
            .unwrap()
        {
            for e in [w.start(), w.end()] {
                largest = largest.max(antecedents(&w, e, side).unwrap().len());
            }
        }
        assert!(largest <= 3, "side {side}: {largest}");
        // the 3 x 3 grid of sites is too small for three antecedents
        let expected = [0, 1, 2, 3][side as usize];
        assert_eq!(largest, expected, "side {side}");
    }
}
