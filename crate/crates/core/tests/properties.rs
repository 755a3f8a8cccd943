use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::sample::Index;
use rug::Integer;

use sawbox::analysis::{hadamard_quotient, window_fit, FitConfig, Precision, Series};
use sawbox::io::{
    read_rect_table, read_series_file, write_rect_table, write_series_file, SeriesFile,
};
use sawbox::lattice::{LatticeBox, SpanVariant, Walk, WalkClass};
use sawbox::moves::push_to_sides;
use sawbox::oracle::Oracle;
use sawbox::transfer::{RectTable, SweepKind};

fn big() -> impl Strategy<Value = Integer> {
    prop::collection::vec(any::<u64>(), 1..4).prop_map(|limbs| {
        limbs
            .into_iter()
            .fold(Integer::from(1), |acc, l| (acc << 64u32) + l)
    })
}

fn walk_table() -> &'static RectTable {
    static T: OnceLock<RectTable> = OnceLock::new();
    T.get_or_init(|| RectTable::compute(4, SweepKind::Walks).unwrap())
}

fn spanning3() -> &'static [Walk] {
    static W: OnceLock<Vec<Walk>> = OnceLock::new();
    W.get_or_init(|| {
        Oracle::default()
            .walks(
                WalkClass::SpanSquare(SpanVariant::AtLeastOneDirection),
                LatticeBox::square(3),
            )
            .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn series_file_round_trip(first in 0u32..5, values in prop::collection::vec(big(), 1..12)) {
        let s = Series::from_integers("random", first, values);
        let text = write_series_file(&SeriesFile::new(s.clone()));
        prop_assert_eq!(read_series_file(&text).unwrap().series, s);
    }

    #[test]
    fn self_quotient_is_one(values in prop::collection::vec(big(), 1..12)) {
        let s = Series::from_integers("s", 1, values);
        let prec = Precision::digits(50);
        let q = hadamard_quotient(&s, &s, prec).unwrap();
        for (_, v) in q.values(prec).unwrap() {
            prop_assert!((v - 1u32).abs() < prec.tolerance());
        }
    }

    #[test]
    fn window_fit_recovers_polynomial_models(
        coeffs in prop::collection::vec(-50i32..50, 3),
        start in 1u32..4,
    ) {
        let prec = Precision::digits(60);
        let seq: Vec<_> = (start..start + 12)
            .map(|l| {
                let x = prec.float(l).recip();
                let v = prec.float(coeffs[0]) + prec.float(coeffs[1]) * &x + prec.float(coeffs[2]) * x.clone() * &x;
                (l, v)
            })
            .collect();
        let r = window_fit(&seq, &[0, 1, 2], FitConfig::new(2, prec)).unwrap();
        for (c, want) in r.intercepts.iter().zip(&coeffs) {
            prop_assert!((c.clone() - *want).abs() < 1e-40);
        }
    }

    #[test]
    fn rectangle_counts_match_oracle(h in 0u32..4, l in 0u32..4) {
        let t = walk_table();
        let oracle = Oracle::default()
            .count(WalkClass::Anywhere, LatticeBox::new(l, h))
            .unwrap();
        prop_assert_eq!(&t.n[&(h, l)], &oracle);
        prop_assert_eq!(&t.n[&(h, l)], &t.n[&(l, h)]);
        prop_assert_eq!(t.reconstruct_n(h, l).unwrap(), oracle);
    }

    #[test]
    fn pushed_walks_end_on_opposite_sides(i in any::<Index>()) {
        let w = i.get(spanning3());
        let (out, trace) = push_to_sides(w, 3).unwrap();
        let b = LatticeBox::square(3);
        prop_assert!(out.vertices().iter().all(|p| b.contains(*p)));
        let (s, e) = (out.start(), out.end());
        let horizontal = s.x.min(e.x) == 0 && s.x.max(e.x) == 3;
        let vertical = s.y.min(e.y) == 0 && s.y.max(e.y) == 3;
        prop_assert!(horizontal || vertical, "{:?}", out.vertices());
        prop_assert!(trace.len() <= 6);
    }
}

#[test]
fn rect_cache_round_trip() {
    let t = walk_table();
    let back = read_rect_table(&write_rect_table(t)).unwrap();
    assert_eq!(back.n, t.n);
    assert_eq!(back.exact, t.exact);
}
