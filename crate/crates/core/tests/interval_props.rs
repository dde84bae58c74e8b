use proptest::prelude::*;
use relevance_ra::{Bound, IntervalSet};

const W: i64 = 128;

type Raw = Vec<(Bound, Bound)>;

fn bound_pair() -> impl Strategy<Value = (Bound, Bound)> {
    (-64i64..=64, 0i64..=12, 0u8..10).prop_map(|(lo, width, tail)| {
        let hi = lo + width;
        match tail {
            0 => (Bound::NegInf, Bound::Finite(hi)),
            1 => (Bound::Finite(lo), Bound::PosInf),
            _ => (Bound::Finite(lo), Bound::Finite(hi.min(64))),
        }
    })
}

fn raw() -> impl Strategy<Value = Raw> {
    prop::collection::vec(bound_pair(), 0..5)
}

fn in_raw(r: &Raw, v: i64) -> bool {
    r.iter().any(|&(lo, hi)| Bound::Finite(v) >= lo && Bound::Finite(v) <= hi)
}

fn window() -> std::ops::RangeInclusive<i64> {
    -W..=W
}

fn agrees(s: &IntervalSet, model: impl Fn(i64) -> bool) -> bool {
    window().all(|v| s.contains(v) == model(v))
}

proptest! {
    #[test]
    fn canonical_form_preserves_membership(r in raw()) {
        let s = IntervalSet::make(r.clone()).unwrap();
        prop_assert!(agrees(&s, |v| in_raw(&r, v)));
        let again = IntervalSet::make(s.intervals().to_vec()).unwrap();
        prop_assert_eq!(&again, &s);
        for w in s.intervals().windows(2) {
            prop_assert!(w[0].1.succ() < w[1].0);
        }
    }

    #[test]
    fn boolean_ops_match_bitmap(a in raw(), b in raw()) {
        let (x, y) = (IntervalSet::make(a.clone()).unwrap(), IntervalSet::make(b.clone()).unwrap());
        prop_assert!(agrees(&x.union(&y), |v| in_raw(&a, v) || in_raw(&b, v)));
        prop_assert!(agrees(&x.intersect(&y), |v| in_raw(&a, v) && in_raw(&b, v)));
        prop_assert!(agrees(&x.complement(), |v| !in_raw(&a, v)));
        prop_assert!(agrees(&x.difference(&y), |v| in_raw(&a, v) && !in_raw(&b, v)));
        prop_assert_eq!(x.is_subset(&y), x.difference(&y).is_empty());
        prop_assert_eq!(x.complement().complement(), x);
    }

    #[test]
    fn max_combine_matches_pairwise_max(a in raw(), b in raw()) {
        let (x, y) = (IntervalSet::make(a).unwrap(), IntervalSet::make(b).unwrap());
        let m = x.max_combine(&y);
        if x.is_finite() && y.is_finite() {
            let xs = x.members().unwrap();
            let ys = y.members().unwrap();
            let brute = IntervalSet::from_values(xs.iter().flat_map(|&p| ys.iter().map(move |&q| p.max(q))));
            prop_assert_eq!(m, brute);
        } else {
            // on the window, k is reachable iff k is in one set and the other has a member <= k
            let reach = |v: i64| {
                (x.contains(v) && y.min_element() <= Bound::Finite(v))
                    || (y.contains(v) && x.min_element() <= Bound::Finite(v))
            };
            prop_assert!(agrees(&m, reach));
            let unbounded = !x.is_empty() && !y.is_empty()
                && (x.max_element() == Bound::PosInf || y.max_element() == Bound::PosInf);
            prop_assert_eq!(m.max_element() == Bound::PosInf, unbounded);
        }
    }

    #[test]
    fn text_round_trip(a in raw()) {
        let x = IntervalSet::make(a).unwrap();
        let back: IntervalSet = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }
}

#[test]
fn extremes() {
    assert_eq!(IntervalSet::empty().min_element(), Bound::PosInf);
    assert_eq!(IntervalSet::at_most(3).min_element(), Bound::NegInf);
    assert_eq!(IntervalSet::full().complement(), IntervalSet::empty());
    let s: IntervalSet = "(-inf,3] u [5,7] u [9,inf)".parse().unwrap();
    assert_eq!(s.to_string(), "(-inf,3] u [5,7] u [9,inf)");
    assert_eq!(s.complement(), IntervalSet::from_values([4, 8]));
    assert!(IntervalSet::make([(Bound::Finite(3), Bound::Finite(1))]).is_err());
}
