use proptest::prelude::*;
use relevance_ra::logic::{
    axiom_suite, evaluate, is_valid, parse, Designation, Formula, Method, RelMatrix, Suite, Valuation, Verdict,
};
use relevance_ra::sugihara::finite_restrict;
use relevance_ra::{models, Error, IntervalSet, Relation};
use std::sync::Arc;

fn formula(vars: &'static [&'static str]) -> impl Strategy<Value = Formula> {
    let leaf = prop::sample::select(vars).prop_map(Formula::var);
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::fusion(a, b)),
        ]
    })
}

fn valuations(vars: &[String], n: usize) -> Vec<Valuation> {
    let mut out = vec![Valuation::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|base| {
                (0..n).map(move |x| {
                    let mut b = base.clone();
                    b.insert(v.clone(), x);
                    b
                })
            })
            .collect();
    }
    out
}

proptest! {
    #[test]
    fn display_parse_round_trip(f in formula(&["a", "b", "c"])) {
        let text = f.to_string();
        prop_assert_eq!(parse(&text).unwrap(), f);
    }

    #[test]
    fn fusion_is_derived(f in formula(&["a", "b"]), g in formula(&["a", "c"])) {
        let m = models::m0_matrix().matrix;
        let fused = Formula::fusion(f.clone(), g.clone());
        let unfolded = Formula::neg(Formula::implies(g, Formula::neg(f)));
        let vars: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        for v in valuations(&vars, m.size()) {
            prop_assert_eq!(evaluate(&fused, &m, &v).unwrap(), evaluate(&unfolded, &m, &v).unwrap());
        }
    }

    #[test]
    fn parallel_search_same_answer(f in formula(&["a", "b", "c", "d"])) {
        let m = models::m0_matrix().matrix;
        prop_assert_eq!(is_valid(&f, &m, 1).unwrap(), is_valid(&f, &m, 4).unwrap());
    }

    #[test]
    fn validity_is_inclusion(a in formula(&["p", "q"]), b in formula(&["p", "q"])) {
        for rm in [models::m0_matrix(), models::rm84_matrix(), models::church_matrix()] {
            let imp = Formula::implies(a.clone(), b.clone());
            let vars: Vec<String> = imp.vars().into_iter().collect();
            let included = valuations(&vars, rm.matrix.size()).iter().all(|v| {
                let x = &rm.elements[evaluate(&a, &rm.matrix, v).unwrap()];
                let y = &rm.elements[evaluate(&b, &rm.matrix, v).unwrap()];
                x.raw_subset(y)
            });
            prop_assert_eq!(is_valid(&imp, &rm.matrix, 1).unwrap().is_valid(), included);
        }
    }

    #[test]
    fn designation_rules_preserved(k in 0usize..3, x in 0usize..8, y in 0usize..8) {
        let m = [models::m0_matrix(), models::rm84_matrix(), models::church_matrix()][k].matrix.clone();
        if m.is_designated(x) && m.is_designated(m.arrow(x, y)) {
            prop_assert!(m.is_designated(y));
        }
        if m.is_designated(x) && m.is_designated(y) {
            prop_assert!(m.is_designated(m.meet(x, y)));
        }
    }
}

#[test]
fn verdicts_survive_relabelling() {
    let s = Arc::new(finite_restrict(&IntervalSet::from_values([0])).unwrap());
    let els = s.elements();
    let labels = els.iter().map(|e| e.to_string()).collect();
    let plain = RelMatrix::new("S{0}", els, labels, Method::First, Designation::ContainsIdentity).unwrap();
    let m0 = models::m0_matrix();
    for suite in [Suite::RM, Suite::KR] {
        for (label, f) in axiom_suite(suite) {
            let a = is_valid(&f, &plain.matrix, 1).unwrap();
            let b = is_valid(&f, &m0.matrix, 1).unwrap();
            assert_eq!(a.is_valid(), b.is_valid(), "{label}");
            if let Verdict::Countermodel { valuation, .. } = a {
                let moved: Valuation = valuation
                    .iter()
                    .map(|(k, &x)| {
                        let e = m0.elements[0].algebra().element(plain.elements[x].atoms());
                        (k.clone(), m0.index_of(&e).unwrap())
                    })
                    .collect();
                assert!(!m0.matrix.is_designated(evaluate(&f, &m0.matrix, &moved).unwrap()), "{label}");
            }
        }
    }
}

#[test]
fn syntax_errors_carry_position() {
    match parse("a -> (b & ") {
        Err(Error::Syntax { position, .. }) => assert_eq!(position, 10),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse("a $ b"), Err(Error::Syntax { position: 2, .. })));
}
